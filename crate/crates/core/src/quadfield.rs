//! Imaginary quadratic fields K = Q(sqrt(d)) for squarefree d < 0, their
//! integers x + y*omega, and the exact embedding K -> Q(zeta_|disc|).
//!
//! omega = sqrt(d) when d = 2, 3 mod 4 (discriminant 4d) and (1 + sqrt(d))/2
//! when d = 1 mod 4 (discriminant d).  sqrt(disc) is embedded into the
//! cyclotomic field of order |disc| through the quadratic Gauss sum, which
//! lands in the upper half plane for negative discriminants; this fixes one
//! complex embedding once and for all, and every character value in the crate
//! is expressed through it.

use crate::arith::kronecker;
use crate::cyclo::{CycloNum, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// The nine imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadField {
    d: i64,
    disc: i64,
    tr_omega: i128,
    nm_omega: i128,
    unit_count: u64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !is_squarefree(-d) {
            return Err(Error::BadField(d));
        }
        let r = d.rem_euclid(4);
        let (disc, tr, nm) = if r == 1 {
            (d, 1i128, ((1 - d as i128) / 4))
        } else {
            (4 * d, 0i128, -(d as i128))
        };
        let unit_count = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        Ok(QuadField { d, disc, tr_omega: tr, nm_omega: nm, unit_count })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Field discriminant (negative).
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn abs_disc(&self) -> u64 {
        (-self.disc) as u64
    }

    /// Trace of omega (0 or 1).
    pub fn tr_omega(&self) -> i128 {
        self.tr_omega
    }

    /// Norm of omega.
    pub fn nm_omega(&self) -> i128 {
        self.nm_omega
    }

    /// Number of roots of unity w in O_K.
    pub fn unit_count(&self) -> u64 {
        self.unit_count
    }

    pub fn class_number_one(&self) -> bool {
        CLASS_NUMBER_ONE.contains(&self.d)
    }

    /// All units of O_K, the canonical generator of the unit group first.
    pub fn units(&self) -> Vec<QuadInt> {
        match self.d {
            // i generates; i = omega here.
            -1 => vec![
                QuadInt::new(0, 1),
                QuadInt::new(-1, 0),
                QuadInt::new(0, -1),
                QuadInt::new(1, 0),
            ],
            // zeta_6 = omega generates; omega^2 = omega - 1.
            -3 => vec![
                QuadInt::new(0, 1),
                QuadInt::new(-1, 1),
                QuadInt::new(-1, 0),
                QuadInt::new(0, -1),
                QuadInt::new(1, -1),
                QuadInt::new(1, 0),
            ],
            _ => vec![QuadInt::new(-1, 0), QuadInt::new(1, 0)],
        }
    }

    /// sqrt(disc) inside Q(zeta_|disc|), chosen in the upper half plane: the
    /// Gauss sum sum_a (disc | a) zeta^a, which equals i * sqrt(|disc|) for
    /// negative fundamental discriminants.  Verified against disc by squaring
    /// at first use.
    pub fn delta_cyclo(&self) -> CycloNum {
        static CACHE: Lazy<Mutex<HashMap<i64, CycloNum>>> = Lazy::new(|| Mutex::new(HashMap::new()));
        if let Some(v) = CACHE.lock().unwrap().get(&self.d) {
            return v.clone();
        }
        let dd = self.abs_disc();
        let mut delta = CycloNum::zero();
        for a in 1..dd {
            let chi = kronecker(self.disc as i128, a as i128);
            if chi != 0 {
                let term = CycloNum::root_of_unity(dd, a as i64).unwrap();
                delta = if chi > 0 {
                    delta.add(&term).unwrap()
                } else {
                    delta.sub(&term).unwrap()
                };
            }
        }
        let sq = delta.mul(&delta).unwrap();
        assert_eq!(
            sq,
            CycloNum::from_int(self.disc),
            "Gauss sum does not square to the discriminant for d = {}",
            self.d
        );
        CACHE.lock().unwrap().insert(self.d, delta.clone());
        delta
    }

    /// omega as an element of Q(zeta_|disc|).
    pub fn omega_cyclo(&self) -> CycloNum {
        let delta = self.delta_cyclo();
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        if self.d.rem_euclid(4) == 1 {
            CycloNum::one().add(&delta).unwrap().scale(&half)
        } else {
            delta.scale(&half)
        }
    }

    /// Exact complex embedding of x + y*omega.
    pub fn embed(&self, z: &QuadInt) -> CycloNum {
        let w = self.omega_cyclo();
        CycloNum::from_rat(Rat::from_integer(BigInt::from(z.x)))
            .add(&w.scale(&Rat::from_integer(BigInt::from(z.y))))
            .unwrap()
    }

    /// Smallest cyclotomic order containing all embedded field elements.
    pub fn cyclo_order(&self) -> u64 {
        self.abs_disc()
    }
}

fn is_squarefree(n: i64) -> bool {
    if n <= 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2i64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// An algebraic integer x + y*omega of a fixed field (the field travels
/// separately; mixing fields is the caller's bug and is caught by ideal and
/// character wrappers, which do store their field).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub x: i128,
    pub y: i128,
}

impl QuadInt {
    pub fn new(x: i128, y: i128) -> Self {
        QuadInt { x, y }
    }

    pub fn zero() -> Self {
        QuadInt { x: 0, y: 0 }
    }

    pub fn one() -> Self {
        QuadInt { x: 1, y: 0 }
    }

    pub fn from_int(n: i128) -> Self {
        QuadInt { x: n, y: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(&self, o: &QuadInt) -> QuadInt {
        QuadInt::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &QuadInt) -> QuadInt {
        QuadInt::new(self.x - o.x, self.y - o.y)
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt::new(-self.x, -self.y)
    }

    pub fn mul_int(&self, n: i128) -> QuadInt {
        QuadInt::new(self.x * n, self.y * n)
    }

    /// Product using omega^2 = tr(omega) * omega - nm(omega).
    pub fn mul(&self, o: &QuadInt, k: &QuadField) -> QuadInt {
        let yy = self.y * o.y;
        QuadInt::new(
            self.x * o.x - k.nm_omega * yy,
            self.x * o.y + self.y * o.x + k.tr_omega * yy,
        )
    }

    pub fn conj(&self, k: &QuadField) -> QuadInt {
        // conj(omega) = tr(omega) - omega.
        QuadInt::new(self.x + k.tr_omega * self.y, -self.y)
    }

    pub fn norm(&self, k: &QuadField) -> i128 {
        self.x * self.x + k.tr_omega * self.x * self.y + k.nm_omega * self.y * self.y
    }

    pub fn trace(&self, k: &QuadField) -> i128 {
        2 * self.x + k.tr_omega * self.y
    }

    pub fn pow(&self, e: u32, k: &QuadField) -> QuadInt {
        let mut acc = QuadInt::one();
        for _ in 0..e {
            acc = acc.mul(self, k);
        }
        acc
    }
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{}", x),
            (0, 1) => write!(f, "w"),
            (0, -1) => write!(f, "-w"),
            (0, y) => write!(f, "{}w", y),
            (x, 1) => write!(f, "{}+w", x),
            (x, -1) => write!(f, "{}-w", x),
            (x, y) if y > 0 => write!(f, "{}+{}w", x, y),
            (x, y) => write!(f, "{}{}w", x, y),
        }
    }
}

/// Wire form with string coordinates (JSON numbers cannot carry i128).
#[derive(Serialize, Deserialize)]
struct QuadIntWire {
    x: String,
    y: String,
}

impl Serialize for QuadInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadIntWire { x: self.x.to_string(), y: self.y.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = QuadIntWire::deserialize(d)?;
        let x = w.x.trim().parse().map_err(|_| D::Error::custom("bad integer x"))?;
        let y = w.y.trim().parse().map_err(|_| D::Error::custom("bad integer y"))?;
        Ok(QuadInt::new(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_invariants() {
        let k = QuadField::new(-1).unwrap();
        assert_eq!(k.disc(), -4);
        assert_eq!(k.unit_count(), 4);
        let k = QuadField::new(-3).unwrap();
        assert_eq!(k.disc(), -3);
        assert_eq!(k.unit_count(), 6);
        let k = QuadField::new(-2).unwrap();
        assert_eq!(k.disc(), -8);
        assert_eq!(k.unit_count(), 2);
        let k = QuadField::new(-7).unwrap();
        assert_eq!(k.disc(), -7);
        assert_eq!(k.unit_count(), 2);
        assert!(QuadField::new(-4).is_err());
        assert!(QuadField::new(-12).is_err());
        assert!(QuadField::new(5).is_err());
        assert!(QuadField::new(0).is_err());
    }

    #[test]
    fn units_close_under_multiplication() {
        for d in [-1i64, -2, -3, -7, -11] {
            let k = QuadField::new(d).unwrap();
            let units = k.units();
            assert_eq!(units.len() as u64, k.unit_count());
            for u in &units {
                assert_eq!(u.norm(&k), 1);
                for v in &units {
                    assert!(units.contains(&u.mul(v, &k)));
                }
            }
        }
    }

    #[test]
    fn norm_and_conj() {
        let k = QuadField::new(-1).unwrap();
        let z = QuadInt::new(3, 2);
        assert_eq!(z.norm(&k), 13);
        assert_eq!(z.mul(&z.conj(&k), &k), QuadInt::from_int(13));

        let k3 = QuadField::new(-3).unwrap();
        let z = QuadInt::new(1, 1); // 1 + zeta_6, norm 3
        assert_eq!(z.norm(&k3), 3);
        assert_eq!(z.conj(&k3), QuadInt::new(2, -1));
    }

    #[test]
    fn gauss_sum_squares_to_disc() {
        for d in [-1i64, -2, -3, -7, -11, -163] {
            let k = QuadField::new(d).unwrap();
            let delta = k.delta_cyclo();
            assert_eq!(delta.mul(&delta).unwrap(), CycloNum::from_int(k.disc()));
        }
    }

    #[test]
    fn delta_in_upper_half_plane() {
        use crate::config::Limits;
        use crate::numeric::embed_complex;
        let lim = Limits::default();
        for d in [-1i64, -2, -3, -7, -11] {
            let k = QuadField::new(d).unwrap();
            let (re, im) = embed_complex(&k.delta_cyclo(), 10, &lim).unwrap();
            assert!(re.abs() < 1e-9, "delta should be purely imaginary");
            assert!((im - (k.abs_disc() as f64).sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn embedding_is_ring_hom() {
        for d in [-1i64, -2, -3, -7] {
            let k = QuadField::new(d).unwrap();
            let z1 = QuadInt::new(3, -2);
            let z2 = QuadInt::new(-1, 4);
            let lhs = k.embed(&z1.mul(&z2, &k));
            let rhs = k.embed(&z1).mul(&k.embed(&z2)).unwrap();
            assert_eq!(lhs, rhs);
            // Field conjugation matches cyclotomic conjugation.
            assert_eq!(k.embed(&z1.conj(&k)), k.embed(&z1).conj());
            // Norm via the embedding.
            let nm = k.embed(&z1).mul(&k.embed(&z1).conj()).unwrap();
            assert_eq!(nm, CycloNum::from_int(z1.norm(&k) as i64));
        }
    }
}

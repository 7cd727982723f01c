//! Nonzero integral ideals of O_K in Hermite normal form.
//!
//! An ideal is stored as the Z-lattice with basis {a, b + c*omega} where
//! c | a, c | b, 0 <= b < a, and the lattice is closed under multiplication
//! by omega.  The norm is a * c.  Splitting of rational primes is decided by
//! the Kronecker symbol of the discriminant; factorization walks primes of
//! the norm; canonical generators (class number one fields) are the associate
//! whose complex embedding has argument in [0, 2 pi / w).

use crate::arith::{exact_sqrt, gcd_i128, isqrt, kronecker, modp};
use crate::error::{Error, Result};
use crate::quadfield::{QuadField, QuadInt};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    field_d: i64,
    a: i128,
    b: i128,
    c: i128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl QuadIdeal {
    /// Validating constructor from an HNF triple.  This is the parser entry
    /// point; every stored triple satisfies the full invariant.
    pub fn from_hnf(k: &QuadField, a: i128, b: i128, c: i128) -> Result<Self> {
        let bad = || Error::BadIdeal(a, b, c);
        if a < 1 || c < 1 || b < 0 || b >= a || a % c != 0 || b % c != 0 {
            return Err(bad());
        }
        let ideal = QuadIdeal { field_d: k.d(), a, b, c };
        // Closure under omega: omega * (b + c*omega) must lie in the lattice.
        let gen2 = QuadInt::new(b, c);
        let omega = QuadInt::new(0, 1);
        if !ideal.contains(&gen2.mul(&omega, k)) {
            return Err(bad());
        }
        Ok(ideal)
    }

    /// HNF of the Z-span of arbitrary row vectors (x, y) = x + y*omega.
    /// Fails if the span is not a full-rank O_K-submodule.
    pub fn from_z_rows(k: &QuadField, rows: &[(i128, i128)]) -> Result<Self> {
        let mut rows: Vec<(i128, i128)> = rows.iter().copied().filter(|r| *r != (0, 0)).collect();
        if rows.is_empty() {
            return Err(Error::BadIdeal(0, 0, 0));
        }
        // Euclid on the omega-coordinates until a single pivot row remains.
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| rows[i].1.abs());
            let p = nz[0];
            let (px, py) = rows[p];
            for &j in &nz[1..] {
                let q = rows[j].1 / py;
                rows[j].0 -= q * px;
                rows[j].1 -= q * py;
            }
            rows.retain(|r| *r != (0, 0));
        }
        let pivot = rows.iter().position(|r| r.1 != 0).ok_or(Error::BadIdeal(0, 0, 0))?;
        let (mut b, mut c) = rows[pivot];
        if c < 0 {
            b = -b;
            c = -c;
        }
        let mut a: i128 = 0;
        for (i, r) in rows.iter().enumerate() {
            if i != pivot {
                debug_assert_eq!(r.1, 0);
                a = gcd_i128(a, r.0);
            }
        }
        if a == 0 {
            return Err(Error::BadIdeal(a, b, c));
        }
        b = modp(b, a);
        Self::from_hnf(k, a, b, c)
    }

    /// Ideal generated by the given elements of O_K.
    pub fn from_generators(k: &QuadField, gens: &[QuadInt]) -> Result<Self> {
        let omega = QuadInt::new(0, 1);
        let mut rows = Vec::with_capacity(2 * gens.len());
        for g in gens {
            rows.push((g.x, g.y));
            let gw = g.mul(&omega, k);
            rows.push((gw.x, gw.y));
        }
        Self::from_z_rows(k, &rows)
    }

    pub fn principal(k: &QuadField, g: &QuadInt) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::BadIdeal(0, 0, 0));
        }
        Self::from_generators(k, &[*g])
    }

    pub fn whole_ring(k: &QuadField) -> Self {
        QuadIdeal { field_d: k.d(), a: 1, b: 0, c: 1 }
    }

    pub fn field_d(&self) -> i64 {
        self.field_d
    }

    pub fn field(&self) -> QuadField {
        QuadField::new(self.field_d).expect("stored ideal has a valid field")
    }

    pub fn hnf(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn is_whole(&self) -> bool {
        self.a == 1 && self.c == 1
    }

    pub fn contains(&self, z: &QuadInt) -> bool {
        if z.y % self.c != 0 {
            return false;
        }
        (z.x - (z.y / self.c) * self.b) % self.a == 0
    }

    pub fn contains_ideal(&self, other: &QuadIdeal) -> bool {
        self.contains(&QuadInt::new(other.a, 0)) && self.contains(&QuadInt::new(other.b, other.c))
    }

    /// Canonical residue of z modulo the ideal: x in [0, a), y in [0, c).
    pub fn reduce(&self, z: &QuadInt) -> QuadInt {
        let y = modp(z.y, self.c);
        let k = (z.y - y) / self.c;
        let x = modp(z.x - k * self.b, self.a);
        QuadInt::new(x, y)
    }

    /// All canonical residues, (y, x) lexicographic.
    pub fn residues(&self) -> impl Iterator<Item = QuadInt> + '_ {
        let (a, c) = (self.a, self.c);
        (0..c).flat_map(move |y| (0..a).map(move |x| QuadInt::new(x, y)))
    }

    pub fn mul(&self, other: &QuadIdeal) -> QuadIdeal {
        assert_eq!(self.field_d, other.field_d, "ideal product across fields");
        let k = self.field();
        let g1 = [QuadInt::new(self.a, 0), QuadInt::new(self.b, self.c)];
        let g2 = [QuadInt::new(other.a, 0), QuadInt::new(other.b, other.c)];
        let mut prods = Vec::with_capacity(4);
        for x in &g1 {
            for y in &g2 {
                prods.push(x.mul(y, &k));
            }
        }
        Self::from_generators(&k, &prods).expect("product of ideals is an ideal")
    }

    pub fn pow(&self, e: u32) -> QuadIdeal {
        let mut acc = Self::whole_ring(&self.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj_ideal(&self) -> QuadIdeal {
        let k = self.field();
        let rows = [
            (self.a, 0),
            {
                let g = QuadInt::new(self.b, self.c).conj(&k);
                (g.x, g.y)
            },
        ];
        Self::from_z_rows(&k, &rows).expect("conjugate of an ideal is an ideal")
    }

    /// Exact quotient self / other, valid when other divides self.
    /// Uses self * conj(other) = (self / other) * N(other).
    pub fn divide_exact(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        let n = other.norm();
        let prod = self.mul(&other.conj_ideal());
        if prod.a % n != 0 || prod.b % n != 0 || prod.c % n != 0 {
            return Err(Error::CheckFailed(format!(
                "ideal of norm {} does not divide ideal of norm {}",
                other.norm(),
                self.norm()
            )));
        }
        QuadIdeal::from_hnf(&self.field(), prod.a / n, prod.b / n, prod.c / n)
    }

    /// Ideal gcd = sum of the two lattices.
    pub fn gcd(&self, other: &QuadIdeal) -> QuadIdeal {
        assert_eq!(self.field_d, other.field_d);
        let rows = [
            (self.a, 0),
            (self.b, self.c),
            (other.a, 0),
            (other.b, other.c),
        ];
        Self::from_z_rows(&self.field(), &rows).expect("sum of ideals is an ideal")
    }

    pub fn is_coprime(&self, other: &QuadIdeal) -> bool {
        self.gcd(other).is_whole()
    }

    /// Ideal lcm = product / gcd.
    pub fn lcm(&self, other: &QuadIdeal) -> QuadIdeal {
        self.mul(other)
            .divide_exact(&self.gcd(other))
            .expect("gcd divides the product")
    }

    /// Splitting data of a rational prime l: the type together with the
    /// primes above l in canonical order.
    pub fn split_prime(k: &QuadField, l: u64) -> Result<(SplitType, Vec<QuadIdeal>)> {
        if !crate::arith::is_prime_u64(l) {
            return Err(Error::NotPrime(l as i128));
        }
        let li = l as i128;
        let sym = kronecker(k.disc() as i128, li);
        // Roots of x^2 - tr(omega) x + nm(omega) mod l give (l, omega - r).
        let roots: Vec<i128> = (0..li)
            .filter(|r| modp(r * r - k.tr_omega() * r + k.nm_omega(), li) == 0)
            .collect();
        match sym {
            1 => {
                assert_eq!(roots.len(), 2, "split prime must have two roots");
                let mut primes: Vec<QuadIdeal> = roots
                    .iter()
                    .map(|&r| {
                        Self::from_generators(&k.clone(), &[QuadInt::from_int(li), QuadInt::new(-r, 1)])
                            .expect("prime ideal above split l")
                    })
                    .collect();
                primes.sort_by_key(|p| p.b);
                assert_eq!(primes[0].conj_ideal(), primes[1], "split primes must be conjugate");
                Ok((SplitType::Split, primes))
            }
            -1 => Ok((SplitType::Inert, vec![Self::principal(k, &QuadInt::from_int(li))?])),
            _ => {
                assert_eq!(roots.len(), 1, "ramified prime must have a double root");
                let p = Self::from_generators(k, &[QuadInt::from_int(li), QuadInt::new(-roots[0], 1)])?;
                assert_eq!(p.mul(&p), Self::principal(k, &QuadInt::from_int(li))?);
                Ok((SplitType::Ramified, vec![p]))
            }
        }
    }

    /// The residue characteristic of a prime ideal.
    pub fn residue_char(&self) -> u64 {
        debug_assert!(self.c == 1 || self.b == 0);
        self.a as u64
    }

    /// Splitting type of this ideal's residue characteristic, if the ideal is
    /// prime; None otherwise.
    pub fn prime_split_type(&self) -> Option<SplitType> {
        let k = self.field();
        let n = self.norm();
        if self.c == 1 {
            let l = self.a;
            if l > 1 && crate::arith::is_prime_u64(l as u64) {
                let (ty, primes) = Self::split_prime(&k, l as u64).ok()?;
                if primes.contains(self) {
                    return Some(ty);
                }
            }
            None
        } else {
            // Inert primes have HNF (l, 0, l).
            let l = self.c;
            if self.a == l && self.b == 0 && crate::arith::is_prime_u64(l as u64) {
                if kronecker(k.disc() as i128, l) == -1 {
                    debug_assert_eq!(n, l * l);
                    return Some(SplitType::Inert);
                }
            }
            None
        }
    }

    pub fn is_prime_ideal(&self) -> bool {
        self.prime_split_type().is_some()
    }

    /// Prime factorization with exponents, primes in canonical order.
    pub fn factor(&self, max_norm: i128) -> Result<Vec<(QuadIdeal, u32)>> {
        let n = self.norm();
        if n > max_norm {
            return Err(Error::BoundExceeded(format!(
                "factoring ideal of norm {} beyond cap {}",
                n, max_norm
            )));
        }
        let k = self.field();
        let mut out = Vec::new();
        let mut remaining = *self;
        for (l, _) in factor_i128(n) {
            let (_, primes) = Self::split_prime(&k, l as u64)?;
            for q in primes {
                let mut e = 0u32;
                while q.contains_ideal(&remaining) {
                    remaining = remaining.divide_exact(&q)?;
                    e += 1;
                }
                if e > 0 {
                    out.push((q, e));
                }
            }
        }
        if !remaining.is_whole() {
            return Err(Error::CheckFailed("factorization left a nontrivial part".into()));
        }
        Ok(out)
    }

    /// All prime ideals of norm <= bound, sorted canonically.
    pub fn primes_of_norm_up_to(k: &QuadField, bound: i128) -> Vec<QuadIdeal> {
        let mut out = Vec::new();
        for l in crate::arith::rational_primes_up_to(bound.max(0) as u64) {
            let (ty, primes) = Self::split_prime(k, l).expect("l is prime");
            match ty {
                SplitType::Inert => {
                    if (l as i128) * (l as i128) <= bound {
                        out.extend(primes);
                    }
                }
                _ => out.extend(primes),
            }
        }
        out.sort();
        out
    }

    /// All integral ideals of norm exactly n >= 1.
    pub fn ideals_of_norm(k: &QuadField, n: i128) -> Result<Vec<QuadIdeal>> {
        if n < 1 {
            return Err(Error::BadIdeal(n, 0, 0));
        }
        let mut out = vec![Self::whole_ring(k)];
        for (l, e) in factor_i128(n) {
            let (ty, primes) = Self::split_prime(k, l as u64)?;
            let locals: Vec<QuadIdeal> = match ty {
                SplitType::Split => (0..=e)
                    .map(|i| primes[0].pow(i).mul(&primes[1].pow(e - i)))
                    .collect(),
                SplitType::Ramified => vec![primes[0].pow(e)],
                SplitType::Inert => {
                    if e % 2 == 0 {
                        vec![primes[0].pow(e / 2)]
                    } else {
                        vec![]
                    }
                }
            };
            let mut next = Vec::with_capacity(out.len() * locals.len());
            for i in &out {
                for loc in &locals {
                    next.push(i.mul(loc));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Generator with complex argument in [0, 2 pi / w), for class number one
    /// fields.  Found by enumerating the finitely many elements of the ideal
    /// whose norm equals the ideal norm; exactly one of the w associates lies
    /// in the canonical cone, decided by exact integer sign tests.
    pub fn canonical_generator(&self) -> Result<QuadInt> {
        let k = self.field();
        if !k.class_number_one() {
            return Err(Error::ClassNumber(k.d()));
        }
        let n = self.norm();
        let dd = k.abs_disc() as i128;
        // norm(x + y omega) = ((2x + tr y)^2 + |disc| y^2) / 4.
        let ymax = isqrt(4 * n / dd);
        let mut gens = Vec::new();
        for y in -ymax..=ymax {
            let disc_x = 4 * n - dd * y * y;
            if let Some(s) = exact_sqrt(disc_x) {
                for sign in [1i128, -1] {
                    let num = -k.tr_omega() * y + sign * s;
                    if num % 2 == 0 {
                        let g = QuadInt::new(num / 2, y);
                        if !g.is_zero() && g.norm(&k) == n && self.contains(&g) && !gens.contains(&g)
                        {
                            gens.push(g);
                        }
                    }
                }
            }
        }
        if gens.is_empty() {
            return Err(Error::NotPrincipal(n));
        }
        // Principal ideals have exactly w generators of minimal norm.
        assert_eq!(gens.len() as u64, k.unit_count(), "generator orbit size");
        let in_cone = |g: &QuadInt| -> bool {
            match k.unit_count() {
                // Cone [1, i) resp. [1, zeta_6): coordinates in the basis
                // (1, omega) must have x > 0, y >= 0.
                4 | 6 => g.x > 0 && g.y >= 0,
                // Cone [0, pi): upper half plane or positive real axis.
                _ => g.y > 0 || (g.y == 0 && g.x > 0),
            }
        };
        let chosen: Vec<&QuadInt> = gens.iter().filter(|g| in_cone(g)).collect();
        assert_eq!(chosen.len(), 1, "exactly one associate in the canonical cone");
        Ok(*chosen[0])
    }
}

/// Sort key: field, then norm, then HNF triple.
impl Ord for QuadIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field_d, self.norm(), self.a, self.b, self.c).cmp(&(
            other.field_d,
            other.norm(),
            other.a,
            other.b,
            other.c,
        ))
    }
}

impl PartialOrd for QuadIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, QuadInt::new(self.b, self.c))
    }
}

pub fn factor_i128(n: i128) -> Vec<(i128, u32)> {
    assert!(n >= 1);
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2i128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct IdealWire {
    field_d: i64,
    a: String,
    b: String,
    c: String,
}

impl Serialize for QuadIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealWire {
            field_d: self.field_d,
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = IdealWire::deserialize(d)?;
        let parse = |s: &str| s.trim().parse::<i128>().map_err(|_| D::Error::custom("bad integer"));
        let k = QuadField::new(w.field_d).map_err(|e| D::Error::custom(e.to_string()))?;
        QuadIdeal::from_hnf(&k, parse(&w.a)?, parse(&w.b)?, parse(&w.c)?)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    #[test]
    fn thirteen_splits_in_qi() {
        let k = qi();
        let (ty, primes) = QuadIdeal::split_prime(&k, 13).unwrap();
        assert_eq!(ty, SplitType::Split);
        assert_eq!(primes.len(), 2);
        for p in &primes {
            assert_eq!(p.norm(), 13);
        }
        assert_eq!(primes[0].mul(&primes[1]), QuadIdeal::principal(&k, &QuadInt::from_int(13)).unwrap());
        // (13) = (3+2i)(3-2i).
        let p1 = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap();
        let p2 = QuadIdeal::principal(&k, &QuadInt::new(3, -2)).unwrap();
        assert!(primes.contains(&p1) && primes.contains(&p2));
    }

    #[test]
    fn splitting_types_in_qi() {
        let k = qi();
        assert_eq!(QuadIdeal::split_prime(&k, 7).unwrap().0, SplitType::Inert);
        assert_eq!(QuadIdeal::split_prime(&k, 2).unwrap().0, SplitType::Ramified);
        assert_eq!(QuadIdeal::split_prime(&k, 5).unwrap().0, SplitType::Split);
        assert!(QuadIdeal::split_prime(&k, 6).is_err());
    }

    #[test]
    fn hnf_invariants_enforced() {
        let k = qi();
        // (2+i) has HNF [5, 2+w] ... a=5, b=2, c=1 since i = -2 mod (2+i)...
        let p = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let (a, b, c) = p.hnf();
        assert_eq!((a, c), (5, 1));
        assert!(p.contains(&QuadInt::new(b, 1)));
        assert!(QuadIdeal::from_hnf(&k, 5, 1, 1).is_err()); // 1 is not a root of x^2+1 mod 5
        assert!(QuadIdeal::from_hnf(&k, 5, 2, 1).is_ok()); // (2+i)
        assert!(QuadIdeal::from_hnf(&k, 5, 3, 1).is_ok()); // (2-i)
        assert!(QuadIdeal::from_hnf(&k, 4, 2, 3).is_err()); // c does not divide a
        assert!(QuadIdeal::from_hnf(&k, 0, 0, 1).is_err());
    }

    #[test]
    fn norm_is_multiplicative() {
        let k = qi();
        let p5 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let p13 = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap();
        assert_eq!(p5.mul(&p13).norm(), 65);
        assert_eq!(p5.mul(&p5).norm(), 25);
    }

    #[test]
    fn factor_and_rebuild() {
        let k = qi();
        let z = QuadInt::new(9, 3); // 3(3+i) = 3 (1+i)(2-i) up to units
        let ideal = QuadIdeal::principal(&k, &z).unwrap();
        let factors = ideal.factor(1_000_000).unwrap();
        let mut prod = QuadIdeal::whole_ring(&k);
        for (p, e) in &factors {
            assert!(p.is_prime_ideal());
            prod = prod.mul(&p.pow(*e));
        }
        assert_eq!(prod, ideal);
    }

    #[test]
    fn gcd_lcm_are_lattice_ops() {
        let k = qi();
        let a = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap(); // (2+i)
        let b = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap(); // (3+2i)
        assert!(a.is_coprime(&b));
        assert_eq!(a.lcm(&b), a.mul(&b));
        let a2 = a.mul(&a);
        assert_eq!(a.gcd(&a2), a);
        assert_eq!(a.lcm(&a2), a2);
        assert!(!a.is_coprime(&a2));
    }

    #[test]
    fn canonical_generator_of_13_primes() {
        let k = qi();
        let (_, primes) = QuadIdeal::split_prime(&k, 13).unwrap();
        let gens: Vec<QuadInt> = primes.iter().map(|p| p.canonical_generator().unwrap()).collect();
        // The canonical associates are 3+2i (arg ~ 33.7 deg) and 2+3i
        // (arg ~ 56.3 deg), both inside [0, 90 deg).
        assert!(gens.contains(&QuadInt::new(3, 2)));
        assert!(gens.contains(&QuadInt::new(2, 3)));
        // Determinism and ideal round trip.
        for (p, g) in primes.iter().zip(&gens) {
            assert_eq!(QuadIdeal::principal(&k, g).unwrap(), *p);
            assert_eq!(p.canonical_generator().unwrap(), *g);
        }
    }

    #[test]
    fn canonical_generator_in_other_fields() {
        // Norm-3 prime of Q(sqrt(-2)): generator 1 + sqrt(-2) (y > 0).
        let k2 = QuadField::new(-2).unwrap();
        let (_, primes) = QuadIdeal::split_prime(&k2, 3).unwrap();
        let gens: Vec<QuadInt> = primes.iter().map(|p| p.canonical_generator().unwrap()).collect();
        assert!(gens.iter().all(|g| g.y > 0 || (g.y == 0 && g.x > 0)));
        assert!(gens.contains(&QuadInt::new(1, 1)) || gens.contains(&QuadInt::new(-1, 1)));

        // Norm-7 primes of Q(sqrt(-3)): unique associate with x > 0, y >= 0.
        let k3 = QuadField::new(-3).unwrap();
        let (_, primes) = QuadIdeal::split_prime(&k3, 7).unwrap();
        for p in &primes {
            let g = p.canonical_generator().unwrap();
            assert!(g.x > 0 && g.y >= 0);
            assert_eq!(g.norm(&k3), 7);
        }
    }

    #[test]
    fn residues_and_reduction() {
        let k = qi();
        let m = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let res: Vec<QuadInt> = m.residues().collect();
        assert_eq!(res.len(), 5);
        // i = -2 = 3 mod (2+i).
        assert_eq!(m.reduce(&QuadInt::new(0, 1)), QuadInt::new(3, 0));
        // Reduction is additive on representatives.
        for z in &res {
            assert_eq!(m.reduce(z), *z);
        }
    }

    #[test]
    fn ideals_of_norm_counts() {
        let k = qi();
        // Norm 25: (5), (2+i)^2, (2-i)^2.
        assert_eq!(QuadIdeal::ideals_of_norm(&k, 25).unwrap().len(), 3);
        // Norm 7 in Q(i): none (7 inert).
        assert_eq!(QuadIdeal::ideals_of_norm(&k, 7).unwrap().len(), 0);
        assert_eq!(QuadIdeal::ideals_of_norm(&k, 49).unwrap().len(), 1);
        // Norm 65 = 5 * 13, both split: 4 ideals.
        assert_eq!(QuadIdeal::ideals_of_norm(&k, 65).unwrap().len(), 4);
    }

    #[test]
    fn serde_round_trip() {
        let k = qi();
        let p = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: QuadIdeal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        // Corrupt HNF rejected.
        let bad = s.replace("\"b\":\"", "\"b\":\"1");
        assert!(serde_json::from_str::<QuadIdeal>(&bad).is_err());
    }
}

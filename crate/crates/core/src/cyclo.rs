//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! A value is stored as its order n together with rational coordinates in the
//! power basis 1, zeta_n, ..., zeta_n^(phi(n)-1), reduced modulo the n-th
//! cyclotomic polynomial.  Values of different stored orders compare equal
//! when they coincide after coercion into Q(zeta_lcm); conjugation is
//! zeta -> zeta^(-1).  All character values, eigenvalues and serialized
//! artifacts in this crate live in this type; floats never enter.

use crate::arith::{divisors, euler_phi, lcm_u64};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

pub type Rat = BigRational;

/// Order cap used where no `Limits` is in scope (equality, serde).  Matches
/// the default `Limits::max_cyclo_order`.
pub const DEFAULT_ORDER_CAP: u64 = 10_000;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical textual form of a rational: "n" or "n/d" with d > 0 and the
/// fraction reduced.  `BigRational`'s Display/FromStr already guarantee this.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| Error::CycloEncoding(format!("bad rational '{s}': {e}")))
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials.

static PHI_POLY_CACHE: Lazy<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
/// Computed as (x^n - 1) / prod_{d | n, d < n} Phi_d and memoized.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(p) = PHI_POLY_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        let mut rem = num;
        for d in divisors(n) {
            if d < n {
                let phi_d = cyclotomic_polynomial(d);
                rem = int_poly_exact_div(&rem, &phi_d);
            }
        }
        rem
    };
    debug_assert_eq!(poly.len() as u64, euler_phi(n) + 1);
    let arc = Arc::new(poly);
    PHI_POLY_CACHE.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials (remainder must vanish).
fn int_poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dn)];
    for i in (dn..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dn] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let idx = i - dn + j;
            let t = &c * dc;
            rem[idx] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    if quot.is_empty() {
        quot.push(BigInt::zero());
    }
    quot
}

// ---------------------------------------------------------------------------
// CycloNum.

/// An element of Q(zeta_n) in the power basis mod Phi_n.
#[derive(Clone, Debug)]
pub struct CycloNum {
    order: u64,
    /// Length phi(order); coefficient i multiplies zeta^i.
    coeffs: Vec<Rat>,
}

impl CycloNum {
    /// Constructor used by parsers: validates the order and the coordinate
    /// count (must be exactly phi(order)).
    pub fn new(order: u64, coeffs: Vec<Rat>) -> Result<Self> {
        if order == 0 || order > DEFAULT_ORDER_CAP {
            return Err(Error::CycloOrderOverflow(order, DEFAULT_ORDER_CAP));
        }
        let phi = euler_phi(order) as usize;
        if coeffs.len() != phi {
            return Err(Error::CycloEncoding(format!(
                "order {} needs {} coefficients, got {}",
                order,
                phi,
                coeffs.len()
            )));
        }
        Ok(CycloNum { order, coeffs })
    }

    /// Build from an arbitrary-length polynomial in zeta_n, reducing mod Phi_n.
    pub fn from_poly(order: u64, poly: Vec<Rat>) -> Self {
        let mut c = poly;
        reduce_mod_phi(order, &mut c);
        CycloNum { order, coeffs: c }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn zero() -> Self {
        CycloNum { order: 1, coeffs: vec![Rat::zero()] }
    }

    pub fn one() -> Self {
        CycloNum { order: 1, coeffs: vec![Rat::one()] }
    }

    pub fn from_rat(r: Rat) -> Self {
        CycloNum { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self> {
        if n == 0 || n > DEFAULT_ORDER_CAP {
            return Err(Error::CycloOrderOverflow(n, DEFAULT_ORDER_CAP));
        }
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rat::zero(); k + 1];
        poly[k] = Rat::one();
        Ok(Self::from_poly(n, poly))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rational values have all higher power-basis coordinates zero.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Reinterpret in Q(zeta_m) for order | m (ring embedding zeta_n =
    /// zeta_m^(m/n)).
    pub fn coerce(&self, m: u64) -> Result<Self> {
        if m == self.order {
            return Ok(self.clone());
        }
        if m % self.order != 0 {
            return Err(Error::CycloEncoding(format!(
                "cannot coerce order {} into order {}",
                self.order, m
            )));
        }
        if m > DEFAULT_ORDER_CAP {
            return Err(Error::CycloOrderOverflow(m, DEFAULT_ORDER_CAP));
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] = c.clone();
            }
        }
        Ok(Self::from_poly(m, poly))
    }

    fn common_order(&self, other: &Self) -> Result<u64> {
        lcm_u64(self.order, other.order)
            .filter(|&l| l <= DEFAULT_ORDER_CAP)
            .ok_or(Error::CycloOrderOverflow(u64::MAX, DEFAULT_ORDER_CAP))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let l = self.common_order(other)?;
        let a = self.coerce(l)?;
        let b = other.coerce(l)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        Ok(CycloNum { order: l, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let l = self.common_order(other)?;
        let a = self.coerce(l)?;
        let b = other.coerce(l)?;
        let mut poly = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Ok(Self::from_poly(l, poly))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_n, which is irreducible over Q.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::CycloDivisionByZero(self.order));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rat(Rat::one() / r));
        }
        let phi: Vec<Rat> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let s = rat_poly_modular_inverse(&self.coeffs, &phi).ok_or_else(|| {
            Error::CheckFailed(format!("no inverse in Q(zeta_{})", self.order))
        })?;
        Ok(Self::from_poly(self.order, s))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Complex conjugation, zeta -> zeta^(-1).  Restricted to any imaginary
    /// quadratic subfield this is the nontrivial Galois automorphism.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(n - i) % n] += c;
            }
        }
        Self::from_poly(self.order, poly)
    }

    /// |x|^2 = x * conj(x); real and rational for the values this crate
    /// produces only when x lies in a CM field, so the result is returned as
    /// a general CycloNum.
    pub fn norm_square(&self) -> Result<Self> {
        self.mul(&self.conj())
    }

    /// Compact textual form `order:c0,c1,...` used in CSV cells.
    pub fn to_compact_string(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(rat_to_string).collect();
        format!("{}:{}", self.order, body.join(","))
    }

    pub fn from_compact_string(s: &str) -> Result<Self> {
        let (ord, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::CycloEncoding(format!("missing ':' in '{s}'")))?;
        let order: u64 = ord
            .trim()
            .parse()
            .map_err(|_| Error::CycloEncoding(format!("bad order in '{s}'")))?;
        let coeffs = rest
            .split(',')
            .map(rat_from_string)
            .collect::<Result<Vec<_>>>()?;
        Self::new(order, coeffs)
    }
}

fn reduce_mod_phi(order: u64, coeffs: &mut Vec<Rat>) {
    let phi = euler_phi(order) as usize;
    if coeffs.len() > phi {
        let modulus = cyclotomic_polynomial(order);
        for i in (phi..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[i], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for (j, mc) in modulus.iter().enumerate().take(phi) {
                if !mc.is_zero() {
                    let t = &c * &Rat::from_integer(mc.clone());
                    coeffs[i - phi + j] -= t;
                }
            }
        }
    }
    coeffs.resize(phi, Rat::zero());
}

/// Inverse of a modulo m in Q[x] (m irreducible), or None if a = 0 mod m.
fn rat_poly_modular_inverse(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    let trim = |v: &mut Vec<Rat>| {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
    };
    let is_zero_poly = |v: &[Rat]| v.iter().all(|c| c.is_zero());
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    if is_zero_poly(&r1) {
        return None;
    }
    let mut t0: Vec<Rat> = vec![Rat::zero()];
    let mut t1: Vec<Rat> = vec![Rat::one()];
    while !is_zero_poly(&r1) {
        let (q, rem) = rat_poly_divmod(&r0, &r1);
        r0 = r1;
        r1 = rem;
        trim(&mut r1);
        let qt1 = rat_poly_mul(&q, &t1);
        let new_t = rat_poly_sub(&t0, &qt1);
        t0 = t1;
        t1 = new_t;
    }
    // r0 is a nonzero constant multiple of gcd = 1.
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let scale = Rat::one() / r0[0].clone();
    Some(t0.iter().map(|c| c * &scale).collect())
}

fn rat_poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (vec![Rat::zero()], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        let c = &rem[i] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - dn] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let t = &c * dc;
            rem[i - dn + j] -= t;
        }
    }
    rem.truncate(dn.max(1));
    (quot, rem)
}

fn rat_poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn rat_poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Equality after coercion into the joint field.  Panics only if the joint
/// order exceeds the hard cap, which indicates a programming error upstream
/// (all public entry points cap orders first).
impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let l = self
            .common_order(other)
            .expect("cyclotomic order overflow in equality");
        let a = self.coerce(l).unwrap();
        let b = other.coerce(l).unwrap();
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNum {}

impl std::fmt::Display for CycloNum {
    /// Human-readable sum of c * z^i terms; "z" denotes zeta_order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "z{}^{}", self.order, i)?;
            } else {
                write!(f, "{}*z{}^{}", mag, self.order, i)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Serde: {"order": n, "coeffs": ["1/2", "-3", ...]}.

#[derive(Serialize, Deserialize)]
struct CycloWire {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            order: self.order,
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CycloWire::deserialize(d)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        CycloNum::new(wire.order, coeffs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

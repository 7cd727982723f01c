//! p-adic embeddings of cyclotomic eigenvalue fields and slope data.
//!
//! For a split prime p coprime to the value order L, the field Q(zeta_L)
//! embeds into the unramified extension Q_p(zeta_L) of degree
//! f = ord(p mod L).  The embedding is realized as Z[zeta_L] ->
//! Z[x]/(F(x), p^N) for a monic degree-f factor F of Phi_L over Z/p^N.  The
//! factor is found by deterministic equal-degree splitting of Phi_L mod p and
//! lifted with linear Hensel steps; among the factors compatible with the
//! chosen prime of K above p (the image of a generator of that prime has
//! positive valuation, its conjugate has valuation zero), the
//! lexicographically least one is used, so all downstream data is
//! reproducible.
//!
//! Since p splits, the image of K itself lands in Z_p, i.e. in constant
//! polynomials; this is asserted.  Valuations are computed coordinatewise,
//! which is valid because the extension is unramified and the power basis of
//! the lifted factor is an integral basis.

use crate::arith::{is_prime_u64, kronecker, lcm_u64, mult_order};
use crate::characters::{CharPair, HeckeChar, InfinityTypeClass};
use crate::config::Limits;
use crate::cyclo::{cyclotomic_polynomial, CycloNum};
use crate::eigensystem::hecke_roots;
use crate::error::{Error, Result};
use crate::ideals::{QuadIdeal, SplitType};
use crate::quadfield::QuadField;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

type Poly = Vec<BigInt>;

fn poly_trim(p: &mut Poly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_normalize(mut p: Poly, m: &BigInt) -> Poly {
    for c in p.iter_mut() {
        *c = c.mod_floor(m);
    }
    poly_trim(&mut p);
    p
}

fn poly_deg(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

fn poly_add(a: &Poly, b: &Poly, m: &BigInt) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_normalize(out, m)
}

fn poly_sub(a: &Poly, b: &Poly, m: &BigInt) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_normalize(out, m)
}

fn poly_mul(a: &Poly, b: &Poly, m: &BigInt) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_normalize(out, m)
}

fn poly_scale(a: &Poly, s: &BigInt, m: &BigInt) -> Poly {
    poly_normalize(a.iter().map(|c| c * s).collect(), m)
}

/// Division with remainder by a monic divisor; valid over any Z/m.
fn poly_divmod_monic(a: &Poly, g: &Poly, m: &BigInt) -> (Poly, Poly) {
    let dg = poly_deg(g).expect("monic divisor is nonzero");
    assert!(g[dg].is_one(), "divisor must be monic");
    let mut rem = a.clone();
    poly_trim(&mut rem);
    let mut quot: Poly = Vec::new();
    while let Some(dr) = poly_deg(&rem) {
        if dr < dg {
            break;
        }
        let shift = dr - dg;
        let coef = rem[dr].clone();
        if quot.len() < shift + 1 {
            quot.resize(shift + 1, BigInt::zero());
        }
        quot[shift] = (&quot[shift] + &coef).mod_floor(m);
        for i in 0..=dg {
            let v = &rem[shift + i] - &coef * &g[i];
            rem[shift + i] = v.mod_floor(m);
        }
        poly_trim(&mut rem);
    }
    (poly_normalize(quot, m), rem)
}

fn big_inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    // Extended Euclid.
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.is_one() {
        Some(s0.mod_floor(m))
    } else {
        None
    }
}

/// Division with remainder over F_p, any nonzero divisor.
fn poly_divmod_fp(a: &Poly, g: &Poly, p: &BigInt) -> (Poly, Poly) {
    let dg = poly_deg(g).expect("nonzero divisor");
    let lc_inv = big_inv_mod(&g[dg], p).expect("p is prime");
    let monic = poly_scale(g, &lc_inv, p);
    let (q, r) = poly_divmod_monic(a, &monic, p);
    (poly_scale(&q, &lc_inv, p), r)
}

fn fp_gcd(a: &Poly, b: &Poly, p: &BigInt) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod_fp(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    if let Some(d) = poly_deg(&x) {
        let inv = big_inv_mod(&x[d], p).expect("p is prime");
        x = poly_scale(&x, &inv, p);
    }
    x
}

/// Extended gcd over F_p: returns (g, s, t) with s a + t b = g, g monic.
fn fp_ext_gcd(a: &Poly, b: &Poly, p: &BigInt) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![BigInt::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigInt::one()]);
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = poly_divmod_fp(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let ns = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, ns);
        let nt = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(d) = poly_deg(&r0) {
        let inv = big_inv_mod(&r0[d], p).expect("p is prime");
        r0 = poly_scale(&r0, &inv, p);
        s0 = poly_scale(&s0, &inv, p);
        t0 = poly_scale(&t0, &inv, p);
    }
    (r0, s0, t0)
}

fn poly_powmod(base: &Poly, e: &BigInt, g: &Poly, p: &BigInt) -> Poly {
    let (_, mut b) = poly_divmod_monic(base, g, p);
    let mut acc = vec![BigInt::one()];
    let mut e = e.clone();
    let two = BigInt::from(2);
    while e.is_positive() {
        if (&e % &two).is_one() {
            acc = poly_divmod_monic(&poly_mul(&acc, &b, p), g, p).1;
        }
        b = poly_divmod_monic(&poly_mul(&b, &b, p), g, p).1;
        e /= &two;
    }
    acc
}

/// The polynomial with base-p digit expansion of idx as coefficients;
/// enumerating idx = p, p+1, ... sweeps all nonconstant trial polynomials.
fn poly_from_index(mut idx: u64, p: u64) -> Poly {
    let mut out = Vec::new();
    while idx > 0 {
        out.push(BigInt::from(idx % p));
        idx /= p;
    }
    poly_trim(&mut out);
    out
}

/// Factor Phi_l mod p into its irreducible (degree-f) factors, sorted by
/// coefficient vectors.  Deterministic: equal-degree splitting with a fixed
/// sweep of trial polynomials, quadratic residues for odd p, trace maps for
/// p = 2.
fn factor_cyclotomic_mod_p(l: u64, p: u64) -> Result<Vec<Poly>> {
    let pb = BigInt::from(p);
    let phi_poly = cyclotomic_polynomial(l);
    let target = poly_normalize(phi_poly.to_vec(), &pb);
    let f = mult_order(p % l, l);
    let half = (BigInt::from(p).pow(f as u32) - 1) / 2;
    let mut done: Vec<Poly> = Vec::new();
    let mut work = vec![target.clone()];
    while let Some(g) = work.pop() {
        let dg = poly_deg(&g).expect("nonzero block") as u64;
        if dg == f {
            let inv = big_inv_mod(&g[f as usize], &pb).expect("p is prime");
            done.push(poly_scale(&g, &inv, &pb));
            continue;
        }
        let mut split = None;
        // Trials are bounded: some nonconstant polynomial of degree < deg g
        // separates any two distinct irreducible factors.
        let cap = 1u64 << 40;
        let mut idx = p;
        while idx < cap {
            let t = poly_from_index(idx, p);
            idx += 1;
            let s = if p != 2 {
                let tp = poly_powmod(&t, &half, &g, &pb);
                let one_poly = vec![BigInt::one()];
                poly_sub(&tp, &one_poly, &pb)
            } else {
                // Trace map T + T^2 + ... + T^(2^(f-1)) mod g.
                let mut acc = poly_divmod_monic(&t, &g, &pb).1;
                let mut cur = acc.clone();
                for _ in 1..f {
                    cur = poly_divmod_monic(&poly_mul(&cur, &cur, &pb), &g, &pb).1;
                    acc = poly_add(&acc, &cur, &pb);
                }
                acc
            };
            let d = fp_gcd(&s, &g, &pb);
            if let Some(dd) = poly_deg(&d) {
                if dd > 0 && (dd as u64) < dg {
                    split = Some(d);
                    break;
                }
            }
        }
        let d = split.ok_or_else(|| Error::CheckFailed("equal-degree splitting stalled".into()))?;
        let (q, r) = poly_divmod_monic(&g, &d, &pb);
        assert!(r.is_empty(), "gcd divides the block");
        work.push(d);
        work.push(q);
    }
    done.sort();
    // The product of the factors must recover Phi_l mod p.
    let mut prod = vec![BigInt::one()];
    for d in &done {
        prod = poly_mul(&prod, d, &pb);
    }
    let lead_inv = big_inv_mod(target.last().unwrap(), &pb).expect("p is prime");
    assert_eq!(prod, poly_scale(&target, &lead_inv, &pb), "factorization check");
    assert_eq!(done.len() as u64 * f, crate::arith::euler_phi(l), "factor count");
    Ok(done)
}

/// Lift a monic factor f0 of phi mod p to a monic factor mod p^n by linear
/// Hensel steps.
fn hensel_lift_factor(phi: &[BigInt], f0: &Poly, p: u64, n: u32) -> Poly {
    let pb = BigInt::from(p);
    let (g0, r) = poly_divmod_monic(&poly_normalize(phi.to_vec(), &pb), f0, &pb);
    assert!(r.is_empty(), "f0 divides phi mod p");
    let (one, a, b) = fp_ext_gcd(f0, &g0, &pb);
    assert_eq!(one, vec![BigInt::one()], "cofactors are coprime mod p");
    let _ = a;
    let mut big_f = f0.clone();
    let mut big_g = g0.clone();
    let mut pj = pb.clone();
    for _ in 1..n {
        let pj1 = &pj * &pb;
        let phi_mod = poly_normalize(phi.to_vec(), &pj1);
        let prod = poly_mul(&big_f, &big_g, &pj1);
        let err_full = poly_sub(&phi_mod, &prod, &pj1);
        let mut err = Vec::with_capacity(err_full.len());
        for c in &err_full {
            let (q, r) = c.div_rem(&pj);
            assert!(r.is_zero(), "error divisible by p^j");
            err.push(q);
        }
        let err = poly_normalize(err, &pb);
        let df = poly_divmod_monic(&poly_mul(&b, &err, &pb), f0, &pb).1;
        let dg_num = poly_sub(&err, &poly_mul(&g0, &df, &pb), &pb);
        let (dg, r0) = poly_divmod_monic(&dg_num, f0, &pb);
        assert!(r0.is_empty(), "correction splits along the factors");
        big_f = poly_add(&big_f, &poly_scale(&df, &pj, &pj1), &pj1);
        big_g = poly_add(&big_g, &poly_scale(&dg, &pj, &pj1), &pj1);
        pj = pj1;
    }
    let check = poly_sub(&poly_normalize(phi.to_vec(), &pj), &poly_mul(&big_f, &big_g, &pj), &pj);
    assert!(check.is_empty(), "lifted factorization is exact mod p^n");
    big_f
}

fn vp_big(x: &BigInt, p: &BigInt) -> u32 {
    assert!(!x.is_zero());
    let mut v = 0u32;
    let mut x = x.abs();
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

/// Embedding of Q(zeta_L) into Z[x]/(F(x), p^prec).
pub struct PadicEmbedding {
    p: u64,
    prec: u32,
    value_order: u64,
    degree: u32,
    modulus: Poly,
    p_pow: BigInt,
    prime: QuadIdeal,
    prime_bar: QuadIdeal,
}

impl PadicEmbedding {
    pub fn new(k: &QuadField, value_order: u64, p: u64, prec: u32, limits: &Limits) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p as i128));
        }
        if kronecker(k.disc() as i128, p as i128) != 1 {
            return Err(Error::PrimeNotSplit(p));
        }
        if value_order % p == 0 {
            return Err(Error::RamifiedEmbedding(p, value_order));
        }
        if prec < 1 || prec > limits.max_precision {
            return Err(Error::InsufficientPrecision(prec, limits.max_precision));
        }
        assert!(value_order >= 2, "value orders always contain the discriminant");
        let (ty, primes) = QuadIdeal::split_prime(k, p)?;
        debug_assert_eq!(ty, SplitType::Split);
        let (prime, prime_bar) = (primes[0], primes[1]);
        let factors = factor_cyclotomic_mod_p(value_order, p)?;
        let f = mult_order(p % value_order, value_order) as u32;
        let phi_int = cyclotomic_polynomial(value_order);

        // Select the factor through which the chosen prime has positive
        // valuation.  Small lift to p^3 so denominators of 2 in the omega
        // embedding cannot mask the test.
        let g_p = k.embed(&prime.canonical_generator()?);
        let g_pbar = k.embed(&prime_bar.canonical_generator()?);
        let mut chosen = None;
        for f0 in &factors {
            let f3 = hensel_lift_factor(&phi_int, f0, p, 3);
            let probe = PadicEmbedding {
                p,
                prec: 3,
                value_order,
                degree: f,
                modulus: f3,
                p_pow: BigInt::from(p).pow(3),
                prime,
                prime_bar,
            };
            let vp = probe.valuation(&g_p)?;
            let vq = probe.valuation(&g_pbar)?;
            if vp == Some(1) && vq == Some(0) {
                chosen = Some(f0.clone());
                break;
            }
        }
        let f0 = chosen.ok_or_else(|| {
            Error::CheckFailed("no factor of the cyclotomic polynomial matches the prime".into())
        })?;
        let modulus = hensel_lift_factor(&phi_int, &f0, p, prec);
        let emb = PadicEmbedding {
            p,
            prec,
            value_order,
            degree: f,
            modulus,
            p_pow: BigInt::from(p).pow(prec),
            prime,
            prime_bar,
        };
        // Since p splits, K lands in Z_p: images of the prime generators are
        // constants.
        for g in [&g_p, &g_pbar] {
            let coords = emb.integral_coords(g)?;
            assert!(
                coords.1[1..].iter().all(|c| c.is_zero()),
                "image of the quadratic field must be constant"
            );
        }
        Ok(emb)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn value_order(&self) -> u64 {
        self.value_order
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn prime(&self) -> &QuadIdeal {
        &self.prime
    }

    pub fn prime_bar(&self) -> &QuadIdeal {
        &self.prime_bar
    }

    /// Modulus coefficients as decimal strings, constant term first.
    pub fn modulus_strings(&self) -> Vec<String> {
        self.modulus.iter().map(|c| c.to_string()).collect()
    }

    /// Coordinates of den * c where den is the p-part of the denominators:
    /// returns (s, coords) with c = p^(-s) * (coords as element), coords
    /// exact mod p^prec.
    fn integral_coords(&self, c: &CycloNum) -> Result<(u32, Vec<BigInt>)> {
        let c = c.coerce(self.value_order)?;
        let pb = BigInt::from(self.p);
        // Clear denominators: lcm over coefficients.
        let mut den = BigInt::one();
        for r in c.coeffs() {
            den = den.lcm(r.denom());
        }
        let s = vp_big(&den, &pb);
        let unit_den = &den / pb.pow(s);
        let unit_inv = big_inv_mod(&unit_den, &self.p_pow)
            .ok_or_else(|| Error::CheckFailed("denominator unit must be invertible".into()))?;
        // Power basis images x^i mod (F, p^prec).
        let mut poly: Poly = Vec::new();
        let mut xi: Poly = vec![BigInt::one()];
        for r in c.coeffs() {
            let num = (r.numer() * &den / r.denom()).mod_floor(&self.p_pow);
            poly = poly_add(&poly, &poly_scale(&xi, &num, &self.p_pow), &self.p_pow);
            xi = {
                let mut next = vec![BigInt::zero()];
                next.extend(xi.iter().cloned());
                poly_divmod_monic(&next, &self.modulus, &self.p_pow).1
            };
        }
        let poly = poly_divmod_monic(&poly, &self.modulus, &self.p_pow).1;
        let mut coords = poly_scale(&poly, &unit_inv, &self.p_pow);
        coords.resize(self.degree as usize, BigInt::zero());
        Ok((s, coords))
    }

    /// Coordinates of c in the power basis, requiring c to be p-integral;
    /// the representative is exact mod p^(prec - s) where s is the p-part
    /// of the denominators.
    pub fn embed(&self, c: &CycloNum) -> Result<Vec<BigInt>> {
        let (s, coords) = self.integral_coords(c)?;
        if s == 0 {
            return Ok(coords);
        }
        let ps = BigInt::from(self.p).pow(s);
        let shifted = BigInt::from(self.p).pow(self.prec - s);
        let mut out = Vec::with_capacity(coords.len());
        for c in &coords {
            let (q, r) = c.div_rem(&ps);
            if !r.is_zero() {
                return Err(Error::CheckFailed("value is not p-integral".into()));
            }
            out.push(q.mod_floor(&shifted));
        }
        Ok(out)
    }

    /// p-adic valuation of c; None for c = 0.  A return value of
    /// prec - s (s the denominator p-part) means "at least that much".
    pub fn valuation(&self, c: &CycloNum) -> Result<Option<i64>> {
        if c.is_zero() {
            return Ok(None);
        }
        let (s, coords) = self.integral_coords(c)?;
        let pb = BigInt::from(self.p);
        let mut v = self.prec;
        for c in &coords {
            if !c.is_zero() {
                v = v.min(vp_big(c, &pb));
            }
        }
        Ok(Some(v as i64 - s as i64))
    }
}

/// One choice of U eigenvalues at the two primes above p.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilization {
    pub label: String,
    pub u_p: CycloNum,
    pub u_p_bar: CycloNum,
    pub slopes: (i64, i64),
    pub ordinary: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub p: u64,
    pub prec: u32,
    pub value_order: u64,
    pub embedding_degree: u32,
    pub class: InfinityTypeClass,
    pub weight: (i64, i64),
    pub prime: QuadIdeal,
    pub prime_bar: QuadIdeal,
    pub modulus: Vec<String>,
    pub stabilizations: Vec<Stabilization>,
    pub ordinary_count: usize,
    /// Computed slopes agree with the closed-form table for the type shape.
    pub slopes_match_table: bool,
}

/// Expected slopes (v alpha_p, v beta_p, v alpha_pbar, v beta_pbar) for the
/// type shape of the pair.
fn expected_slopes(class: &InfinityTypeClass) -> Result<[i64; 4]> {
    match *class {
        InfinityTypeClass::TypeA { k, l } | InfinityTypeClass::TypeADual { k, l } => {
            Ok([0, k + 1, l + 1, 0])
        }
        InfinityTypeClass::TypeB { k: 0, l: 0 } | InfinityTypeClass::DegreeZero { k: 0, l: 0 } => {
            Err(Error::ZeroWeightExcluded)
        }
        InfinityTypeClass::TypeB { k, l } | InfinityTypeClass::DegreeZero { k, l } => {
            Ok([0, k + 1, 0, l + 1])
        }
        InfinityTypeClass::Other => Err(Error::UnsupportedTypeClass),
    }
}

/// Classify the four p-stabilizations of the eigensystem by slope.
pub fn stabilize(pair: &CharPair, p: u64, prec: u32, limits: &Limits) -> Result<StabilizationReport> {
    let k = pair.field();
    let class = pair.infinity_class();
    let weight = class.weight().ok_or(Error::UnsupportedTypeClass)?;
    let expected = expected_slopes(&class)?;
    let level = pair.level();
    let emb = PadicEmbedding::new(k, pair.value_order(), p, prec, limits)?;
    if !emb.prime().is_coprime(&level) || !emb.prime_bar().is_coprime(&level) {
        return Err(Error::NotCoprime);
    }
    let (alpha_p, beta_p) = hecke_roots(pair, emb.prime())?;
    let (alpha_pbar, beta_pbar) = hecke_roots(pair, emb.prime_bar())?;
    let val = |c: &CycloNum| -> Result<i64> {
        emb.valuation(c)?
            .ok_or_else(|| Error::CheckFailed("Hecke roots are nonzero".into()))
    };
    let slopes = [val(&alpha_p)?, val(&beta_p)?, val(&alpha_pbar)?, val(&beta_pbar)?];
    let mut stabs = Vec::with_capacity(4);
    for (i, (name_p, u_p)) in [("alpha", &alpha_p), ("beta", &beta_p)].iter().enumerate() {
        for (j, (name_q, u_q)) in [("alpha", &alpha_pbar), ("beta", &beta_pbar)].iter().enumerate()
        {
            let s = (slopes[i], slopes[2 + j]);
            stabs.push(Stabilization {
                label: format!("{}_p,{}_pbar", name_p, name_q),
                u_p: (*u_p).clone(),
                u_p_bar: (*u_q).clone(),
                slopes: s,
                ordinary: s == (0, 0),
            });
        }
    }
    let ordinary_count = stabs.iter().filter(|s| s.ordinary).count();
    Ok(StabilizationReport {
        p,
        prec,
        value_order: emb.value_order(),
        embedding_degree: emb.degree(),
        class,
        weight,
        prime: *emb.prime(),
        prime_bar: *emb.prime_bar(),
        modulus: emb.modulus_strings(),
        stabilizations: stabs,
        ordinary_count,
        slopes_match_table: slopes == expected,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightDirection {
    /// Twist the first exponent of phi1 (the k direction).
    K,
    /// Twist the second exponent of phi1 (the l direction).
    L,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceWitness {
    pub prime: QuadIdeal,
    /// Valuation of the eigenvalue difference; None when the difference is
    /// exactly zero.
    pub valuation: Option<i64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCongruenceReport {
    pub p: u64,
    pub m: u32,
    pub t: u64,
    pub delta: i64,
    pub direction: WeightDirection,
    pub modulus_exponent: u32,
    pub base_type1: (i64, i64),
    pub twisted_type1: (i64, i64),
    pub witnesses: Vec<CongruenceWitness>,
    pub all_pass: bool,
}

/// Verify the weight-family congruence a_q(phi^(Delta)) = a_q(phi) mod
/// p^(m+1), where Delta = t p^m lcm(p-1, w) and phi^(Delta) twists one
/// infinity exponent of phi1.  The factor w keeps unit compatibility; the
/// factor (p-1) p^m forces the congruence because the twisting unit is a
/// p-adic unit in Z_p.
pub fn family_congruence(
    pair: &CharPair,
    p: u64,
    m: u32,
    t: u64,
    direction: WeightDirection,
    prime_bound: i128,
    prec: u32,
    limits: &Limits,
) -> Result<FamilyCongruenceReport> {
    if prec < m + 2 {
        return Err(Error::InsufficientPrecision(prec, m + 2));
    }
    let k = pair.field();
    let w = k.unit_count();
    let step = lcm_u64(p - 1, w).ok_or_else(|| Error::BoundExceeded("lcm overflow".into()))?;
    let delta_u = t
        .checked_mul(p.checked_pow(m).ok_or_else(|| Error::BoundExceeded("p^m overflow".into()))?)
        .and_then(|x| x.checked_mul(step))
        .ok_or_else(|| Error::BoundExceeded("Delta overflow".into()))?;
    if delta_u > (1 << 40) {
        return Err(Error::BoundExceeded(format!("Delta = {} too large", delta_u)));
    }
    let delta = delta_u as i64;
    let (a1, b1) = pair.phi1().infinity_type();
    let twisted_type = match direction {
        WeightDirection::K => (a1 + delta, b1),
        WeightDirection::L => (a1, b1 + delta),
    };
    let twisted1 = HeckeChar::from_residue(
        k,
        pair.phi1().finite_part().clone(),
        twisted_type.0,
        twisted_type.1,
        limits,
    )?;
    let twisted = CharPair::new(twisted1, pair.phi2().clone())?;
    let emb = PadicEmbedding::new(k, pair.value_order(), p, prec, limits)?;
    let level = pair.level();
    let p_ideal = QuadIdeal::principal(k, &crate::quadfield::QuadInt::from_int(p as i128))?;
    let mut witnesses = Vec::new();
    for q in QuadIdeal::primes_of_norm_up_to(k, prime_bound) {
        if !q.is_coprime(&level) || !q.is_coprime(&p_ideal) {
            continue;
        }
        let (a, d) = crate::eigensystem::spherical_eigenvalues(pair, &q)?;
        let (at, dt) = crate::eigensystem::spherical_eigenvalues(&twisted, &q)?;
        let diff_a = at.sub(&a)?;
        let diff_d = dt.sub(&d)?;
        let va = emb.valuation(&diff_a)?;
        let vd = emb.valuation(&diff_d)?;
        let v = match (va, vd) {
            (None, x) => x,
            (x, None) => x,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        let pass = v.map_or(true, |x| x >= (m + 1) as i64);
        witnesses.push(CongruenceWitness { prime: q, valuation: v, pass });
    }
    if witnesses.is_empty() {
        return Err(Error::BadSampleSet("no witness primes under the bound".into()));
    }
    let all_pass = witnesses.iter().all(|w| w.pass);
    Ok(FamilyCongruenceReport {
        p,
        m,
        t,
        delta,
        direction,
        modulus_exponent: m + 1,
        base_type1: (a1, b1),
        twisted_type1: twisted_type,
        witnesses,
        all_pass,
    })
}

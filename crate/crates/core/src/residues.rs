//! Unit groups (O/f)^x and characters on them.
//!
//! The group is assembled by CRT from the prime power factors of f.  Each
//! local factor gets a basis of independent generators found greedily inside
//! its primary parts; generators are lifted back mod f and a full discrete
//! log table is built.  Groups are cached globally by (field, HNF) since the
//! same modulus is hit many times during enumeration and brute-force counts.
//!
//! A character is an exponent vector on the basis.  All evaluation is done on
//! integer exponents of a fixed root of unity, so comparing values, computing
//! conductors and transporting characters between moduli never touches
//! cyclotomic arithmetic until a value is actually requested.

use crate::arith::{factor_u64, lcm_u64};
use crate::config::Limits;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ideals::QuadIdeal;
use crate::quadfield::{QuadField, QuadInt};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Debug)]
pub struct UnitGroup {
    field: QuadField,
    modulus: QuadIdeal,
    primes: Vec<QuadIdeal>,
    gens: Vec<QuadInt>,
    orders: Vec<u64>,
    units: Vec<QuadInt>,
    dlog: HashMap<QuadInt, Vec<u64>>,
    order: u64,
    exponent: u64,
}

pub(crate) fn mul_mod(k: &QuadField, m: &QuadIdeal, a: &QuadInt, b: &QuadInt) -> QuadInt {
    m.reduce(&a.mul(b, k))
}

pub(crate) fn pow_mod(k: &QuadField, m: &QuadIdeal, z: &QuadInt, e: u64) -> QuadInt {
    let mut base = m.reduce(z);
    let mut e = e;
    let mut acc = m.reduce(&QuadInt::one());
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(k, m, &acc, &base);
        }
        base = mul_mod(k, m, &base, &base);
        e >>= 1;
    }
    acc
}

/// Basis of the p-primary part of the unit group mod m, where the primary
/// part is handed in as a sorted list of residues.  Greedy: repeatedly take
/// an element of maximal order relative to the span so far, then adjust it by
/// a span element so its absolute order equals the relative order.  The span
/// stays a direct summand throughout, which is checked by cardinality.
fn primary_basis(
    k: &QuadField,
    m: &QuadIdeal,
    p: u64,
    part: &[QuadInt],
) -> Vec<(QuadInt, u64)> {
    let one = m.reduce(&QuadInt::one());
    let mut basis: Vec<(QuadInt, u64)> = Vec::new();
    let mut span: Vec<QuadInt> = vec![one];
    let in_span = |span: &[QuadInt], z: &QuadInt| span.binary_search(z).is_ok();
    while span.len() < part.len() {
        let mut best: Option<(QuadInt, u64)> = None;
        for x in part {
            // Relative order is the least p^j with x^(p^j) in the span.
            let mut t = *x;
            let mut rel = 1u64;
            while !in_span(&span, &t) {
                t = pow_mod(k, m, &t, p);
                rel *= p;
            }
            if best.map_or(true, |(_, r)| rel > r) {
                best = Some((*x, rel));
            }
        }
        let (x, rel) = best.expect("primary part not exhausted");
        assert!(rel > 1, "relative order must exceed 1 while span is proper");
        // x^rel lies in the span and, since the span is pure, equals some
        // span element to the rel-th power; dividing by it fixes the order.
        let adjusted = span
            .iter()
            .map(|h| mul_mod(k, m, &x, h))
            .find(|y| pow_mod(k, m, y, rel) == one)
            .expect("span is pure, an adjusted generator exists");
        let mut next = Vec::with_capacity(span.len() * rel as usize);
        let mut power = one;
        for _ in 0..rel {
            for h in &span {
                next.push(mul_mod(k, m, &power, h));
            }
            power = mul_mod(k, m, &power, &adjusted);
        }
        next.sort();
        next.dedup();
        assert_eq!(next.len(), span.len() * rel as usize, "span extension is direct");
        span = next;
        basis.push((adjusted, rel));
    }
    basis
}

/// Basis of the full unit group mod a prime power m = q^e.
fn local_basis(k: &QuadField, q: &QuadIdeal, m: &QuadIdeal) -> Vec<(QuadInt, u64)> {
    let units: Vec<QuadInt> = m.residues().filter(|z| !q.contains(z)).collect();
    let nq = q.norm() as u64;
    let e = {
        let mut e = 0u32;
        let mut t = *m;
        while !t.is_whole() {
            t = t.divide_exact(q).expect("m is a power of q");
            e += 1;
        }
        e
    };
    let phi = nq.pow(e - 1) * (nq - 1);
    assert_eq!(units.len() as u64, phi, "unit count matches the norm formula");
    let mut basis = Vec::new();
    for (p, _) in factor_u64(phi) {
        let proj = phi / {
            let mut pv = 1u64;
            while phi % (pv * p) == 0 {
                pv *= p;
            }
            pv
        };
        let mut part: Vec<QuadInt> = units.iter().map(|u| pow_mod(k, m, u, proj)).collect();
        part.sort();
        part.dedup();
        basis.extend(primary_basis(k, m, p, &part));
    }
    basis
}

impl UnitGroup {
    fn build(k: &QuadField, f: &QuadIdeal, limits: &Limits) -> Result<UnitGroup> {
        let factors = f.factor(limits.max_factor_norm as i128)?;
        let primes: Vec<QuadIdeal> = factors.iter().map(|(q, _)| *q).collect();
        let mut gens: Vec<QuadInt> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        for (q, e) in &factors {
            let m = q.pow(*e);
            let cofactor = f.divide_exact(&m)?;
            for (g, n) in local_basis(k, q, &m) {
                // CRT lift: z = g mod q^e, z = 1 mod f / q^e.
                let lifted = f
                    .residues()
                    .find(|z| m.contains(&z.sub(&g)) && cofactor.contains(&z.sub(&QuadInt::one())))
                    .expect("CRT lift exists");
                gens.push(lifted);
                orders.push(n);
            }
        }
        let order: u64 = orders.iter().product();
        let exponent = orders.iter().fold(1u64, |a, &n| {
            lcm_u64(a, n).expect("group exponent fits in u64")
        });
        // Full discrete log table, one entry per unit.
        let mut dlog: HashMap<QuadInt, Vec<u64>> = HashMap::new();
        dlog.insert(f.reduce(&QuadInt::one()), vec![0; gens.len()]);
        for (i, (g, n)) in gens.iter().zip(&orders).enumerate() {
            let prev: Vec<(QuadInt, Vec<u64>)> = dlog.drain().collect();
            for (z, exps) in prev {
                let mut t = z;
                for a in 0..*n {
                    let mut e = exps.clone();
                    e[i] = a;
                    let dup = dlog.insert(t, e);
                    assert!(dup.is_none(), "generators are independent");
                    t = mul_mod(k, f, &t, g);
                }
            }
        }
        assert_eq!(dlog.len() as u64, order, "dlog table covers the group");
        let mut units: Vec<QuadInt> = dlog.keys().copied().collect();
        units.sort();
        Ok(UnitGroup {
            field: *k,
            modulus: *f,
            primes,
            gens,
            orders,
            units,
            dlog,
            order,
            exponent,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    pub fn gens(&self) -> &[QuadInt] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent (lcm of the basis orders); 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Sorted list of unit residues.
    pub fn units(&self) -> &[QuadInt] {
        &self.units
    }

    pub fn is_unit(&self, z: &QuadInt) -> bool {
        // z is a unit iff (z) + f = O, i.e. no prime of f contains z.  For
        // the whole ring every residue (there is one) counts as a unit.
        self.primes.iter().all(|q| !q.contains(z))
    }

    pub fn dlog(&self, z: &QuadInt) -> Result<Vec<u64>> {
        self.dlog
            .get(&self.modulus.reduce(z))
            .cloned()
            .ok_or_else(|| Error::NotUnit(format!("{} mod {}", z, self.modulus)))
    }
}

type GroupKey = (i64, i128, i128, i128);

static UNIT_GROUPS: Lazy<Mutex<HashMap<GroupKey, Arc<UnitGroup>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached unit group of O/f.  The residue ring cap is checked before the
/// cache so that limits behave the same whether or not the group was built
/// earlier in the process.
pub fn unit_group(k: &QuadField, f: &QuadIdeal, limits: &Limits) -> Result<Arc<UnitGroup>> {
    if f.norm() > limits.max_residue_ring as i128 {
        return Err(Error::BoundExceeded(format!(
            "residue ring of size {} beyond cap {}",
            f.norm(),
            limits.max_residue_ring
        )));
    }
    let (a, b, c) = f.hnf();
    let key = (k.d(), a, b, c);
    if let Some(g) = UNIT_GROUPS.lock().unwrap().get(&key) {
        return Ok(Arc::clone(g));
    }
    let built = Arc::new(UnitGroup::build(k, f, limits)?);
    let mut cache = UNIT_GROUPS.lock().unwrap();
    Ok(Arc::clone(cache.entry(key).or_insert(built)))
}

/// A character of (O/f)^x, stored as exponents on the group basis:
/// chi(gens[i]) = zeta_{orders[i]}^{exps[i]}.
#[derive(Clone, Debug)]
pub struct ResidueCharacter {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
}

impl PartialEq for ResidueCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.field.d() == other.group.field.d()
            && self.group.modulus == other.group.modulus
            && self.exps == other.exps
    }
}

impl Eq for ResidueCharacter {}

impl ResidueCharacter {
    pub fn new(group: Arc<UnitGroup>, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.gens.len() || exps.iter().zip(&group.orders).any(|(e, n)| e >= n) {
            return Err(Error::BadCharacter(exps.len(), group.gens.len()));
        }
        Ok(ResidueCharacter { group, exps })
    }

    pub fn trivial(group: Arc<UnitGroup>) -> Self {
        let exps = vec![0; group.gens.len()];
        ResidueCharacter { group, exps }
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.group.modulus
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.orders)
            .fold(1u64, |acc, (&e, &n)| {
                let d = crate::arith::gcd_u64(e, n);
                lcm_u64(acc, n / d).expect("character order fits in u64")
            })
    }

    /// chi(z) as an exponent: returns (L, m) with chi(z) = zeta_L^m, where L
    /// is the group exponent.
    pub fn eval_exponent(&self, z: &QuadInt) -> Result<(u64, u64)> {
        let coords = self.group.dlog(z)?;
        let l = self.group.exponent;
        let mut m = 0u64;
        for ((a, e), n) in coords.iter().zip(&self.exps).zip(&self.group.orders) {
            m = (m + (l / n) % l * (((a % n) * (e % n)) % n) % l) % l;
        }
        Ok((l, m))
    }

    pub fn eval(&self, z: &QuadInt) -> Result<CycloNum> {
        let (l, m) = self.eval_exponent(z)?;
        CycloNum::root_of_unity(l, m as i64)
    }

    /// Pointwise product; both characters must live on the same group.
    pub fn mul(&self, other: &ResidueCharacter) -> Result<ResidueCharacter> {
        if self.group.modulus != other.group.modulus {
            return Err(Error::FieldMismatch(self.group.field.d(), other.group.field.d()));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Ok(ResidueCharacter { group: Arc::clone(&self.group), exps })
    }

    pub fn inv(&self) -> ResidueCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(e, n)| (n - e) % n)
            .collect();
        ResidueCharacter { group: Arc::clone(&self.group), exps }
    }

    pub fn pow(&self, e: u64) -> ResidueCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(a, n)| (a % n) * (e % n) % n)
            .collect();
        ResidueCharacter { group: Arc::clone(&self.group), exps }
    }

    /// Build a character on `target` whose value at each generator g is
    /// given by `value(g) = (L, m)` meaning zeta_L^m.  Fails if a value does
    /// not have order dividing the generator's order.
    pub fn from_values<F>(target: Arc<UnitGroup>, mut value: F) -> Result<ResidueCharacter>
    where
        F: FnMut(&QuadInt) -> Result<(u64, u64)>,
    {
        let mut exps = Vec::with_capacity(target.gens.len());
        let pairs: Vec<(QuadInt, u64)> =
            target.gens.iter().copied().zip(target.orders.iter().copied()).collect();
        for (g, n) in pairs {
            let (l, m) = value(&g)?;
            if (n as u128 * m as u128) % l as u128 != 0 {
                return Err(Error::CheckFailed(
                    "character value order does not divide generator order".into(),
                ));
            }
            exps.push(((n as u128 * m as u128 / l as u128) % n as u128) as u64);
        }
        Ok(ResidueCharacter { group: target, exps })
    }

    /// The conductor: smallest divisor f' of the modulus such that the
    /// character is trivial on units congruent to 1 mod f'.
    pub fn conductor(&self, limits: &Limits) -> Result<QuadIdeal> {
        let f = &self.group.modulus;
        let k = &self.group.field;
        let factors = f.factor(limits.max_factor_norm as i128)?;
        // All divisors, by exponent tuple.
        let mut divisors = vec![QuadIdeal::whole_ring(k)];
        for (q, e) in &factors {
            let mut next = Vec::new();
            for d in &divisors {
                for i in 0..=*e {
                    next.push(d.mul(&q.pow(i)));
                }
            }
            divisors = next;
        }
        divisors.sort();
        let one = QuadInt::one();
        'outer: for d in divisors {
            for z in &self.group.units {
                if d.contains(&z.sub(&one)) {
                    let (_, m) = self.eval_exponent(z)?;
                    if m != 0 {
                        continue 'outer;
                    }
                }
            }
            return Ok(d);
        }
        unreachable!("the modulus itself is always an admissible conductor")
    }

    /// Restriction through the projection U(f) -> U(f'), where f' divides f
    /// and is divisible by the conductor.
    pub fn restrict_to(&self, f_new: &QuadIdeal, limits: &Limits) -> Result<ResidueCharacter> {
        let k = self.group.field;
        let f = self.group.modulus;
        if !f_new.contains_ideal(&f) {
            return Err(Error::CheckFailed(format!("{} does not divide {}", f_new, f)));
        }
        let target = unit_group(&k, f_new, limits)?;
        Self::from_values(target, |g| {
            let lift = f
                .residues()
                .find(|z| f_new.contains(&z.sub(g)) && self.group.is_unit(z))
                .ok_or_else(|| Error::CheckFailed("unit lift exists by CRT".into()))?;
            self.eval_exponent(&lift)
        })
    }

    /// Extension through the projection U(F) -> U(f) for f dividing F.
    pub fn extend_to(&self, f_big: &QuadIdeal, limits: &Limits) -> Result<ResidueCharacter> {
        let k = self.group.field;
        let f = self.group.modulus;
        if !f.contains_ideal(f_big) {
            return Err(Error::CheckFailed(format!("{} does not divide {}", f, f_big)));
        }
        let target = unit_group(&k, f_big, limits)?;
        Self::from_values(target, |g| self.eval_exponent(g))
    }

    /// The character z -> chi(conj z), which lives modulo the conjugate
    /// ideal.
    pub fn conjugated(&self, limits: &Limits) -> Result<ResidueCharacter> {
        let k = self.group.field;
        let target = unit_group(&k, &self.group.modulus.conj_ideal(), limits)?;
        Self::from_values(target, |g| self.eval_exponent(&g.conj(&k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadField;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn group_mod_two_plus_i_is_cyclic_four() {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let g = unit_group(&k, &f, &limits()).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.orders(), &[4]);
        // i reduces to 3 mod (2+i) and generates.
        let di = g.dlog(&QuadInt::new(0, 1)).unwrap();
        assert_eq!(di.len(), 1);
        let gen_pow = pow_mod(&k, &f, &g.gens()[0], di[0]);
        assert_eq!(gen_pow, f.reduce(&QuadInt::new(0, 1)));
        assert!(g.dlog(&QuadInt::new(2, 1)).is_err());
    }

    #[test]
    fn group_mod_three_in_qi() {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let g = unit_group(&k, &f, &limits()).unwrap();
        // F_9 units: cyclic of order 8.
        assert_eq!(g.order(), 8);
        assert_eq!(g.orders(), &[8]);
        assert_eq!(g.units().len(), 8);
    }

    #[test]
    fn group_mod_ramified_cube() {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::new(-2, 2)).unwrap(); // (1+i)^3
        assert_eq!(f.norm(), 8);
        let g = unit_group(&k, &f, &limits()).unwrap();
        assert_eq!(g.order(), 4);
        // i has order 4 there, so the group is cyclic.
        assert_eq!(g.orders(), &[4]);
    }

    #[test]
    fn crt_composite_modulus() {
        let k = qi();
        let f3 = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let f5 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let f = f3.mul(&f5);
        let g = unit_group(&k, &f, &limits()).unwrap();
        assert_eq!(g.order(), 32);
        let mut orders = g.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![4, 8]);
        // Every generator maps to 1 under the other factor.
        for gen in g.gens() {
            let in3 = f3.contains(&gen.sub(&QuadInt::one()));
            let in5 = f5.contains(&gen.sub(&QuadInt::one()));
            assert!(in3 || in5);
        }
    }

    #[test]
    fn units_of_inert_two_in_eisenstein_field() {
        let k = QuadField::new(-3).unwrap();
        let f = QuadIdeal::principal(&k, &QuadInt::from_int(2)).unwrap();
        let g = unit_group(&k, &f, &limits()).unwrap();
        // F_4 units: cyclic of order 3, generated by omega.
        assert_eq!(g.orders(), &[3]);
        assert!(g.dlog(&QuadInt::new(0, 1)).is_ok());
    }

    #[test]
    fn character_values_and_order() {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let g = unit_group(&k, &f, &limits()).unwrap();
        // The faithful character chi with chi(gen) = zeta_4.
        let chi = ResidueCharacter::new(Arc::clone(&g), vec![1]).unwrap();
        assert_eq!(chi.order(), 4);
        // chi(z)^4 = 1 for every unit and chi is multiplicative.
        for a in g.units() {
            let va = chi.eval(a).unwrap();
            assert!(va.pow(4).unwrap().is_one());
            for b in g.units() {
                let prod = chi.eval(&a.mul(b, &k)).unwrap();
                assert_eq!(prod, va.mul(&chi.eval(b).unwrap()).unwrap());
            }
        }
        assert_eq!(chi.mul(&chi.inv()).unwrap().order(), 1);
        assert!(chi.pow(4).is_trivial());
    }

    #[test]
    fn conductor_detects_imprimitivity() {
        let k = qi();
        let f3 = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let f5 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let f = f3.mul(&f5);
        let g = unit_group(&k, &f, &limits()).unwrap();
        // Character nontrivial only on the order-4 generator (the (2+i) part).
        let exps: Vec<u64> = g.orders().iter().map(|&n| if n == 4 { 1 } else { 0 }).collect();
        let chi = ResidueCharacter::new(Arc::clone(&g), exps).unwrap();
        assert_eq!(chi.conductor(&limits()).unwrap(), f5);
        // Restriction to the conductor then extension back is the identity.
        let prim = chi.restrict_to(&f5, &limits()).unwrap();
        assert_eq!(*prim.modulus(), f5);
        let back = prim.extend_to(&f, &limits()).unwrap();
        assert_eq!(back, chi);
        // Trivial character has conductor (1).
        let triv = ResidueCharacter::trivial(Arc::clone(&g));
        assert!(triv.conductor(&limits()).unwrap().is_whole());
    }

    #[test]
    fn conjugated_character_lives_mod_conjugate() {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let g = unit_group(&k, &f, &limits()).unwrap();
        let chi = ResidueCharacter::new(Arc::clone(&g), vec![1]).unwrap();
        let cc = chi.conjugated(&limits()).unwrap();
        assert_eq!(*cc.modulus(), f.conj_ideal());
        // chi^c(z) = chi(conj z) on a few explicit units.
        for z in [QuadInt::new(1, 0), QuadInt::new(0, 1), QuadInt::new(1, 1)] {
            if cc.group().is_unit(&cc.modulus().reduce(&z)) {
                let lhs = cc.eval(&z).unwrap();
                let rhs = chi.eval(&z.conj(&k)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // Double conjugation returns the original.
        assert_eq!(cc.conjugated(&limits()).unwrap(), chi);
    }

    #[test]
    fn whole_ring_group_is_trivial() {
        let k = qi();
        let f = QuadIdeal::whole_ring(&k);
        let g = unit_group(&k, &f, &limits()).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.gens().is_empty());
        let chi = ResidueCharacter::trivial(Arc::clone(&g));
        assert!(chi.eval(&QuadInt::from_int(7)).unwrap().is_one());
    }

    #[test]
    fn cap_respected() {
        let k = qi();
        let mut small = Limits::default();
        small.max_residue_ring = 4;
        let f = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        assert!(matches!(unit_group(&k, &f, &small), Err(Error::BoundExceeded(_))));
    }
}

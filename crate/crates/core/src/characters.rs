//! Algebraic Hecke characters of imaginary quadratic fields, class number
//! one case.
//!
//! A character chi of infinity type (a, b) and conductor f sends a principal
//! ideal (alpha) with alpha coprime to f to
//! chi((alpha)) = eps(alpha) * alpha^(-a) * conj(alpha)^(-b),
//! where eps is a character of (O/f)^x.  Well-definedness forces the unit
//! compatibility eps(u) u^(-a) conj(u)^(-b) = 1 for every unit u of O; the
//! constructor rejects data violating it, naming a violating unit.  Values
//! land in Q(zeta_L) for L = lcm(|disc|, order of eps), with field elements
//! embedded through the Gauss sum.  Characters are always stored primitively
//! (the finite part lives on its own conductor).

use crate::config::Limits;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ideals::QuadIdeal;
use crate::quadfield::{QuadField, QuadInt};
use crate::residues::{unit_group, ResidueCharacter, UnitGroup};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct HeckeChar {
    field: QuadField,
    eps: ResidueCharacter,
    a: i64,
    b: i64,
}

impl PartialEq for HeckeChar {
    fn eq(&self, other: &Self) -> bool {
        self.field.d() == other.field.d()
            && self.eps == other.eps
            && self.a == other.a
            && self.b == other.b
    }
}

impl Eq for HeckeChar {}

/// chi(u)-compatibility value prescribed on an integral unit u by the
/// infinity type: u^a * conj(u)^b, as a cyclotomic number.
fn unit_prescription(k: &QuadField, u: &QuadInt, a: i64, b: i64) -> Result<CycloNum> {
    let eu = k.embed(u);
    let ec = k.embed(&u.conj(k));
    eu.pow(a)?.mul(&ec.pow(b)?)
}

impl HeckeChar {
    /// Build a character from a finite part on (O/f)^x and an infinity type.
    /// The finite part is restricted to its conductor, so equal characters
    /// compare equal no matter which modulus they were built on.
    pub fn new(
        k: &QuadField,
        modulus: &QuadIdeal,
        exps: Vec<u64>,
        a: i64,
        b: i64,
        limits: &Limits,
    ) -> Result<HeckeChar> {
        let group = unit_group(k, modulus, limits)?;
        let eps = ResidueCharacter::new(group, exps)?;
        Self::from_residue(k, eps, a, b, limits)
    }

    pub fn from_residue(
        k: &QuadField,
        eps: ResidueCharacter,
        a: i64,
        b: i64,
        limits: &Limits,
    ) -> Result<HeckeChar> {
        for u in k.units() {
            let finite = eps.eval(&u)?;
            let infinite = unit_prescription(k, &u, a, b)?;
            if !finite.mul(&infinite.inv()?)?.is_one() {
                return Err(Error::UnitCompatibility(format!(
                    "eps({}) = {} but the type ({}, {}) requires {}",
                    u, finite, a, b, infinite
                )));
            }
        }
        let conductor = eps.conductor(limits)?;
        let eps = if conductor == *eps.modulus() {
            eps
        } else {
            eps.restrict_to(&conductor, limits)?
        };
        Ok(HeckeChar { field: *k, eps, a, b })
    }

    /// The norm character |.|^t of type (t, t): value N(q)^(-t), trivial
    /// finite part.
    pub fn norm_power(k: &QuadField, t: i64, limits: &Limits) -> Result<HeckeChar> {
        let group = unit_group(k, &QuadIdeal::whole_ring(k), limits)?;
        Self::from_residue(k, ResidueCharacter::trivial(group), t, t, limits)
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn conductor(&self) -> &QuadIdeal {
        self.eps.modulus()
    }

    pub fn finite_part(&self) -> &ResidueCharacter {
        &self.eps
    }

    /// Infinity type (a, b).
    pub fn infinity_type(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    /// All values lie in Q(zeta_L).
    pub fn value_order(&self) -> u64 {
        crate::arith::lcm_u64(self.field.cyclo_order(), self.eps.order())
            .expect("value order fits in u64")
    }

    /// chi(I); zero when I is not coprime to the conductor.
    pub fn eval(&self, ideal: &QuadIdeal) -> Result<CycloNum> {
        if ideal.field_d() != self.field.d() {
            return Err(Error::FieldMismatch(ideal.field_d(), self.field.d()));
        }
        if !ideal.is_coprime(self.eps.modulus()) {
            return Ok(CycloNum::zero());
        }
        let g = ideal.canonical_generator()?;
        let finite = self.eps.eval(&g)?;
        let infinite = unit_prescription(&self.field, &g, -self.a, -self.b)?;
        finite.mul(&infinite)
    }

    /// chi(I)^(-1), failing on non-coprime I.
    pub fn eval_inv(&self, ideal: &QuadIdeal) -> Result<CycloNum> {
        let v = self.eval(ideal)?;
        if v.is_zero() {
            return Err(Error::NotCoprime);
        }
        v.inv()
    }

    /// The conjugate character chi^c(I) = chi(conj I), of type (b, a).
    pub fn conjugate(&self, limits: &Limits) -> Result<HeckeChar> {
        let eps = self.eps.conjugated(limits)?;
        Self::from_residue(&self.field, eps, self.b, self.a, limits)
    }

    /// chi^(-1), of type (-a, -b) and the same conductor.
    pub fn inverse(&self, limits: &Limits) -> Result<HeckeChar> {
        Self::from_residue(&self.field, self.eps.inv(), -self.a, -self.b, limits)
    }

    /// Product of two characters; conductor divides the lcm of the factors'.
    pub fn mul(&self, other: &HeckeChar, limits: &Limits) -> Result<HeckeChar> {
        if self.field.d() != other.field.d() {
            return Err(Error::FieldMismatch(self.field.d(), other.field.d()));
        }
        let joint = self.eps.modulus().lcm(other.eps.modulus());
        let left = self.eps.extend_to(&joint, limits)?;
        let right = other.eps.extend_to(&joint, limits)?;
        Self::from_residue(
            &self.field,
            left.mul(&right)?,
            self.a + other.a,
            self.b + other.b,
            limits,
        )
    }

    /// Twist by the norm character: chi |.|^t.
    pub fn norm_twist(&self, t: i64) -> HeckeChar {
        HeckeChar {
            field: self.field,
            eps: self.eps.clone(),
            a: self.a + t,
            b: self.b + t,
        }
    }
}

impl std::fmt::Display for HeckeChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "char(d={}, f={}, type=({},{}), exps={:?})",
            self.field.d(),
            self.eps.modulus(),
            self.a,
            self.b,
            self.eps.exps()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct HeckeCharWire {
    field_d: i64,
    conductor: QuadIdeal,
    exps: Vec<u64>,
    type_a: i64,
    type_b: i64,
}

impl Serialize for HeckeChar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HeckeCharWire {
            field_d: self.field.d(),
            conductor: *self.eps.modulus(),
            exps: self.eps.exps().to_vec(),
            type_a: self.a,
            type_b: self.b,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeckeChar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = HeckeCharWire::deserialize(d)?;
        let limits = Limits::default();
        let k = QuadField::new(w.field_d).map_err(|e| D::Error::custom(e.to_string()))?;
        if w.conductor.field_d() != k.d() {
            return Err(D::Error::custom("conductor belongs to a different field"));
        }
        let chi = HeckeChar::new(&k, &w.conductor, w.exps, w.type_a, w.type_b, &limits)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        if chi.conductor() != &w.conductor {
            return Err(D::Error::custom("finite part is imprimitive at the stated conductor"));
        }
        Ok(chi)
    }
}

/// All finite parts on (O/f)^x compatible with the type (a, b), in a fixed
/// order (lexicographic exponent tuples on the group basis).
pub fn enumerate_compatible_residue_chars(
    k: &QuadField,
    f: &QuadIdeal,
    a: i64,
    b: i64,
    limits: &Limits,
) -> Result<Vec<ResidueCharacter>> {
    let group = unit_group(k, f, limits)?;
    let orders = group.orders().to_vec();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        let eps = ResidueCharacter::new(Arc::clone(&group), exps.clone())?;
        let mut ok = true;
        for u in k.units() {
            let finite = eps.eval(&u)?;
            let infinite = unit_prescription(k, &u, a, b)?;
            if !finite.mul(&infinite.inv()?)?.is_one() {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(eps);
        }
        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == orders.len() {
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Characters of conductor exactly f and infinity type (a, b).
pub fn enumerate_chars(
    k: &QuadField,
    f: &QuadIdeal,
    a: i64,
    b: i64,
    limits: &Limits,
) -> Result<Vec<HeckeChar>> {
    let mut out = Vec::new();
    for eps in enumerate_compatible_residue_chars(k, f, a, b, limits)? {
        if eps.conductor(limits)? == *f {
            out.push(HeckeChar::from_residue(k, eps, a, b, limits)?);
        }
    }
    Ok(out)
}

/// Independent count of compatible finite parts mod f: the type prescribes a
/// character on the image W of the unit group of O; if the prescription is
/// well defined there, extensions number [U(f) : W], otherwise none exist.
pub fn compatible_count_oracle(
    k: &QuadField,
    f: &QuadIdeal,
    a: i64,
    b: i64,
    limits: &Limits,
) -> Result<u64> {
    let group = unit_group(k, f, limits)?;
    let mut image: Vec<(QuadInt, CycloNum)> = Vec::new();
    for u in k.units() {
        let z = f.reduce(&u);
        let val = unit_prescription(k, &u, a, b)?;
        match image.iter().position(|(r, _)| *r == z) {
            Some(i) => {
                if image[i].1 != val {
                    return Ok(0);
                }
            }
            None => image.push((z, val)),
        }
    }
    Ok(group.order() / image.len() as u64)
}

/// Ray class group Cl_K(f) = U(f) / W for class number one fields, with
/// cosets labelled by their least residue.
pub struct RayClassGroup {
    group: Arc<UnitGroup>,
    cosets: Vec<Vec<QuadInt>>,
}

impl RayClassGroup {
    pub fn new(k: &QuadField, f: &QuadIdeal, limits: &Limits) -> Result<RayClassGroup> {
        if !k.class_number_one() {
            return Err(Error::ClassNumber(k.d()));
        }
        let group = unit_group(k, f, limits)?;
        let mut unit_image: Vec<QuadInt> = k.units().iter().map(|u| f.reduce(u)).collect();
        unit_image.sort();
        unit_image.dedup();
        let mut assigned: Vec<QuadInt> = Vec::new();
        let mut cosets = Vec::new();
        for z in group.units() {
            if assigned.binary_search(z).is_ok() {
                continue;
            }
            let mut coset: Vec<QuadInt> = unit_image
                .iter()
                .map(|w| f.reduce(&z.mul(w, k)))
                .collect();
            coset.sort();
            coset.dedup();
            assert_eq!(coset.len(), unit_image.len(), "unit image acts freely");
            assigned.extend(coset.iter().copied());
            assigned.sort();
            cosets.push(coset);
        }
        cosets.sort_by(|x, y| x[0].cmp(&y[0]));
        Ok(RayClassGroup { group, cosets })
    }

    pub fn modulus(&self) -> &QuadIdeal {
        self.group.modulus()
    }

    pub fn class_count(&self) -> usize {
        self.cosets.len()
    }

    /// Index of the class of an ideal coprime to the modulus.
    pub fn class_of(&self, ideal: &QuadIdeal) -> Result<usize> {
        let g = ideal.canonical_generator()?;
        let z = self.group.modulus().reduce(&g);
        self.cosets
            .iter()
            .position(|c| c.binary_search(&z).is_ok())
            .ok_or(Error::NotCoprime)
    }

    /// Least residue labelling each class.
    pub fn labels(&self) -> Vec<QuadInt> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    /// Smallest-norm prime ideal representing each class, scanning primes of
    /// norm up to the bound; None for classes not yet hit.
    pub fn prime_reps(&self, bound: i128) -> Vec<Option<QuadIdeal>> {
        let k = self.group.field();
        let mut reps: Vec<Option<QuadIdeal>> = vec![None; self.cosets.len()];
        for q in QuadIdeal::primes_of_norm_up_to(k, bound) {
            if !q.is_coprime(self.group.modulus()) {
                continue;
            }
            if let Ok(i) = self.class_of(&q) {
                if reps[i].is_none() {
                    reps[i] = Some(q);
                }
            }
        }
        reps
    }
}

/// The four relevant shapes of infinity type for a pair, by weight (k, l)
/// with k, l >= 0.  Degrees refer to the cohomological degree carrying the
/// interior Eisenstein class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityTypeClass {
    /// [(k+1, 0), (-1, l)]: degree 1.
    TypeA { k: i64, l: i64 },
    /// [(0, l+1), (k, -1)]: degree 1, the involution partner of TypeA.
    TypeADual { k: i64, l: i64 },
    /// [(k+1, l+1), (-1, -1)]: degree 2.  Weight (0, 0) is excluded from
    /// the theorems but still classified here.
    TypeB { k: i64, l: i64 },
    /// [(0, 0), (k, l)]: degree 0, the involution partner of TypeB.
    DegreeZero { k: i64, l: i64 },
    Other,
}

impl InfinityTypeClass {
    pub fn classify(t1: (i64, i64), t2: (i64, i64)) -> InfinityTypeClass {
        let (a1, b1) = t1;
        let (a2, b2) = t2;
        if a1 >= 1 && b1 == 0 && a2 == -1 && b2 >= 0 {
            InfinityTypeClass::TypeA { k: a1 - 1, l: b2 }
        } else if a1 == 0 && b1 >= 1 && a2 >= 0 && b2 == -1 {
            InfinityTypeClass::TypeADual { k: a2, l: b1 - 1 }
        } else if a1 >= 1 && b1 >= 1 && a2 == -1 && b2 == -1 {
            InfinityTypeClass::TypeB { k: a1 - 1, l: b1 - 1 }
        } else if a1 == 0 && b1 == 0 && a2 >= 0 && b2 >= 0 {
            InfinityTypeClass::DegreeZero { k: a2, l: b2 }
        } else {
            InfinityTypeClass::Other
        }
    }

    pub fn weight(&self) -> Option<(i64, i64)> {
        match *self {
            InfinityTypeClass::TypeA { k, l }
            | InfinityTypeClass::TypeADual { k, l }
            | InfinityTypeClass::TypeB { k, l }
            | InfinityTypeClass::DegreeZero { k, l } => Some((k, l)),
            InfinityTypeClass::Other => None,
        }
    }

    /// Cohomological degree of the interior Eisenstein class.
    pub fn degree(&self) -> Option<u32> {
        match self {
            InfinityTypeClass::DegreeZero { .. } => Some(0),
            InfinityTypeClass::TypeA { .. } | InfinityTypeClass::TypeADual { .. } => Some(1),
            InfinityTypeClass::TypeB { .. } => Some(2),
            InfinityTypeClass::Other => None,
        }
    }
}

/// An ordered pair of Hecke characters with coprime conductors; the level is
/// the product of the conductors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPair {
    phi1: HeckeChar,
    phi2: HeckeChar,
}

impl CharPair {
    pub fn new(phi1: HeckeChar, phi2: HeckeChar) -> Result<CharPair> {
        if phi1.field().d() != phi2.field().d() {
            return Err(Error::FieldMismatch(phi1.field().d(), phi2.field().d()));
        }
        if !phi1.conductor().is_coprime(phi2.conductor()) {
            return Err(Error::NotCoprime);
        }
        Ok(CharPair { phi1, phi2 })
    }

    pub fn phi1(&self) -> &HeckeChar {
        &self.phi1
    }

    pub fn phi2(&self) -> &HeckeChar {
        &self.phi2
    }

    pub fn field(&self) -> &QuadField {
        self.phi1.field()
    }

    pub fn level(&self) -> QuadIdeal {
        self.phi1.conductor().mul(self.phi2.conductor())
    }

    pub fn infinity_class(&self) -> InfinityTypeClass {
        InfinityTypeClass::classify(self.phi1.infinity_type(), self.phi2.infinity_type())
    }

    pub fn value_order(&self) -> u64 {
        crate::arith::lcm_u64(self.phi1.value_order(), self.phi2.value_order())
            .expect("value order fits in u64")
    }
}

impl<'de> Deserialize<'de> for CharPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Wire {
            phi1: HeckeChar,
            phi2: HeckeChar,
        }
        let w = Wire::deserialize(d)?;
        CharPair::new(w.phi1, w.phi2).map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl std::fmt::Display for CharPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.phi1, self.phi2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    /// The character of conductor (2+i) and type (-1, 0) used throughout:
    /// phi((alpha)) = eps(alpha) * alpha.
    fn bc_char() -> HeckeChar {
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let group = unit_group(&k, &f, &limits()).unwrap();
        // eps(gen) must make eps(i) = -i; find the right exponent.
        for e in 0..group.orders()[0] {
            if let Ok(chi) = HeckeChar::new(&k, &f, vec![e], -1, 0, &limits()) {
                return chi;
            }
        }
        panic!("compatible character exists");
    }

    #[test]
    fn frozen_values_of_the_conductor_five_character() {
        let k = qi();
        let phi = bc_char();
        assert_eq!(*phi.conductor(), QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap());
        // eps(i) = -i = zeta_4^3.
        let eps_i = phi.finite_part().eval(&QuadInt::new(0, 1)).unwrap();
        assert_eq!(eps_i, CycloNum::root_of_unity(4, 3).unwrap());
        let zeta4 = CycloNum::root_of_unity(4, 1).unwrap();
        // phi((3+2i)) = -3 - 2 zeta_4.
        let p1 = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap();
        let expect1 = CycloNum::from_int(-3).add(&zeta4.scale(&crate::cyclo::rat_int(-2))).unwrap();
        assert_eq!(phi.eval(&p1).unwrap(), expect1);
        // phi((3-2i)) = 2 + 3 zeta_4, via the canonical generator 2+3i.
        let p2 = QuadIdeal::principal(&k, &QuadInt::new(3, -2)).unwrap();
        let expect2 = CycloNum::from_int(2).add(&zeta4.scale(&crate::cyclo::rat_int(3))).unwrap();
        assert_eq!(phi.eval(&p2).unwrap(), expect2);
        // phi((1+i)) = -1 - zeta_4.
        let pr = QuadIdeal::principal(&k, &QuadInt::new(1, 1)).unwrap();
        let expect3 = CycloNum::from_int(-1).sub(&zeta4).unwrap();
        assert_eq!(phi.eval(&pr).unwrap(), expect3);
        // phi vanishes on the conductor.
        assert!(phi.eval(phi.conductor()).unwrap().is_zero());
        assert_eq!(phi.value_order(), 4);
    }

    #[test]
    fn unit_compatibility_can_fail() {
        let k = qi();
        let whole = QuadIdeal::whole_ring(&k);
        // Type (1, 0) with trivial finite part: eps(i) i^(-1) != 1.
        let r = HeckeChar::new(&k, &whole, vec![], 1, 0, &limits());
        assert!(matches!(r, Err(Error::UnitCompatibility(_))));
        // The norm character works at every t.
        for t in [-2i64, -1, 0, 1, 3] {
            let n = HeckeChar::norm_power(&k, t, &limits()).unwrap();
            let q = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
            let v = n.eval(&q).unwrap();
            assert_eq!(v, CycloNum::from_rat(crate::cyclo::rat_int(5).pow(-t as i32)));
        }
    }

    #[test]
    fn enumeration_matches_count_oracle() {
        let k = qi();
        let f3 = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let f5 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        for (f, a, b) in [
            (f3, 0i64, 0i64),
            (f3, -1, 0),
            (f3, 2, 0),
            (f5, 0, 0),
            (f5, -1, 0),
            (f5, 1, 0),
            (f3.mul(&f5), 0, 0),
        ] {
            let listed = enumerate_compatible_residue_chars(&k, &f, a, b, &limits()).unwrap();
            let counted = compatible_count_oracle(&k, &f, a, b, &limits()).unwrap();
            assert_eq!(listed.len() as u64, counted, "f={} type=({},{})", f, a, b);
        }
        // Frozen counts: mod (3) there are two finite-order finite parts
        // (the unit image has index two), mod (2+i) exactly one.
        assert_eq!(compatible_count_oracle(&k, &f3, 0, 0, &limits()).unwrap(), 2);
        assert_eq!(compatible_count_oracle(&k, &f5, 0, 0, &limits()).unwrap(), 1);
    }

    #[test]
    fn primitive_enumeration_mod_three() {
        let k = qi();
        let f3 = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let prim = enumerate_chars(&k, &f3, 0, 0, &limits()).unwrap();
        // Of the two compatible finite parts, only the quadratic one is
        // primitive; the trivial one has conductor (1).
        assert_eq!(prim.len(), 1);
        assert_eq!(prim[0].finite_part().order(), 2);
        let sq = prim[0].mul(&prim[0], &limits()).unwrap();
        assert!(sq.conductor().is_whole());
    }

    #[test]
    fn character_algebra_round_trips() {
        let k = qi();
        let phi = bc_char();
        let inv = phi.inverse(&limits()).unwrap();
        let prod = phi.mul(&inv, &limits()).unwrap();
        assert!(prod.conductor().is_whole());
        assert_eq!(prod.infinity_type(), (0, 0));
        let q = QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap();
        assert!(prod.eval(&q).unwrap().is_one());
        // Conjugate twice is the identity.
        let cc = phi.conjugate(&limits()).unwrap().conjugate(&limits()).unwrap();
        assert_eq!(cc, phi);
        // Conjugate evaluates at the conjugate ideal.
        let c = phi.conjugate(&limits()).unwrap();
        assert_eq!(c.eval(&q).unwrap(), phi.eval(&q.conj_ideal()).unwrap());
        // Norm twist shifts the type and multiplies values by N^(-t).
        let tw = phi.norm_twist(2);
        assert_eq!(tw.infinity_type(), (1, 2));
        let scaled = phi.eval(&q).unwrap().scale(&crate::cyclo::rat_from_string("1/169").unwrap());
        assert_eq!(tw.eval(&q).unwrap(), scaled);
    }

    #[test]
    fn serde_accepts_primitive_and_rejects_imprimitive() {
        let phi = bc_char();
        let s = serde_json::to_string(&phi).unwrap();
        let back: HeckeChar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, phi);
        // A wire form claiming conductor (3)(2+i) for this character must
        // be rejected: its finite part restricts to conductor (2+i).
        let k = qi();
        let f = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap().mul(phi.conductor());
        let ext = phi.finite_part().extend_to(&f, &limits()).unwrap();
        let wire = serde_json::json!({
            "field_d": -1,
            "conductor": serde_json::to_value(f).unwrap(),
            "exps": ext.exps(),
            "type_a": -1,
            "type_b": 0,
        });
        assert!(serde_json::from_value::<HeckeChar>(wire).is_err());
    }

    #[test]
    fn ray_class_counts() {
        let k = qi();
        let f3 = QuadIdeal::principal(&k, &QuadInt::from_int(3)).unwrap();
        let rc3 = RayClassGroup::new(&k, &f3, &limits()).unwrap();
        assert_eq!(rc3.class_count(), 2);
        let f5 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let rc5 = RayClassGroup::new(&k, &f5, &limits()).unwrap();
        assert_eq!(rc5.class_count(), 1);
        // Prime representatives hit every class for a modest bound.
        let reps = rc3.prime_reps(50);
        assert!(reps.iter().all(|r| r.is_some()));
        // Classes are constant on principal ideals with congruent generators.
        let c13 = rc3.class_of(&QuadIdeal::principal(&k, &QuadInt::new(3, 2)).unwrap()).unwrap();
        assert!(c13 < 2);
    }

    #[test]
    fn infinity_type_classification() {
        use InfinityTypeClass::*;
        // The pair (|.|^2, |.|^(-1)) is TypeB of weight (1, 1).
        assert_eq!(classify_pair((2, 2), (-1, -1)), TypeB { k: 1, l: 1 });
        assert_eq!(classify_pair((2, 0), (-1, 1)), TypeA { k: 1, l: 1 });
        assert_eq!(classify_pair((0, 2), (1, -1)), TypeADual { k: 1, l: 1 });
        assert_eq!(classify_pair((0, 0), (1, 2)), DegreeZero { k: 1, l: 2 });
        assert_eq!(classify_pair((1, 0), (-1, 0)), TypeA { k: 0, l: 0 });
        assert_eq!(classify_pair((2, 1), (0, -1)), Other);
        assert_eq!(TypeA { k: 1, l: 1 }.degree(), Some(1));
        assert_eq!(TypeB { k: 1, l: 1 }.degree(), Some(2));

        fn classify_pair(t1: (i64, i64), t2: (i64, i64)) -> InfinityTypeClass {
            InfinityTypeClass::classify(t1, t2)
        }
    }

    #[test]
    fn char_pair_requires_coprime_conductors() {
        let k = qi();
        let phi = bc_char();
        let pair = CharPair::new(phi.clone(), HeckeChar::norm_power(&k, -1, &limits()).unwrap());
        assert!(pair.is_ok());
        let clash = CharPair::new(phi.clone(), phi.clone());
        assert!(matches!(clash, Err(Error::NotCoprime)));
        let p = pair.unwrap();
        assert_eq!(p.level().norm(), 5);
        assert_eq!(p.infinity_class(), InfinityTypeClass::Other);
    }
}

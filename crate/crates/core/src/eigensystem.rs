//! Eisenstein Hecke eigensystems attached to character pairs, the twist
//! involution, and cohomology dimension counts.
//!
//! For a pair (phi1, phi2) with coprime conductors n1, n2 and level
//! n = n1 n2, the eigenvalues at a prime q are
//! a_q = phi1(q)^(-1) + N(q) phi2(q)^(-1) and
//! d_q = phi1(q)^(-1) phi2(q)^(-1) for q coprime to n, while at q | n the
//! U_q eigenvalue is N(q) phi2(q)^(-1) when q | n1 and phi1(q)^(-1) when
//! q | n2.  The Hecke polynomial x^2 - a_q x + d_q N(q) has the two roots
//! alpha_q = N(q) phi2(q)^(-1) and beta_q = phi1(q)^(-1).
//!
//! The involution sends (phi1, phi2) to (phi2 |.|, phi1 |.|^(-1)); it swaps
//! the conductors, preserves every Hecke and U eigenvalue, and exchanges the
//! degree-1 type shapes as well as the degree-0 and degree-2 shapes.
//!
//! Dimension counts come in two flavours: closed-form tables predicted for
//! each type shape, and brute-force counts that enumerate every candidate
//! pair at the level, match eigensystems, and weight each match by local
//! invariant dimensions.  The local dimension formula itself is checked by
//! an independent orbit count on P^1(O/q^n).

use crate::characters::{enumerate_chars, CharPair, InfinityTypeClass};
use crate::config::Limits;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ideals::QuadIdeal;
use crate::quadfield::{QuadField, QuadInt};
use crate::residues::{mul_mod, pow_mod, unit_group, ResidueCharacter};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Eigenvalue data at one prime.
#[derive(Clone, Debug, PartialEq)]
pub enum HeckeEigenvalue {
    /// q coprime to the level: T_q and determinant eigenvalues.
    Spherical { a: CycloNum, d: CycloNum },
    /// q dividing the level: U_q eigenvalue; `divides_phi1` records which
    /// conductor q divides.
    UOnly { u: CycloNum, divides_phi1: bool },
}

/// (a_q, d_q) for q coprime to the level.
pub fn spherical_eigenvalues(pair: &CharPair, q: &QuadIdeal) -> Result<(CycloNum, CycloNum)> {
    let level = pair.level();
    if !q.is_coprime(&level) {
        return Err(Error::NotCoprime);
    }
    let i1 = pair.phi1().eval_inv(q)?;
    let i2 = pair.phi2().eval_inv(q)?;
    let nq = CycloNum::from_int(q.norm() as i64);
    let a = i1.add(&nq.mul(&i2)?)?;
    let d = i1.mul(&i2)?;
    Ok((a, d))
}

pub fn eis_eigensystem(pair: &CharPair, q: &QuadIdeal) -> Result<HeckeEigenvalue> {
    if !q.is_prime_ideal() {
        return Err(Error::NotPrime(q.norm()));
    }
    let div1 = !q.is_coprime(pair.phi1().conductor());
    let div2 = !q.is_coprime(pair.phi2().conductor());
    if !div1 && !div2 {
        let (a, d) = spherical_eigenvalues(pair, q)?;
        return Ok(HeckeEigenvalue::Spherical { a, d });
    }
    debug_assert!(!(div1 && div2), "conductors are coprime");
    let u = if div1 {
        let nq = CycloNum::from_int(q.norm() as i64);
        nq.mul(&pair.phi2().eval_inv(q)?)?
    } else {
        pair.phi1().eval_inv(q)?
    };
    Ok(HeckeEigenvalue::UOnly { u, divides_phi1: div1 })
}

/// The two roots (alpha_q, beta_q) of the Hecke polynomial at a spherical
/// prime, with the Vieta identities checked against (a_q, d_q).
pub fn hecke_roots(pair: &CharPair, q: &QuadIdeal) -> Result<(CycloNum, CycloNum)> {
    let (a, d) = spherical_eigenvalues(pair, q)?;
    let nq = CycloNum::from_int(q.norm() as i64);
    let alpha = nq.mul(&pair.phi2().eval_inv(q)?)?;
    let beta = pair.phi1().eval_inv(q)?;
    if alpha.add(&beta)? != a || alpha.mul(&beta)? != d.mul(&nq)? {
        return Err(Error::CheckFailed("Vieta identities fail at a spherical prime".into()));
    }
    Ok((alpha, beta))
}

/// The twist involution (phi1, phi2) -> (phi2 |.|, phi1 |.|^(-1)).
pub fn involution(pair: &CharPair) -> Result<CharPair> {
    CharPair::new(pair.phi2().norm_twist(1), pair.phi1().norm_twist(-1))
}

/// Dimension of the K_1(q^n)-invariants in the principal series with local
/// characters of conductor exponents c1 and c2.
pub fn local_invariant_dim(c1: u32, c2: u32, nq: u32) -> u64 {
    (nq as i64 - c1 as i64 - c2 as i64 + 1).max(0) as u64
}

/// 2x2 matrices over O/m, used by the orbit oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Mat2 {
    e: [[QuadInt; 2]; 2],
}

impl Mat2 {
    fn mul(&self, o: &Mat2, k: &QuadField, m: &QuadIdeal) -> Mat2 {
        let mut e = [[QuadInt::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let s = self.e[i][0]
                    .mul(&o.e[0][j], k)
                    .add(&self.e[i][1].mul(&o.e[1][j], k));
                e[i][j] = m.reduce(&s);
            }
        }
        Mat2 { e }
    }

    fn det(&self, k: &QuadField, m: &QuadIdeal) -> QuadInt {
        m.reduce(&self.e[0][0].mul(&self.e[1][1], k).sub(&self.e[0][1].mul(&self.e[1][0], k)))
    }

    /// Inverse assuming the determinant is a unit of O/m with unit group
    /// order `phi`.
    fn inv(&self, k: &QuadField, m: &QuadIdeal, phi: u64) -> Mat2 {
        let det = self.det(k, m);
        let det_inv = pow_mod(k, m, &det, phi - 1);
        let adj = Mat2 {
            e: [
                [self.e[1][1], self.e[0][1].neg()],
                [self.e[1][0].neg(), self.e[0][0]],
            ],
        };
        let mut e = adj.e;
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = mul_mod(k, m, x, &det_inv);
            }
        }
        Mat2 { e }
    }
}

/// Character-independent part of the local oracle at level q^n: one entry per
/// mirabolic orbit on P^1(O/q^n), holding the distinct diagonal holonomies of
/// the orbit stabilizer.  The scan over the whole mirabolic group is done once
/// here; evaluating a character pair against the stored diagonals is cheap, so
/// exhaustive sweeps over many pairs at a fixed level stay affordable.
pub struct LocalOrbitData {
    modulus: QuadIdeal,
    orbits: Vec<Vec<(QuadInt, QuadInt)>>,
}

impl LocalOrbitData {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// Count of orbits whose stabilizer holonomy is killed by chi1 (x) chi2.
    /// Both characters must be given modulo q^n.
    pub fn invariant_dim(&self, chi1: &ResidueCharacter, chi2: &ResidueCharacter) -> Result<u64> {
        if chi1.modulus() != &self.modulus || chi2.modulus() != &self.modulus {
            return Err(Error::CheckFailed("oracle characters must live mod q^n".into()));
        }
        let mut dim = 0u64;
        for orbit in &self.orbits {
            let mut good = true;
            for (b1, b2) in orbit {
                let (l1, e1) = chi1.eval_exponent(b1)?;
                let (l2, e2) = chi2.eval_exponent(b2)?;
                debug_assert_eq!(l1, l2);
                if (e1 + e2) % l1 != 0 {
                    good = false;
                    break;
                }
            }
            if good {
                dim += 1;
            }
        }
        Ok(dim)
    }
}

/// Independent count of the local invariant dimension: orbits of the mirabolic
/// subgroup {(a b; 0 1)} on P^1(O/q^n) whose stabilizer holonomy is killed by
/// chi1 (x) chi2.  Both characters must be given modulo q^n.
pub fn local_invariant_dim_oracle(
    k: &QuadField,
    q: &QuadIdeal,
    n: u32,
    chi1: &ResidueCharacter,
    chi2: &ResidueCharacter,
    limits: &Limits,
) -> Result<u64> {
    local_orbit_data(k, q, n, limits)?.invariant_dim(chi1, chi2)
}

/// Enumerate the mirabolic orbits on P^1(O/q^n) and record each stabilizer's
/// diagonal holonomies, by brute force over the whole group.
pub fn local_orbit_data(
    k: &QuadField,
    q: &QuadIdeal,
    n: u32,
    limits: &Limits,
) -> Result<LocalOrbitData> {
    if n == 0 {
        return Err(Error::BadIdeal(1, 0, 1));
    }
    let m = q.pow(n);
    let group = unit_group(k, &m, limits)?;
    let phi = group.order();
    let inv = |z: &QuadInt| pow_mod(k, &m, z, phi - 1);
    let canon = |u: &QuadInt, v: &QuadInt| -> (QuadInt, QuadInt) {
        let (u, v) = (m.reduce(u), m.reduce(v));
        if !q.contains(&u) {
            (m.reduce(&QuadInt::one()), mul_mod(k, &m, &inv(&u), &v))
        } else {
            assert!(!q.contains(&v), "projective row is unimodular");
            (mul_mod(k, &m, &inv(&v), &u), m.reduce(&QuadInt::one()))
        }
    };
    // All points of P^1(O/q^n).
    let mut points: Vec<(QuadInt, QuadInt)> = Vec::new();
    for d in m.residues() {
        points.push((m.reduce(&QuadInt::one()), d));
    }
    for c in m.residues() {
        if q.contains(&c) {
            points.push((c, m.reduce(&QuadInt::one())));
        }
    }
    // Generators of the mirabolic group: the torus part from the unit group
    // basis, plus the two translations spanning O additively.
    let mut gens: Vec<(QuadInt, QuadInt)> = Vec::new();
    for g in group.gens() {
        gens.push((*g, QuadInt::zero()));
    }
    gens.push((QuadInt::one(), QuadInt::one()));
    gens.push((QuadInt::one(), QuadInt::new(0, 1)));

    let mut seen: HashSet<(QuadInt, QuadInt)> = HashSet::new();
    let mut orbits: Vec<Vec<(QuadInt, QuadInt)>> = Vec::new();
    for root in &points {
        if seen.contains(root) {
            continue;
        }
        // BFS the orbit.
        let mut queue = vec![*root];
        seen.insert(*root);
        while let Some((c, d)) = queue.pop() {
            for (a, b) in &gens {
                let img = canon(&mul_mod(k, &m, &c, a), &c.mul(b, k).add(&d));
                if seen.insert(img) {
                    queue.push(img);
                }
            }
        }
        // Lift the root to an invertible matrix with this bottom row.
        let (c, d) = *root;
        let g0 = if !q.contains(&c) {
            Mat2 { e: [[QuadInt::zero(), QuadInt::one()], [c, d]] }
        } else {
            Mat2 { e: [[QuadInt::one(), QuadInt::zero()], [c, d]] }
        };
        let g0_inv = g0.inv(k, &m, phi);
        // Scan the whole mirabolic group for stabilizer elements and record
        // the distinct diagonals of the conjugated upper triangular matrices.
        let mut diags: HashSet<(QuadInt, QuadInt)> = HashSet::new();
        for a in group.units() {
            for b in m.residues() {
                let kmat = Mat2 { e: [[*a, b], [QuadInt::zero(), QuadInt::one()]] };
                let conj = g0.mul(&kmat, k, &m).mul(&g0_inv, k, &m);
                if conj.e[1][0].is_zero() {
                    diags.insert((conj.e[0][0], conj.e[1][1]));
                }
            }
        }
        orbits.push(diags.into_iter().collect());
    }
    Ok(LocalOrbitData { modulus: m, orbits })
}

/// Predicted dimensions for one type shape, by cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub boundary: [u64; 3],
    pub eisenstein: [u64; 3],
    pub full: [u64; 4],
    pub compact: [u64; 4],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimReport {
    pub class: InfinityTypeClass,
    pub weight: (i64, i64),
    pub table: DimTable,
    /// Hypotheses the interior rows rely on; the boundary row is
    /// unconditional.
    pub assumptions: Vec<String>,
    pub euler_characteristic_ok: bool,
}

fn euler_ok(t: &DimTable) -> bool {
    let sgn = |i: usize| if i % 2 == 0 { 1i64 } else { -1 };
    let chi_c: i64 = t.compact.iter().enumerate().map(|(i, &v)| sgn(i) * v as i64).sum();
    let chi: i64 = t.full.iter().enumerate().map(|(i, &v)| sgn(i) * v as i64).sum();
    let chi_b: i64 = t.boundary.iter().enumerate().map(|(i, &v)| sgn(i) * v as i64).sum();
    chi_c - chi + chi_b == 0
}

/// Closed-form dimension tables for the eigensystem of the pair at its own
/// level K_1(n1 n2), with one fixed stabilization at any auxiliary prime.
pub fn predict_dims(pair: &CharPair) -> Result<DimReport> {
    let class = pair.infinity_class();
    let weight = class.weight().ok_or(Error::UnsupportedTypeClass)?;
    if matches!(class, InfinityTypeClass::TypeB { k: 0, l: 0 })
        || matches!(class, InfinityTypeClass::DegreeZero { k: 0, l: 0 })
    {
        return Err(Error::ZeroWeightExcluded);
    }
    let table = match class {
        InfinityTypeClass::TypeA { .. } | InfinityTypeClass::TypeADual { .. } => DimTable {
            boundary: [0, 2, 0],
            eisenstein: [0, 1, 0],
            full: [0, 1, 0, 0],
            compact: [0, 0, 1, 0],
        },
        InfinityTypeClass::TypeB { .. } | InfinityTypeClass::DegreeZero { .. } => DimTable {
            boundary: [1, 0, 1],
            eisenstein: [0, 0, 1],
            full: [0, 0, 1, 0],
            compact: [0, 1, 0, 0],
        },
        InfinityTypeClass::Other => unreachable!("weight() returned None above"),
    };
    let ok = euler_ok(&table);
    Ok(DimReport {
        class,
        weight,
        table,
        assumptions: vec![
            "interior eigenspaces carry no cuspidal classes at this level".into(),
            "coefficient weight is regular enough for boundary surjectivity".into(),
        ],
        euler_characteristic_ok: ok,
    })
}

/// One matching pair found by the brute-force search, with its local
/// boundary multiplicity at the level.
#[derive(Clone, Debug, Serialize)]
pub struct MatchedPair {
    pub pair: CharPair,
    pub class: InfinityTypeClass,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtraLevelDims {
    pub rational_prime: u64,
    pub unstabilized: [u64; 3],
    pub stabilized: [u64; 3],
    /// Whether every matched pair has distinct Hecke roots at the primes
    /// above p; if not, the stabilized counts are not meaningful.
    pub roots_distinct: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceBoundary {
    pub matches: Vec<MatchedPair>,
    pub boundary: [u64; 3],
    pub extra: Option<ExtraLevelDims>,
    /// Norm bound on the spherical primes used for eigensystem comparison.
    pub eigen_bound: i128,
}

/// Ordered coprime divisor pairs (m1, m2) with m1 m2 dividing n.
fn coprime_divisor_pairs(n: &QuadIdeal, limits: &Limits) -> Result<Vec<(QuadIdeal, QuadIdeal)>> {
    let k = n.field();
    let factors = n.factor(limits.max_factor_norm as i128)?;
    let mut pairs = vec![(QuadIdeal::whole_ring(&k), QuadIdeal::whole_ring(&k))];
    for (q, e) in &factors {
        let mut next = Vec::new();
        for (m1, m2) in &pairs {
            // Exponent i goes to m1 or m2, never both.
            next.push((*m1, *m2));
            for i in 1..=*e {
                next.push((m1.mul(&q.pow(i)), *m2));
                next.push((*m1, m2.mul(&q.pow(i))));
            }
        }
        pairs = next;
    }
    pairs.sort_by_key(|(m1, m2)| (m1.norm(), m2.norm(), m1.hnf(), m2.hnf()));
    Ok(pairs)
}

/// The four candidate type shapes at weight (k, l).
fn shapes_at_weight(k: i64, l: i64) -> [((i64, i64), (i64, i64)); 4] {
    [
        ((k + 1, 0), (-1, l)),
        ((0, l + 1), (k, -1)),
        ((k + 1, l + 1), (-1, -1)),
        ((0, 0), (k, l)),
    ]
}

/// Brute-force boundary dimensions: enumerate all pairs of primitive
/// characters with coprime conductors whose product divides the level and
/// whose type shape sits at the same weight, keep those with the same
/// spherical eigensystem up to `eigen_bound`, and add up local invariant
/// dimensions.  The matched list doubles as the strong multiplicity one
/// verification: it should contain exactly the pair and its involution.
pub fn bruteforce_boundary_dims(
    pair: &CharPair,
    eigen_bound: i128,
    extra_prime: Option<u64>,
    limits: &Limits,
) -> Result<BruteForceBoundary> {
    let k = *pair.field();
    let class = pair.infinity_class();
    let (wk, wl) = class.weight().ok_or(Error::UnsupportedTypeClass)?;
    let level = pair.level();
    let level_factors = level.factor(limits.max_factor_norm as i128)?;
    // Reference eigensystem on spherical primes coprime to the level and to
    // any extra prime.
    let mut test_primes: Vec<QuadIdeal> = QuadIdeal::primes_of_norm_up_to(&k, eigen_bound)
        .into_iter()
        .filter(|q| q.is_coprime(&level))
        .collect();
    if let Some(p) = extra_prime {
        let pid = QuadIdeal::principal(&k, &QuadInt::from_int(p as i128))?;
        test_primes.retain(|q| q.is_coprime(&pid));
    }
    if test_primes.is_empty() {
        return Err(Error::BadSampleSet("no spherical primes under the bound".into()));
    }
    let reference: Vec<(CycloNum, CycloNum)> = test_primes
        .iter()
        .map(|q| spherical_eigenvalues(pair, q))
        .collect::<Result<_>>()?;

    let mut matches: Vec<MatchedPair> = Vec::new();
    for (m1, m2) in coprime_divisor_pairs(&level, limits)? {
        for (t1, t2) in shapes_at_weight(wk, wl) {
            let cands1 = enumerate_chars(&k, &m1, t1.0, t1.1, limits)?;
            let cands2 = enumerate_chars(&k, &m2, t2.0, t2.1, limits)?;
            for c1 in &cands1 {
                for c2 in &cands2 {
                    let cand = CharPair::new(c1.clone(), c2.clone())?;
                    let mut same = true;
                    for (q, (a, d)) in test_primes.iter().zip(&reference) {
                        let (ca, cd) = spherical_eigenvalues(&cand, q)?;
                        if ca != *a || cd != *d {
                            same = false;
                            break;
                        }
                    }
                    if !same {
                        continue;
                    }
                    let mut mult = 1u64;
                    for (q, e) in &level_factors {
                        let c1e = valuation_at(c1.conductor(), q);
                        let c2e = valuation_at(c2.conductor(), q);
                        mult *= local_invariant_dim(c1e, c2e, *e);
                    }
                    matches.push(MatchedPair {
                        pair: cand.clone(),
                        class: cand.infinity_class(),
                        multiplicity: mult,
                    });
                }
            }
        }
    }

    let mut boundary = [0u64; 3];
    for m in &matches {
        let deg = m.class.degree().ok_or(Error::UnsupportedTypeClass)? as usize;
        boundary[deg] += m.multiplicity;
    }

    let extra = match extra_prime {
        None => None,
        Some(p) => {
            let (ty, above) = QuadIdeal::split_prime(&k, p)?;
            if ty != crate::ideals::SplitType::Split {
                return Err(Error::PrimeNotSplit(p));
            }
            if !above[0].is_coprime(&level) {
                return Err(Error::NotCoprime);
            }
            let mut unstab = [0u64; 3];
            let mut stab = [0u64; 3];
            let mut distinct = true;
            for m in &matches {
                let deg = m.class.degree().unwrap() as usize;
                // Each split prime above p contributes a 2-dimensional
                // local space; a fixed stabilization picks one line.
                unstab[deg] += m.multiplicity * 4;
                stab[deg] += m.multiplicity;
                for q in &above {
                    let (alpha, beta) = hecke_roots(&m.pair, q)?;
                    if alpha == beta {
                        distinct = false;
                    }
                }
            }
            Some(ExtraLevelDims {
                rational_prime: p,
                unstabilized: unstab,
                stabilized: stab,
                roots_distinct: distinct,
            })
        }
    };

    Ok(BruteForceBoundary { matches, boundary, extra, eigen_bound })
}

fn valuation_at(ideal: &QuadIdeal, q: &QuadIdeal) -> u32 {
    let mut v = 0u32;
    let mut cur = *ideal;
    while q.contains_ideal(&cur) {
        cur = cur.divide_exact(q).expect("q divides cur");
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::HeckeChar;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    /// The TypeB(1,1) pair (|.|^2, |.|^(-1)).
    fn norm_pair() -> CharPair {
        let k = qi();
        let phi1 = HeckeChar::norm_power(&k, 2, &limits()).unwrap();
        let phi2 = HeckeChar::norm_power(&k, -1, &limits()).unwrap();
        CharPair::new(phi1, phi2).unwrap()
    }

    /// A TypeA(0,0) pair of level (5): phi1 of conductor (2+i) and type
    /// (1, 0), phi2 of conductor (2-i) and type (-1, 0).
    fn level_five_pair() -> CharPair {
        let k = qi();
        let f1 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let f2 = QuadIdeal::principal(&k, &QuadInt::new(2, -1)).unwrap();
        let phi1 = enumerate_chars(&k, &f1, 1, 0, &limits()).unwrap().remove(0);
        let phi2 = enumerate_chars(&k, &f2, -1, 0, &limits()).unwrap().remove(0);
        CharPair::new(phi1, phi2).unwrap()
    }

    #[test]
    fn frozen_eigenvalues_of_the_norm_pair() {
        let k = qi();
        let pair = norm_pair();
        assert_eq!(pair.infinity_class(), InfinityTypeClass::TypeB { k: 1, l: 1 });
        let q = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let (a, d) = spherical_eigenvalues(&pair, &q).unwrap();
        assert_eq!(a, CycloNum::from_int(26));
        assert_eq!(d, CycloNum::from_int(5));
        let (alpha, beta) = hecke_roots(&pair, &q).unwrap();
        assert_eq!(alpha, CycloNum::from_int(1));
        assert_eq!(beta, CycloNum::from_int(25));
    }

    #[test]
    fn involution_swaps_shapes_and_keeps_eigenvalues() {
        let k = qi();
        for pair in [norm_pair(), level_five_pair()] {
            let dual = involution(&pair).unwrap();
            // Conductors swap.
            assert_eq!(dual.phi1().conductor(), pair.phi2().conductor());
            assert_eq!(dual.phi2().conductor(), pair.phi1().conductor());
            // Shape moves within the degree pairing.
            match pair.infinity_class() {
                InfinityTypeClass::TypeA { k, l } => {
                    assert_eq!(dual.infinity_class(), InfinityTypeClass::TypeADual { k, l })
                }
                InfinityTypeClass::TypeB { k, l } => {
                    assert_eq!(dual.infinity_class(), InfinityTypeClass::DegreeZero { k, l })
                }
                _ => {}
            }
            // Twice is the identity.
            let back = involution(&dual).unwrap();
            assert_eq!(back.phi1(), pair.phi1());
            assert_eq!(back.phi2(), pair.phi2());
            // Eigensystems agree at spherical primes and at the level.
            for q in QuadIdeal::primes_of_norm_up_to(&k, 30) {
                if q.is_coprime(&pair.level()) {
                    let s1 = spherical_eigenvalues(&pair, &q).unwrap();
                    let s2 = spherical_eigenvalues(&dual, &q).unwrap();
                    assert_eq!(s1, s2);
                } else {
                    let u1 = match eis_eigensystem(&pair, &q).unwrap() {
                        HeckeEigenvalue::UOnly { u, .. } => u,
                        _ => unreachable!(),
                    };
                    let u2 = match eis_eigensystem(&dual, &q).unwrap() {
                        HeckeEigenvalue::UOnly { u, .. } => u,
                        _ => unreachable!(),
                    };
                    assert_eq!(u1, u2);
                }
            }
        }
    }

    #[test]
    fn u_eigenvalue_at_the_level() {
        let k = qi();
        let pair = level_five_pair();
        let q1 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        match eis_eigensystem(&pair, &q1).unwrap() {
            HeckeEigenvalue::UOnly { u, divides_phi1 } => {
                assert!(divides_phi1);
                // U_q = N(q) phi2(q)^(-1) is nonzero.
                assert!(!u.is_zero());
                let expected = CycloNum::from_int(5)
                    .mul(&pair.phi2().eval_inv(&q1).unwrap())
                    .unwrap();
                assert_eq!(u, expected);
            }
            _ => panic!("q divides the level"),
        }
    }

    #[test]
    fn local_dim_formula_against_orbit_oracle() {
        let k = qi();
        let q = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        for n in [1u32, 2] {
            let m = q.pow(n);
            let group = unit_group(&k, &m, &limits()).unwrap();
            // All characters mod q^n, keyed by conductor exponent.
            let orders = group.orders().to_vec();
            let mut all = Vec::new();
            let mut exps = vec![0u64; orders.len()];
            loop {
                let chi = ResidueCharacter::new(std::sync::Arc::clone(&group), exps.clone())
                    .unwrap();
                let c = valuation_at(&chi.conductor(&limits()).unwrap(), &q);
                all.push((chi, c));
                let mut i = 0;
                loop {
                    if i == orders.len() {
                        break;
                    }
                    exps[i] += 1;
                    if exps[i] < orders[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if exps.iter().all(|&e| e == 0) {
                    break;
                }
            }
            for (chi1, c1) in &all {
                for (chi2, c2) in &all {
                    let oracle =
                        local_invariant_dim_oracle(&k, &q, n, chi1, chi2, &limits()).unwrap();
                    assert_eq!(
                        oracle,
                        local_invariant_dim(*c1, *c2, n),
                        "n={} c1={} c2={}",
                        n,
                        c1,
                        c2
                    );
                }
            }
        }
    }

    #[test]
    fn predicted_tables() {
        let a = predict_dims(&level_five_pair()).unwrap();
        assert_eq!(a.table.boundary, [0, 2, 0]);
        assert_eq!(a.table.eisenstein, [0, 1, 0]);
        assert_eq!(a.table.full, [0, 1, 0, 0]);
        assert_eq!(a.table.compact, [0, 0, 1, 0]);
        assert!(a.euler_characteristic_ok);

        let b = predict_dims(&norm_pair()).unwrap();
        assert_eq!(b.table.boundary, [1, 0, 1]);
        assert_eq!(b.table.eisenstein, [0, 0, 1]);
        assert_eq!(b.table.full, [0, 0, 1, 0]);
        assert_eq!(b.table.compact, [0, 1, 0, 0]);
        assert!(b.euler_characteristic_ok);

        // Weight (0,0) TypeB is excluded.
        let k = qi();
        let one = HeckeChar::norm_power(&k, 1, &limits()).unwrap();
        let minus = HeckeChar::norm_power(&k, -1, &limits()).unwrap();
        let excluded = CharPair::new(one, minus).unwrap();
        assert!(matches!(predict_dims(&excluded), Err(Error::ZeroWeightExcluded)));
    }

    #[test]
    fn bruteforce_finds_exactly_the_pair_and_its_dual() {
        let pair = level_five_pair();
        let bf = bruteforce_boundary_dims(&pair, 40, None, &limits()).unwrap();
        assert_eq!(bf.matches.len(), 2);
        let dual = involution(&pair).unwrap();
        let found: Vec<&CharPair> = bf.matches.iter().map(|m| &m.pair).collect();
        assert!(found.contains(&&pair));
        assert!(found.contains(&&dual));
        assert!(bf.matches.iter().all(|m| m.multiplicity == 1));
        assert_eq!(bf.boundary, predict_dims(&pair).unwrap().table.boundary);
    }

    #[test]
    fn bruteforce_with_extra_prime() {
        let pair = level_five_pair();
        let bf = bruteforce_boundary_dims(&pair, 40, Some(13), &limits()).unwrap();
        let extra = bf.extra.unwrap();
        assert_eq!(extra.unstabilized, [0, 8, 0]);
        assert_eq!(extra.stabilized, [0, 2, 0]);
        assert!(extra.roots_distinct);
        // A non-split auxiliary prime is rejected.
        assert!(matches!(
            bruteforce_boundary_dims(&pair, 40, Some(7), &limits()),
            Err(Error::PrimeNotSplit(7))
        ));
    }
}

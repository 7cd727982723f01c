//! Base change from Q: theta series of characters with rational restriction.
//!
//! A character phi of infinity type (-k-1, 0) takes the value
//! phi((alpha)) = eps(alpha) alpha^(k+1) on principal ideals, so its theta
//! series theta_phi(q) = sum over ideals of phi(a) q^(N a) is a classical
//! eigenform of weight k+2 with nebentypus chi_K * phi_Z, where phi_Z is the
//! restriction of the finite part to rational residues and chi_K the
//! quadratic character of the field.  The base change of theta_phi back to K
//! matches the Eisenstein eigensystem of the pair
//! (phi^-1, (phi^c)^-1 |.|^-1) of type shape TypeA(k, k) at every unramified
//! prime; at ramified primes the pair eigenvalue is 2 phi(q) while the theta
//! side gives phi(q), and both values are reported.

use crate::arith::kronecker;
use crate::characters::{CharPair, HeckeChar};
use crate::config::Limits;
use crate::cyclo::{rat_int, CycloNum, Rat};
use crate::eigensystem::spherical_eigenvalues;
use crate::error::{Error, Result};
use crate::ideals::{QuadIdeal, SplitType};
use crate::numeric::embed_complex;
use crate::quadfield::QuadInt;
use num_bigint::BigInt;
use serde::Serialize;

fn int_pow_rat(base: i128, exp: u32) -> Rat {
    Rat::from_integer(BigInt::from(base).pow(exp))
}

/// A Hecke character of infinity type (-k-1, 0) with k >= 0, the shape whose
/// theta series descends to Q.
#[derive(Clone, Debug)]
pub struct BaseChangeChar {
    phi: HeckeChar,
    k: i64,
}

impl BaseChangeChar {
    pub fn new(phi: HeckeChar) -> Result<BaseChangeChar> {
        let (a, b) = phi.infinity_type();
        if b != 0 || a > -1 {
            return Err(Error::WeightHypothesis);
        }
        Ok(BaseChangeChar { k: -a - 1, phi })
    }

    pub fn phi(&self) -> &HeckeChar {
        &self.phi
    }

    /// The weight k; the theta series has classical weight k + 2.
    pub fn weight(&self) -> i64 {
        self.k
    }

    /// The least positive rational integer in the conductor.
    pub fn rational_conductor(&self) -> i128 {
        self.phi.conductor().hnf().0
    }

    /// Restriction of the finite part to rational residues; zero off the
    /// units.
    pub fn phi_z(&self, a: i128) -> Result<CycloNum> {
        match self.phi.finite_part().eval(&QuadInt::from_int(a)) {
            Ok(v) => Ok(v),
            Err(Error::NotUnit(_)) => Ok(CycloNum::from_int(0)),
            Err(e) => Err(e),
        }
    }

    /// Nebentypus of the theta series: chi_K(a) phi_Z(a).
    pub fn nebentypus(&self, a: i128) -> Result<CycloNum> {
        let chi = kronecker(self.phi.field().disc() as i128, a);
        Ok(self.phi_z(a)?.scale(&rat_int(chi as i64)))
    }

    /// phi((a)) = phi_Z(a) a^(k+1) for rational a; both sides vanish when a
    /// is not coprime to the conductor.
    pub fn well_definedness_check(&self, bound: i128) -> Result<bool> {
        let k = self.phi.field();
        for a in 1..=bound {
            let ideal = QuadIdeal::principal(k, &QuadInt::from_int(a))?;
            let lhs = self.phi.eval(&ideal)?;
            let rhs = self.phi_z(a)?.scale(&int_pow_rat(a, (self.k + 1) as u32));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Theta coefficient a_n = sum over ideals of norm n of phi(a).
    pub fn theta_coefficient(&self, n: i128) -> Result<CycloNum> {
        let k = self.phi.field();
        let mut acc = CycloNum::from_int(0);
        for ideal in QuadIdeal::ideals_of_norm(k, n)? {
            acc = acc.add(&self.phi.eval(&ideal)?)?;
        }
        Ok(acc)
    }

    /// The pair whose Eisenstein eigensystem matches the base change of the
    /// theta series: (phi^-1, (phi^c)^-1 |.|^-1), of type shape TypeA(k, k).
    pub fn bc_pair(&self, limits: &Limits) -> Result<CharPair> {
        let phi1 = self.phi.inverse(limits)?;
        let phi2 = self.phi.conjugate(limits)?.inverse(limits)?.norm_twist(-1);
        CharPair::new(phi1, phi2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub bound: i128,
    pub multiplicative_ok: bool,
    pub prime_power_recursion_ok: bool,
}

/// Check the classical Hecke eigenform recursions of the theta coefficients:
/// a_(mn) = a_m a_n for coprime m, n and
/// a_(l^(j+1)) = a_l a_(l^j) - eps_f(l) l^(k+1) a_(l^(j-1)).
pub fn theta_recursion_check(chi: &BaseChangeChar, bound: i128) -> Result<ThetaReport> {
    if bound < 2 {
        return Err(Error::BoundExceeded("theta bound must be at least 2".into()));
    }
    let mut coeffs = Vec::with_capacity(bound as usize + 1);
    coeffs.push(CycloNum::from_int(0));
    for n in 1..=bound {
        coeffs.push(chi.theta_coefficient(n)?);
    }
    if !coeffs[1].is_one() {
        return Err(Error::CheckFailed("theta is normalized with a_1 = 1".into()));
    }
    let mut multiplicative_ok = true;
    for m in 2..=bound {
        for n in m..=bound / m {
            if crate::arith::gcd_i128(m, n) != 1 {
                continue;
            }
            let prod = coeffs[m as usize].mul(&coeffs[n as usize])?;
            if prod != coeffs[(m * n) as usize] {
                multiplicative_ok = false;
            }
        }
    }
    let mut prime_power_recursion_ok = true;
    for l in crate::arith::rational_primes_up_to((bound as u64).min(1 << 32)) {
        let l = l as i128;
        let mut j = 2;
        while l.pow(j) <= bound {
            let scale = chi
                .nebentypus(l)?
                .scale(&int_pow_rat(l, (chi.weight() + 1) as u32));
            let expect = coeffs[l.pow(1) as usize]
                .mul(&coeffs[l.pow(j - 1) as usize])?
                .sub(&scale.mul(&coeffs[l.pow(j - 2) as usize])?)?;
            if expect != coeffs[l.pow(j) as usize] {
                prime_power_recursion_ok = false;
            }
            j += 1;
        }
    }
    Ok(ThetaReport { bound, multiplicative_ok, prime_power_recursion_ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct BcPrimeRow {
    pub prime: QuadIdeal,
    pub split_type: SplitType,
    /// Eigenvalue of the pair eigensystem.
    pub pair_a: CycloNum,
    /// phi(q) + phi(q conjugate), the closed formula for the pair.
    pub lemma_a: CycloNum,
    /// Base change of the classical coefficients: a_l at degree-one primes,
    /// a_l^2 - 2 eps_f(l) l^(k+1) at inert primes.
    pub theta_a: CycloNum,
    pub pair_matches_lemma: bool,
    pub pair_matches_theta: bool,
    /// At ramified primes the pair value is exactly twice the theta value.
    pub ramified_factor_two: bool,
    /// |a_q| <= 2 N(q)^((k+1)/2) within floating tolerance.
    pub eisenstein_bound_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BcVerifyReport {
    pub weight: i64,
    pub conductor: QuadIdeal,
    pub rational_conductor: i128,
    pub pair: CharPair,
    pub well_defined_ok: bool,
    pub theta: ThetaReport,
    pub rows: Vec<BcPrimeRow>,
    pub unramified_all_match: bool,
    pub ramified_all_factor_two: bool,
    pub eisenstein_bound_ok: bool,
}

/// Compare the pair eigensystem with the base change of the theta series at
/// all primes of norm up to the bound that are coprime to the pair level.
pub fn bc_verify(chi: &BaseChangeChar, prime_bound: i128, limits: &Limits) -> Result<BcVerifyReport> {
    let k = chi.phi().field();
    let pair = chi.bc_pair(limits)?;
    let level = pair.level();
    let theta = theta_recursion_check(chi, prime_bound.max(16))?;
    let well_defined_ok = chi.well_definedness_check(20)?;
    let mut rows = Vec::new();
    for q in QuadIdeal::primes_of_norm_up_to(k, prime_bound) {
        if !q.is_coprime(&level) {
            continue;
        }
        let (pair_a, _) = spherical_eigenvalues(&pair, &q)?;
        let v_q = chi.phi.eval(&q)?;
        let v_qbar = chi.phi.eval(&q.conj_ideal())?;
        let lemma_a = v_q.add(&v_qbar)?;
        let l = q.hnf().0;
        let split_type = q.prime_split_type().expect("prime ideal");
        let theta_a = match split_type {
            SplitType::Split | SplitType::Ramified => chi.theta_coefficient(l)?,
            SplitType::Inert => {
                let al = chi.theta_coefficient(l)?;
                let scale = chi
                    .nebentypus(l)?
                    .scale(&int_pow_rat(l, (chi.weight() + 1) as u32))
                    .scale(&rat_int(2));
                al.mul(&al)?.sub(&scale)?
            }
        };
        let pair_matches_lemma = pair_a == lemma_a;
        let pair_matches_theta = pair_a == theta_a;
        let ramified_factor_two =
            split_type == SplitType::Ramified && pair_a == theta_a.scale(&rat_int(2));
        let (re, im) = embed_complex(&pair_a, 10, limits)?;
        let modulus = (re * re + im * im).sqrt();
        let bound_val = 2.0 * (q.norm() as f64).powf((chi.weight() as f64 + 1.0) / 2.0);
        rows.push(BcPrimeRow {
            prime: q,
            split_type,
            pair_a,
            lemma_a,
            theta_a,
            pair_matches_lemma,
            pair_matches_theta,
            ramified_factor_two,
            eisenstein_bound_ok: modulus <= bound_val + 1e-8,
        });
    }
    if rows.is_empty() {
        return Err(Error::BadSampleSet("no primes under the bound".into()));
    }
    for row in &rows {
        if row.split_type != SplitType::Ramified && !row.pair_matches_theta {
            return Err(Error::BaseChangeMismatch(row.prime.norm()));
        }
    }
    let unramified_all_match = rows
        .iter()
        .filter(|r| r.split_type != SplitType::Ramified)
        .all(|r| r.pair_matches_theta && r.pair_matches_lemma);
    let ramified_all_factor_two = rows
        .iter()
        .filter(|r| r.split_type == SplitType::Ramified)
        .all(|r| r.ramified_factor_two && r.pair_matches_lemma);
    let eisenstein_bound_ok = rows.iter().all(|r| r.eisenstein_bound_ok);
    Ok(BcVerifyReport {
        weight: chi.weight(),
        conductor: *chi.phi().conductor(),
        rational_conductor: chi.rational_conductor(),
        pair,
        well_defined_ok,
        theta,
        rows,
        unramified_all_match,
        ramified_all_factor_two,
        eisenstein_bound_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BcStabilizeReport {
    /// Classical labels F^{x,y} aligned with the stabilizations: x, y pick
    /// the ordinary root alpha or the slope-(k+1) root beta of the classical
    ///  Hecke polynomial at p, for U_p and U_pbar respectively.
    pub classical_labels: Vec<String>,
    pub report: crate::padic::StabilizationReport,
}

/// Stabilizations of the base-change pair at a split p, with the classical
/// two-letter labels.  F^{alpha,alpha} is the unique ordinary one; the
/// slopes are (0,0), (0,k+1), (k+1,0), (k+1,k+1).
pub fn bc_stabilize(
    chi: &BaseChangeChar,
    p: u64,
    prec: u32,
    limits: &Limits,
) -> Result<BcStabilizeReport> {
    let pair = chi.bc_pair(limits)?;
    let report = crate::padic::stabilize(&pair, p, prec, limits)?;
    // The pair root alpha_p is the classical unit root, and at the conjugate
    // prime the unit root is beta_pbar.
    let classical_labels = report
        .stabilizations
        .iter()
        .map(|s| {
            let (x, y) = match s.label.as_str() {
                "alpha_p,alpha_pbar" => ("alpha", "beta"),
                "alpha_p,beta_pbar" => ("alpha", "alpha"),
                "beta_p,alpha_pbar" => ("beta", "beta"),
                "beta_p,beta_pbar" => ("beta", "alpha"),
                other => panic!("unexpected stabilization label {}", other),
            };
            format!("F^{{{},{}}}", x, y)
        })
        .collect();
    Ok(BcStabilizeReport { classical_labels, report })
}

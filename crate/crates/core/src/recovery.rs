//! Recovery of a character pair from a finite set of eigenvalue samples.
//!
//! A sample set is a list of spherical Hecke data (a_q, d_q) at prime ideals
//! q.  The recovery search enumerates all primitive pairs with coprime
//! conductors of bounded norm product and prescribed infinity types and keeps
//! those whose eigensystem reproduces every sample exactly.  Multiplicity one
//! predicts that the matches form a single orbit under the involution
//! (phi2 |.|, phi1 |.|^-1); the report records how each extra match relates
//! to the first one.
//!
//! The density report is the sampling-quality proxy: the sampled primes
//! should cover more than half of the ray classes of the modulus under
//! consideration, otherwise two distinct characters could agree on every
//! sampled class.

use crate::characters::{enumerate_chars, CharPair, RayClassGroup};
use crate::config::Limits;
use crate::cyclo::CycloNum;
use crate::eigensystem::{involution, spherical_eigenvalues};
use crate::error::{Error, Result};
use crate::ideals::QuadIdeal;
use crate::quadfield::QuadField;
use rayon::prelude::*;
use serde::Serialize;

pub const SAMPLE_HEADERS: [&str; 6] = ["prime_a", "prime_b", "prime_c", "norm", "a_q", "d_q"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub prime: QuadIdeal,
    pub a: CycloNum,
    pub d: CycloNum,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSet {
    field_d: i64,
    samples: Vec<Sample>,
}

impl SampleSet {
    pub fn new(k: &QuadField, mut samples: Vec<Sample>) -> Result<SampleSet> {
        for s in &samples {
            if s.prime.field_d() != k.d() {
                return Err(Error::FieldMismatch(s.prime.field_d(), k.d()));
            }
            if !s.prime.is_prime_ideal() {
                return Err(Error::BadSampleSet(format!("{} is not prime", s.prime)));
            }
        }
        samples.sort_by(|x, y| x.prime.cmp(&y.prime));
        for w in samples.windows(2) {
            if w[0].prime == w[1].prime {
                return Err(Error::BadSampleSet(format!("duplicate prime {}", w[0].prime)));
            }
        }
        Ok(SampleSet { field_d: k.d(), samples })
    }

    /// Generate samples from a pair at all spherical primes of norm up to
    /// the bound.
    pub fn from_pair(pair: &CharPair, norm_bound: i128) -> Result<SampleSet> {
        let k = pair.field();
        let level = pair.level();
        let mut out = Vec::new();
        for q in QuadIdeal::primes_of_norm_up_to(k, norm_bound) {
            if !q.is_coprime(&level) {
                continue;
            }
            let (a, d) = spherical_eigenvalues(pair, &q)?;
            out.push(Sample { prime: q, a, d });
        }
        SampleSet::new(k, out)
    }

    pub fn field_d(&self) -> i64 {
        self.field_d
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SAMPLE_HEADERS)
            .map_err(|e| Error::Parse(e.to_string()))?;
        for s in &self.samples {
            let (a, b, c) = s.prime.hnf();
            w.write_record([
                a.to_string(),
                b.to_string(),
                c.to_string(),
                s.prime.norm().to_string(),
                s.a.to_compact_string(),
                s.d.to_compact_string(),
            ])
            .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv_str(k: &QuadField, text: &str) -> Result<SampleSet> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != SAMPLE_HEADERS {
            return Err(Error::Parse(format!("bad sample headers {:?}", got)));
        }
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 6 {
                return Err(Error::Parse(format!("expected 6 fields, got {}", rec.len())));
            }
            let num = |i: usize| -> Result<i128> {
                rec[i]
                    .parse::<i128>()
                    .map_err(|e| Error::Parse(format!("field {}: {}", SAMPLE_HEADERS[i], e)))
            };
            let prime = QuadIdeal::from_hnf(k, num(0)?, num(1)?, num(2)?)?;
            if prime.norm() != num(3)? {
                return Err(Error::Parse(format!(
                    "norm column {} does not match ideal norm {}",
                    &rec[3],
                    prime.norm()
                )));
            }
            let a = CycloNum::from_compact_string(&rec[4])?;
            let d = CycloNum::from_compact_string(&rec[5])?;
            samples.push(Sample { prime, a, d });
        }
        SampleSet::new(k, samples)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchAgreement {
    /// Same phi1 and same phi2 (only the first match itself).
    Both,
    /// Same phi1, hence the same beta branch phi1^-1.
    Phi1,
    /// Same phi2, hence the same alpha branch N phi2^-1.
    Alpha,
    /// Neither character agrees, as for the involution partner.
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveredMatch {
    pub pair: CharPair,
    pub branch: BranchAgreement,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryReport {
    pub conductor_norm_bound: i128,
    pub sample_count: usize,
    pub type_pairs: Vec<((i64, i64), (i64, i64))>,
    pub degenerate_type_pairs_skipped: usize,
    pub candidates_tested: usize,
    pub matches: Vec<RecoveredMatch>,
    /// The matches are one pair, or a pair and its involution partner.
    pub involution_closed: bool,
}

fn conductor_pairs(k: &QuadField, bound: i128) -> Result<Vec<(QuadIdeal, QuadIdeal)>> {
    let mut by_norm: Vec<Vec<QuadIdeal>> = Vec::with_capacity(bound as usize + 1);
    for n in 0..=bound {
        by_norm.push(if n == 0 { Vec::new() } else { QuadIdeal::ideals_of_norm(k, n)? });
    }
    let mut out = Vec::new();
    for n1 in 1..=bound {
        for n2 in 1..=bound / n1 {
            for f1 in &by_norm[n1 as usize] {
                for f2 in &by_norm[n2 as usize] {
                    if f1.is_coprime(f2) {
                        out.push((*f1, *f2));
                    }
                }
            }
        }
    }
    out.sort_by_key(|(f1, f2)| (f1.norm() * f2.norm(), *f1, *f2));
    Ok(out)
}

/// Search all primitive pairs with conductor norm product up to the bound
/// and the given infinity type pairs, returning those matching every sample.
///
/// The degenerate weight relation t1 = t2 + (1, 1), where phi1 and
/// phi2 |.| share an infinity type, is skipped unless allow_degenerate is
/// set.
pub fn recover_chars(
    k: &QuadField,
    samples: &SampleSet,
    conductor_norm_bound: i128,
    type_pairs: &[((i64, i64), (i64, i64))],
    allow_degenerate: bool,
    limits: &Limits,
) -> Result<RecoveryReport> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if samples.field_d() != k.d() {
        return Err(Error::FieldMismatch(samples.field_d(), k.d()));
    }
    if conductor_norm_bound < 1 || conductor_norm_bound > limits.max_enum_norm as i128 {
        return Err(Error::BoundExceeded(format!(
            "conductor norm bound {} outside 1..={}",
            conductor_norm_bound, limits.max_enum_norm
        )));
    }
    let mut degenerate_skipped = 0usize;
    let mut kept_types = Vec::new();
    for &(t1, t2) in type_pairs {
        if t1 == (t2.0 + 1, t2.1 + 1) && !allow_degenerate {
            degenerate_skipped += 1;
        } else {
            kept_types.push((t1, t2));
        }
    }
    let pairs = conductor_pairs(k, conductor_norm_bound)?;
    let mut char_cache: std::collections::HashMap<((i128, i128, i128), (i64, i64)), Vec<crate::characters::HeckeChar>> =
        std::collections::HashMap::new();
    let mut candidates: Vec<CharPair> = Vec::new();
    for &(t1, t2) in &kept_types {
        for (f1, f2) in &pairs {
            let mut chars_of = |f: &QuadIdeal, t: (i64, i64)| -> Result<Vec<crate::characters::HeckeChar>> {
                if let Some(v) = char_cache.get(&(f.hnf(), t)) {
                    return Ok(v.clone());
                }
                let v = enumerate_chars(k, f, t.0, t.1, limits)?;
                char_cache.insert((f.hnf(), t), v.clone());
                Ok(v)
            };
            let chars1 = chars_of(f1, t1)?;
            if chars1.is_empty() {
                continue;
            }
            let chars2 = chars_of(f2, t2)?;
            for c1 in &chars1 {
                for c2 in &chars2 {
                    candidates.push(CharPair::new(c1.clone(), c2.clone())?);
                }
            }
        }
    }
    let flags: Vec<bool> = candidates
        .par_iter()
        .map(|cand| -> Result<bool> {
            for s in samples.samples() {
                match spherical_eigenvalues(cand, &s.prime) {
                    Ok((a, d)) => {
                        if a != s.a || d != s.d {
                            return Ok(false);
                        }
                    }
                    // A sample at a prime dividing the candidate level can
                    // never be spherical data of that candidate.
                    Err(Error::NotCoprime) => return Ok(false),
                    Err(e) => return Err(e),
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?;
    let matched: Vec<&CharPair> = candidates
        .iter()
        .zip(&flags)
        .filter_map(|(c, &ok)| if ok { Some(c) } else { None })
        .collect();
    let mut matches = Vec::with_capacity(matched.len());
    for (i, pair) in matched.iter().enumerate() {
        let branch = if i == 0 {
            BranchAgreement::Both
        } else {
            let first = matched[0];
            match (pair.phi1() == first.phi1(), pair.phi2() == first.phi2()) {
                (true, true) => BranchAgreement::Both,
                (true, false) => BranchAgreement::Phi1,
                (false, true) => BranchAgreement::Alpha,
                (false, false) => BranchAgreement::Neither,
            }
        };
        matches.push(RecoveredMatch { pair: (*pair).clone(), branch });
    }
    let involution_closed = match matches.len() {
        0 | 1 => true,
        2 => involution(&matches[0].pair)? == matches[1].pair,
        _ => false,
    };
    Ok(RecoveryReport {
        conductor_norm_bound,
        sample_count: samples.len(),
        type_pairs: type_pairs.to_vec(),
        degenerate_type_pairs_skipped: degenerate_skipped,
        candidates_tested: candidates.len(),
        matches,
        involution_closed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub modulus: QuadIdeal,
    pub class_count: usize,
    pub classes_hit: usize,
    /// Strictly more than half of the ray classes are sampled.
    pub coverage_ok: bool,
    pub skipped_non_coprime: Vec<QuadIdeal>,
}

/// Fraction of ray classes mod the modulus covered by the sample primes.
pub fn density_report(
    k: &QuadField,
    samples: &SampleSet,
    modulus: &QuadIdeal,
    limits: &Limits,
) -> Result<DensityReport> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if samples.field_d() != k.d() {
        return Err(Error::FieldMismatch(samples.field_d(), k.d()));
    }
    let rc = RayClassGroup::new(k, modulus, limits)?;
    let mut hit = vec![false; rc.class_count()];
    let mut skipped = Vec::new();
    for s in samples.samples() {
        if s.prime.is_coprime(modulus) {
            hit[rc.class_of(&s.prime)?] = true;
        } else {
            skipped.push(s.prime);
        }
    }
    let classes_hit = hit.iter().filter(|h| **h).count();
    Ok(DensityReport {
        modulus: *modulus,
        class_count: rc.class_count(),
        classes_hit,
        coverage_ok: 2 * classes_hit > rc.class_count(),
        skipped_non_coprime: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::InfinityTypeClass;
    use crate::quadfield::QuadInt;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    fn level_five_pair() -> CharPair {
        let k = qi();
        let f1 = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let f2 = QuadIdeal::principal(&k, &QuadInt::new(2, -1)).unwrap();
        let phi1 = enumerate_chars(&k, &f1, 1, 0, &limits()).unwrap().remove(0);
        let phi2 = enumerate_chars(&k, &f2, -1, 0, &limits()).unwrap().remove(0);
        CharPair::new(phi1, phi2).unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 60).unwrap();
        assert!(s.len() >= 6);
        let text = s.to_csv_string().unwrap();
        let back = SampleSet::from_csv_str(&qi(), &text).unwrap();
        assert_eq!(s.samples(), back.samples());
    }

    #[test]
    fn csv_rejects_corruption() {
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 30).unwrap();
        let text = s.to_csv_string().unwrap();
        // Wrong header name.
        let bad = text.replacen("prime_a", "prime_x", 1);
        assert!(SampleSet::from_csv_str(&qi(), &bad).is_err());
        // Tampered norm column.
        let mut lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
        let fields: Vec<String> = lines[1].split(',').map(|f| f.to_string()).collect();
        let mut tampered = fields.clone();
        tampered[3] = "999".into();
        lines[1] = tampered.join(",");
        assert!(SampleSet::from_csv_str(&qi(), &lines.join("\n")).is_err());
        // Composite ideal in the prime column: (3+i) has norm 10.
        let mut comp = fields.clone();
        comp[0] = "10".into();
        comp[1] = "3".into();
        comp[2] = "1".into();
        comp[3] = "10".into();
        lines[1] = comp.join(",");
        assert!(SampleSet::from_csv_str(&qi(), &lines.join("\n")).is_err());
    }

    #[test]
    fn duplicate_primes_rejected() {
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 30).unwrap();
        let mut v = s.samples().to_vec();
        v.push(v[0].clone());
        assert!(matches!(
            SampleSet::new(&qi(), v),
            Err(Error::BadSampleSet(_))
        ));
    }

    fn search_types() -> Vec<((i64, i64), (i64, i64))> {
        // TypeA(0,0) and its dual TypeADual(0,0).
        vec![((1, 0), (-1, 0)), ((0, 1), (0, -1))]
    }

    #[test]
    fn recovery_finds_the_involution_orbit() {
        let k = qi();
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 60).unwrap();
        let rep = recover_chars(&k, &s, 25, &search_types(), false, &limits()).unwrap();
        assert_eq!(rep.matches.len(), 2, "report: {:?}", rep);
        assert!(rep.involution_closed);
        assert_eq!(rep.matches[0].branch, BranchAgreement::Both);
        assert_eq!(rep.matches[1].branch, BranchAgreement::Neither);
        assert_eq!(rep.matches[0].pair, pair);
        assert_eq!(
            rep.matches[1].pair.infinity_class(),
            InfinityTypeClass::TypeADual { k: 0, l: 0 }
        );
        assert!(rep.candidates_tested > 2);
    }

    #[test]
    fn restricted_type_list_finds_one_match() {
        let k = qi();
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 60).unwrap();
        let rep =
            recover_chars(&k, &s, 25, &[((1, 0), (-1, 0))], false, &limits()).unwrap();
        assert_eq!(rep.matches.len(), 1);
        assert!(rep.involution_closed);
        assert_eq!(rep.matches[0].pair, pair);
    }

    #[test]
    fn degenerate_weights_are_guarded() {
        let k = qi();
        let pair = level_five_pair();
        let s = SampleSet::from_pair(&pair, 40).unwrap();
        let types = vec![((1, 1), (0, 0))];
        let rep = recover_chars(&k, &s, 10, &types, false, &limits()).unwrap();
        assert_eq!(rep.degenerate_type_pairs_skipped, 1);
        assert_eq!(rep.candidates_tested, 0);
        let rep2 = recover_chars(&k, &s, 10, &types, true, &limits()).unwrap();
        assert_eq!(rep2.degenerate_type_pairs_skipped, 0);
        assert!(rep2.candidates_tested > 0);
        assert!(rep2.matches.is_empty());
    }

    #[test]
    fn empty_samples_are_refused() {
        let k = qi();
        let s = SampleSet::new(&k, Vec::new()).unwrap();
        assert!(matches!(
            recover_chars(&k, &s, 10, &search_types(), false, &limits()),
            Err(Error::EmptySampleSet)
        ));
        let five = QuadIdeal::principal(&k, &QuadInt::new(5, 0)).unwrap();
        assert!(matches!(
            density_report(&k, &s, &five, &limits()),
            Err(Error::EmptySampleSet)
        ));
    }

    #[test]
    fn density_coverage_and_monotonicity() {
        let k = qi();
        let pair = level_five_pair();
        let five = pair.level();
        let small = SampleSet::from_pair(&pair, 20).unwrap();
        let large = SampleSet::from_pair(&pair, 80).unwrap();
        let rs = density_report(&k, &small, &five, &limits()).unwrap();
        let rl = density_report(&k, &large, &five, &limits()).unwrap();
        assert_eq!(rs.class_count, 4);
        assert!(rs.classes_hit <= rl.classes_hit, "coverage is monotone");
        assert!(rl.coverage_ok);
        assert!(rs.skipped_non_coprime.is_empty());
        // A sample at a prime dividing the modulus is skipped, not counted.
        let mut v = large.samples().to_vec();
        let bad_prime = QuadIdeal::principal(&k, &QuadInt::new(2, 1)).unwrap();
        let (a, d) = (CycloNum::from_int(0), CycloNum::from_int(0));
        v.push(Sample { prime: bad_prime, a, d });
        let with_bad = SampleSet::new(&k, v).unwrap();
        let rb = density_report(&k, &with_bad, &five, &limits()).unwrap();
        assert_eq!(rb.skipped_non_coprime, vec![bad_prime]);
        assert_eq!(rb.classes_hit, rl.classes_hit);
    }
}

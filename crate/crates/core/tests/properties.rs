use bianchi_core::characters::{enumerate_chars, CharPair, HeckeChar};
use bianchi_core::config::Limits;
use bianchi_core::cyclo::{CycloNum, Rat};
use bianchi_core::eigensystem::{hecke_roots, involution, spherical_eigenvalues};
use bianchi_core::ideals::QuadIdeal;
use bianchi_core::quadfield::QuadField;
use num_bigint::BigInt;
use once_cell::sync::Lazy;
use proptest::prelude::*;
use proptest::sample::Index;

const FIELD_DS: [i64; 4] = [-1, -2, -3, -7];

fn limits() -> Limits {
    Limits::default()
}

/// Primitive characters across several fields, conductors and types, built
/// once; the property tests sample from this pool by index.
static CHAR_POOL: Lazy<Vec<HeckeChar>> = Lazy::new(|| {
    let types: [(i64, i64); 8] =
        [(1, 0), (0, 1), (2, 0), (-1, 0), (0, -1), (-1, -1), (1, 1), (0, 0)];
    let mut pool = Vec::new();
    for d in FIELD_DS {
        let k = QuadField::new(d).unwrap();
        let mut conductors = Vec::new();
        for n in 1..=20i128 {
            conductors.extend(QuadIdeal::ideals_of_norm(&k, n).unwrap());
        }
        for f in &conductors {
            for (a, b) in types {
                pool.extend(enumerate_chars(&k, f, a, b, &limits()).unwrap());
            }
        }
    }
    assert!(pool.len() > 50, "character pool came out too small");
    pool
});

/// Pairs with coprime conductors assembled from the character pool.
static PAIR_POOL: Lazy<Vec<CharPair>> = Lazy::new(|| {
    let mut pool = Vec::new();
    for c1 in CHAR_POOL.iter() {
        if pool.len() >= 600 {
            break;
        }
        for c2 in CHAR_POOL.iter() {
            if c1.field().d() != c2.field().d() {
                continue;
            }
            if !c1.conductor().is_coprime(c2.conductor()) {
                continue;
            }
            pool.push(CharPair::new(c1.clone(), c2.clone()).unwrap());
            if pool.len() >= 600 {
                break;
            }
        }
    }
    assert!(pool.len() >= 100, "pair pool came out too small");
    pool
});

/// Ideals of small norm per field, for multiplicativity checks.
static IDEAL_POOL: Lazy<Vec<(i64, Vec<QuadIdeal>)>> = Lazy::new(|| {
    FIELD_DS
        .iter()
        .map(|&d| {
            let k = QuadField::new(d).unwrap();
            let mut v = Vec::new();
            for n in 1..=40i128 {
                v.extend(QuadIdeal::ideals_of_norm(&k, n).unwrap());
            }
            (d, v)
        })
        .collect()
});

fn ideals_for(d: i64) -> &'static [QuadIdeal] {
    &IDEAL_POOL.iter().find(|(fd, _)| *fd == d).unwrap().1
}

/// Random cyclotomic number: a random-length integer poly in zeta_n scaled by
/// a small denominator, reduced through the public constructor.
fn cyclo_strategy(order: u64) -> impl Strategy<Value = CycloNum> {
    (1..=2 * order as usize, proptest::collection::vec((-9i64..=9, 1i64..=4), 2 * order as usize))
        .prop_map(move |(len, raw)| {
            let poly: Vec<Rat> = raw
                .into_iter()
                .take(len)
                .map(|(num, den)| Rat::new(BigInt::from(num), BigInt::from(den)))
                .collect();
            CycloNum::from_poly(order, poly)
        })
}

fn cyclo_triple() -> impl Strategy<Value = (CycloNum, CycloNum, CycloNum)> {
    (1u64..=16).prop_flat_map(|n| (cyclo_strategy(n), cyclo_strategy(n), cyclo_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cyclo_ring_axioms((x, y, z) in cyclo_triple()) {
        let zero = CycloNum::zero();
        let one = CycloNum::one();
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.add(&zero).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
        prop_assert!(x.add(&x.neg()).unwrap().is_zero());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().conj(), x.conj().mul(&y.conj()).unwrap());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).unwrap().is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn characters_are_multiplicative(ci in any::<Index>(), ai in any::<Index>(), bi in any::<Index>()) {
        let chi = &CHAR_POOL[ci.index(CHAR_POOL.len())];
        let ideals = ideals_for(chi.field().d());
        let a = &ideals[ai.index(ideals.len())];
        let b = &ideals[bi.index(ideals.len())];
        let ab = a.mul(b);
        let lhs = chi.eval(&ab).unwrap();
        let rhs = chi.eval(a).unwrap().mul(&chi.eval(b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn involution_applied_twice_is_the_identity(pi in any::<Index>()) {
        let pair = &PAIR_POOL[pi.index(PAIR_POOL.len())];
        let partner = involution(pair).unwrap();
        prop_assert_eq!(&involution(&partner).unwrap(), pair);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hecke_roots_satisfy_vieta(pi in any::<Index>(), qi in any::<Index>()) {
        let pair = &PAIR_POOL[pi.index(PAIR_POOL.len())];
        let k = pair.field();
        let primes: Vec<QuadIdeal> = QuadIdeal::primes_of_norm_up_to(k, 60)
            .into_iter()
            .filter(|q| q.is_coprime(&pair.level()))
            .collect();
        prop_assume!(!primes.is_empty());
        let q = &primes[qi.index(primes.len())];
        let (alpha, beta) = hecke_roots(pair, q).unwrap();
        let (a, d) = spherical_eigenvalues(pair, q).unwrap();
        prop_assert_eq!(alpha.add(&beta).unwrap(), a);
        let nq = CycloNum::from_int(q.norm() as i64);
        prop_assert_eq!(alpha.mul(&beta).unwrap(), d.mul(&nq).unwrap());
    }
}

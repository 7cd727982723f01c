use serde::{Deserialize, Serialize};

/// Hard caps on every unbounded search or coercion in the library.  All
/// enumeration loops consult these instead of growing without limit; hitting a
/// cap is reported as `Error::BoundExceeded`, never silent truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Limits {
    /// Largest cyclotomic order accepted when coercing values into a common
    /// field Q(zeta_n).
    pub max_cyclo_order: u64,
    /// Largest residue ring O/f (by cardinality) for which unit groups and
    /// ray class data are computed.
    pub max_residue_ring: u64,
    /// Largest ideal norm visited by conductor / prime enumerations.
    pub max_enum_norm: i128,
    /// Largest integer fed to trial-division factorization.
    pub max_factor_norm: i128,
    /// Cap on p-adic working precision (digits of p).
    pub max_precision: u32,
    /// Cap on the `digits` argument of the complex embedding; the guarantee
    /// `|error| < 10^-digits` is only certified up to this many digits.
    pub max_embed_digits: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cyclo_order: 10_000,
            max_residue_ring: 50_000,
            max_enum_norm: 1_000_000,
            max_factor_norm: 1_000_000_000_000,
            max_precision: 256,
            max_embed_digits: 12,
        }
    }
}

/// Run-wide configuration: bounds, default p-adic precision, the seed fed to
/// randomized property tests, worker count for parallel searches, and the
/// digit count used when floats appear in human-readable output (persisted
/// artifacts never contain floats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub limits: Limits,
    /// Default p-adic precision N (work modulo p^N).
    pub precision: u32,
    /// Seed for property-test RNGs.  Recorded in reports; unused by exact
    /// computations, which are deterministic.
    pub seed: u64,
    /// Worker threads for candidate searches; 0 means the library default.
    pub threads: usize,
    /// Digits shown for floats in human-readable output only.
    pub float_digits: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            limits: Limits::default(),
            precision: 32,
            seed: 0,
            threads: 0,
            float_digits: 10,
        }
    }
}

/// Version tag for the sign and normalization conventions baked into this
/// crate (infinity types act by chi((alpha)) = eps(alpha) alpha^-a
/// conj(alpha)^-b; canonical generators sit in the arg-[0, 2 pi / w) cone).
/// Reports embed it so archived artifacts stay interpretable if conventions
/// ever change.
pub const CONVENTION: &str = "bianchi-conventions-1";

/// Environment variable overriding `Config::threads`.
pub const THREADS_ENV: &str = "BIANCHI_THREADS";

impl Config {
    /// Effective worker count: env override, then config, then all cores.
    pub fn effective_threads(&self) -> usize {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            if let Ok(n) = v.parse::<usize>() {
                if n > 0 {
                    return n;
                }
            }
        }
        if self.threads > 0 {
            self.threads
        } else {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }
    }
}

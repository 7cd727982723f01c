use anyhow::{anyhow, bail, Context, Result};
use bianchi_core::basechange::{bc_stabilize, bc_verify, BaseChangeChar};
use bianchi_core::characters::{compatible_count_oracle, enumerate_chars, CharPair, HeckeChar};
use bianchi_core::config::{Config, CONVENTION, THREADS_ENV};
use bianchi_core::eigensystem::{
    bruteforce_boundary_dims, eis_eigensystem, involution, predict_dims, spherical_eigenvalues,
};
use bianchi_core::error::Error as CoreError;
use bianchi_core::ideals::QuadIdeal;
use bianchi_core::padic::{family_congruence, stabilize, WeightDirection};
use bianchi_core::quadfield::{QuadField, QuadInt};
use bianchi_core::recovery::{density_report, recover_chars, SampleSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

/// Exact Eisenstein eigensystems for pairs of Hecke characters of imaginary
/// quadratic fields: dimension tables, recovery, p-stabilization and base
/// change, all in exact cyclotomic arithmetic.
#[derive(Parser)]
#[command(name = "bianchi", version, max_term_width = 100)]
struct Cli {
    /// JSON configuration file (bounds, precision, threads).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// p-adic working precision; overrides the configuration file.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed recorded in reports; exact computations never consult it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for the library default; the BIANCHI_THREADS
    /// environment variable overrides both this and the file.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// One character of a pair on the command line: conductor as "a,b,c" in
/// Hermite normal form {a, b + c omega} or "g:x,y" for the principal ideal
/// (x + y omega), exponents of the finite part on the unit-group generators,
/// and the infinity type "a,b" acting by z^-a zbar^-b on generators.
#[derive(Args, Clone)]
struct PairArgs {
    /// Field parameter d < 0 squarefree, K = Q(sqrt(d)).
    #[arg(long, allow_hyphen_values = true)]
    field: i64,
    /// Conductor of phi1.
    #[arg(long)]
    f1: String,
    /// Exponent vector of the finite part of phi1 (empty = trivial).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    e1: String,
    /// Infinity type of phi1.
    #[arg(long, allow_hyphen_values = true)]
    t1: String,
    /// Conductor of phi2.
    #[arg(long)]
    f2: String,
    /// Exponent vector of the finite part of phi2 (empty = trivial).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    e2: String,
    /// Infinity type of phi2.
    #[arg(long, allow_hyphen_values = true)]
    t2: String,
}

/// A base-change input: one character of infinity type (-k-1, 0).
#[derive(Args, Clone)]
struct BcArgs {
    /// Field parameter d < 0 squarefree, K = Q(sqrt(d)).
    #[arg(long, allow_hyphen_values = true)]
    field: i64,
    /// Conductor, "a,b,c" HNF or "g:x,y".
    #[arg(long)]
    conductor: String,
    /// Exponent vector of the finite part (empty = trivial).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    exps: String,
    /// Classical weight k >= 0; the infinity type is (-k-1, 0).
    #[arg(long, default_value_t = 0)]
    weight: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Predict,
    Bruteforce,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// Twist the first infinity exponent (the z-power).
    K,
    /// Twist the second infinity exponent (the conjugate power).
    L,
}

impl From<Direction> for WeightDirection {
    fn from(d: Direction) -> WeightDirection {
        match d {
            Direction::K => WeightDirection::K,
            Direction::L => WeightDirection::L,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Field constants, units and the cyclotomic embedding of Q(sqrt(d)).
    FieldInfo {
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
    },
    /// All primitive characters of a conductor with a given infinity type.
    EnumChars {
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        #[arg(long)]
        conductor: String,
        #[arg(long = "type", allow_hyphen_values = true)]
        ty: String,
    },
    /// Spherical Hecke eigenvalues of a pair at primes up to a norm bound.
    Eigensystem {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 100)]
        bound: i128,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The involution partner of a pair and an eigensystem comparison.
    Involution {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 100)]
        bound: i128,
    },
    /// Predicted and brute-forced boundary dimension tables.
    Dims {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Norm bound for the eigensystem comparison in the brute force.
        #[arg(long, default_value_t = 200)]
        eigen_bound: i128,
        /// Also count with one fixed stabilization at this rational prime.
        #[arg(long)]
        extra_prime: Option<u64>,
    },
    /// p-stabilizations of a pair at a split prime, with slopes.
    Stabilize {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        p: u64,
    },
    /// Search for the characters reproducing a sampled eigensystem.
    Recover {
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        /// CSV sample file (prime_a,prime_b,prime_c,norm,a_q,d_q).
        #[arg(long)]
        samples: PathBuf,
        /// Conductor norm product bound for the candidate search.
        #[arg(long, default_value_t = 50)]
        bound: i128,
        /// Explicit type pairs "a,b:c,d;..."; default is every admissible
        /// shape up to --max-weight.
        #[arg(long, allow_hyphen_values = true)]
        types: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        /// Also search type pairs with degenerate eigenvalue formulas.
        #[arg(long)]
        allow_degenerate: bool,
    },
    /// Ray-class coverage of a sample set modulo an ideal.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        modulus: String,
    },
    /// Compare a base-change pair against the classical theta series.
    BcVerify {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 200)]
        bound: i128,
    },
    /// Stabilize a base-change pair and label the stabilizations classically.
    BcStabilize {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long)]
        p: u64,
    },
    /// Weight-family congruence for a twisted infinity type.
    FamilyCongruence {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        p: u64,
        /// Congruence depth: the twist is by t p^m lcm(p-1, w).
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, value_enum, default_value_t = Direction::K)]
        direction: Direction,
        /// Norm bound on the witness primes.
        #[arg(long, default_value_t = 100)]
        bound: i128,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return 0;
            }
            eprint!("{}", e);
            return 1;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            match e.downcast_ref::<CoreError>() {
                Some(CoreError::CheckFailed(_)) | Some(CoreError::BaseChangeMismatch(_)) => 2,
                _ => 1,
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => Config::default(),
    };
    if let Some(p) = cli.precision {
        cfg.precision = p;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        cfg.threads = v
            .parse()
            .with_context(|| format!("{} must be a thread count, got {:?}", THREADS_ENV, v))?;
    }
    if cfg.precision == 0 || cfg.precision > cfg.limits.max_precision {
        bail!("precision must be in 1..={}", cfg.limits.max_precision);
    }
    Ok(cfg)
}

fn parse_int_list(s: &str, what: &str) -> Result<Vec<i128>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i128>()
                .map_err(|_| anyhow!("{}: expected a comma-separated integer list, got {:?}", what, s))
        })
        .collect()
}

fn parse_ideal(k: &QuadField, s: &str, what: &str) -> Result<QuadIdeal> {
    if let Some(rest) = s.strip_prefix("g:") {
        let v = parse_int_list(rest, what)?;
        if v.len() != 2 {
            bail!("{}: generator form needs two coordinates, got {:?}", what, s);
        }
        return Ok(QuadIdeal::principal(k, &QuadInt::new(v[0], v[1]))?);
    }
    let v = parse_int_list(s, what)?;
    if v.len() != 3 {
        bail!("{}: HNF form needs three entries a,b,c, got {:?}", what, s);
    }
    Ok(QuadIdeal::from_hnf(k, v[0], v[1], v[2])?)
}

fn parse_exps(s: &str, what: &str) -> Result<Vec<u64>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("{}: exponents must be nonnegative integers, got {:?}", what, s))
        })
        .collect()
}

fn parse_pair_type(s: &str, what: &str) -> Result<(i64, i64)> {
    let v = parse_int_list(s, what)?;
    if v.len() != 2 {
        bail!("{}: infinity type needs two entries a,b, got {:?}", what, s);
    }
    Ok((v[0] as i64, v[1] as i64))
}

fn build_pair(args: &PairArgs, cfg: &Config) -> Result<CharPair> {
    let k = QuadField::new(args.field)?;
    let f1 = parse_ideal(&k, &args.f1, "--f1")?;
    let f2 = parse_ideal(&k, &args.f2, "--f2")?;
    let (a1, b1) = parse_pair_type(&args.t1, "--t1")?;
    let (a2, b2) = parse_pair_type(&args.t2, "--t2")?;
    let e1 = parse_exps(&args.e1, "--e1")?;
    let e2 = parse_exps(&args.e2, "--e2")?;
    let phi1 = HeckeChar::new(&k, &f1, e1, a1, b1, &cfg.limits).context("building phi1")?;
    let phi2 = HeckeChar::new(&k, &f2, e2, a2, b2, &cfg.limits).context("building phi2")?;
    Ok(CharPair::new(phi1, phi2)?)
}

fn build_bc(args: &BcArgs, cfg: &Config) -> Result<BaseChangeChar> {
    if args.weight < 0 {
        bail!("--weight must be nonnegative");
    }
    let k = QuadField::new(args.field)?;
    let f = parse_ideal(&k, &args.conductor, "--conductor")?;
    let exps = parse_exps(&args.exps, "--exps")?;
    let phi = HeckeChar::new(&k, &f, exps, -(args.weight + 1), 0, &cfg.limits)
        .context("building the base-change character")?;
    Ok(BaseChangeChar::new(phi)?)
}

fn emit<R: Serialize>(cfg: &Config, command: serde_json::Value, report: &R) -> Result<()> {
    #[derive(Serialize)]
    struct Envelope<'a, R: Serialize> {
        convention: &'static str,
        config: &'a Config,
        command: serde_json::Value,
        report: &'a R,
    }
    let env = Envelope { convention: CONVENTION, config: cfg, command, report };
    println!("{}", serde_json::to_string_pretty(&env)?);
    Ok(())
}

/// The four admissible type-pair shapes at every weight up to the bound.
fn admissible_type_pairs(max_weight: i64) -> Vec<((i64, i64), (i64, i64))> {
    let mut out = Vec::new();
    for k in 0..=max_weight.max(0) {
        for l in 0..=max_weight.max(0) {
            out.push(((k + 1, 0), (-1, l)));
            out.push(((0, l + 1), (k, -1)));
            out.push(((k + 1, l + 1), (-1, -1)));
            out.push(((0, 0), (k, l)));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn parse_type_pairs(s: &str) -> Result<Vec<((i64, i64), (i64, i64))>> {
    s.split(';')
        .map(|chunk| {
            let (t1, t2) = chunk
                .split_once(':')
                .ok_or_else(|| anyhow!("--types entries look like \"a,b:c,d\", got {:?}", chunk))?;
            Ok((parse_pair_type(t1, "--types")?, parse_pair_type(t2, "--types")?))
        })
        .collect()
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = load_config(&cli)?;
    if cfg.threads != 0 {
        // Ignore a second initialization: tests drive this binary repeatedly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    match &cli.cmd {
        Cmd::FieldInfo { field } => {
            let k = QuadField::new(*field)?;
            let units: Vec<String> = k.units().iter().map(|u| u.to_string()).collect();
            let report = json!({
                "d": k.d(),
                "discriminant": k.disc(),
                "omega_trace": k.tr_omega() as i64,
                "omega_norm": k.nm_omega() as i64,
                "unit_count": k.unit_count(),
                "units": units,
                "class_number_one": k.class_number_one(),
                "cyclotomic_order": k.cyclo_order(),
                "omega": k.omega_cyclo().to_compact_string(),
                "delta": k.delta_cyclo().to_compact_string(),
            });
            emit(&cfg, json!({"name": "field-info", "field": field}), &report)?;
            Ok(0)
        }
        Cmd::EnumChars { field, conductor, ty } => {
            let k = QuadField::new(*field)?;
            let f = parse_ideal(&k, conductor, "--conductor")?;
            let (a, b) = parse_pair_type(ty, "--type")?;
            let chars = enumerate_chars(&k, &f, a, b, &cfg.limits)?;
            let compatible = compatible_count_oracle(&k, &f, a, b, &cfg.limits)?;
            let report = json!({
                "conductor": f,
                "infinity_type": [a, b],
                "characters": chars,
                "primitive_count": chars.len(),
                "compatible_count_mod_f": compatible,
            });
            emit(
                &cfg,
                json!({"name": "enum-chars", "field": field, "conductor": conductor, "type": [a, b]}),
                &report,
            )?;
            Ok(0)
        }
        Cmd::Eigensystem { pair, bound, format } => {
            let p = build_pair(pair, &cfg)?;
            let set = SampleSet::from_pair(&p, *bound)?;
            match format {
                Format::Csv => {
                    print!("{}", set.to_csv_string()?);
                }
                Format::Json => {
                    let report = json!({"pair": p, "bound": bound, "samples": set});
                    emit(&cfg, json!({"name": "eigensystem", "bound": bound}), &report)?;
                }
            }
            Ok(0)
        }
        Cmd::Involution { pair, bound } => {
            let p = build_pair(pair, &cfg)?;
            let q = involution(&p)?;
            let back = involution(&q)?;
            let level = p.level();
            let mut checked_spherical = 0usize;
            let mut checked_level = 0usize;
            let mut preserved = true;
            for prime in QuadIdeal::primes_of_norm_up_to(p.field(), *bound) {
                if prime.is_coprime(&level) {
                    let lhs = spherical_eigenvalues(&p, &prime)?;
                    let rhs = spherical_eigenvalues(&q, &prime)?;
                    preserved &= lhs == rhs;
                    checked_spherical += 1;
                } else {
                    // The conductors swap roles under the involution, so only
                    // the U_q eigenvalue itself is comparable.
                    use bianchi_core::eigensystem::HeckeEigenvalue as H;
                    let same = match (eis_eigensystem(&p, &prime)?, eis_eigensystem(&q, &prime)?) {
                        (H::UOnly { u: u1, .. }, H::UOnly { u: u2, .. }) => u1 == u2,
                        (lhs, rhs) => lhs == rhs,
                    };
                    preserved &= same;
                    checked_level += 1;
                }
            }
            let report = json!({
                "pair": p,
                "involution": q,
                "class": p.infinity_class(),
                "involution_class": q.infinity_class(),
                "involutive_ok": back == p,
                "checked_spherical_primes": checked_spherical,
                "checked_level_primes": checked_level,
                "eigenvalues_preserved": preserved,
            });
            emit(&cfg, json!({"name": "involution", "bound": bound}), &report)?;
            Ok(if preserved && back == p { 0 } else { 2 })
        }
        Cmd::Dims { pair, mode, eigen_bound, extra_prime } => {
            let p = build_pair(pair, &cfg)?;
            match mode {
                Mode::Predict => {
                    let r = predict_dims(&p)?;
                    let ok = r.euler_characteristic_ok;
                    emit(&cfg, json!({"name": "dims", "mode": "predict"}), &r)?;
                    Ok(if ok { 0 } else { 2 })
                }
                Mode::Bruteforce => {
                    let r = bruteforce_boundary_dims(&p, *eigen_bound, *extra_prime, &cfg.limits)?;
                    let mult_one = multiplicity_one_ok(&p, &r.matches.iter().map(|m| m.pair.clone()).collect::<Vec<_>>())?;
                    let report = json!({"bruteforce": r, "multiplicity_one_ok": mult_one});
                    emit(
                        &cfg,
                        json!({"name": "dims", "mode": "bruteforce", "eigen_bound": eigen_bound, "extra_prime": extra_prime}),
                        &report,
                    )?;
                    Ok(if mult_one { 0 } else { 2 })
                }
                Mode::Both => {
                    let predicted = predict_dims(&p)?;
                    let forced = bruteforce_boundary_dims(&p, *eigen_bound, *extra_prime, &cfg.limits)?;
                    let boundary_agrees = predicted.table.boundary == forced.boundary;
                    let mult_one = multiplicity_one_ok(&p, &forced.matches.iter().map(|m| m.pair.clone()).collect::<Vec<_>>())?;
                    let ok = boundary_agrees && mult_one && predicted.euler_characteristic_ok;
                    let report = json!({
                        "predicted": predicted,
                        "bruteforce": forced,
                        "boundary_agrees": boundary_agrees,
                        "multiplicity_one_ok": mult_one,
                    });
                    emit(
                        &cfg,
                        json!({"name": "dims", "mode": "both", "eigen_bound": eigen_bound, "extra_prime": extra_prime}),
                        &report,
                    )?;
                    Ok(if ok { 0 } else { 2 })
                }
            }
        }
        Cmd::Stabilize { pair, p } => {
            let pr = build_pair(pair, &cfg)?;
            let r = stabilize(&pr, *p, cfg.precision, &cfg.limits)?;
            let ok = r.slopes_match_table && r.ordinary_count == 1;
            emit(&cfg, json!({"name": "stabilize", "p": p}), &r)?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::Recover { field, samples, bound, types, max_weight, allow_degenerate } => {
            let k = QuadField::new(*field)?;
            let text = std::fs::read_to_string(samples)
                .with_context(|| format!("reading samples {}", samples.display()))?;
            let command = json!({
                "name": "recover", "field": field, "bound": bound,
                "max_weight": max_weight, "allow_degenerate": allow_degenerate,
            });
            let set = match SampleSet::from_csv_str(&k, &text) {
                Ok(set) => set,
                Err(e) => {
                    // A corrupt sample file is an empty search, not a crash:
                    // report zero matches and leave the exit code clean.
                    let report = json!({
                        "sample_error": e.to_string(),
                        "matches": [],
                        "match_count": 0,
                    });
                    emit(&cfg, command, &report)?;
                    return Ok(0);
                }
            };
            let type_pairs = match types {
                Some(s) => parse_type_pairs(s)?,
                None => admissible_type_pairs(*max_weight),
            };
            let r = recover_chars(&k, &set, *bound, &type_pairs, *allow_degenerate, &cfg.limits)?;
            let ok = r.involution_closed;
            let report = json!({"field": k.d(), "match_count": r.matches.len(), "recovery": r});
            emit(&cfg, command, &report)?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::Density { field, samples, modulus } => {
            let k = QuadField::new(*field)?;
            let text = std::fs::read_to_string(samples)
                .with_context(|| format!("reading samples {}", samples.display()))?;
            let set = SampleSet::from_csv_str(&k, &text)?;
            let m = parse_ideal(&k, modulus, "--modulus")?;
            let r = density_report(&k, &set, &m, &cfg.limits)?;
            emit(&cfg, json!({"name": "density", "field": field, "modulus": modulus}), &r)?;
            Ok(0)
        }
        Cmd::BcVerify { bc, bound } => {
            let chi = build_bc(bc, &cfg)?;
            let r = bc_verify(&chi, *bound, &cfg.limits)?;
            let ok = r.well_defined_ok && r.unramified_all_match && r.eisenstein_bound_ok;
            emit(&cfg, json!({"name": "bc-verify", "bound": bound, "weight": bc.weight}), &r)?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::BcStabilize { bc, p } => {
            let chi = build_bc(bc, &cfg)?;
            let r = bc_stabilize(&chi, *p, cfg.precision, &cfg.limits)?;
            let ok = r.report.slopes_match_table && r.report.ordinary_count == 1;
            emit(&cfg, json!({"name": "bc-stabilize", "p": p, "weight": bc.weight}), &r)?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::FamilyCongruence { pair, p, m, t, direction, bound } => {
            let pr = build_pair(pair, &cfg)?;
            let r = family_congruence(
                &pr,
                *p,
                *m,
                *t,
                (*direction).into(),
                *bound,
                cfg.precision,
                &cfg.limits,
            )?;
            let ok = r.all_pass;
            emit(
                &cfg,
                json!({"name": "family-congruence", "p": p, "m": m, "t": t, "bound": bound}),
                &r,
            )?;
            Ok(if ok { 0 } else { 2 })
        }
    }
}

/// Strong multiplicity one at this level: every matched pair is the input or
/// its involution partner.
fn multiplicity_one_ok(pair: &CharPair, matches: &[CharPair]) -> Result<bool> {
    let partner = involution(pair)?;
    Ok(matches.iter().all(|m| m == pair || m == &partner))
}

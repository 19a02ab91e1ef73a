//! The `fermat3` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use crate::descent::{self, search::KBox, DescentReport};
use crate::frey;
use crate::newformdb::{self, FetchConfig, NewformError};
use crate::oracle::{self, SolutionTuple};
use crate::sieve::{self, SieveConfig, SieveError, SieveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

const WEIGHT: u64 = 2;

#[derive(Debug, Parser)]
#[command(name = "fermat3", version, about = "Exact verification runs for a^2 + 3b^6 = c^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Directory holding cached newform data.
    #[arg(long, default_value = "data", global = true)]
    pub cache_dir: PathBuf,
    /// Never contact LMFDB; use the cache or the bundled fixture.
    #[arg(long, global = true)]
    pub offline: bool,
    /// LMFDB API base URL (also read from FERMAT3_LMFDB_URL).
    #[arg(long, global = true, env = newformdb::LMFDB_URL_ENV)]
    pub lmfdb_url: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force search for primitive solutions.
    Search(SearchArgs),
    /// Run the congruence sieve over the newforms of a level.
    Sieve(SieveArgs),
    /// Fetch newform data into the cache directory.
    Fetch(FetchArgs),
    /// Check the polynomial identities and residue eliminations.
    Identities(IdentityArgs),
    /// Run the descent checks for n = 3, 4, 5, 7 and the covering argument.
    Descent(DescentArgs),
    /// Everything, as one report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub a_bound: u64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub b_bound: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
    pub n_min: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(3..))]
    pub n_max: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SieveArgs {
    #[arg(long, default_value_t = 972, value_parser = clap::value_parser!(u64).range(1..))]
    pub level: u64,
    /// Largest auxiliary prime q.
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    pub q_max: u64,
    #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..))]
    pub p_min: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub p_max: u64,
}

#[derive(Debug, Clone, Args)]
pub struct FetchArgs {
    #[arg(long, default_value_t = 972, value_parser = clap::value_parser!(u64).range(1..))]
    pub level: u64,
    #[arg(long, default_value_t = newformdb::DEFAULT_Q_MAX, value_parser = clap::value_parser!(u64).range(1..))]
    pub q_max: u64,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    /// Random sample size for the sampled checks.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DescentArgs {
    /// Naive-height bound for the Y^2 = X^6 + 48 searches.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(10..))]
    pub height_bound: u64,
    /// Naive-height bound for y^2 = x^3 - 3.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(10..))]
    pub n3_bound: u64,
    /// Coordinate bound for X over Q(sqrt(-3)) with denominators 1 and 2.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(i64).range(1..))]
    pub kbox_bound: i64,
    /// Common bound on coordinates and denominator in the fractional tier.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(i64).range(1..))]
    pub kbox_frac: i64,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub sieve: SieveArgs,
    #[command(flatten)]
    pub descent: DescentArgs,
    #[command(flatten)]
    pub identities: IdentityArgs,
}

/// Failure modes that map to exit codes 2 and 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] NewformError),
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::Newform(e) => CliError::Data(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

/// Rendered output and whether every check passed.
struct Outcome {
    text: String,
    json: serde_json::Value,
    passed: bool,
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.global.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(o) => {
            let body = match cli.global.format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable") + "\n",
            };
            let _ = out.write_all(body.as_bytes());
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Search(a) => run_search(a),
        Command::Sieve(a) => run_sieve(&cli.global, a),
        Command::Fetch(a) => run_fetch(&cli.global, a),
        Command::Identities(a) => Ok(reports_outcome(vec![identity_report(a)])),
        Command::Descent(a) => Ok(reports_outcome(run_descent(a))),
        Command::Report(a) => run_report(&cli.global, a),
    }
}

fn fetch_config(g: &GlobalOpts, q_max: u64) -> FetchConfig {
    let mut cfg = FetchConfig { q_max, cache_dir: g.cache_dir.clone(), offline: g.offline, ..FetchConfig::default() };
    if let Some(url) = &g.lmfdb_url {
        cfg.base_url = url.clone();
    }
    cfg
}

#[derive(Serialize)]
struct SearchOutput {
    schema: u32,
    a_bound: u64,
    b_bound: u64,
    n_min: u32,
    n_max: u32,
    solutions: BTreeSet<SolutionTuple>,
}

fn search_outcome(a: &SearchArgs) -> Result<(SearchOutput, bool), CliError> {
    if a.n_min > a.n_max {
        return Err(CliError::Usage(format!("--n-min {} exceeds --n-max {}", a.n_min, a.n_max)));
    }
    let sols = oracle::brute_force(a.a_bound, a.b_bound, a.n_min, a.n_max);
    let passed = sols.iter().all(SolutionTuple::verify);
    Ok((SearchOutput { schema: 1, a_bound: a.a_bound, b_bound: a.b_bound, n_min: a.n_min, n_max: a.n_max, solutions: sols }, passed))
}

fn search_text(s: &SearchOutput) -> String {
    let mut t = format!(
        "primitive solutions with 1 <= |a| <= {}, 1 <= |b| <= {}, {} <= n <= {}: {}\n",
        s.a_bound,
        s.b_bound,
        s.n_min,
        s.n_max,
        s.solutions.len()
    );
    for sol in &s.solutions {
        t.push_str(&format!("{sol}\n"));
    }
    t
}

fn run_search(a: &SearchArgs) -> Result<Outcome, CliError> {
    let (s, passed) = search_outcome(a)?;
    Ok(Outcome { text: search_text(&s), json: serde_json::to_value(&s).expect("serializable"), passed })
}

fn sieve_report(g: &GlobalOpts, a: &SieveArgs) -> Result<SieveReport, CliError> {
    if a.p_min > a.p_max {
        return Err(CliError::Usage(format!("--p-min {} exceeds --p-max {}", a.p_min, a.p_max)));
    }
    let cache = newformdb::fetch_with(a.level, WEIGHT, &fetch_config(g, a.q_max))?;
    let cfg = SieveConfig { p_min: a.p_min, p_max: a.p_max, ..SieveConfig::with_q_max(a.q_max) };
    let rep = sieve::run(&cache, &cfg)?;
    log::info!("sieve finished in {:.2?}", rep.elapsed);
    Ok(rep)
}

fn run_sieve(g: &GlobalOpts, a: &SieveArgs) -> Result<Outcome, CliError> {
    let rep = sieve_report(g, a)?;
    Ok(Outcome { text: rep.to_text(), json: serde_json::to_value(&rep).expect("serializable"), passed: true })
}

fn run_fetch(g: &GlobalOpts, a: &FetchArgs) -> Result<Outcome, CliError> {
    let cfg = fetch_config(g, a.q_max);
    let cache = newformdb::fetch_with(a.level, WEIGHT, &cfg)?;
    let path = newformdb::cache_path(&cfg.cache_dir, a.level, WEIGHT);
    if !path.exists() {
        std::fs::create_dir_all(&cfg.cache_dir)
            .and_then(|_| std::fs::write(&path, cache.to_json() + "\n"))
            .map_err(|source| NewformError::Io { path: path.clone(), source })?;
    }
    let orbits: Vec<serde_json::Value> = cache
        .records
        .iter()
        .map(|r| json!({ "label": r.label, "degree": r.degree, "is_cm": r.is_cm }))
        .collect();
    let mut text = format!("level {} weight {WEIGHT}: {} orbits -> {}\n", a.level, cache.records.len(), path.display());
    for r in &cache.records {
        text.push_str(&format!("{:<12} deg {} {}\n", r.label, r.degree, if r.is_cm { "CM" } else { "" }));
    }
    let json = json!({
        "schema": 1,
        "level": a.level,
        "weight": WEIGHT,
        "q_coverage": cache.q_coverage(),
        "path": path.display().to_string(),
        "orbits": orbits,
    });
    Ok(Outcome { text, json, passed: true })
}

/// Model-derived invariants against the factored forms at seeded random
/// coprime pairs with |a|, |b| <= 100.
fn frey_sample(report: &mut DescentReport, trials: u64, seed: u64) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < trials {
        let (a, b): (i64, i64) = (rng.gen_range(-100..=100), rng.gen_range(-100..=100));
        if a.gcd(&b) != 1 {
            continue;
        }
        done += 1;
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let inv = frey::frey_model(a, b).expect("coprime").invariants();
        let ok = inv.c4 == frey::factored::c4(&ab, &bb)
            && inv.c6 == frey::factored::c6(&ab, &bb)
            && inv.disc == frey::factored::disc(&ab, &bb);
        if !ok {
            bad.push((a, b));
        }
    }
    report.check(
        "Frey invariants",
        bad.is_empty(),
        format!("c4, c6, disc from the model equal the factored forms at {trials} seeded coprime pairs; failures {bad:?}"),
    );
}

fn identity_report(a: &IdentityArgs) -> DescentReport {
    let mut rep = descent::identities(a.trials as usize, a.rng_seed);
    frey_sample(&mut rep, a.trials, a.rng_seed);
    rep
}

fn run_descent(a: &DescentArgs) -> Vec<DescentReport> {
    let bx = KBox { integral_bound: a.kbox_bound, frac_bound: a.kbox_frac, ..KBox::default() };
    let ((r3, r4), (r5, (r7, ra))) = rayon::join(
        || rayon::join(|| descent::n3_check(a.n3_bound), || descent::n4_solve(a.height_bound)),
        || {
            rayon::join(
                || descent::n5_verify_with(&bx),
                || rayon::join(descent::n7_verify, || descent::appendix_verify(a.height_bound)),
            )
        },
    );
    vec![r3, r4, r5, r7, ra]
}

fn reports_outcome(reports: Vec<DescentReport>) -> Outcome {
    let passed = reports.iter().all(DescentReport::passed);
    let text = reports.iter().map(DescentReport::to_text).collect::<Vec<_>>().join("\n");
    Outcome { text, json: json!({ "schema": 1, "reports": reports }), passed }
}

fn run_report(g: &GlobalOpts, a: &ReportArgs) -> Result<Outcome, CliError> {
    let sieve = sieve_report(g, &a.sieve)?;
    let (search, search_ok) = search_outcome(&SearchArgs { a_bound: 1_000_000, b_bound: 50, n_min: 3, n_max: 20 })?;
    let mut reports = vec![identity_report(&a.identities)];
    reports.extend(run_descent(&a.descent));
    let checks = reports_outcome(reports);
    let text = format!("{}\n{}\n{}", sieve.to_text(), search_text(&search), checks.text);
    let json = json!({
        "schema": 1,
        "sieve": sieve,
        "search": search,
        "checks": checks.json["reports"],
    });
    Ok(Outcome { text, json, passed: search_ok && checks.passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = dispatch_to(std::iter::once("fermat3").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_args(&["sieve", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"));
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["search", "--n-min", "9", "--n-max", "4"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["search", "--n-min", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn small_search() {
        let (code, out, _) = run_args(&["search", "--a-bound", "100", "--b-bound", "3", "--n-max", "6"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("(-47, -2, -7, 4)"));
        assert_eq!(out.lines().count(), 9);
    }

    #[test]
    fn identities_json_is_reproducible() {
        let args = ["identities", "--trials", "10", "--rng-seed", "1", "--format", "json"];
        let (code, first, _) = run_args(&args);
        assert_eq!(code, EXIT_OK);
        let (_, second, _) = run_args(&args);
        assert_eq!(first, second);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn missing_data_exits_3() {
        let dir = tempfile::tempdir().unwrap();
        let (code, _, err) =
            run_args(&["sieve", "--level", "35", "--offline", "--cache-dir", dir.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_DATA);
        assert!(err.contains("35"));
    }

    #[test]
    fn offline_sieve_small() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().to_str().unwrap();
        let args = ["sieve", "--q-max", "13", "--p-max", "50", "--offline", "--cache-dir", cache, "--jobs", "2"];
        let (code, out, _) = run_args(&args);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.starts_with("level 972"));
        let json_args: Vec<&str> = args.iter().copied().chain(["--format", "json"]).collect();
        let (_, a, _) = run_args(&json_args);
        let (_, b, _) = run_args(&json_args);
        assert_eq!(a, b);
    }

    #[test]
    fn fetch_writes_cache_offline() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().to_str().unwrap();
        let (code, out, _) = run_args(&["fetch", "--offline", "--cache-dir", cache]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("7 orbits"));
        assert!(newformdb::cache_path(dir.path(), 972, 2).exists());
    }
}

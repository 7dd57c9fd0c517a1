//! `norm0`: command-line surface for exact computations in
//! `Norm(Γ₀(N))/Γ₀(N)` — structure reports, direct-product claim checks,
//! word evaluation, membership queries, Cayley exports, batch sweeps, and
//! the pinned regression suite.
//!
//! Exit codes: 0 = success / verdict true, 1 = verdict false (`check-claim`,
//! `selftest`), 2 = operational error.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use norm0::cache::GroupCache;
use norm0::export::{cayley_dot, cayley_gap, cayley_json};
use norm0::mat2::{canonicalize, Mat2};
use norm0::report::{build_report, Report};
use norm0::selftest::run_acceptance;
use norm0::structure::check_claim_al;
use norm0::word::Word;
use norm0::{membership_witness, Error, Level, QuotientGroup};
use norm0::{DEFAULT_CLOSURE_BUDGET, DEFAULT_FACTOR_CAP};

#[derive(Parser)]
#[command(
    name = "norm0",
    version,
    about = "Exact group structure of the normalizer quotient Norm(Gamma_0(N))/Gamma_0(N)",
    after_help = "Environment:\n  NORM0_CACHE       cache directory (default .norm0-cache)\n  NORM0_BUDGET      closure element budget (default 100000)\n  NORM0_FACTOR_CAP  trial-division cap (default 1000000000)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the structure report for one level
    Structure {
        n: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Check the Atkin-Lehner direct-product claim (exit 0 holds, 1 fails)
    CheckClaim { n: u64 },
    /// Evaluate a generator word, e.g. "(w16 S4)^3"
    Eval { n: u64, word: String },
    /// Decide normalizer membership of the matrix "a,b,c,d"
    Member { n: u64, matrix: String },
    /// Export the Cayley table
    Cayley {
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CayleyFormat::Json)]
        format: CayleyFormat,
    },
    /// Sweep an inclusive range "a..b", one row per level
    Batch {
        range: String,
        #[arg(long, value_enum)]
        report: Option<BatchFormat>,
    },
    /// Run the pinned regression suite (exit 0 iff everything passes)
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CayleyFormat {
    Json,
    Gap,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BatchFormat {
    Csv,
}

struct Config {
    cache: GroupCache,
    budget: usize,
    factor_cap: u64,
}

impl Config {
    fn from_env() -> Result<Config, String> {
        let cache_dir = std::env::var("NORM0_CACHE").unwrap_or_else(|_| ".norm0-cache".into());
        let budget = match std::env::var("NORM0_BUDGET") {
            Ok(text) => text
                .parse::<usize>()
                .map_err(|_| format!("NORM0_BUDGET must be a positive integer, got `{text}`"))?,
            Err(_) => DEFAULT_CLOSURE_BUDGET,
        };
        let factor_cap = match std::env::var("NORM0_FACTOR_CAP") {
            Ok(text) => text
                .parse::<u64>()
                .map_err(|_| format!("NORM0_FACTOR_CAP must be a positive integer, got `{text}`"))?,
            Err(_) => DEFAULT_FACTOR_CAP,
        };
        Ok(Config {
            cache: GroupCache::new(cache_dir),
            budget,
            factor_cap,
        })
    }

    fn level(&self, n: u64) -> norm0::Result<Level> {
        if n == 0 {
            return Err(Error::InvalidInput("the level must be at least 1".into()));
        }
        Level::with_factor_cap(n, self.factor_cap)
    }

    fn group(&self, n: u64) -> norm0::Result<(QuotientGroup, u64)> {
        let level = self.level(n)?;
        self.cache.load_or_compute(&level, self.budget)
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match Config::from_env() {
        Ok(cfg) => match run(cli.command, &cfg) {
            Ok(code) => code,
            Err(err) => {
                eprintln!("error: {err}");
                2
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command, cfg: &Config) -> norm0::Result<i32> {
    match command {
        Command::Structure { n, format } => cmd_structure(cfg, n, format),
        Command::CheckClaim { n } => cmd_check_claim(cfg, n),
        Command::Eval { n, word } => cmd_eval(cfg, n, &word),
        Command::Member { n, matrix } => cmd_member(cfg, n, &matrix),
        Command::Cayley { n, out, format } => cmd_cayley(cfg, n, out, format),
        Command::Batch { range, report } => cmd_batch(cfg, &range, report),
        Command::Selftest => cmd_selftest(cfg),
    }
}

fn cmd_structure(cfg: &Config, n: u64, format: ReportFormat) -> norm0::Result<i32> {
    let (group, build_ms) = cfg.group(n)?;
    let report = build_report(&group, cfg.budget, build_ms)?;
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        ReportFormat::Text => print_text_report(&group, &report),
    }
    Ok(0)
}

fn print_text_report(group: &QuotientGroup, report: &Report) {
    println!("Norm(Gamma_0({n}))/Gamma_0({n})", n = report.n);
    println!(
        "  N = {} = sigma^2 q with sigma = {}, q = {}",
        report.n, report.sigma, report.q
    );
    println!("  epsilon = {}, v = {}", report.epsilon, report.v);
    println!("  quotient order = {}", report.order);
    let gens: Vec<String> = group
        .gens()
        .iter()
        .map(|(name, m)| format!("{name} = {m} (det {})", m.det()))
        .collect();
    println!("  generators: {}", if gens.is_empty() { "none (trivial)".into() } else { gens.join(", ") });
    for factor in &report.factors {
        println!(
            "  factor p = {}: <{}> of order {}{}",
            factor.prime,
            factor.generators.join(", "),
            factor.subgroup_order,
            match factor.claimed_order {
                Some(c) => format!(" (stated: {c})"),
                None => String::new(),
            }
        );
        for rel in &factor.relations {
            println!(
                "    {}: {} (expected to {}) -> {}",
                rel.label,
                if rel.holds { "holds" } else { "fails" },
                if rel.expected { "hold" } else { "fail" },
                if rel.ok { "ok" } else { "MISMATCH" }
            );
        }
    }
    if report.claim_al.holds {
        println!("  Atkin-Lehner direct-product claim: holds");
    } else {
        println!("  Atkin-Lehner direct-product claim: FAILS");
        if let Some(witness) = &report.claim_al.witness {
            println!("    witness: {}", witness.detail);
        }
    }
    if !report.decompositions.is_empty() {
        println!("  sample w = w_m * Omega decompositions:");
        for s in &report.decompositions {
            let element = if s.element.is_empty() { "1" } else { &s.element };
            let omega = if s.omega.is_empty() { "1" } else { &s.omega };
            println!("    {element}  =  w_{m} * ({omega})", m = s.m);
        }
    }
    println!("  build time: {} ms", report.timing_ms);
}

fn cmd_check_claim(cfg: &Config, n: u64) -> norm0::Result<i32> {
    let (group, _) = cfg.group(n)?;
    let outcome = check_claim_al(&group)?;
    if outcome.holds {
        println!("claim holds at N = {n}: the quotient is the direct product of its per-prime factors");
        Ok(0)
    } else {
        match outcome.witness {
            Some(w) => println!("claim fails at N = {n}: {w}"),
            None => println!("claim fails at N = {n}"),
        }
        Ok(1)
    }
}

fn cmd_eval(cfg: &Config, n: u64, text: &str) -> norm0::Result<i32> {
    let (group, _) = cfg.group(n)?;
    let word = Word::parse(text)?;
    let idx = group.eval_word(&word)?;
    let element = group.element(idx);
    println!("word: {}", if word.is_empty() { "1".into() } else { word.to_string() });
    println!("element: {} (det {})", element.rep, element.rep.det());
    println!("shortest word: {}", {
        let w = group.word(idx);
        if w.is_empty() { "1".into() } else { w.to_string() }
    });
    println!("identity: {}", idx == group.identity());
    Ok(0)
}

fn cmd_member(cfg: &Config, n: u64, text: &str) -> norm0::Result<i32> {
    let level = cfg.level(n)?;
    let entries: Vec<BigInt> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("`{part}` is not an integer")))
        })
        .collect::<norm0::Result<_>>()?;
    let [a, b, c, d]: [BigInt; 4] = entries
        .try_into()
        .map_err(|_| Error::InvalidInput("expected exactly four entries a,b,c,d".into()))?;
    let p = canonicalize(&Mat2::new(a, b, c, d))?;
    println!("canonical representative: {} (det {})", p, p.det());
    match membership_witness(&level, &p) {
        Some(witness) => {
            println!("member of Norm(Gamma_0({n})): yes ({witness})");
            println!(
                "coset lies in Gamma_0({n}): {}",
                if level.is_gamma0(&p) { "yes" } else { "no" }
            );
        }
        None => println!("member of Norm(Gamma_0({n})): no"),
    }
    Ok(0)
}

fn cmd_cayley(cfg: &Config, n: u64, out: Option<PathBuf>, format: CayleyFormat) -> norm0::Result<i32> {
    let (group, _) = cfg.group(n)?;
    let payload = match format {
        CayleyFormat::Json => cayley_json(&group),
        CayleyFormat::Gap => cayley_gap(&group),
        CayleyFormat::Dot => {
            let (script, truncated) = cayley_dot(&group);
            if truncated {
                eprintln!(
                    "warning: graph truncated to {} of {} nodes",
                    norm0::export::DOT_NODE_CAP,
                    group.order()
                );
            }
            script
        }
    };
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => {
            std::io::stdout().write_all(payload.as_bytes())?;
        }
    }
    Ok(0)
}

struct BatchRow {
    n: u64,
    sigma: Option<u64>,
    q: Option<u64>,
    v: Option<u64>,
    epsilon: Option<u64>,
    order: Option<usize>,
    claim: Option<bool>,
    note: String,
}

fn cmd_batch(cfg: &Config, range: &str, report: Option<BatchFormat>) -> norm0::Result<i32> {
    let (lo, hi) = parse_range(range)?;
    let rows: Vec<BatchRow> = (lo..=hi)
        .collect::<Vec<u64>>()
        .into_par_iter()
        .map(|n| batch_row(cfg, n))
        .collect();

    match report {
        Some(BatchFormat::Csv) => {
            println!("N,sigma,q,v,epsilon,order,claim_AL,note");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    row.n,
                    opt(row.sigma),
                    opt(row.q),
                    opt(row.v),
                    opt(row.epsilon),
                    opt(row.order),
                    row.claim.map(|c| c.to_string()).unwrap_or_default(),
                    row.note.replace(',', ";")
                );
            }
        }
        None => {
            println!(
                "{:>6} {:>6} {:>6} {:>4} {:>8} {:>7} {:>9}  note",
                "N", "sigma", "q", "v", "epsilon", "order", "claim_AL"
            );
            for row in &rows {
                println!(
                    "{:>6} {:>6} {:>6} {:>4} {:>8} {:>7} {:>9}  {}",
                    row.n,
                    opt(row.sigma),
                    opt(row.q),
                    opt(row.v),
                    opt(row.epsilon),
                    opt(row.order),
                    row.claim.map(|c| c.to_string()).unwrap_or_default(),
                    row.note
                );
            }
        }
    }
    Ok(0)
}

fn opt<T: std::fmt::Display>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn batch_row(cfg: &Config, n: u64) -> BatchRow {
    let mut row = BatchRow {
        n,
        sigma: None,
        q: None,
        v: None,
        epsilon: None,
        order: None,
        claim: None,
        note: String::new(),
    };
    let level = match cfg.level(n) {
        Ok(level) => level,
        Err(err) => {
            row.note = err.to_string();
            return row;
        }
    };
    row.sigma = Some(level.sigma());
    row.q = Some(level.q());
    row.v = Some(level.v());
    row.epsilon = Some(level.epsilon());
    match cfg.cache.load_or_compute(&level, cfg.budget) {
        Ok((group, _)) => {
            row.order = Some(group.order());
            match check_claim_al(&group) {
                Ok(outcome) => {
                    row.claim = Some(outcome.holds);
                    if let Some(witness) = outcome.witness {
                        row.note = witness.to_string();
                    }
                }
                Err(err) => row.note = err.to_string(),
            }
        }
        Err(err) => row.note = err.to_string(),
    }
    row
}

fn parse_range(text: &str) -> norm0::Result<(u64, u64)> {
    let parts: Vec<&str> = text.split("..").collect();
    let bad = || Error::InvalidInput(format!("range must look like `a..b`, got `{text}`"));
    let (lo, hi) = match parts.as_slice() {
        [single] => {
            let n = single.trim().parse::<u64>().map_err(|_| bad())?;
            (n, n)
        }
        [lo, hi] => (
            lo.trim().parse::<u64>().map_err(|_| bad())?,
            hi.trim().parse::<u64>().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    };
    if lo == 0 || hi < lo {
        return Err(Error::InvalidInput(format!(
            "range bounds must satisfy 1 <= a <= b, got `{text}`"
        )));
    }
    if hi - lo > 100_000 {
        return Err(Error::InvalidInput("range too large".into()));
    }
    Ok((lo, hi))
}

fn cmd_selftest(cfg: &Config) -> norm0::Result<i32> {
    let results = run_acceptance(cfg.budget);
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} [{:2}] {}: {}", i + 1, r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("selftest: all {} checks passed", results.len());
        Ok(0)
    } else {
        println!("selftest: {failed} of {} checks failed", results.len());
        Ok(1)
    }
}

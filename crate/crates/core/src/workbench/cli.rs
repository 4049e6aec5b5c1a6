//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification run found a genuine
//! mismatch, 2 for usage, config, or input errors.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::galois::FieldSpec;
use crate::lincode::{
    min_distance_auto, min_distance_bz, min_distance_exhaustive, row_space_basis, DistanceReport,
    EngineBudget, GenMatrix,
};
use crate::polyring::{enumerate_divisors, factorize_xn_minus_a, format_poly, parse_poly};
use crate::qtcore::{
    asr_distance_bound, asr_generate, rank_of_block, split_defining_polys, EnsembleSpec,
};
use crate::search::{format_rank_distribution, run_search, SearchConfig};

use super::fixtures::{load_fixtures, verify_table_entry, VerifyVerdict};
use super::records::{append_records, read_records};
use super::{load_bklc, WorkbenchError};

#[derive(Parser)]
#[command(
    name = "qtcodes",
    version,
    about = "Construct quasi-twisted codes from long constacyclic generators and verify distance claims"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^N - a over GF(q)
    Factor(FactorArgs),
    /// Split a long generator into defining polynomials for blocks of length m
    Split(SplitArgs),
    /// Certify the minimum distance of a generator matrix read from a file
    Mindist(MindistArgs),
    /// Enumerate and evaluate candidates from a JSON config
    Search(SearchArgs),
    /// Check claimed [n, k, d] rows from a fixture CSV
    Verify(VerifyArgs),
    /// Build a one-generator code from a base divisor and multipliers
    Asr(AsrArgs),
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long)]
    q: u8,
    #[arg(long, default_value_t = 1)]
    a: u8,
    /// Length N of x^N - a
    #[arg(long = "N")]
    n: usize,
    /// With a degree window, also list the divisors inside it
    #[arg(long)]
    deg_min: Option<usize>,
    #[arg(long)]
    deg_max: Option<usize>,
    /// Divisor listing size before seeded sampling kicks in
    #[arg(long, default_value_t = 1000)]
    cap: u64,
    /// Seed for the divisor sample beyond the cap
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    q: u8,
    #[arg(long, default_value_t = 1)]
    a: u8,
    /// Long length N
    #[arg(long = "N")]
    n: usize,
    /// Block length m (must divide N)
    #[arg(long)]
    m: usize,
    /// Long generator as a digit string, low degree first
    #[arg(long)]
    poly: String,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Auto,
    Exhaustive,
    Bz,
}

#[derive(Args)]
struct MindistArgs {
    /// Matrix file: first line q, then one digit row per generator row
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    engine: EngineChoice,
    /// Pattern/message cap (integer) or deadline (2h, 30m, 45s);
    /// QT_ENGINE_BUDGET supplies a default
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// JSON search config
    #[arg(long)]
    config: PathBuf,
    /// Record sink; overrides output_path from the config (stdout if neither)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip candidates whose keys already appear in the record file
    #[arg(long)]
    resume: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Fixture CSV of claimed codes
    #[arg(long)]
    fixtures: PathBuf,
    /// Check a single row by 1-based position
    #[arg(long)]
    row: Option<usize>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AsrArgs {
    #[arg(long)]
    q: u8,
    #[arg(long, default_value_t = 1)]
    a: u8,
    /// Block length m
    #[arg(long)]
    m: usize,
    /// Base generator, a divisor of x^m - a (digit string, low degree first)
    #[arg(long)]
    g: String,
    /// Multiplier polynomial, repeatable; one block per multiplier
    #[arg(long = "f", required = true)]
    multipliers: Vec<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    json: bool,
}

/// A bare integer caps both engines at that many messages/patterns; an
/// integer with an h/m/s suffix leaves the caps alone and sets a deadline.
pub fn parse_budget(text: &str) -> Result<EngineBudget, WorkbenchError> {
    let t = text.trim();
    let bad = || WorkbenchError::BadBudget(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let (head, unit) = t.split_at(t.len() - 1);
    let seconds = match unit {
        "h" => Some(3600u64),
        "m" => Some(60),
        "s" => Some(1),
        _ => None,
    };
    if let Some(mult) = seconds {
        let v: u64 = head.parse().map_err(|_| bad())?;
        return Ok(EngineBudget {
            deadline: Some(Duration::from_secs(v.checked_mul(mult).ok_or_else(bad)?)),
            ..EngineBudget::default()
        });
    }
    let v: u128 = t.parse().map_err(|_| bad())?;
    Ok(EngineBudget {
        exhaustive_messages: v,
        bz_patterns: v,
        deadline: None,
    })
}

/// CLI flag, then the QT_ENGINE_BUDGET environment variable, then defaults.
fn resolve_budget(flag: Option<&str>) -> Result<EngineBudget, WorkbenchError> {
    if let Some(s) = flag {
        return parse_budget(s);
    }
    match std::env::var("QT_ENGINE_BUDGET") {
        Ok(s) => parse_budget(&s),
        Err(_) => Ok(EngineBudget::default()),
    }
}

/// First content line is q; each following line is one row of digits.
/// Blank lines and # comments are ignored.
pub fn parse_matrix_file(path: &Path) -> Result<GenMatrix, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let err = |line: usize, msg: String| WorkbenchError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut field: Option<FieldSpec> = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match field {
            None => {
                let q: u8 =
                    line.parse().map_err(|_| err(line_no, format!("bad field order {line:?}")))?;
                field = Some(FieldSpec::new(q).map_err(|e| err(line_no, e.to_string()))?);
            }
            Some(f) => {
                let mut row = Vec::with_capacity(line.len());
                for ch in line.chars() {
                    let v = ch
                        .to_digit(10)
                        .filter(|&v| v < f.q() as u32)
                        .ok_or_else(|| {
                            err(line_no, format!("digit {ch:?} is not a GF({}) residue", f.q()))
                        })?;
                    row.push(v as u8);
                }
                rows.push(row);
            }
        }
    }
    let field = field.ok_or_else(|| err(1, "missing field order line".into()))?;
    GenMatrix::new(field, rows).map_err(WorkbenchError::from)
}

fn print_distance_report(q: u8, report: &DistanceReport, json: bool) {
    if json {
        let value = serde_json::json!({
            "q": q,
            "n": report.params.n,
            "k": report.params.k,
            "d": report.params.d,
            "engine": report.engine,
            "complete": report.complete,
            "work": report.work,
            "witness_weight": report.witness.weight,
            "witness": report.witness.codeword.iter().map(|c| c.to_string()).collect::<String>(),
        });
        println!("{value}");
    } else {
        println!(
            "[{}, {}] over GF({q}): d = {} (engine {}, work {}, witness weight {})",
            report.params.n,
            report.params.k,
            report.params.d,
            report.engine,
            report.work,
            report.witness.weight
        );
    }
}

fn cmd_factor(args: &FactorArgs) -> Result<i32, WorkbenchError> {
    let field = FieldSpec::new(args.q)?;
    let fm = factorize_xn_minus_a(field, args.n, args.a)?;
    let window = if args.deg_min.is_some() || args.deg_max.is_some() {
        let lo = args.deg_min.unwrap_or(0);
        let hi = args.deg_max.unwrap_or(args.n);
        Some((lo, hi, enumerate_divisors(&fm, lo, hi, args.cap, args.seed)?))
    } else {
        None
    };
    if args.json {
        let factors: Vec<_> = fm
            .factors
            .iter()
            .map(|(p, mult)| {
                serde_json::json!({
                    "poly": format_poly(p),
                    "degree": p.degree().unwrap_or(0),
                    "multiplicity": mult,
                })
            })
            .collect();
        let mut value = serde_json::json!({
            "q": args.q,
            "a": args.a,
            "N": args.n,
            "n_prime": fm.n_prime,
            "multiplicity": fm.multiplicity(),
            "factors": factors,
        });
        if let Some((lo, hi, div)) = &window {
            value["deg_min"] = serde_json::json!(lo);
            value["deg_max"] = serde_json::json!(hi);
            // the count can exceed u64; keep it as a decimal string
            value["divisor_total"] = serde_json::json!(div.total.to_string());
            value["truncated"] = serde_json::json!(div.truncated);
            value["divisors"] =
                serde_json::json!(div.divisors.iter().map(format_poly).collect::<Vec<_>>());
        }
        println!("{value}");
    } else {
        println!(
            "x^{} - {} over GF({}): {} distinct irreducible factors, each with multiplicity {}",
            args.n,
            args.a,
            args.q,
            fm.factors.len(),
            fm.multiplicity()
        );
        for (p, mult) in &fm.factors {
            println!("  {}  degree {:>3}  multiplicity {}", format_poly(p), p.degree().unwrap_or(0), mult);
        }
        if let Some((lo, hi, div)) = &window {
            let how = if div.truncated {
                format!("seeded sample of {}", div.divisors.len())
            } else {
                "complete".to_string()
            };
            println!("divisors with degree in [{lo}, {hi}]: {} total ({how})", div.total);
            for d in &div.divisors {
                println!("  {}  degree {:>3}", format_poly(d), d.degree().unwrap_or(0));
            }
        }
    }
    Ok(0)
}

fn cmd_split(args: &SplitArgs) -> Result<i32, WorkbenchError> {
    let field = FieldSpec::new(args.q)?;
    let spec = EnsembleSpec::new(field, args.a, args.n, args.m)?;
    let long_gen = parse_poly(field, &args.poly)?;
    let split = split_defining_polys(&long_gen, &spec)?;
    let mut hist = std::collections::BTreeMap::new();
    for g in &split.defs {
        *hist.entry(rank_of_block(g, args.m, args.a)?).or_insert(0usize) += 1;
    }
    let dist = format_rank_distribution(args.n, args.m, spec.p(), &hist);
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "q": args.q,
                "a": args.a,
                "N": args.n,
                "m": args.m,
                "p": spec.p(),
                "k": split.k,
                "standard": format_poly(&split.standard),
                "defs": split.defs.iter().map(format_poly).collect::<Vec<_>>(),
                "rank_distribution": dist,
            })
        );
    } else {
        println!("split of a degree-{} generator at N = {} = {}\u{b7}{}:", long_gen.degree().unwrap_or(0), args.n, args.m, spec.p());
        for (i, g) in split.defs.iter().enumerate() {
            println!("  g_{:<3} {}", i + 1, format_poly(g));
        }
        println!("standard generator D = {}", format_poly(&split.standard));
        println!("dimension k = {}", split.k);
        println!("rank distribution: {dist}");
    }
    Ok(0)
}

fn cmd_mindist(args: &MindistArgs) -> Result<i32, WorkbenchError> {
    let raw = parse_matrix_file(&args.matrix)?;
    // engines need a basis; dependent generator rows are reduced away
    let basis = row_space_basis(&raw)?;
    let budget = resolve_budget(args.budget.as_deref())?;
    let report = match args.engine {
        EngineChoice::Auto => min_distance_auto(&basis, &budget)?,
        EngineChoice::Exhaustive => min_distance_exhaustive(&basis, &budget)?,
        EngineChoice::Bz => min_distance_bz(&basis, &budget)?,
    };
    print_distance_report(basis.field().q(), &report, args.json);
    Ok(0)
}

fn cmd_search(args: &SearchArgs) -> Result<i32, WorkbenchError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| WorkbenchError::Io {
        path: args.config.clone(),
        source,
    })?;
    let config: SearchConfig =
        serde_json::from_str(&text).map_err(|e| WorkbenchError::Parse {
            path: args.config.clone(),
            line: e.line(),
            msg: e.to_string(),
        })?;
    let bklc = match &config.bklc_path {
        Some(p) => Some(load_bklc(p)?),
        None => None,
    };
    let out = args.out.clone().or_else(|| config.output_path.clone());
    let mut done = HashSet::new();
    if args.resume {
        match &out {
            Some(path) if path.exists() => {
                let scan = read_records(path, false)?;
                if !scan.corrupt.is_empty() {
                    eprintln!(
                        "warning: {} corrupt record line(s) ignored while resuming (first at line {})",
                        scan.corrupt.len(),
                        scan.corrupt[0].0
                    );
                }
                done = scan.done_keys();
            }
            Some(_) => {}
            None => {
                return Err(WorkbenchError::Parse {
                    path: args.config.clone(),
                    line: 0,
                    msg: "--resume needs an output path (flag or config)".into(),
                })
            }
        }
    }
    let mut emitted_here = 0usize;
    let stats = match &out {
        Some(path) => run_search(&config, bklc.as_ref(), &done, |record| {
            append_records(path, std::slice::from_ref(&record)).map_err(|e| {
                crate::search::SearchError::Config(format!("record sink failed: {e}"))
            })?;
            emitted_here += 1;
            Ok(())
        })?,
        None => run_search(&config, bklc.as_ref(), &done, |record| {
            println!(
                "{}",
                serde_json::to_string(&record).expect("records serialize")
            );
            emitted_here += 1;
            Ok(())
        })?,
    };
    eprintln!(
        "search finished: {} emitted, {} skipped as done{}",
        stats.emitted,
        stats.skipped,
        out.as_deref().map(|p| format!(" -> {}", p.display())).unwrap_or_default()
    );
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, WorkbenchError> {
    let rows = load_fixtures(&args.fixtures)?;
    let budget = resolve_budget(args.budget.as_deref())?;
    let selected: Vec<_> = match args.row {
        Some(pos) => {
            if pos == 0 || pos > rows.len() {
                return Err(WorkbenchError::Parse {
                    path: args.fixtures.clone(),
                    line: 0,
                    msg: format!("row {pos} out of range 1..={}", rows.len()),
                });
            }
            vec![(pos, rows[pos - 1].clone())]
        }
        None => rows.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect(),
    };
    let mut reports = Vec::new();
    let mut mismatches = 0usize;
    for (pos, row) in &selected {
        let report = verify_table_entry(row, &budget);
        if report.verdict == VerifyVerdict::Mismatch {
            mismatches += 1;
        }
        if !args.json {
            let mut detail = String::new();
            if let Some(c) = report.convention {
                detail.push_str(&format!(" via {c}"));
            }
            if let Some(outcome) = report.outcomes.iter().find(|o| Some(o.convention) == report.convention) {
                if let Some(d) = outcome.d {
                    detail.push_str(&format!(", certified d = {d}"));
                }
                if let Some(e) = outcome.engine {
                    detail.push_str(&format!(" ({e})"));
                }
            }
            if report.verdict == VerifyVerdict::InconsistentFixture {
                detail = format!(": {}", report.notes.join("; "));
            } else if report.verdict == VerifyVerdict::Mismatch {
                let why: Vec<_> =
                    report.outcomes.iter().filter_map(|o| o.note.clone()).collect();
                detail = format!(": {}", why.join("; "));
            }
            println!(
                "row {pos} (line {}) [{}, {}, {}]_{}: {}{}",
                row.line, row.n, row.k, row.d, row.q, report.verdict, detail
            );
        }
        reports.push(report);
    }
    if args.json {
        println!("{}", serde_json::to_string(&reports).expect("reports serialize"));
    }
    Ok(if mismatches > 0 { 1 } else { 0 })
}

fn cmd_asr(args: &AsrArgs) -> Result<i32, WorkbenchError> {
    let field = FieldSpec::new(args.q)?;
    let g = parse_poly(field, &args.g)?;
    let multipliers: Vec<_> = args
        .multipliers
        .iter()
        .map(|s| parse_poly(field, s))
        .collect::<Result<_, _>>()?;
    let budget = resolve_budget(args.budget.as_deref())?;
    let matrix = asr_generate(&g, &multipliers, args.m, args.a)?;
    let bound = asr_distance_bound(&g, multipliers.len(), args.m, args.a, &budget)?;
    let report = min_distance_auto(&matrix, &budget)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "q": args.q,
                "a": args.a,
                "m": args.m,
                "n": report.params.n,
                "k": report.params.k,
                "bound": bound,
                "d": report.params.d,
                "engine": report.engine,
                "bound_holds": report.params.d.low() >= bound,
            })
        );
    } else {
        println!(
            "[{}, {}] over GF({}): guaranteed d >= {}, certified d = {} (engine {})",
            report.params.n,
            report.params.k,
            args.q,
            bound,
            report.params.d,
            report.engine
        );
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, WorkbenchError> {
    match &cli.command {
        Command::Factor(args) => cmd_factor(args),
        Command::Split(args) => cmd_split(args),
        Command::Mindist(args) => cmd_mindist(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Asr(args) => cmd_asr(args),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            2
        }
    }
}

//! Batch front end: stable text/JSON output, deterministic given the seed,
//! CI-friendly exit codes — 0 all checks pass, 1 failed verification,
//! 2 usage error, 3 resource cap exceeded.

use std::fs;
use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use kha::flagk::{sod_check, verify_action, Composition, FlagCtx};
use kha::isomap::{graded_rank, intertwine_check, soundness_check, verify_relations, RankCaps};
use kha::shuffle::{DimVector, KHAElement};
use kha::uplus::{normal_form, BiGrade, UElement};

/// Caps keeping every invocation at desk scale.
const MAX_PRODUCT_TOTAL: u32 = 8;
const MAX_WORD_LEN: usize = 12;
const MAX_ISO_N: usize = 4;
const MAX_ISO_WINDOW: i64 = 6;
const MAX_FLAG_N: usize = 3;
const MAX_FLAG_BIG_N: u32 = 4;
const MAX_FLAG_WINDOW: i64 = 3;

#[derive(Parser)]
#[command(name = "kha", version, about = "Exact shuffle-algebra and flag-variety verifier")]
struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized suites (verify-iso).
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Shuffle product of two elements given as JSON files (`-` reads stdin).
    ShuffleMul {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Normal form of a combination in the `e[i,r]` grammar.
    Nf {
        #[arg(long)]
        word: String,
    },
    /// Image of a combination under phi, as a KHA element.
    Phi {
        #[arg(long)]
        word: String,
        /// Quiver size; defaults to the largest vertex in the word.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dimension table basis/formula/rank for m = 0..=m-max at one alpha.
    Dims {
        #[arg(long)]
        n: usize,
        /// Comma-separated dimension vector, e.g. `1,1`.
        #[arg(long)]
        alpha: String,
        #[arg(long = "m-max")]
        m_max: i64,
    },
    /// Relation suite plus seeded soundness/intertwining suites.
    VerifyIso {
        #[arg(long)]
        n: usize,
        /// Degree window `lo:hi`, e.g. `-3:3`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Equivariant K-theory checks on partial flag varieties.
    Flagk {
        #[command(subcommand)]
        cmd: FlagkCmd,
    },
}

#[derive(Subcommand)]
enum FlagkCmd {
    /// Categorical-action condition suite over all weights.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: u32,
        /// Degree window `lo:hi`, e.g. `-2:2`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Flip the sign in condition (2)(a); the suite must then fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Semiorthogonal-decomposition block checks at one weight.
    Sod {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: u32,
        /// Comma-separated weight; with n-1 entries the last block is
        /// inferred as N minus their sum (so `--k 2` with n=2, N=4 is `2,2`).
        #[arg(long)]
        k: String,
    },
}

enum CliError {
    Usage(String),
    Cap(String),
}

impl CliError {
    fn usage<T: std::fmt::Display>(msg: T) -> Self {
        CliError::Usage(msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Cap(msg)) => {
            eprintln!("resource cap: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Returns whether all checks passed; non-verification commands return true.
fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::ShuffleMul { n, lhs, rhs } => shuffle_mul(cli.format, *n, lhs, rhs),
        Command::Nf { word } => nf(cli.format, word),
        Command::Phi { word, n } => phi_cmd(cli.format, word, *n),
        Command::Dims { n, alpha, m_max } => dims(cli.format, *n, alpha, *m_max),
        Command::VerifyIso { n, window } => verify_iso(cli.format, *n, window, cli.seed),
        Command::Flagk { cmd } => match cmd {
            FlagkCmd::Verify { n, big_n, window, negative_control } => {
                flagk_verify(cli.format, *n, *big_n, window, *negative_control)
            }
            FlagkCmd::Sod { n, big_n, k } => flagk_sod(cli.format, *n, *big_n, k),
        },
    }
}

fn read_element(path: &str) -> Result<KHAElement, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(CliError::usage)?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(CliError::usage)?;
    KHAElement::from_json(&value).map_err(CliError::usage)
}

fn shuffle_mul(format: Format, n: usize, lhs: &str, rhs: &str) -> Result<bool, CliError> {
    let f = read_element(lhs)?;
    let g = read_element(rhs)?;
    if f.n() != n || g.n() != n {
        return Err(CliError::usage(format!(
            "elements have n = {} and {}, expected {n}",
            f.n(),
            g.n()
        )));
    }
    let total = |e: &KHAElement| e.components().map(|(g, _)| g.total()).max().unwrap_or(0);
    if total(&f) + total(&g) > MAX_PRODUCT_TOTAL {
        return Err(CliError::Cap(format!(
            "product grade total exceeds {MAX_PRODUCT_TOTAL}"
        )));
    }
    let product = f.shuffle_mul(&g).map_err(CliError::usage)?;
    match format {
        Format::Text => println!("{product}"),
        Format::Json => println!("{}", product.to_json()),
    }
    Ok(true)
}

fn parse_element(word: &str) -> Result<UElement, CliError> {
    let u = UElement::from_str(word).map_err(CliError::usage)?;
    if u.terms().any(|(w, _)| w.len() > MAX_WORD_LEN) {
        return Err(CliError::Cap(format!("word longer than {MAX_WORD_LEN} letters")));
    }
    Ok(u)
}

fn nf(format: Format, word: &str) -> Result<bool, CliError> {
    let u = parse_element(word)?;
    let normal = normal_form(&u);
    match format {
        Format::Text => println!("{normal}"),
        Format::Json => println!("{}", normal.to_json()),
    }
    Ok(true)
}

fn phi_cmd(format: Format, word: &str, n: Option<usize>) -> Result<bool, CliError> {
    let u = parse_element(word)?;
    let max_vertex = u
        .terms()
        .flat_map(|(w, _)| w.0.iter().map(|l| l.vertex as usize))
        .max()
        .unwrap_or(1);
    let n = n.unwrap_or(max_vertex);
    for (w, _) in u.terms() {
        let g = w.bigrade(n).map_err(CliError::usage)?;
        if g.alpha.total() > MAX_PRODUCT_TOTAL {
            return Err(CliError::Cap(format!(
                "term grade total exceeds {MAX_PRODUCT_TOTAL}"
            )));
        }
    }
    let image = kha::isomap::phi(n, &u).map_err(CliError::usage)?;
    match format {
        Format::Text => println!("{image}"),
        Format::Json => println!("{}", image.to_json()),
    }
    Ok(true)
}

fn parse_alpha(alpha: &str) -> Result<Vec<u32>, CliError> {
    alpha
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(CliError::usage))
        .collect()
}

fn dims(format: Format, n: usize, alpha: &str, m_max: i64) -> Result<bool, CliError> {
    let alpha = parse_alpha(alpha)?;
    if alpha.len() != n {
        return Err(CliError::usage(format!(
            "alpha has {} entries, expected n = {n}",
            alpha.len()
        )));
    }
    if m_max < 0 {
        return Err(CliError::usage("m-max must be non-negative"));
    }
    let caps = RankCaps::default();
    let grade = DimVector(alpha);
    if grade.total() > caps.max_alpha_sum || m_max > caps.max_m {
        return Err(CliError::Cap(format!(
            "|alpha| <= {} and m-max <= {} required",
            caps.max_alpha_sum, caps.max_m
        )));
    }
    let mut reports = Vec::new();
    for m in 0..=m_max {
        let g = BiGrade { alpha: grade.clone(), m };
        reports.push(graded_rank(&g, &caps).map_err(CliError::usage)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    match format {
        Format::Text => {
            println!("alpha={grade} (basis/formula/rank)");
            for r in &reports {
                let tag = if r.pass { "pass" } else { "FAIL" };
                println!("m={} {}/{}/{} {tag}", r.m, r.basis_size, r.formula_dim, r.phi_rank);
            }
        }
        Format::Json => {
            println!("{}", serde_json::json!({ "reports": reports, "pass": pass }));
        }
    }
    Ok(pass)
}

fn parse_window(window: &str, bound: i64) -> Result<(i64, i64), CliError> {
    let (lo, hi) = window
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("window `{window}` is not `lo:hi`")))?;
    let lo: i64 = lo.trim().parse().map_err(CliError::usage)?;
    let hi: i64 = hi.trim().parse().map_err(CliError::usage)?;
    if lo > hi {
        return Err(CliError::usage(format!("empty window {lo}:{hi}")));
    }
    if lo < -bound || hi > bound {
        return Err(CliError::Cap(format!("window must lie in [-{bound},{bound}]")));
    }
    Ok((lo, hi))
}

fn verify_iso(format: Format, n: usize, window: &str, seed: u64) -> Result<bool, CliError> {
    if n == 0 {
        return Err(CliError::usage("n must be positive"));
    }
    if n > MAX_ISO_N {
        return Err(CliError::Cap(format!("n <= {MAX_ISO_N} required")));
    }
    let window = parse_window(window, MAX_ISO_WINDOW)?;
    let relations = verify_relations(n, window).map_err(CliError::usage)?;
    let soundness = soundness_check(n, 100, seed).map_err(CliError::usage)?;
    let mut intertwine = Vec::new();
    for k in -2..=2i64 {
        intertwine.push(intertwine_check(n, k, 25, seed.wrapping_add(k as u64)).map_err(CliError::usage)?);
    }
    let pass = relations.pass && soundness.pass && intertwine.iter().all(|r| r.pass);
    match format {
        Format::Text => {
            let rel_failures = relations.checks.iter().filter(|c| !c.pass).count();
            println!(
                "relations n={n} window [{},{}]: {} checks, {rel_failures} failures",
                window.0,
                window.1,
                relations.checks.len()
            );
            println!(
                "soundness: {} samples, {} failures",
                soundness.samples, soundness.failures
            );
            let iw_failures: usize = intertwine.iter().map(|r| r.failures).sum();
            let iw_samples: usize = intertwine.iter().map(|r| r.samples).sum();
            println!("intertwine k=-2..2: {iw_samples} samples, {iw_failures} failures");
            println!("verify-iso: {}", if pass { "PASS" } else { "FAIL" });
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "relations": relations,
                    "soundness": soundness,
                    "intertwine": intertwine,
                    "pass": pass,
                })
            );
        }
    }
    Ok(pass)
}

fn check_flag_caps(n: usize, big_n: u32) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::usage("flagk needs n >= 2 (one generator index)"));
    }
    if big_n == 0 {
        return Err(CliError::usage("N must be positive"));
    }
    if n > MAX_FLAG_N || big_n > MAX_FLAG_BIG_N {
        return Err(CliError::Cap(format!(
            "n <= {MAX_FLAG_N} and N <= {MAX_FLAG_BIG_N} required"
        )));
    }
    Ok(())
}

fn flagk_verify(
    format: Format,
    n: usize,
    big_n: u32,
    window: &str,
    negative_control: bool,
) -> Result<bool, CliError> {
    check_flag_caps(n, big_n)?;
    let window = parse_window(window, MAX_FLAG_WINDOW)?;
    let ctx = FlagCtx::new(n, big_n);
    let report = verify_action(&ctx, window, negative_control).map_err(CliError::usage)?;
    match format {
        Format::Text => {
            let failures = report.checks.iter().filter(|c| !c.pass).count();
            println!(
                "action n={n} N={big_n} window [{},{}]: {} identities, {failures} failures",
                window.0,
                window.1,
                report.checks.len()
            );
            println!("flagk verify: {}", if report.pass { "PASS" } else { "FAIL" });
        }
        Format::Json => println!("{}", serde_json::to_value(&report).expect("serializable")),
    }
    Ok(report.pass)
}

fn flagk_sod(format: Format, n: usize, big_n: u32, k: &str) -> Result<bool, CliError> {
    check_flag_caps(n, big_n)?;
    let mut parts: Vec<i64> = k
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(CliError::usage))
        .collect::<Result<_, _>>()?;
    if parts.len() == n - 1 {
        let rest = big_n as i64 - parts.iter().sum::<i64>();
        parts.push(rest);
    }
    if parts.len() != n {
        return Err(CliError::usage(format!(
            "k has {} entries, expected {n} or {}",
            parts.len(),
            n - 1
        )));
    }
    if parts.iter().any(|&p| p < 0) || parts.iter().sum::<i64>() != big_n as i64 {
        return Err(CliError::usage(format!(
            "k = {parts:?} is not a composition of N = {big_n}"
        )));
    }
    let ctx = FlagCtx::new(n, big_n);
    let report = sod_check(&ctx, &Composition(parts)).map_err(CliError::usage)?;
    match format {
        Format::Text => {
            println!(
                "{} blocks, rank {}, fullness {}, {} ff-failures, {} so-failures ({} pairs)",
                report.blocks,
                report.rank,
                report.fullness,
                report.ff_failures,
                report.so_failures,
                report.pairs_checked
            );
            println!("flagk sod: {}", if report.pass { "PASS" } else { "FAIL" });
        }
        Format::Json => println!("{}", serde_json::to_value(&report).expect("serializable")),
    }
    Ok(report.pass)
}

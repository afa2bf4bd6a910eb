//! Command-line front end: compute certified bounds, verify certificates,
//! enumerate symmetry classes, and scan families.
//!
//! Exit status: 0 on success, 1 when verification fails, 2 on usage or
//! parse errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lengthbound::bounds::BoundContext;
use lengthbound::exploration;
use lengthbound::freegroup::Word;
use lengthbound::homogeneity::{self, MemoMode, ScheduleConfig};
use lengthbound::proofs::{self, EvalMode};

#[derive(Parser)]
#[command(
    name = "lengthbound",
    version,
    about = "Certified upper bounds for conjugacy-invariant length functions on the rank-2 free group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a certified bound and emit its proof.
    ///
    /// By default runs the full homogeneity pipeline for the commutator
    /// (max power 20, ks 1,2,6) and prints the bound; pass --word to bound a
    /// single word against an empty context instead.
    Bound(BoundArgs),
    /// Re-check a serialized proof tree independently of the engine.
    Verify(VerifyArgs),
    /// Count symmetry classes of cyclically reduced words of a given length.
    Enumerate(EnumerateArgs),
    /// Rank families a·b^k by their best usefulness ratio.
    Scan(ScanArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// Largest exponent used in the schedule and the final minimum (default 20).
    #[arg(long)]
    max_power: Option<u32>,
    /// Schedule k values, comma separated (default 1,2,6).
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<u32>>,
    /// Target word in the grammar (a|b|A|B)* (default abAB).
    #[arg(long)]
    target: Option<String>,
    /// Memo discipline for the schedule (default shared).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Additionally re-evaluate the winning proof in exact rationals and
    /// print the result as p/q.
    #[arg(long)]
    exact: bool,
    /// Bound this word against an empty context, bypassing homogeneity.
    #[arg(long)]
    word: Option<String>,
    /// Write the rendered proof lines here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the proof lines to this file and the machine-readable tree
    /// alongside it (same path with extension "tree", unless --tree is given).
    #[arg(long)]
    proof: Option<PathBuf>,
    /// Write the serialized proof tree to this file.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Read defaults from a key=value file (explicit flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Serialized proof tree to check.
    tree: PathBuf,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Word length to enumerate.
    #[arg(long)]
    length: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// Family list file: one `a=<word> b=<word>` per line.
    #[arg(long)]
    families: PathBuf,
    /// k sample grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    k_grid: Vec<u32>,
    /// n sample grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    n_grid: Vec<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Shared,
    Fresh,
}

impl From<ModeArg> for MemoMode {
    fn from(mode: ModeArg) -> MemoMode {
        match mode {
            ModeArg::Shared => MemoMode::Shared,
            ModeArg::Fresh => MemoMode::Fresh,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(args) => run_bound(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Enumerate(args) => run_enumerate(&args),
        Command::Scan(args) => run_scan(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run_bound(args: &BoundArgs) -> Result<ExitCode> {
    let (value, proof) = if let Some(text) = &args.word {
        let word = parse_word(text)?;
        BoundContext::new().bound(&word)
    } else {
        let mut cfg = ScheduleConfig::default();
        let mut mode = MemoMode::Shared;
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let overrides = homogeneity::parse_config(&text)?;
            if let Some(m) = overrides.mode {
                mode = m;
            }
            cfg = cfg.with_overrides(&overrides);
        }
        if let Some(n) = args.max_power {
            anyhow::ensure!(n >= 1, "--max-power must be at least 1");
            cfg.max_power = n;
        }
        if let Some(ks) = &args.ks {
            anyhow::ensure!(
                !ks.is_empty() && !ks.contains(&0),
                "--ks must be positive integers"
            );
            cfg.ks = ks.clone();
        }
        if let Some(target) = &args.target {
            cfg.target = parse_word(target)?;
        }
        if let Some(m) = args.mode {
            mode = m.into();
        }
        homogeneity::commutator_bound_with_mode(&cfg, mode)
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{}", value)?;
    if args.exact {
        writeln!(out, "{}", proof.evaluate_rational())?;
    }

    let lines = proofs::render_text(&proof, EvalMode::Float);
    let rendered = lines.join("\n") + "\n";
    match &args.output {
        Some(path) => write_file(path, &rendered)?,
        None => out.write_all(rendered.as_bytes())?,
    }

    let mut tree_path = args.tree.clone();
    if let Some(path) = &args.proof {
        write_file(path, &rendered)?;
        if tree_path.is_none() {
            tree_path = Some(path.with_extension("tree"));
        }
    }
    if let Some(path) = &tree_path {
        write_file(path, &proofs::serialize(&proof))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.tree)
        .with_context(|| format!("reading proof tree {}", args.tree.display()))?;
    let tree = proofs::deserialize(&text)
        .with_context(|| format!("parsing proof tree {}", args.tree.display()))?;
    match proofs::verify(&tree, &[]) {
        Ok(()) => {
            println!("ok");
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => {
            eprintln!("verification failed: {err}");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_enumerate(args: &EnumerateArgs) -> Result<ExitCode> {
    let classes = exploration::enumerate_classes(args.length)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{}", classes.len())?;
    for class in &classes {
        writeln!(
            out,
            "rep={} members={}",
            class.representative,
            class.members.unwrap_or(0)
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_scan(args: &ScanArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.families)
        .with_context(|| format!("reading family list {}", args.families.display()))?;
    let families = parse_families(&text)?;
    let rows = exploration::family_scan(&families, &args.k_grid, &args.n_grid);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for row in rows {
        writeln!(out, "{}", row)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses `a=<word> b=<word>` lines; `#` starts a comment.
fn parse_families(text: &str) -> Result<Vec<(Word, Word)>> {
    let mut families = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut parts = content.split_whitespace();
        let (a, b) = (parts.next(), parts.next());
        let trailing = parts.next();
        let (Some(a), Some(b), None) = (a, b, trailing) else {
            anyhow::bail!("family list line {line}: expected `a=<word> b=<word>`");
        };
        let a = a
            .strip_prefix("a=")
            .with_context(|| format!("family list line {line}: first field must start with a="))?;
        let b = b
            .strip_prefix("b=")
            .with_context(|| format!("family list line {line}: second field must start with b="))?;
        families.push((
            parse_word(a).with_context(|| format!("family list line {line}"))?,
            parse_word(b).with_context(|| format!("family list line {line}"))?,
        ));
    }
    Ok(families)
}

fn parse_word(text: &str) -> Result<Word> {
    Word::parse(text).with_context(|| format!("parsing word {text:?}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

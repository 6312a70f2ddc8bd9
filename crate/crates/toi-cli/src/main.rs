//! `toi` — command-line front end for the overlapped-batching pipeline.
//!
//! Typical flow: `ingest` a corpus into a binary token file, then `split`,
//! `batch`, `analyze`, `render`, or run the whole four-strategy `compare`.
//! Every command is deterministic given its flags; seeds are always
//! explicit.

mod compare;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use toi_core::{
    alleviated_split, apply_strategy, build_sequential, coprime_check, detect_row_duplicates,
    epoch_budget, ingest_ids, ingest_text, make_plan, pair_coverage, render_pgm, row_diversity,
    suggest_prime, write_ids, write_vocab_sidecar, BatchMatrix, ToiStrategy, TokenStream,
    TokenizeMode,
};

#[derive(Parser)]
#[command(name = "toi", version, about = "Overlapped data-point batching toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Whitespace,
    #[value(alias = "character")]
    Char,
}

impl From<Mode> for TokenizeMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Whitespace => TokenizeMode::Whitespace,
            Mode::Char => TokenizeMode::Character,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Distributed,
    Sequential,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize a corpus into a binary token file (plus vocab sidecar).
    Ingest {
        /// UTF-8 text input, tokenized per --mode.
        #[arg(long, conflicts_with = "ids")]
        text: Option<PathBuf>,
        /// Token-id input: binary token file or one id per line.
        #[arg(long)]
        ids: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "whitespace")]
        mode: Mode,
        /// Output token file; text inputs also get `<out>.vocab`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Suggest a prime batch size and check overlap counts against it.
    Plan {
        #[arg(long)]
        k: u64,
        /// Overlap counts to check, comma separated.
        #[arg(long, value_delimiter = ',')]
        p: Vec<usize>,
    },
    /// Cut a token file into overlapped data points and write the manifest.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        /// Tokens per data point.
        #[arg(long)]
        n: usize,
        /// Number of overlapped sequences.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Floor the step when n is not divisible by p.
        #[arg(long)]
        allow_nondivisible: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the plan as a key-value document.
        #[arg(long)]
        emit_plan: Option<PathBuf>,
    },
    /// Build a batch matrix under a strategy and write its manifest.
    Batch {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// standard | extreme:<seed> | interbatch:<seed> | alleviated:<P>
        #[arg(long)]
        strategy: String,
        /// Sequential layout is only defined for the standard strategy.
        #[arg(long, value_enum, default_value = "distributed")]
        layout: LayoutArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pair-coverage CSV plus period and epoch-budget reporting.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Batch size for the period report.
        #[arg(long)]
        k: Option<usize>,
        /// Baseline epoch count for the budget report.
        #[arg(long)]
        epochs: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a strategy's batch matrix as a binary PGM image.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run all four strategies and emit manifests, CSVs, PGMs, and a
    /// summary table.
    Compare {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Overlap count for the alleviated strategy (>= 2).
        #[arg(long)]
        alleviated: usize,
        /// Seed for the extreme and interbatch shuffles; no default.
        #[arg(long)]
        seed: u64,
        /// Baseline epoch count used for the fair-budget column.
        #[arg(long, default_value_t = 1000)]
        epochs: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Records every path this run creates so a failed command can remove its
/// partial outputs.
#[derive(Default)]
struct Outputs {
    files: Vec<PathBuf>,
    dirs: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path.to_owned());
        Ok(())
    }

    fn track(&mut self, path: &Path) {
        self.files.push(path.to_owned());
    }

    fn create_dir(&mut self, path: &Path) -> Result<()> {
        if !path.exists() {
            fs::create_dir_all(path)
                .with_context(|| format!("creating directory {}", path.display()))?;
            self.dirs.push(path.to_owned());
        }
        Ok(())
    }

    fn discard(self) {
        for file in &self.files {
            let _ = fs::remove_file(file);
        }
        for dir in self.dirs.iter().rev() {
            let _ = fs::remove_dir(dir);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let mut outputs = Outputs::default();
    if let Err(err) = run(cli.command, &mut outputs) {
        outputs.discard();
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn load_stream(path: &Path) -> Result<TokenStream> {
    ingest_ids(path).with_context(|| format!("reading token file {}", path.display()))
}

fn parse_strategy(s: &str) -> Result<ToiStrategy> {
    ToiStrategy::from_str(s).map_err(|e| anyhow!(e))
}

fn run(command: Command, outputs: &mut Outputs) -> Result<()> {
    match command {
        Command::Ingest { text, ids, mode, out } => cmd_ingest(text, ids, mode, &out, outputs),
        Command::Plan { k, p } => cmd_plan(k, &p),
        Command::Split { input, n, p, allow_nondivisible, out, emit_plan } => {
            cmd_split(&input, n, p, allow_nondivisible, &out, emit_plan.as_deref(), outputs)
        }
        Command::Batch { input, n, k, strategy, layout, out } => {
            cmd_batch(&input, n, k, &strategy, layout, &out, outputs)
        }
        Command::Analyze { input, n, p, k, epochs, out } => {
            cmd_analyze(&input, n, p, k, epochs, &out, outputs)
        }
        Command::Render { input, n, k, strategy, out } => {
            cmd_render(&input, n, k, &strategy, &out, outputs)
        }
        Command::Compare { input, n, k, alleviated, seed, epochs, out } => {
            compare::cmd_compare(&input, n, k, alleviated, seed, epochs, &out, outputs)
        }
    }
}

fn cmd_ingest(
    text: Option<PathBuf>,
    ids: Option<PathBuf>,
    mode: Mode,
    out: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    let stream = match (&text, &ids) {
        (Some(path), None) => ingest_text(path, mode.into())
            .with_context(|| format!("ingesting text {}", path.display()))?,
        (None, Some(path)) => load_stream(path)?,
        _ => bail!("pass exactly one of --text or --ids"),
    };
    write_ids(&stream, out).with_context(|| format!("writing {}", out.display()))?;
    outputs.track(out);
    println!("tokens={}", stream.len());
    if let Some(vocab) = stream.vocab() {
        let sidecar = sidecar_path(out);
        write_vocab_sidecar(vocab, &sidecar)
            .with_context(|| format!("writing {}", sidecar.display()))?;
        outputs.track(&sidecar);
        println!("vocab={} sidecar={}", vocab.len(), sidecar.display());
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".vocab");
    out.with_file_name(name)
}

fn cmd_plan(k: u64, overlap_counts: &[usize]) -> Result<()> {
    let prime = suggest_prime(k)?;
    println!("k={k} suggested_prime={prime}");
    for &p in overlap_counts {
        let orig = coprime_check(p, k as usize);
        let suggested = coprime_check(p, prime as usize);
        println!(
            "p={p}: k={k} coprime={} gcd={} period={} repetitions={} | k={prime} coprime={} gcd={} period={} repetitions={}",
            orig.coprime,
            orig.period.gcd,
            orig.period.period,
            orig.period.repetitions,
            suggested.coprime,
            suggested.period.gcd,
            suggested.period.period,
            suggested.period.repetitions,
        );
    }
    Ok(())
}

fn cmd_split(
    input: &Path,
    n: usize,
    p: usize,
    allow_nondivisible: bool,
    out: &Path,
    emit_plan: Option<&Path>,
    outputs: &mut Outputs,
) -> Result<()> {
    let stream = load_stream(input)?;
    let plan = make_plan(n, p, allow_nondivisible)?;
    if let Some(warning) = &plan.warning {
        eprintln!("warning: {warning}");
    }
    let seq = alleviated_split(&stream, &plan)?;
    outputs.write(out, seq.to_manifest_string().as_bytes())?;
    if let Some(plan_path) = emit_plan {
        outputs.write(plan_path, plan.to_kv_string().as_bytes())?;
    }
    println!(
        "tokens={} points={} per_sequence={:?}",
        stream.len(),
        seq.points.len(),
        seq.per_sequence_counts,
    );
    Ok(())
}

fn cmd_batch(
    input: &Path,
    n: usize,
    k: usize,
    strategy: &str,
    layout: LayoutArg,
    out: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    let stream = load_stream(input)?;
    let strategy = parse_strategy(strategy)?;
    let matrix = build_matrix(&stream, n, k, strategy, layout)?;
    outputs.write(out, matrix.to_manifest_string().as_bytes())?;
    println!(
        "batches={} k={} dropped={} layout={}",
        matrix.num_batches,
        matrix.batch_size,
        matrix.dropped,
        matrix.layout.as_str()
    );
    Ok(())
}

fn build_matrix(
    stream: &TokenStream,
    n: usize,
    k: usize,
    strategy: ToiStrategy,
    layout: LayoutArg,
) -> Result<BatchMatrix> {
    match layout {
        LayoutArg::Distributed => Ok(apply_strategy(stream, n, k, strategy)?),
        LayoutArg::Sequential => {
            if strategy != ToiStrategy::Standard {
                bail!("--layout sequential is only defined for the standard strategy");
            }
            if n == 0 || n > stream.len() {
                bail!(
                    "data points of n={n} tokens do not fit a stream of {} tokens",
                    stream.len()
                );
            }
            let points = toi_core::split_with_offset(stream, n, 0);
            Ok(build_sequential(&points, k)?)
        }
    }
}

fn cmd_analyze(
    input: &Path,
    n: usize,
    p: usize,
    k: Option<usize>,
    epochs: Option<u64>,
    out: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    let stream = load_stream(input)?;
    let plan = make_plan(n, p, false)?;
    let report = pair_coverage(stream.len(), &plan)?;
    outputs.write(out, report.to_csv_string().as_bytes())?;
    println!(
        "tokens={} n={n} p={p} step={} ratio={} pairs_at_p={} pairs_at_p_minus_1={} pairs_below={}",
        stream.len(),
        plan.step,
        report.toi_ratio,
        report.num_at_p,
        report.num_at_p_minus_1,
        report.num_below
    );
    if let Some(k) = k {
        let check = coprime_check(p, k);
        println!(
            "k={k} gcd={} coprime={} period={} repetitions={} suggested_prime={}",
            check.period.gcd,
            check.coprime,
            check.period.period,
            check.period.repetitions,
            suggest_prime(k as u64)?
        );
    }
    if let Some(baseline) = epochs {
        let budget = epoch_budget(baseline, p)?;
        println!(
            "baseline_epochs={baseline} alleviated_epochs={} remainder={}",
            budget.alleviated_epochs, budget.remainder
        );
    }
    Ok(())
}

fn cmd_render(
    input: &Path,
    n: usize,
    k: usize,
    strategy: &str,
    out: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    let stream = load_stream(input)?;
    let strategy = parse_strategy(strategy)?;
    let matrix = apply_strategy(&stream, n, k, strategy)?;
    render_pgm(&matrix, stream.len(), out)?;
    outputs.track(out);
    let diversity = row_diversity(&matrix, stream.len());
    let duplicates = detect_row_duplicates(&matrix, n);
    println!(
        "rows={} cols={} mean_distinct={:.3} mean_abs_diff={:.3} max_cluster={}",
        matrix.num_batches,
        matrix.batch_size,
        diversity.mean_distinct,
        diversity.mean_abs_diff,
        duplicates.max_cluster
    );
    Ok(())
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use linbench::balassa::{balassa_matrix, build_trade_matrix, export_matrix_csv, ingest_trade_csv};
use linbench::bench::{
    builtin_registry, digest_f64, run_suite_with, Job, KernelVariant, MonotonicClock, Preset, Registry,
    SuiteConfig, SuiteSelection, TaskResult,
};
use linbench::linalg::{lu_decompose, solve_naive, solve_smart, LinearSystem};
use linbench::report::{render_machine, render_markdown, Metadata, ReportDocument};
use linbench::validate::{run_oracles_with, ValidationConfig, DEFAULT_SEEDS};
use linbench::{Matrix, RngStream};

#[derive(Parser, Debug)]
#[command(name = "linbench", version, about = "Dense linear-algebra kernels and median-time benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the benchmark suite and print rank tables.
    Run(RunArgs),
    /// Check every kernel against its reference implementation.
    Validate(ValidateArgs),
    /// Time A⁻¹B against an LU solve on a planted system.
    Solve(SolveArgs),
    /// Compute Balassa indices from a country,product,value CSV.
    Balassa(BalassaArgs),
    /// List registered tasks and variants.
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Att,
    Solve,
    Balassa,
    All,
}

impl From<SuiteArg> for SuiteSelection {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Att => SuiteSelection::Att,
            SuiteArg::Solve => SuiteSelection::Solve,
            SuiteArg::Balassa => SuiteSelection::Balassa,
            SuiteArg::All => SuiteSelection::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Local,
    Cluster,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Local => Preset::Local,
            PresetArg::Cluster => Preset::Cluster,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Json,
    Csv,
}

fn positive_scale(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("scale must be a positive number, got {s}"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        Ok(_) => Err("must be at least 1".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Multiplier on every base size.
    #[arg(long, default_value = "1.0", value_parser = positive_scale)]
    scale: f64,
    #[arg(long, value_enum, default_value = "local")]
    preset: PresetArg,
    /// Comma-separated variant names; default runs all.
    #[arg(long, value_delimiter = ',')]
    variants: Vec<String>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 1)]
    warmups: usize,
    #[arg(long, env = "LINBENCH_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include input generation in the timed region.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    time_generation: bool,
    /// Free-text host description for the report metadata.
    #[arg(long, default_value = "")]
    host: String,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(clap::Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value_t = DEFAULT_SEEDS, value_parser = at_least_one)]
    seeds: usize,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long, default_value_t = 200, value_parser = at_least_one)]
    n: usize,
    #[arg(long, default_value_t = 20, value_parser = at_least_one)]
    m: usize,
    #[arg(long, env = "LINBENCH_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 1)]
    warmups: usize,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct BalassaArgs {
    /// CSV with header country,product,value.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out_b: Option<PathBuf>,
    #[arg(long)]
    out_s: Option<PathBuf>,
    /// Also time the kernel and print a rank table.
    #[arg(long)]
    bench: bool,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, env = "LINBENCH_SEED", default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Balassa(a) => cmd_balassa(a),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn metadata(cfg: &SuiteConfig, host: &str) -> Metadata {
    let mut m = Metadata::new(cfg.seed, cfg.scale_factor, cfg.repetitions, cfg.warmups);
    m.include_generation_in_timing = cfg.include_generation_in_timing;
    m.timestamp = timestamp();
    m.host = host.to_string();
    m
}

fn render(doc: &ReportDocument, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Md => render_markdown(doc),
        Format::Json => render_machine(doc, "json")?,
        Format::Csv => render_machine(doc, "csv")?,
    })
}

/// Temp file in the target directory, then rename, so readers never see a
/// partial report.
fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn progress(quiet: bool) -> impl FnMut(&TaskResult) {
    move |r: &TaskResult| {
        if quiet {
            return;
        }
        match (&r.stats, &r.error) {
            (Some(s), _) => eprintln!("{:>14} {:<11} median {:.6} s", r.task_id, r.variant, s.median),
            (None, Some(e)) => eprintln!("{:>14} {:<11} FAILED: {e}", r.task_id, r.variant),
            _ => {}
        }
    }
}

fn cmd_run(a: RunArgs) -> anyhow::Result<ExitCode> {
    let registry = builtin_registry();
    let selection = SuiteSelection::from(a.suite);
    let cfg = SuiteConfig {
        seed: a.seed,
        repetitions: a.reps as usize,
        warmups: a.warmups,
        scale_factor: a.scale * Preset::from(a.preset).factor(),
        variant_filter: a.variants,
        task_filter: selection.task_ids(&registry),
        include_generation_in_timing: a.time_generation,
    };
    let results = run_suite_with(&registry, &cfg, &MonotonicClock::default(), progress(a.quiet))?;
    if results.is_empty() {
        bail!("no task/variant matched the selection");
    }
    let doc = ReportDocument::from_results(metadata(&cfg, &a.host), results);
    emit(&render(&doc, a.format)?, a.out.as_deref())?;
    Ok(if doc.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_validate(a: ValidateArgs) -> anyhow::Result<ExitCode> {
    let cfg = ValidationConfig { seeds: a.seeds, inject_fault: a.inject_fault, ..ValidationConfig::default() };
    let start = Instant::now();
    let outcomes = run_oracles_with(&cfg, |o| println!("{o}"));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} of {} oracles passed ({} seeds each) in {:.2} s",
        outcomes.len() - failed,
        outcomes.len(),
        a.seeds,
        start.elapsed().as_secs_f64()
    );
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

const MAX_REROLLS: u64 = 3;

fn planted_system(seed: u64, n: usize, m: usize) -> anyhow::Result<LinearSystem<f64>> {
    for attempt in 0..=MAX_REROLLS {
        let mut rng = RngStream::for_run(seed, "solve-check", attempt);
        let sys = LinearSystem::<f64>::planted(&mut rng, n, m)?;
        if lu_decompose(&sys.a).is_ok() {
            return Ok(sys);
        }
        eprintln!("singular draw, re-rolling ({}/{MAX_REROLLS})", attempt + 1);
    }
    bail!("no non-singular system after {MAX_REROLLS} re-rolls")
}

fn solve_registry(n: usize, m: usize) -> anyhow::Result<Registry> {
    let builtin = builtin_registry();
    let task = builtin.task("solve").context("built-in solve task")?;
    let mut reg = Registry::new();
    reg.add_task(task.resized(n, Some(m)))?;
    for v in task.variants() {
        reg.add_variant(v.clone())?;
    }
    Ok(reg)
}

fn cmd_solve(a: SolveArgs) -> anyhow::Result<ExitCode> {
    let sys = planted_system(a.seed, a.n, a.m)?;
    let x_true = sys.x_true.as_ref().expect("planted system");
    let smart = solve_smart(&sys)?;
    let naive = solve_naive(&sys)?;
    let err_smart = smart.rel_frobenius_diff(x_true)?;
    let err_naive = naive.rel_frobenius_diff(x_true)?;
    let agreement = smart.rel_frobenius_diff(&naive)?;

    let reg = solve_registry(a.n, a.m)?;
    let cfg = SuiteConfig {
        seed: a.seed,
        repetitions: a.reps as usize,
        warmups: a.warmups,
        ..SuiteConfig::default()
    };
    let results = run_suite_with(&reg, &cfg, &MonotonicClock::default(), progress(false))?;
    let doc = ReportDocument::from_results(metadata(&cfg, ""), results);
    print!("{}", render(&doc, a.format)?);
    if matches!(a.format, Format::Md) {
        println!();
        println!("Relative error vs planted solution:");
        println!("- reference (LU solve): {err_smart:.3e}");
        println!("- naive (inverse times B): {err_naive:.3e}");
        println!("- agreement between methods: {agreement:.3e}");
    } else {
        eprintln!("relative error: reference {err_smart:.3e}, naive {err_naive:.3e}, agreement {agreement:.3e}");
    }
    Ok(if doc.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_balassa(a: BalassaArgs) -> anyhow::Result<ExitCode> {
    let table = ingest_trade_csv(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let trade = build_trade_matrix(&table)?;
    let result = balassa_matrix(&trade)?;
    let (c, p) = trade.x.shape();
    let advantages = result.s.as_slice().iter().filter(|&&v| v == 1.0).count();
    eprintln!(
        "{} flows, {c} countries × {p} products, {advantages} cells with B ≥ 1",
        table.len()
    );

    let write = |m: &Matrix, path: &Path| -> anyhow::Result<()> {
        let tmp_dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let tmp = tempfile::NamedTempFile::new_in(tmp_dir)?;
        export_matrix_csv(m, &trade.countries, &trade.products, tmp.path())?;
        tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    };
    if let Some(path) = &a.out_b {
        write(&result.b, path)?;
    }
    if let Some(path) = &a.out_s {
        write(&result.s, path)?;
    }

    if a.bench {
        let builtin = builtin_registry();
        let task = builtin.task("balassa").context("built-in balassa task")?;
        let mut reg = Registry::new();
        reg.add_task(task.resized(c, Some(p)))?;
        let shared = Arc::new(trade);
        reg.add_variant(KernelVariant::new("balassa", "reference", move |_: &mut RngStream, _| {
            let t = Arc::clone(&shared);
            Ok(Box::new(move || Ok(digest_f64(balassa_matrix(&t)?.b))) as Job)
        }))?;
        let cfg = SuiteConfig { seed: a.seed, repetitions: a.reps as usize, ..SuiteConfig::default() };
        let results = run_suite_with(&reg, &cfg, &MonotonicClock::default(), |_| {})?;
        let doc = ReportDocument::from_results(metadata(&cfg, ""), results);
        print!("{}", render_markdown(&doc));
        if !doc.failures.is_empty() {
            return Ok(ExitCode::FAILURE);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_list() -> anyhow::Result<ExitCode> {
    let reg = builtin_registry();
    for t in reg.tasks() {
        let sizes = t.sizes(1.0)?;
        let variants: Vec<_> = t.variants().iter().map(|v| v.variant_name.as_str()).collect();
        println!("{:<14} {:<24} {}  [{}]", t.id, t.group.title(), t.label(&sizes), variants.join(", "));
    }
    Ok(ExitCode::SUCCESS)
}

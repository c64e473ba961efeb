//! `cogrelay` — rate analysis of buffer-aided relaying in underlay cognitive
//! radio networks.
//!
//! Subcommands:
//! * `sweep`    — evaluate scheme rates over a geometry sweep, write CSV;
//! * `figure`   — reproduce one of the reference figure datasets (2–5);
//! * `validate` — run the validation suites; exits non-zero on any failure.
//!
//! Output goes to `--output`; when omitted, a default file name is used
//! inside `$COGRELAY_OUTPUT_DIR` (or the working directory). `--output -`
//! writes to stdout.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cogrelay_cli::{checks, config, figures, sweep};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cogrelay", version, about = "Buffer-aided cognitive relay rate analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and emit the dataset as CSV.
    Sweep(SweepArgs),
    /// Reproduce a reference figure dataset (2, 3, 4 or 5).
    Figure(FigureArgs),
    /// Run validation suites (closed forms, Monte Carlo, asymptotics).
    Validate(ValidateArgs),
}

#[derive(Args)]
struct Overrides {
    /// Config file (flat key=value with `[section]` headers); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// System SNR gamma_max in dB.
    #[arg(long)]
    gamma_max_db: Option<f64>,
    /// Interference-to-noise ratio gamma_p in dB.
    #[arg(long)]
    gamma_p_db: Option<f64>,
    /// Path-loss exponent (>= 2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Source-relay distance.
    #[arg(long)]
    d_sr: Option<f64>,
    /// Relay-destination distance.
    #[arg(long)]
    d_rd: Option<f64>,
    /// Source-primary distance sweep: comma list or start:stop:step.
    #[arg(long)]
    d_sp: Option<String>,
    /// Relay-primary distances: comma list.
    #[arg(long)]
    d_rp: Option<String>,
    /// Add Monte Carlo validation columns.
    #[arg(long)]
    mc: bool,
    /// Simulated slots per Monte Carlo run.
    #[arg(long)]
    slots: Option<u64>,
    /// Base random seed (row seeds derive deterministically from it).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; '-' for stdout. Defaults to a per-command file name
    /// under $COGRELAY_OUTPUT_DIR (or the working directory).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure id: 2 (rate), 3 (threshold), 4 (CUBR ratio), 5 (CBR ratio).
    id: u8,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Montecarlo,
    Asymptotic,
    All,
}

#[derive(Args)]
struct ValidateArgs {
    /// Which suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Slots per Monte Carlo run.
    #[arg(long, default_value_t = 1_000_000)]
    slots: u64,
    /// Random seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override: relative tolerance for closed-form oracle checks.
    #[arg(long)]
    oracle_tol: Option<f64>,
    /// Override: absolute tolerance for the joint-CCDF deviation.
    #[arg(long)]
    ccdf_tol: Option<f64>,
    /// Override: relative tolerance for asymptotic agreement.
    #[arg(long)]
    asym_tol: Option<f64>,
    /// Override: relative floor for Monte Carlo agreement.
    #[arg(long)]
    mc_tol: Option<f64>,
}

fn build_config(ov: &Overrides) -> Result<config::ExperimentConfig, String> {
    let mut cfg = match &ov.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            config::parse_config(&text).map_err(|e| e.to_string())?
        }
        None => config::ExperimentConfig::default(),
    };
    if let Some(v) = ov.gamma_max_db {
        cfg.gamma_max_db = v;
    }
    if let Some(v) = ov.gamma_p_db {
        cfg.gamma_p_db = v;
    }
    if let Some(v) = ov.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = ov.d_sr {
        cfg.d_sr = v;
    }
    if let Some(v) = ov.d_rd {
        cfg.d_rd = v;
    }
    if let Some(v) = &ov.d_sp {
        cfg.d_sp = config::parse_number_list(v, 0).map_err(|e| e.to_string())?;
    }
    if let Some(v) = &ov.d_rp {
        cfg.d_rp = config::parse_number_list(v, 0).map_err(|e| e.to_string())?;
    }
    if ov.mc || ov.slots.is_some() || ov.seed.is_some() {
        let mut mc = cfg.mc.unwrap_or_default();
        if let Some(s) = ov.slots {
            mc.slots = s;
        }
        if let Some(s) = ov.seed {
            mc.seed = s;
        }
        cfg.mc = Some(mc);
    }
    if let Some(path) = &ov.output {
        cfg.output = Some(path.clone());
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Resolve where a dataset goes: explicit path, or the default file name
/// under $COGRELAY_OUTPUT_DIR / the working directory. `-` means stdout.
fn resolve_output(cfg_path: Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    match cfg_path {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p),
        None => {
            let dir = std::env::var_os("COGRELAY_OUTPUT_DIR")
                .map(PathBuf::from)
                .unwrap_or_default();
            Some(dir.join(default_name))
        }
    }
}

fn emit_csv(
    cfg: &config::ExperimentConfig,
    rows: &[sweep::SweepRow],
    extra_meta: &[String],
    default_name: &str,
) -> Result<(), String> {
    let target = resolve_output(cfg.output.clone(), default_name);
    let mut buffer = Vec::new();
    sweep::write_csv(&mut buffer, cfg, rows, extra_meta).map_err(|e| e.to_string())?;
    match target {
        None => std::io::stdout()
            .write_all(&buffer)
            .map_err(|e| e.to_string()),
        Some(path) => {
            fs::write(&path, &buffer).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
            Ok(())
        }
    }
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<ExitCode, String> {
    let cfg = build_config(&args.overrides)?;
    let rows = sweep::run_sweep(&cfg);
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    emit_csv(&cfg, &rows, &[], "sweep.csv")?;
    if failures > 0 {
        eprintln!("{failures} sweep point(s) failed; see the status column");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_figure_cmd(args: &FigureArgs) -> Result<ExitCode, String> {
    let cfg = build_config(&args.overrides)?;
    let dataset = figures::reproduce_figure(args.id, &cfg)?;
    let name = format!("figure{}.csv", args.id);
    emit_csv(&cfg, &dataset.rows, &dataset.metadata, &name)?;
    Ok(ExitCode::SUCCESS)
}

fn run_validate_cmd(args: &ValidateArgs) -> Result<ExitCode, String> {
    let mut tol = checks::Tolerances::default();
    if let Some(v) = args.oracle_tol {
        tol.oracle_rel = v;
    }
    if let Some(v) = args.ccdf_tol {
        tol.ccdf_abs = v;
    }
    if let Some(v) = args.asym_tol {
        tol.asym_rel = v;
    }
    if let Some(v) = args.mc_tol {
        tol.mc_rel = v;
    }
    let mc = config::McConfig {
        slots: args.slots,
        seed: args.seed,
    };

    let mut results = Vec::new();
    if matches!(args.suite, Suite::Oracle | Suite::All) {
        results.extend(checks::oracle_suite(&tol));
    }
    if matches!(args.suite, Suite::Asymptotic | Suite::All) {
        results.extend(checks::asymptotic_suite(&tol));
    }
    if matches!(args.suite, Suite::Montecarlo | Suite::All) {
        results.extend(checks::montecarlo_suite(&mc, &tol));
    }

    for r in &results {
        r.print_line();
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} checks, {} failed",
        results.len(),
        failed
    );
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => run_sweep_cmd(args),
        Command::Figure(args) => run_figure_cmd(args),
        Command::Validate(args) => run_validate_cmd(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

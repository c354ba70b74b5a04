use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orlicz_cli::commands::{self, Outcome, SeminormRequest};
use orlicz_cli::{acceptance, parse_young, CliError, Format, RunConfig};
use orlicz_core::TrialKind;

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Embeddings of fractional Orlicz-Sobolev spaces into spaces of continuous functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Young function: `power:p=5`, `powerlog:p0=2,alpha0=0,p=4,alpha=4`,
    /// `exp:gamma0=-1,gamma=1`, `table:path=a.csv`, `linfty`, or a JSON descriptor.
    #[arg(long)]
    young: String,
    /// Dimension.
    #[arg(long)]
    n: u32,
    /// Smoothness (not an integer).
    #[arg(long)]
    s: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Clone)]
struct Grid {
    /// Tables span r ∈ [10^-d, 10^d].
    #[arg(long, default_value_t = 8)]
    grid_decades: u32,
    #[arg(long, default_value_t = 4)]
    points_per_decade: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrialArg {
    Radial,
    RadialHigher,
    Odd,
    ScalingFamily,
}

impl From<TrialArg> for TrialKind {
    fn from(t: TrialArg) -> Self {
        match t {
            TrialArg::Radial => TrialKind::Radial,
            TrialArg::RadialHigher => TrialKind::RadialHigher,
            TrialArg::Odd => TrialKind::Odd,
            TrialArg::ScalingFamily => TrialKind::ScalingFamily,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Quadrature,
    MonteCarlo,
}

#[derive(Subcommand)]
enum Command {
    /// Regime, gate verdicts and admissibility (exit 0 embedding, 1 bad input,
    /// 2 no embedding, 3 inadmissible, 4 inconclusive).
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Table of r, ϑ_s, ϱ_s, σ_s and the regime.
    SigmaTable {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// A, its conjugate and both inverses on a log grid.
    Conjugate {
        #[arg(long)]
        young: String,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Check every closed-form example row; exit 0 iff all pass.
    VerifyExamples {
        /// Override the ratio bound of the equivalence test.
        #[arg(long)]
        tol_ratio: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Gagliardo modular and seminorm of a trial function.
    Seminorm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "radial")]
        trial: TrialArg,
        /// Profile CSV (r, value); defaults to the indicator of (0, 1).
        #[arg(long)]
        profile: Option<String>,
        /// Scale k of the scaling family.
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, value_enum, default_value = "quadrature")]
        estimator: EstimatorArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Required for Monte Carlo.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run acceptance criteria (all, or the listed ids).
    Acceptance {
        ids: Vec<u8>,
        #[command(flatten)]
        output: Output,
    },
}

fn config(c: &Common, grid: Option<&Grid>, tol_ratio: Option<f64>, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let (d, ppd) = grid.map(|g| (g.grid_decades, g.points_per_decade)).unwrap_or((8, 4));
    RunConfig::new(&c.young, c.n, c.s, d, ppd, tol_ratio, seed, c.output.format)
}

fn dispatch(cmd: Command) -> Result<(Outcome, Output), CliError> {
    match cmd {
        Command::Classify { common } => {
            let cfg = config(&common, None, None, None)?;
            Ok((commands::classify(&cfg), common.output))
        }
        Command::SigmaTable { common, grid } => {
            let cfg = config(&common, Some(&grid), None, None)?;
            Ok((commands::sigma_table(&cfg)?, common.output))
        }
        Command::Conjugate { young, grid, output } => {
            let a = parse_young(&young)?;
            if grid.grid_decades == 0 || grid.points_per_decade == 0 {
                return Err(CliError::config("grid-decades", "grid must have at least one decade and one point per decade"));
            }
            Ok((commands::conjugate(&a, grid.grid_decades, grid.points_per_decade, output.format), output))
        }
        Command::VerifyExamples { tol_ratio, output } => {
            if let Some(t) = tol_ratio {
                if !(t > 1.0) {
                    return Err(CliError::config("tol-ratio", format!("must exceed 1, got {t}")));
                }
            }
            Ok((commands::verify_examples(tol_ratio, output.format)?, output))
        }
        Command::Seminorm { common, trial, profile, k, estimator, samples, seed } => {
            let cfg = config(&common, None, None, seed)?;
            let req = SeminormRequest {
                trial: trial.into(),
                profile,
                scale: k,
                monte_carlo: matches!(estimator, EstimatorArg::MonteCarlo),
                samples,
            };
            Ok((commands::seminorm_cmd(&cfg, &req)?, common.output))
        }
        Command::Acceptance { ids, output } => {
            if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
                return Err(CliError::config("ids", format!("criteria are numbered 1..=12, got {bad}")));
            }
            let results: Vec<_> = if ids.is_empty() { acceptance::run_all() } else { ids.iter().map(|&i| acceptance::run(i)).collect() };
            let exit = if results.iter().all(|r| r.pass) { 0 } else { 1 };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&results).expect("serialisable") + "\n",
                Format::Csv => results.iter().map(|r| format!("{r}\n")).collect(),
            };
            Ok((Outcome { text, exit }, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok((outcome, output)) => {
            match &output.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &outcome.text) {
                        let err = CliError::Io { path: path.clone(), source: e };
                        eprintln!("error: {err}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

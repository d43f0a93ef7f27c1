use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ctqw_qaoa_cli::config::{ExperimentKind, OrderSpec, RawConfig};
use ctqw_qaoa_cli::{execute, ErrorRecord, Exit};

#[derive(Parser)]
#[command(name = "ctqw-qaoa", version, about = "Trotterized quantum-walk QAOA experiments", allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Overlap with the target through the trotterized circuit, with Grover and walk references.
    OverlapTrace(CommonArgs),
    /// Numeric optimal depth by grid refinement of the step count.
    DepthSearch(CommonArgs),
    /// Analytic depth, optimal order and closed-form depth.
    AnalyticDepth(CommonArgs),
    /// Analytic over numeric depth ratios, minimised over orders.
    RatioSweep(CommonArgs),
    /// Grover iterate overlaps against the closed form.
    GroverCurve(CommonArgs),
    /// Measured spectral error against the analytic error bound.
    BoundCheck(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Qubit count.
    #[arg(long)]
    n: Option<usize>,
    /// Inclusive qubit range START..END or START..END:STEP.
    #[arg(long)]
    n_range: Option<String>,
    /// Error budget in (0, 1).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Comma-separated error budgets.
    #[arg(long, value_delimiter = ',')]
    epsilon_list: Option<Vec<f64>>,
    /// Even formula order or `auto`.
    #[arg(long)]
    order: Option<String>,
    /// Trace points (overlap-trace) or doublings of r (bound-check).
    #[arg(long)]
    samples: Option<usize>,
    /// CSV output path; the JSON sidecar sits next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys as these flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads [default: available processors].
    #[arg(long)]
    workers: Option<usize>,
    /// Marked bit string of length n.
    #[arg(long)]
    target: Option<String>,
    /// Grid refinement levels for the numeric search.
    #[arg(long)]
    iterations: Option<u32>,
    /// Grover iterations (grover-curve).
    #[arg(long)]
    k_max: Option<u64>,
}

impl CommonArgs {
    fn split(self) -> (RawConfig, Option<PathBuf>) {
        let raw = RawConfig {
            experiment: None,
            n: self.n,
            n_range: self.n_range,
            epsilon: self.epsilon,
            epsilon_list: self.epsilon_list,
            order: self.order.map(OrderSpec::Text),
            samples: self.samples,
            out: self.out,
            workers: self.workers,
            target: self.target,
            iterations: self.iterations,
            k_max: self.k_max,
        };
        (raw, self.config)
    }
}

fn fail(record: &ErrorRecord) -> ExitCode {
    eprintln!("{}", serde_json::to_string(record).expect("error record serialises"));
    ExitCode::from(record.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => return fail(&ErrorRecord::new(Exit::Usage, vec![err.to_string()])),
    };
    let (kind, args) = match cli.command {
        Command::OverlapTrace(a) => (ExperimentKind::OverlapTrace, a),
        Command::DepthSearch(a) => (ExperimentKind::DepthSearch, a),
        Command::AnalyticDepth(a) => (ExperimentKind::AnalyticDepth, a),
        Command::RatioSweep(a) => (ExperimentKind::RatioSweep, a),
        Command::GroverCurve(a) => (ExperimentKind::GroverCurve, a),
        Command::BoundCheck(a) => (ExperimentKind::BoundCheck, a),
    };
    let (raw, config_file) = args.split();
    match execute(kind, raw, config_file.as_deref()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(record) => fail(&record),
    }
}

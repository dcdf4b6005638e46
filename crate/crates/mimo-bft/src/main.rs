use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mimo_bft::harness::{
    points_to_csv, run_figure, run_sweep, run_validate, CurvePoint, ExperimentConfig,
    FigureOverrides,
};
use mimo_bft::rates::{monte_carlo_rate, se_bft, RateMode};
use mimo_bft::{params::db_to_linear, SimError, SystemParams};

#[derive(Parser)]
#[command(name = "mimo-bft", about = "Massive MU-MIMO downlink beamforming-training simulator", version)]
struct Cli {
    /// Master seed for all Monte Carlo draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo trial count (defaults: 10000 for curves, 100000 for validate).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Output file path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce one of the reference curves (fig2..fig5) as CSV.
    Figure {
        /// fig2 | fig3 | fig4 | fig5
        name: String,
        /// Override the SNR grid, comma-separated dB values.
        #[arg(long, value_delimiter = ',')]
        snr: Option<Vec<f64>>,
        /// Override the coherence-interval grid (fig4).
        #[arg(long, value_delimiter = ',')]
        t_grid: Option<Vec<f64>>,
        /// Override the antenna counts.
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
    },
    /// Run a sweep described by a JSON config file.
    Sweep {
        #[arg(long)]
        config: String,
    },
    /// Evaluate a single operating point.
    Rate(RateArgs),
    /// Run the statistical validation suite; exit 1 on any failed check.
    Validate(ScenarioArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    t: usize,
    /// Uplink pilot length (defaults to K).
    #[arg(long)]
    tau_u: Option<usize>,
    /// Downlink pilot length (defaults to K).
    #[arg(long)]
    tau_d: Option<usize>,
    /// Uplink pilot power, linear.
    #[arg(long, default_value_t = 1.0)]
    p_u: f64,
    /// Downlink SNR in dB.
    #[arg(long, default_value_t = 20.0)]
    snr_db: f64,
}

impl ScenarioArgs {
    fn params(&self) -> SystemParams {
        SystemParams {
            m: self.m,
            k: self.k,
            t: self.t,
            tau_u: self.tau_u.unwrap_or(self.k),
            tau_d: self.tau_d.unwrap_or(self.k),
            p_u: self.p_u,
            p_d: db_to_linear(self.snr_db),
        }
    }
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// bft_mrt | bft_zf | genie_mrt | genie_zf
    #[arg(long, default_value = "bft_mrt")]
    mode: String,
}

fn parse_mode(s: &str) -> Result<RateMode, SimError> {
    match s {
        "bft_mrt" => Ok(RateMode::BftMrt),
        "bft_zf" => Ok(RateMode::BftZf),
        "genie_mrt" => Ok(RateMode::GenieMrt),
        "genie_zf" => Ok(RateMode::GenieZf),
        other => Err(SimError::InvalidConfig(format!("unknown rate mode '{other}'"))),
    }
}

fn emit(out: &Option<String>, text: &str) -> Result<(), SimError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn config_error(e: &SimError) -> bool {
    matches!(
        e,
        SimError::InvalidConfig(_) | SimError::InvalidParams(_) | SimError::UnsupportedConfig(_)
    )
}

fn run(cli: Cli) -> Result<ExitCode, SimError> {
    match cli.command {
        Command::Figure { name, snr, t_grid, m } => {
            let overrides = FigureOverrides {
                snr_db: snr,
                t_values: t_grid,
                m_values: m,
                n_trials: cli.trials,
            };
            let points = run_figure(&name, &overrides, cli.seed)?;
            emit(&cli.out, &points_to_csv(&points))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config } => {
            let text = fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| SimError::InvalidConfig(format!("{config}: {e}")))?;
            // CLI flags take precedence over file values
            if let Some(trials) = cli.trials {
                cfg.n_trials = trials;
            }
            if cli.seed != 0 {
                cfg.master_seed = cli.seed;
            }
            let points: Vec<CurvePoint> = run_sweep(&cfg)?;
            let csv = points_to_csv(&points);
            match cli.out.or(cfg.output_path) {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rate(args) => {
            let params = args.scenario.params();
            let mode = parse_mode(&args.mode)?;
            let trials = cli.trials.unwrap_or(10_000);
            let result = monte_carlo_rate(mode, &params, trials, cli.seed)?;
            let se = se_bft(&result, &params)?;
            let mut text = String::new();
            text.push_str(&format!(
                "mode={} trials={} seed={}\n",
                mode.label(),
                trials,
                cli.seed
            ));
            for (k, (r, e)) in result
                .per_user_rate
                .iter()
                .zip(&result.standard_error)
                .enumerate()
            {
                text.push_str(&format!("user {k}: rate {r} +/- {e} bits/use\n"));
            }
            text.push_str(&format!(
                "sum_rate {} +/- {}\nspectral_efficiency {} (prelog {})\n",
                result.sum_rate, result.sum_rate_se, se.value, se.prelog
            ));
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let params = args.params();
            let trials = cli.trials.unwrap_or(100_000);
            let report = run_validate(&params, trials, cli.seed)?;
            emit(&cli.out, &(report.to_json()? + "\n"))?;
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

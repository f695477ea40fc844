use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mvsv_dfc::io::{self, FitConfig, SamplerOverrides, SimulateConfig, SummarizeConfig};
use mvsv_dfc::{ModelParams, Result};

/// Dynamic functional connectivity with a Wishart stochastic volatility model.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate observations and write them with the ground truth.
    Simulate {
        #[arg(long, default_value_t = 5.0)]
        nu: f64,
        #[arg(long, default_value_t = 0.8)]
        d: f64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, short = 'k', default_value_t = 150)]
        k: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Observations CSV.
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth JSON.
        #[arg(long)]
        truth: PathBuf,
    },
    /// Fit a CSV of time series and write summaries, plot tables and traces.
    Fit {
        input: PathBuf,
        #[arg(long, default_value = "fit-out")]
        out_dir: PathBuf,
        /// Use the data as given instead of z-scoring each column.
        #[arg(long)]
        no_standardize: bool,
        /// Independent chains run concurrently, one output directory each.
        #[arg(long, default_value_t = 1)]
        chains: usize,
        /// Also write the retained (nu, d) samples as CSV.
        #[arg(long)]
        param_trace: bool,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
    /// Re-summarize a stored trace, optionally with another schedule.
    Summarize {
        trace: PathBuf,
        #[arg(long, default_value = "summary-out")]
        out_dir: PathBuf,
        #[arg(long)]
        burn_in_states: Option<usize>,
        #[arg(long)]
        burn_in_params: Option<usize>,
        #[arg(long)]
        thin_states: Option<usize>,
        #[arg(long)]
        thin_params: Option<usize>,
    },
}

/// Unset values take the defaults for the data's dimension.
#[derive(Args)]
struct SamplerArgs {
    /// Number of sweeps [default: 10000].
    #[arg(long)]
    iters: Option<usize>,
    /// Prior shape for nu - m [default: m + 2].
    #[arg(long)]
    alpha_nu: Option<f64>,
    /// Prior rate for nu - m [default: 1].
    #[arg(long)]
    beta_nu: Option<f64>,
    /// Variance of the nu proposal [default: 0.1].
    #[arg(long)]
    nu_var: Option<f64>,
    /// Clamp for the d proposal parameter [default: 5].
    #[arg(long)]
    a_f: Option<f64>,
    /// Starting nu [default: 2m + 1].
    #[arg(long)]
    nu_init: Option<f64>,
    /// Starting d [default: 0.5].
    #[arg(long)]
    d_init: Option<f64>,
    /// [default: 1000]
    #[arg(long)]
    burn_in_states: Option<usize>,
    /// [default: 4000]
    #[arg(long)]
    burn_in_params: Option<usize>,
    /// [default: 100]
    #[arg(long)]
    thin_states: Option<usize>,
    /// [default: 200]
    #[arg(long)]
    thin_params: Option<usize>,
    /// Store the latent states of every sweep in the trace.
    #[arg(long)]
    record_all_states: bool,
    /// [default: 0]
    #[arg(long)]
    seed: Option<u64>,
}

impl From<SamplerArgs> for SamplerOverrides {
    fn from(a: SamplerArgs) -> Self {
        Self {
            n_iters: a.iters,
            alpha_nu: a.alpha_nu,
            beta_nu: a.beta_nu,
            nu_var: a.nu_var,
            a_f: a.a_f,
            nu_init: a.nu_init,
            d_init: a.d_init,
            burn_in_states: a.burn_in_states,
            burn_in_params: a.burn_in_params,
            thin_states: a.thin_states,
            thin_params: a.thin_params,
            record_all_states: a.record_all_states,
            seed: a.seed,
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            nu,
            d,
            m,
            k,
            seed,
            out,
            truth,
        } => {
            io::cmd_simulate(&SimulateConfig {
                params: ModelParams::new(nu, d, m)?,
                k_len: k,
                seed,
                out_csv: out.clone(),
                out_truth: truth.clone(),
            })?;
            eprintln!("wrote {} and {}", out.display(), truth.display());
        }
        Command::Fit {
            input,
            out_dir,
            no_standardize,
            chains,
            param_trace,
            sampler,
        } => {
            let report = io::cmd_fit(&FitConfig {
                input,
                out_dir,
                standardize: !no_standardize,
                chains,
                param_trace,
                sampler: sampler.into(),
            })?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for c in &report.chains {
                let r = &c.summary.acceptance_rates;
                eprintln!(
                    "{}: acceptance Q {:.3}, nu {:.3}, d {:.3}",
                    c.dir.display(),
                    r.q_mean,
                    r.nu,
                    r.d
                );
            }
        }
        Command::Summarize {
            trace,
            out_dir,
            burn_in_states,
            burn_in_params,
            thin_states,
            thin_params,
        } => {
            io::cmd_summarize(&SummarizeConfig {
                trace,
                out_dir: out_dir.clone(),
                burn_in_states,
                burn_in_params,
                thin_states,
                thin_params,
            })?;
            eprintln!("wrote {}", out_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

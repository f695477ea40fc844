use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::data::{load_csv, standardize, Dataset};
use super::files::{
    write_hist_csv, write_observations, write_param_trace_csv, write_percentiles_csv, FitEcho, Provenance,
    SummaryFile, TraceFile, TruthFile,
};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::model::{simulate, ModelParams, Trajectory};
use crate::posterior::{summarize, PosteriorSummary, SummaryOptions};
use crate::sampler::{run_chains, SamplerConfig, StateRecording};

pub const SUMMARY_FILE: &str = "summary.json";
pub const TRACE_FILE: &str = "trace.json";
pub const PERCENTILES_FILE: &str = "percentiles.csv";
pub const NU_HIST_FILE: &str = "nu_hist.csv";
pub const D_HIST_FILE: &str = "d_hist.csv";
pub const PARAM_TRACE_FILE: &str = "params.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub params: ModelParams,
    pub k_len: usize,
    pub seed: u64,
    pub out_csv: PathBuf,
    pub out_truth: PathBuf,
}

/// Simulates one data set and writes the observations and the ground truth.
pub fn cmd_simulate(config: &SimulateConfig) -> Result<Trajectory> {
    config.params.validate()?;
    if config.k_len == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    let mut rng = RngStream::new(config.seed);
    let traj = simulate(&mut rng, &config.params, config.k_len)?;
    let provenance = Provenance::new(config.seed, 0, None);
    let names: Vec<String> = (1..=config.params.m).map(|c| format!("ch{c}")).collect();
    create_parent(&config.out_csv)?;
    create_parent(&config.out_truth)?;
    write_observations(&config.out_csv, &traj.y_seq, &names, &provenance, &config.params)?;
    TruthFile::from_trajectory(&traj, config.seed).write(&config.out_truth)?;
    Ok(traj)
}

/// Sampler settings left unset fall back to the defaults for the data's `m`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplerOverrides {
    pub n_iters: Option<usize>,
    pub alpha_nu: Option<f64>,
    pub beta_nu: Option<f64>,
    pub nu_var: Option<f64>,
    pub a_f: Option<f64>,
    pub nu_init: Option<f64>,
    pub d_init: Option<f64>,
    pub burn_in_states: Option<usize>,
    pub burn_in_params: Option<usize>,
    pub thin_states: Option<usize>,
    pub thin_params: Option<usize>,
    pub record_all_states: bool,
    pub seed: Option<u64>,
}

impl SamplerOverrides {
    pub fn apply(&self, m: usize) -> SamplerConfig {
        let base = SamplerConfig::defaults(m);
        SamplerConfig {
            m,
            n_iters: self.n_iters.unwrap_or(base.n_iters),
            alpha_nu: self.alpha_nu.unwrap_or(base.alpha_nu),
            beta_nu: self.beta_nu.unwrap_or(base.beta_nu),
            nu_var: self.nu_var.unwrap_or(base.nu_var),
            a_f: self.a_f.unwrap_or(base.a_f),
            nu_init: self.nu_init.unwrap_or(base.nu_init),
            d_init: self.d_init.unwrap_or(base.d_init),
            burn_in_states: self.burn_in_states.unwrap_or(base.burn_in_states),
            burn_in_params: self.burn_in_params.unwrap_or(base.burn_in_params),
            thin_states: self.thin_states.unwrap_or(base.thin_states),
            thin_params: self.thin_params.unwrap_or(base.thin_params),
            state_recording: if self.record_all_states {
                StateRecording::Full
            } else {
                StateRecording::Thinned
            },
            seed: self.seed.unwrap_or(base.seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub standardize: bool,
    pub chains: usize,
    pub param_trace: bool,
    pub sampler: SamplerOverrides,
}

impl FitConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            out_dir: out_dir.into(),
            standardize: true,
            chains: 1,
            param_trace: false,
            sampler: SamplerOverrides::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainOutput {
    pub dir: PathBuf,
    pub summary: PosteriorSummary,
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub warnings: Vec<String>,
    pub config: SamplerConfig,
    pub chains: Vec<ChainOutput>,
}

pub fn load_dataset(path: &Path, standardized: bool) -> Result<Dataset> {
    let raw = load_csv(path)?;
    if standardized {
        standardize(&raw)
    } else {
        Dataset::from_raw(&raw)
    }
}

/// Fits the model to a CSV file and writes summaries, plot tables and traces.
///
/// One chain writes into `out_dir`; several chains write into
/// `out_dir/chain-<c>`.
pub fn cmd_fit(config: &FitConfig) -> Result<FitReport> {
    if config.chains == 0 {
        return Err(Error::Config("number of chains must be at least 1".into()));
    }
    let data = load_dataset(&config.input, config.standardize)?;
    let sampler = config.sampler.apply(data.m());
    sampler.validate()?;
    let mut warnings = Vec::new();
    if data.m() >= data.k() {
        warnings.push(format!(
            "only {} time points for {} channels; the posterior will be dominated by the prior",
            data.k(),
            data.m()
        ));
    }
    let opts = SummaryOptions::from_config(&sampler);
    let echo = FitEcho {
        sampler: sampler.clone(),
        summary: opts.clone(),
        standardized: config.standardize,
        n_chains: config.chains,
    };
    let records = run_chains(&data.values, &sampler, config.chains)?;
    let input = Some(config.input.display().to_string());
    let mut chains = Vec::with_capacity(records.len());
    for (c, record) in records.into_iter().enumerate() {
        let dir = if config.chains == 1 {
            config.out_dir.clone()
        } else {
            config.out_dir.join(format!("chain-{c}"))
        };
        create_dir(&dir)?;
        let provenance = Provenance::new(sampler.seed, c, input.clone());
        let summary = summarize(&record, &opts)?;
        write_summary_outputs(&dir, &summary, &echo, &provenance)?;
        if config.param_trace {
            write_param_trace_csv(dir.join(PARAM_TRACE_FILE), &summary, &opts, &provenance, &sampler)?;
        }
        TraceFile::new(record, echo.clone(), provenance).write(dir.join(TRACE_FILE))?;
        chains.push(ChainOutput { dir, summary });
    }
    Ok(FitReport {
        warnings,
        config: sampler,
        chains,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummarizeConfig {
    pub trace: PathBuf,
    pub out_dir: PathBuf,
    pub burn_in_states: Option<usize>,
    pub burn_in_params: Option<usize>,
    pub thin_states: Option<usize>,
    pub thin_params: Option<usize>,
}

/// Re-summarizes a stored trace, by default with the schedule it was fitted
/// with.
pub fn cmd_summarize(config: &SummarizeConfig) -> Result<PosteriorSummary> {
    let trace = TraceFile::read(&config.trace)?;
    let mut echo = trace.config.clone();
    let opts = &mut echo.summary;
    opts.burn_in_states = config.burn_in_states.unwrap_or(opts.burn_in_states);
    opts.burn_in_params = config.burn_in_params.unwrap_or(opts.burn_in_params);
    opts.thin_states = config.thin_states.unwrap_or(opts.thin_states);
    opts.thin_params = config.thin_params.unwrap_or(opts.thin_params);
    let summary = summarize(&trace.record, &echo.summary)?;
    create_dir(&config.out_dir)?;
    write_summary_outputs(&config.out_dir, &summary, &echo, &trace.provenance)?;
    Ok(summary)
}

fn write_summary_outputs(dir: &Path, summary: &PosteriorSummary, echo: &FitEcho, provenance: &Provenance) -> Result<()> {
    SummaryFile::new(summary, echo.clone(), provenance.clone()).write(dir.join(SUMMARY_FILE))?;
    write_percentiles_csv(dir.join(PERCENTILES_FILE), summary, provenance, &echo.sampler)?;
    write_hist_csv(dir.join(NU_HIST_FILE), &summary.nu_hist, provenance, &echo.sampler)?;
    write_hist_csv(dir.join(D_HIST_FILE), &summary.d_hist, provenance, &echo.sampler)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => create_dir(p),
        _ => Ok(()),
    }
}

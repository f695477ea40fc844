use std::path::Path;

use serde::{Deserialize, Serialize};

use super::json::{fmt_f64, read_json, write_json};
use crate::error::{Error, Result};
use crate::matrix::off_diagonal_pairs;
use crate::model::{ModelParams, Trajectory};
use crate::posterior::{AcceptanceRates, Histogram, PosteriorSummary, SampleCounts, SummaryOptions, TimePercentiles};
use crate::sampler::{ChainRecord, SamplerConfig};

pub const TRACE_FORMAT: &str = "mvsv-dfc-trace/1";

/// What produced a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub package: String,
    pub version: String,
    pub seed: u64,
    /// Chain index; chain `c` uses random stream `c` of `seed`.
    pub chain: usize,
    pub input: Option<String>,
}

impl Provenance {
    pub fn new(seed: u64, chain: usize, input: Option<String>) -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            chain,
            input,
        }
    }

    fn comment_line(&self, extra: &str) -> String {
        format!(
            "# {} {} seed={} chain={} {extra}\n",
            self.package, self.version, self.seed, self.chain
        )
    }
}

/// Echo of the settings behind a fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitEcho {
    pub sampler: SamplerConfig,
    pub summary: SummaryOptions,
    pub standardized: bool,
    pub n_chains: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercentileBlock {
    pub probs: Vec<f64>,
    pub n_samples: usize,
    pub trajectories: Vec<TimePercentiles>,
}

/// On-disk layout of a posterior summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryFile {
    pub config: FitEcho,
    pub percentiles: PercentileBlock,
    pub nu_samples: Vec<f64>,
    pub d_samples: Vec<f64>,
    pub nu_hist: Histogram,
    pub d_hist: Histogram,
    pub acceptance: AcceptanceRates,
    pub provenance: Provenance,
}

impl SummaryFile {
    pub fn new(summary: &PosteriorSummary, config: FitEcho, provenance: Provenance) -> Self {
        Self {
            config,
            percentiles: PercentileBlock {
                probs: summary.probs.clone(),
                n_samples: summary.sample_counts.states,
                trajectories: summary.corr_percentiles.clone(),
            },
            nu_samples: summary.nu_samples.clone(),
            d_samples: summary.d_samples.clone(),
            nu_hist: summary.nu_hist.clone(),
            d_hist: summary.d_hist.clone(),
            acceptance: summary.acceptance_rates.clone(),
            provenance,
        }
    }

    pub fn to_summary(&self) -> PosteriorSummary {
        PosteriorSummary {
            probs: self.percentiles.probs.clone(),
            corr_percentiles: self.percentiles.trajectories.clone(),
            nu_samples: self.nu_samples.clone(),
            d_samples: self.d_samples.clone(),
            nu_hist: self.nu_hist.clone(),
            d_hist: self.d_hist.clone(),
            acceptance_rates: self.acceptance.clone(),
            sample_counts: SampleCounts {
                states: self.percentiles.n_samples,
                params: self.nu_samples.len(),
            },
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        read_json(path)
    }
}

/// Stored chain, re-summarizable with a different schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub format: String,
    pub config: FitEcho,
    pub provenance: Provenance,
    pub record: ChainRecord,
}

impl TraceFile {
    pub fn new(record: ChainRecord, config: FitEcho, provenance: Provenance) -> Self {
        Self {
            format: TRACE_FORMAT.into(),
            config,
            provenance,
            record,
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    /// Reads a trace and checks that its parts agree with each other.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let trace: Self = read_json(path)?;
        let mismatch = |message: String| Error::SchemaMismatch {
            path: path.to_path_buf(),
            message,
        };
        if trace.format != TRACE_FORMAT {
            return Err(mismatch(format!("format {:?}, expected {TRACE_FORMAT:?}", trace.format)));
        }
        let r = &trace.record;
        let n = r.config.n_iters;
        if r.nu_trace.len() != n || r.d_trace.len() != n {
            return Err(mismatch(format!("parameter traces must have {n} entries")));
        }
        if r.state_sweeps.len() != r.state_samples.len() {
            return Err(mismatch("state sweep indices and samples differ in length".into()));
        }
        if r.state_samples.iter().any(|s| s.len() != r.k_len || s.iter().any(|q| q.dim() != r.config.m)) {
            return Err(mismatch(format!("every state must hold {} matrices of size {}", r.k_len, r.config.m)));
        }
        Ok(trace)
    }
}

/// Ground truth of a simulated data set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub params: ModelParams,
    pub k_len: usize,
    /// Channel pairs `(i, j)`, `i < j`, 0-based; order of the columns of
    /// `correlations`.
    pub pairs: Vec<(usize, usize)>,
    /// `correlations[k][p]`: true correlation of pair `p` at time `k + 1`.
    pub correlations: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl TruthFile {
    pub fn from_trajectory(traj: &Trajectory, seed: u64) -> Self {
        let pairs = off_diagonal_pairs(traj.params.m);
        Self {
            params: traj.params,
            k_len: traj.len(),
            correlations: traj
                .omega_seq
                .iter()
                .map(|om| pairs.iter().map(|&(i, j)| om.get(i, j)).collect())
                .collect(),
            pairs,
            provenance: Provenance::new(seed, 0, None),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        read_json(path)
    }
}

fn csv_bytes(comment: &str, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(comment.as_bytes().to_vec());
    let fail = |e: csv::Error| Error::InvalidData(format!("CSV encoding failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    w.into_inner().map_err(|e| Error::InvalidData(format!("CSV encoding failed: {e}")))
}

fn write_bytes(path: &Path, bytes: Vec<u8>) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Observations with a provenance comment and a header row.
pub fn write_observations(
    path: impl AsRef<Path>,
    y_seq: &[Vec<f64>],
    channel_names: &[String],
    provenance: &Provenance,
    params: &ModelParams,
) -> Result<()> {
    let extra = format!("nu={} d={} m={} k={}", params.nu, params.d, params.m, y_seq.len());
    let rows = y_seq.iter().map(|y| y.iter().map(|&v| fmt_f64(v)).collect());
    write_bytes(path.as_ref(), csv_bytes(&provenance.comment_line(&extra), channel_names, rows)?)
}

fn config_comment(provenance: &Provenance, config: &SamplerConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    provenance.comment_line(&format!("config={json}"))
}

/// Long format: one row per `(k, i, j)` with one column per probability.
pub fn write_percentiles_csv(
    path: impl AsRef<Path>,
    summary: &PosteriorSummary,
    provenance: &Provenance,
    config: &SamplerConfig,
) -> Result<()> {
    let mut header: Vec<String> = ["k", "i", "j"].map(String::from).to_vec();
    header.extend(summary.probs.iter().map(|p| format!("p{p}")));
    let rows = summary.corr_percentiles.iter().flat_map(|t| {
        t.pairs.iter().map(move |p| {
            let mut row = vec![t.k.to_string(), p.i.to_string(), p.j.to_string()];
            row.extend(p.values.iter().map(|&v| fmt_f64(v)));
            row
        })
    });
    write_bytes(path.as_ref(), csv_bytes(&config_comment(provenance, config), &header, rows)?)
}

pub fn write_hist_csv(
    path: impl AsRef<Path>,
    hist: &Histogram,
    provenance: &Provenance,
    config: &SamplerConfig,
) -> Result<()> {
    let header = ["bin_lo", "bin_hi", "count", "density"].map(String::from);
    let rows = (0..hist.counts.len()).map(|b| {
        vec![
            fmt_f64(hist.edges[b]),
            fmt_f64(hist.edges[b + 1]),
            hist.counts[b].to_string(),
            fmt_f64(hist.densities[b]),
        ]
    });
    write_bytes(path.as_ref(), csv_bytes(&config_comment(provenance, config), &header, rows)?)
}

/// Retained `(ν, d)` samples with the sweep each was taken from.
pub fn write_param_trace_csv(
    path: impl AsRef<Path>,
    summary: &PosteriorSummary,
    opts: &SummaryOptions,
    provenance: &Provenance,
    config: &SamplerConfig,
) -> Result<()> {
    let header = ["sweep", "nu", "d"].map(String::from);
    let rows = summary.nu_samples.iter().zip(&summary.d_samples).enumerate().map(|(j, (&nu, &d))| {
        vec![
            (opts.burn_in_params + j * opts.thin_params).to_string(),
            fmt_f64(nu),
            fmt_f64(d),
        ]
    });
    write_bytes(path.as_ref(), csv_bytes(&config_comment(provenance, config), &header, rows)?)
}

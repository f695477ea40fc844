//! Turning a chain record into percentile bands and parameter densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{off_diagonal_pairs, SpdMatrix};
use crate::model::correlation_from_inverse;
use crate::sampler::{ChainRecord, SamplerConfig};

/// Percentiles reported by default: a central 95% band and the median.
pub const DEFAULT_PROBS: [f64; 3] = [2.5, 50.0, 97.5];
pub const DEFAULT_BINS: usize = 20;

/// Elements `burn_in, burn_in + thin, …` of `trace`.
pub fn thin_and_burn<T: Clone>(trace: &[T], burn_in: usize, thin: usize) -> Result<Vec<T>> {
    if thin == 0 {
        return Err(Error::Config("thinning interval must be at least 1".into()));
    }
    if burn_in >= trace.len() {
        return Err(Error::EmptyResult(format!(
            "burn-in {burn_in} leaves nothing of a trace of length {}",
            trace.len()
        )));
    }
    Ok(trace[burn_in..].iter().step_by(thin).cloned().collect())
}

/// Positions in `sweeps` that fall on the schedule `burn_in + j·thin`.
///
/// Applies the same schedule as [`thin_and_burn`] to states that were stored
/// with their sweep indices.
pub fn select_sweeps(sweeps: &[usize], burn_in: usize, thin: usize) -> Result<Vec<usize>> {
    if thin == 0 {
        return Err(Error::Config("thinning interval must be at least 1".into()));
    }
    let picked: Vec<usize> = sweeps
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= burn_in && (s - burn_in).is_multiple_of(thin))
        .map(|(i, _)| i)
        .collect();
    if picked.is_empty() {
        return Err(Error::EmptyResult(format!(
            "no stored state matches burn-in {burn_in} and thinning {thin}"
        )));
    }
    Ok(picked)
}

/// Linear interpolation between order statistics at 0-based fractional rank
/// `q/100 · (n − 1)`. `sorted` must be ascending and non-empty.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q / 100.0 * (n - 1) as f64;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p < 100.0)) {
        return Err(Error::Config(format!("percentile {p} outside (0, 100)")));
    }
    Ok(())
}

/// Percentiles for one correlation pair at one time index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPercentiles {
    pub i: usize,
    pub j: usize,
    /// One value per requested probability, same order.
    pub values: Vec<f64>,
}

/// All pairs at one time index (`k` is 1-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimePercentiles {
    pub k: usize,
    pub pairs: Vec<PairPercentiles>,
}

/// Percentile trajectories of every off-diagonal correlation.
///
/// `q_inv_samples[s][k]` is `Q_{k+1}⁻¹` in retained sample `s`.
pub fn correlation_percentiles(q_inv_samples: &[Vec<SpdMatrix>], probs: &[f64]) -> Result<Vec<TimePercentiles>> {
    check_probs(probs)?;
    let Some(first) = q_inv_samples.first() else {
        return Err(Error::EmptyResult("no latent samples".into()));
    };
    let k_len = first.len();
    if q_inv_samples.iter().any(|s| s.len() != k_len) {
        return Err(Error::InvalidData("latent samples differ in length".into()));
    }
    let m = first.first().map_or(0, SpdMatrix::dim);
    let pairs = off_diagonal_pairs(m);

    // corr[k][pair][sample]
    let mut corr = vec![vec![Vec::with_capacity(q_inv_samples.len()); pairs.len()]; k_len];
    for sample in q_inv_samples {
        for (k, q_inv) in sample.iter().enumerate() {
            let omega = correlation_from_inverse(q_inv)?;
            for (p, &(i, j)) in pairs.iter().enumerate() {
                corr[k][p].push(omega.get(i, j));
            }
        }
    }
    Ok(corr
        .into_iter()
        .enumerate()
        .map(|(k, per_pair)| TimePercentiles {
            k: k + 1,
            pairs: per_pair
                .into_iter()
                .zip(&pairs)
                .map(|(mut xs, &(i, j))| {
                    xs.sort_by(f64::total_cmp);
                    PairPercentiles {
                        i,
                        j,
                        values: probs.iter().map(|&q| percentile_sorted(&xs, q)).collect(),
                    }
                })
                .collect(),
        })
        .collect())
}

/// Equal-width binned density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `n_bins + 1` edges from `lo` to `hi`.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `count / (N · width)`.
    pub densities: Vec<f64>,
    /// Samples outside `[lo, hi]`, folded into the edge bins.
    pub clipped: u64,
}

impl Histogram {
    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    /// `Σ density · width`.
    pub fn mass(&self) -> f64 {
        let w = self.width();
        self.densities.iter().map(|d| d * w).sum()
    }
}

pub fn empirical_hist(samples: &[f64], n_bins: usize, support: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = support;
    if n_bins == 0 {
        return Err(Error::Config("histogram needs at least one bin".into()));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!("histogram support ({lo}, {hi}) is empty")));
    }
    if samples.is_empty() {
        return Err(Error::EmptyResult("histogram of zero samples".into()));
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    let mut clipped = 0;
    for &x in samples {
        if !(lo..=hi).contains(&x) {
            clipped += 1;
        }
        let b = ((x - lo) / width).floor();
        let b = if b.is_nan() || b < 0.0 {
            0
        } else {
            (b as usize).min(n_bins - 1)
        };
        counts[b] += 1;
    }
    let total = samples.len() as f64;
    let edges = (0..=n_bins).map(|i| lo + i as f64 * width).collect();
    let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    Ok(Histogram {
        edges,
        counts,
        densities,
        clipped,
    })
}

/// `[min, max]` of the samples, widened by ±0.5 when they coincide.
pub fn sample_range(samples: &[f64]) -> Option<(f64, f64)> {
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some(if lo < hi { (lo, hi) } else { (lo - 0.5, hi + 0.5) })
}

/// Acceptance rate per block. A block that was never proposed reports 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceRates {
    pub q: Vec<f64>,
    pub q_mean: f64,
    pub nu: f64,
    pub d: f64,
}

fn rate(accepted: u64, proposed: u64) -> f64 {
    if proposed == 0 {
        0.0
    } else {
        accepted as f64 / proposed as f64
    }
}

pub fn acceptance_report(record: &ChainRecord) -> AcceptanceRates {
    let a = &record.acceptance;
    let q: Vec<f64> = a.q_accepted.iter().zip(&a.q_proposed).map(|(&x, &n)| rate(x, n)).collect();
    AcceptanceRates {
        q_mean: rate(a.q_accepted.iter().sum(), a.q_proposed.iter().sum()),
        q,
        nu: rate(a.nu_accepted, a.nu_proposed),
        d: rate(a.d_accepted, a.d_proposed),
    }
}

/// Post-processing schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryOptions {
    pub burn_in_states: usize,
    pub thin_states: usize,
    pub burn_in_params: usize,
    pub thin_params: usize,
    pub probs: Vec<f64>,
    pub nu_bins: usize,
    pub d_bins: usize,
}

impl SummaryOptions {
    pub fn from_config(config: &SamplerConfig) -> Self {
        Self {
            burn_in_states: config.burn_in_states,
            thin_states: config.thin_states,
            burn_in_params: config.burn_in_params,
            thin_params: config.thin_params,
            probs: DEFAULT_PROBS.to_vec(),
            nu_bins: DEFAULT_BINS,
            d_bins: DEFAULT_BINS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub states: usize,
    pub params: usize,
}

/// Everything reported about one chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub probs: Vec<f64>,
    pub corr_percentiles: Vec<TimePercentiles>,
    pub nu_samples: Vec<f64>,
    pub d_samples: Vec<f64>,
    pub nu_hist: Histogram,
    pub d_hist: Histogram,
    pub acceptance_rates: AcceptanceRates,
    pub sample_counts: SampleCounts,
}

pub fn summarize(record: &ChainRecord, opts: &SummaryOptions) -> Result<PosteriorSummary> {
    let picked = select_sweeps(&record.state_sweeps, opts.burn_in_states, opts.thin_states)?;
    let states: Vec<Vec<SpdMatrix>> = picked.iter().map(|&i| record.state_samples[i].clone()).collect();
    let corr_percentiles = correlation_percentiles(&states, &opts.probs)?;
    let nu_samples = thin_and_burn(&record.nu_trace, opts.burn_in_params, opts.thin_params)?;
    let d_samples = thin_and_burn(&record.d_trace, opts.burn_in_params, opts.thin_params)?;
    let nu_range = sample_range(&nu_samples).ok_or_else(|| Error::InvalidData("non-finite nu samples".into()))?;
    let nu_hist = empirical_hist(&nu_samples, opts.nu_bins, nu_range)?;
    let d_hist = empirical_hist(&d_samples, opts.d_bins, (-1.0, 1.0))?;
    Ok(PosteriorSummary {
        probs: opts.probs.clone(),
        corr_percentiles,
        sample_counts: SampleCounts {
            states: states.len(),
            params: nu_samples.len(),
        },
        nu_samples,
        d_samples,
        nu_hist,
        d_hist,
        acceptance_rates: acceptance_report(record),
    })
}

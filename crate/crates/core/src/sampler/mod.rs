//! Metropolis-within-Gibbs estimation of the latent chain and of `(ν, d)`.
//!
//! One sweep updates `Q_1⁻¹ … Q_{K−1}⁻¹` in ascending order (each block sees
//! the freshly updated left neighbour and the previous sweep's right
//! neighbour), then `Q_K⁻¹`, then `ν`, then `d`. Each block is a single
//! Metropolis-Hastings step:
//!
//! | block        | proposal                                                |
//! |--------------|---------------------------------------------------------|
//! | `Q_k⁻¹`, k<K | `W(ν+1, (ν S_k⁻¹ + Q̃ y_k y_kᵀ Q̃)⁻¹)` (independence)      |
//! | `Q_K⁻¹`      | `W(ν+1, S_K/ν)` (independence)                          |
//! | `ν`          | shifted Gamma with mode at the current `ν`, variance `ν_var` |
//! | `d`          | `Beta(a, 1/a)` on `[−1, 1]` with mean at the current `d`   |
//!
//! A numerical failure while proposing or evaluating a candidate counts as a
//! rejection; the chain never aborts mid-run.

mod proposals;
mod targets;

use std::thread;

use serde::{Deserialize, Serialize};

pub use proposals::{
    interior_proposal, log_acceptance_ratio, mh_accept, mh_decide, propose_qk, propose_qk_terminal,
    terminal_proposal, WishartProposal,
};
pub use targets::{log_g_d, log_g_nu, log_g_qk, log_g_qk_terminal, log_observation, log_transition, transition_scale};

use crate::distributions::{
    beta_prop_param, logpdf_prior_nu, logpdf_scaled_beta, logpdf_shifted_gamma, sample_scaled_beta,
    sample_shifted_gamma, shifted_gamma_params, RngStream,
};
use crate::error::{Error, Result};
use crate::matrix::SpdMatrix;
use targets::{LatentTarget, NuTarget};

/// Which latent states a chain keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateRecording {
    /// Sweeps `burn_in_states, burn_in_states + thin_states, …`.
    #[default]
    Thinned,
    /// Every sweep.
    Full,
}

/// Hyperparameters, proposal constants and run schedule.
///
/// The number of time steps is taken from the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub m: usize,
    pub n_iters: usize,
    pub alpha_nu: f64,
    pub beta_nu: f64,
    pub nu_var: f64,
    pub a_f: f64,
    pub nu_init: f64,
    pub d_init: f64,
    pub burn_in_states: usize,
    pub burn_in_params: usize,
    pub thin_states: usize,
    pub thin_params: usize,
    #[serde(default)]
    pub state_recording: StateRecording,
    pub seed: u64,
}

impl SamplerConfig {
    /// `α_ν = m + 2`, `β_ν = 1`, `ν₀ = m + (α_ν − 1)/β_ν`, `d₀ = 0.5`,
    /// `ν_var = 0.1`, `a_f = 5`, 10000 sweeps, burn-in 1000 (states) and 4000
    /// (parameters), thinning 100 and 200.
    pub fn defaults(m: usize) -> Self {
        let alpha_nu = m as f64 + 2.0;
        let beta_nu = 1.0;
        Self {
            m,
            n_iters: 10_000,
            alpha_nu,
            beta_nu,
            nu_var: 0.1,
            a_f: 5.0,
            nu_init: m as f64 + (alpha_nu - 1.0) / beta_nu,
            d_init: 0.5,
            burn_in_states: 1_000,
            burn_in_params: 4_000,
            thin_states: 100,
            thin_params: 200,
            state_recording: StateRecording::Thinned,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.m == 0 {
            return fail("m must be at least 1".into());
        }
        if self.n_iters <= self.burn_in_states.max(self.burn_in_params) {
            return fail(format!(
                "n_iters = {} must exceed both burn-ins ({}, {})",
                self.n_iters, self.burn_in_states, self.burn_in_params
            ));
        }
        if self.thin_states == 0 || self.thin_params == 0 {
            return fail("thinning intervals must be at least 1".into());
        }
        if !(self.a_f > 1.0) || !self.a_f.is_finite() {
            return fail(format!("a_f = {} must exceed 1", self.a_f));
        }
        if !(self.nu_var > 0.0) || !self.nu_var.is_finite() {
            return fail(format!("nu_var = {} must be positive", self.nu_var));
        }
        if !(self.alpha_nu > 0.0 && self.beta_nu > 0.0) || !(self.alpha_nu.is_finite() && self.beta_nu.is_finite()) {
            return fail("alpha_nu and beta_nu must be positive".into());
        }
        if !(self.nu_init > self.m as f64) || !self.nu_init.is_finite() {
            return fail(format!("nu_init = {} must exceed m = {}", self.nu_init, self.m));
        }
        if !(-1.0..=1.0).contains(&self.d_init) {
            return fail(format!("d_init = {} must lie in [-1, 1]", self.d_init));
        }
        Ok(())
    }
}

/// Snapshot of the chain after a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub q_inv_seq: Vec<SpdMatrix>,
    pub nu: f64,
    pub d: f64,
    pub sweep_index: usize,
}

impl ChainState {
    /// `Q_k⁻¹ = I` for every `k`.
    pub fn initial(k_len: usize, m: usize, nu: f64, d: f64) -> Self {
        Self {
            q_inv_seq: vec![SpdMatrix::identity(m); k_len],
            nu,
            d,
            sweep_index: 0,
        }
    }

    /// Support check: every matrix factorizes, `ν > m`, `d ∈ [−1, 1]`.
    pub fn is_valid(&self, m: usize) -> bool {
        self.nu > m as f64
            && (-1.0..=1.0).contains(&self.d)
            && self
                .q_inv_seq
                .iter()
                .all(|q| q.dim() == m && crate::matrix::cholesky(q.as_matrix()).is_ok())
    }
}

/// Accepted/proposed counts per block.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceCounts {
    pub q_accepted: Vec<u64>,
    pub q_proposed: Vec<u64>,
    pub nu_accepted: u64,
    pub nu_proposed: u64,
    pub d_accepted: u64,
    pub d_proposed: u64,
}

impl AcceptanceCounts {
    pub fn new(k_len: usize) -> Self {
        Self {
            q_accepted: vec![0; k_len],
            q_proposed: vec![0; k_len],
            ..Default::default()
        }
    }
}

/// Output of [`run_chain`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub config: SamplerConfig,
    pub k_len: usize,
    /// `ν` after each sweep, `n_iters` entries.
    pub nu_trace: Vec<f64>,
    /// `d` after each sweep, `n_iters` entries.
    pub d_trace: Vec<f64>,
    /// 0-based sweep index of each entry of `state_samples`.
    pub state_sweeps: Vec<usize>,
    pub state_samples: Vec<Vec<SpdMatrix>>,
    pub acceptance: AcceptanceCounts,
    pub final_state: ChainState,
}

/// Gibbs block identifier; latent blocks use the 0-based time index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Latent(usize),
    Nu,
    D,
}

#[derive(Clone, Copy, Debug)]
pub enum Candidate<'a> {
    Matrix(&'a SpdMatrix),
    Scalar(f64),
    /// Proposal construction failed numerically.
    Failed,
}

/// Everything that went into one accept/reject decision.
#[derive(Debug)]
pub struct ProposalEvent<'a> {
    pub block: Block,
    /// State before this block was updated (earlier blocks of the sweep
    /// already applied).
    pub state: &'a ChainState,
    pub candidate: Candidate<'a>,
    pub log_g_star: f64,
    pub log_g_old: f64,
    pub log_q_fwd: f64,
    pub log_q_bwd: f64,
    pub uniform: f64,
    pub accepted: bool,
}

/// Hook for inspecting proposals as they are decided.
pub trait SweepObserver {
    fn on_proposal(&mut self, _event: &ProposalEvent<'_>) {}
}

impl SweepObserver for () {}

impl<F: FnMut(&ProposalEvent<'_>)> SweepObserver for F {
    fn on_proposal(&mut self, event: &ProposalEvent<'_>) {
        self(event)
    }
}

/// Diagnostic switches. The defaults give the ordinary sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepControls {
    /// Include `ln N(y_k; 0, Ω_k)` in the latent targets.
    pub include_likelihood: bool,
    /// Hold `d` at this value and skip its block.
    pub fixed_d: Option<f64>,
    /// Hold `ν` at this value and skip its block.
    pub fixed_nu: Option<f64>,
    /// Constant added to every target evaluation.
    pub log_g_offset: f64,
    /// Propose the current value for every block.
    pub propose_current: bool,
}

impl Default for SweepControls {
    fn default() -> Self {
        Self {
            include_likelihood: true,
            fixed_d: None,
            fixed_nu: None,
            log_g_offset: 0.0,
            propose_current: false,
        }
    }
}

/// Sampler bound to a data set and configuration.
pub struct GibbsSampler<'a, O = ()> {
    y_seq: &'a [Vec<f64>],
    config: &'a SamplerConfig,
    controls: SweepControls,
    observer: O,
    counts: AcceptanceCounts,
}

/// Checks that `y_seq` is non-empty, rectangular with `m` columns and finite.
pub fn validate_observations(y_seq: &[Vec<f64>], m: usize) -> Result<()> {
    if y_seq.is_empty() {
        return Err(Error::InvalidData("no observations".into()));
    }
    for (k, y) in y_seq.iter().enumerate() {
        if y.len() != m {
            return Err(Error::InvalidData(format!(
                "observation {k} has {} components, expected {m}",
                y.len()
            )));
        }
        if let Some(j) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("observation {k} component {j} is not finite")));
        }
    }
    Ok(())
}

impl<'a> GibbsSampler<'a, ()> {
    pub fn new(y_seq: &'a [Vec<f64>], config: &'a SamplerConfig) -> Result<Self> {
        config.validate()?;
        validate_observations(y_seq, config.m)?;
        Ok(Self {
            y_seq,
            config,
            controls: SweepControls::default(),
            observer: (),
            counts: AcceptanceCounts::new(y_seq.len()),
        })
    }
}

impl<'a, O: SweepObserver> GibbsSampler<'a, O> {
    pub fn with_controls(mut self, controls: SweepControls) -> Self {
        self.controls = controls;
        self
    }

    pub fn with_observer<P: SweepObserver>(self, observer: P) -> GibbsSampler<'a, P> {
        GibbsSampler {
            y_seq: self.y_seq,
            config: self.config,
            controls: self.controls,
            observer,
            counts: self.counts,
        }
    }

    pub fn counts(&self) -> &AcceptanceCounts {
        &self.counts
    }

    pub fn observer(&self) -> &O {
        &self.observer
    }

    pub fn into_observer(self) -> O {
        self.observer
    }

    pub fn initial_state(&self) -> ChainState {
        let nu = self.controls.fixed_nu.unwrap_or(self.config.nu_init);
        let d = self.controls.fixed_d.unwrap_or(self.config.d_init);
        ChainState::initial(self.y_seq.len(), self.config.m, nu, d)
    }

    fn decide(&mut self, rng: &mut RngStream, event: ProposalEvent<'_>) -> bool {
        let uniform = rng.uniform_open01();
        let accepted = mh_decide(uniform, event.log_g_star, event.log_g_old, event.log_q_fwd, event.log_q_bwd);
        self.observer.on_proposal(&ProposalEvent {
            uniform,
            accepted,
            ..event
        });
        accepted
    }

    fn update_latent(&mut self, rng: &mut RngStream, state: &mut ChainState, k: usize) {
        let m = self.config.m;
        let k_len = state.q_inv_seq.len();
        let identity;
        let prev = if k == 0 {
            identity = SpdMatrix::identity(m);
            &identity
        } else {
            &state.q_inv_seq[k - 1]
        };
        let next = (k + 1 < k_len).then(|| &state.q_inv_seq[k + 1]);
        let y = &self.y_seq[k];
        let (nu, d) = (state.nu, state.d);
        let offset = self.controls.log_g_offset;

        let setup = LatentTarget::new(prev, next, y, nu, d, self.controls.include_likelihood).and_then(|target| {
            let proposal = match next {
                Some(next) => interior_proposal(prev, next, y, nu, d)?,
                None => terminal_proposal(prev, nu, d)?,
            };
            Ok((target, proposal))
        });

        let current = &state.q_inv_seq[k];
        let (candidate, log_g_star, log_g_old, log_q_fwd, log_q_bwd) = match setup {
            Ok((target, proposal)) => {
                let drawn = if self.controls.propose_current {
                    Ok(current.clone())
                } else {
                    proposal.sample(rng)
                };
                match drawn {
                    Ok(x) => {
                        let lg_star = target.log_g(&x) + offset;
                        let lg_old = target.log_g(current) + offset;
                        let lq_fwd = proposal.log_density(&x);
                        let lq_bwd = proposal.log_density(current);
                        (Some(x), lg_star, lg_old, lq_fwd, lq_bwd)
                    }
                    Err(_) => (None, f64::NEG_INFINITY, f64::NAN, f64::NAN, f64::NAN),
                }
            }
            Err(_) => (None, f64::NEG_INFINITY, f64::NAN, f64::NAN, f64::NAN),
        };

        self.counts.q_proposed[k] += 1;
        let accepted = self.decide(
            rng,
            ProposalEvent {
                block: Block::Latent(k),
                state,
                candidate: candidate.as_ref().map_or(Candidate::Failed, Candidate::Matrix),
                log_g_star,
                log_g_old,
                log_q_fwd,
                log_q_bwd,
                uniform: f64::NAN,
                accepted: false,
            },
        );
        if accepted {
            if let Some(x) = candidate {
                state.q_inv_seq[k] = x;
                self.counts.q_accepted[k] += 1;
            }
        }
    }

    fn update_nu(&mut self, rng: &mut RngStream, state: &mut ChainState) {
        let cfg = self.config;
        let m = cfg.m;
        let offset = self.controls.log_g_offset;
        let nu_old = state.nu;

        let evaluated = (|| -> Result<(f64, f64, f64, f64, f64)> {
            let target = NuTarget::new(&state.q_inv_seq, state.d, m)?;
            let log_g = |nu: f64| {
                let prior = logpdf_prior_nu(nu, cfg.alpha_nu, cfg.beta_nu, m);
                if prior == f64::NEG_INFINITY {
                    prior
                } else {
                    prior + target.log_likelihood(nu) + offset
                }
            };
            let fwd_params = shifted_gamma_params(nu_old, cfg.nu_var, m)?;
            let nu_star = if self.controls.propose_current {
                nu_old
            } else {
                sample_shifted_gamma(rng, &fwd_params)
            };
            let lq_fwd = logpdf_shifted_gamma(nu_star, &fwd_params);
            let lq_bwd = shifted_gamma_params(nu_star, cfg.nu_var, m)
                .map(|p| logpdf_shifted_gamma(nu_old, &p))
                .unwrap_or(f64::NEG_INFINITY);
            Ok((nu_star, log_g(nu_star), log_g(nu_old), lq_fwd, lq_bwd))
        })();

        let (candidate, log_g_star, log_g_old, log_q_fwd, log_q_bwd) = match evaluated {
            Ok((x, a, b, c, d)) => (Some(x), a, b, c, d),
            Err(_) => (None, f64::NEG_INFINITY, f64::NAN, f64::NAN, f64::NAN),
        };
        self.counts.nu_proposed += 1;
        let accepted = self.decide(
            rng,
            ProposalEvent {
                block: Block::Nu,
                state,
                candidate: candidate.map_or(Candidate::Failed, Candidate::Scalar),
                log_g_star,
                log_g_old,
                log_q_fwd,
                log_q_bwd,
                uniform: f64::NAN,
                accepted: false,
            },
        );
        if accepted {
            if let Some(x) = candidate {
                state.nu = x;
                self.counts.nu_accepted += 1;
            }
        }
    }

    fn update_d(&mut self, rng: &mut RngStream, state: &mut ChainState) {
        let cfg = self.config;
        let offset = self.controls.log_g_offset;
        let d_old = state.d;

        let evaluated = (|| -> Result<(f64, f64, f64, f64, f64)> {
            let fwd_params = beta_prop_param(d_old, cfg.a_f)?;
            let d_star = if self.controls.propose_current {
                d_old
            } else {
                sample_scaled_beta(rng, &fwd_params)
            };
            let lq_fwd = logpdf_scaled_beta(d_star, &fwd_params);
            let lq_bwd = logpdf_scaled_beta(d_old, &beta_prop_param(d_star, cfg.a_f)?);
            let lg_star = log_g_d(d_star, &state.q_inv_seq, state.nu) + offset;
            let lg_old = log_g_d(d_old, &state.q_inv_seq, state.nu) + offset;
            Ok((d_star, lg_star, lg_old, lq_fwd, lq_bwd))
        })();

        let (candidate, log_g_star, log_g_old, log_q_fwd, log_q_bwd) = match evaluated {
            Ok((x, a, b, c, d)) => (Some(x), a, b, c, d),
            Err(_) => (None, f64::NEG_INFINITY, f64::NAN, f64::NAN, f64::NAN),
        };
        self.counts.d_proposed += 1;
        let accepted = self.decide(
            rng,
            ProposalEvent {
                block: Block::D,
                state,
                candidate: candidate.map_or(Candidate::Failed, Candidate::Scalar),
                log_g_star,
                log_g_old,
                log_q_fwd,
                log_q_bwd,
                uniform: f64::NAN,
                accepted: false,
            },
        );
        if accepted {
            if let Some(x) = candidate {
                state.d = x;
                self.counts.d_accepted += 1;
            }
        }
    }

    /// One full sweep, in place.
    pub fn sweep(&mut self, rng: &mut RngStream, state: &mut ChainState) {
        for k in 0..state.q_inv_seq.len() {
            self.update_latent(rng, state, k);
        }
        match self.controls.fixed_nu {
            Some(nu) => state.nu = nu,
            None => self.update_nu(rng, state),
        }
        match self.controls.fixed_d {
            Some(d) => state.d = d,
            None => self.update_d(rng, state),
        }
        state.sweep_index += 1;
    }

    fn keeps_state(&self, sweep: usize) -> bool {
        match self.config.state_recording {
            StateRecording::Full => true,
            StateRecording::Thinned => {
                sweep >= self.config.burn_in_states && (sweep - self.config.burn_in_states).is_multiple_of(self.config.thin_states)
            }
        }
    }

    /// Runs `n_iters` sweeps from the standard initialization with the given
    /// random stream.
    pub fn run_with_rng(&mut self, rng: &mut RngStream) -> ChainRecord {
        let n = self.config.n_iters;
        let mut state = self.initial_state();
        let mut nu_trace = Vec::with_capacity(n);
        let mut d_trace = Vec::with_capacity(n);
        let mut state_sweeps = Vec::new();
        let mut state_samples = Vec::new();
        for sweep in 0..n {
            self.sweep(rng, &mut state);
            nu_trace.push(state.nu);
            d_trace.push(state.d);
            if self.keeps_state(sweep) {
                state_sweeps.push(sweep);
                state_samples.push(state.q_inv_seq.clone());
            }
        }
        ChainRecord {
            config: self.config.clone(),
            k_len: self.y_seq.len(),
            nu_trace,
            d_trace,
            state_sweeps,
            state_samples,
            acceptance: self.counts.clone(),
            final_state: state,
        }
    }

    /// Runs with a stream seeded from `config.seed`.
    pub fn run(&mut self) -> ChainRecord {
        let mut rng = RngStream::new(self.config.seed);
        self.run_with_rng(&mut rng)
    }
}

/// One sweep from `state`; counters are discarded.
pub fn gibbs_sweep(
    rng: &mut RngStream,
    state: &ChainState,
    y_seq: &[Vec<f64>],
    config: &SamplerConfig,
) -> Result<ChainState> {
    if state.q_inv_seq.len() != y_seq.len() {
        return Err(Error::InvalidData(format!(
            "state has {} latent matrices but there are {} observations",
            state.q_inv_seq.len(),
            y_seq.len()
        )));
    }
    let mut sampler = GibbsSampler::new(y_seq, config)?;
    let mut next = state.clone();
    sampler.sweep(rng, &mut next);
    Ok(next)
}

/// Full chain from the standard initialization (`Q_k⁻¹ = I`, `ν = nu_init`,
/// `d = d_init`).
pub fn run_chain(y_seq: &[Vec<f64>], config: &SamplerConfig) -> Result<ChainRecord> {
    Ok(GibbsSampler::new(y_seq, config)?.run())
}

/// `n_chains` independent chains on separate threads. Chain `c` draws from
/// ChaCha stream `c` of `config.seed`, so chain 0 equals [`run_chain`].
pub fn run_chains(y_seq: &[Vec<f64>], config: &SamplerConfig, n_chains: usize) -> Result<Vec<ChainRecord>> {
    config.validate()?;
    validate_observations(y_seq, config.m)?;
    if n_chains == 0 {
        return Err(Error::Config("number of chains must be at least 1".into()));
    }
    thread::scope(|scope| {
        let handles: Vec<_> = (0..n_chains)
            .map(|c| {
                scope.spawn(move || {
                    let mut rng = RngStream::for_chain(config.seed, c as u64);
                    GibbsSampler::new(y_seq, config).map(|mut s| s.run_with_rng(&mut rng))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate, ModelParams};

    fn small_config(n_iters: usize) -> SamplerConfig {
        SamplerConfig {
            n_iters,
            burn_in_states: 0,
            burn_in_params: 0,
            thin_states: 1,
            thin_params: 1,
            ..SamplerConfig::defaults(2)
        }
    }

    fn data(k_len: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = RngStream::new(seed);
        simulate(&mut rng, &ModelParams::new(5.0, 0.8, 2).unwrap(), k_len).unwrap().y_seq
    }

    #[test]
    fn defaults() {
        let c = SamplerConfig::defaults(2);
        assert_eq!(c.alpha_nu, 4.0);
        assert_eq!(c.beta_nu, 1.0);
        assert_eq!(c.nu_init, 5.0);
        assert_eq!(c.d_init, 0.5);
        assert_eq!(c.nu_var, 0.1);
        assert_eq!(c.a_f, 5.0);
        assert_eq!(c.n_iters, 10_000);
        assert_eq!((c.burn_in_states, c.burn_in_params), (1_000, 4_000));
        assert_eq!((c.thin_states, c.thin_params), (100, 200));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn config_validation() {
        let base = SamplerConfig::defaults(2);
        let bad = [
            SamplerConfig { n_iters: 4_000, ..base.clone() },
            SamplerConfig { thin_params: 0, ..base.clone() },
            SamplerConfig { a_f: 1.0, ..base.clone() },
            SamplerConfig { nu_var: 0.0, ..base.clone() },
            SamplerConfig { alpha_nu: -1.0, ..base.clone() },
            SamplerConfig { nu_init: 2.0, ..base.clone() },
            SamplerConfig { d_init: 1.5, ..base.clone() },
            SamplerConfig { m: 0, ..base.clone() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
        }
    }

    #[test]
    fn invalid_observations() {
        let c = small_config(5);
        assert!(matches!(run_chain(&[], &c), Err(Error::InvalidData(_))));
        assert!(matches!(run_chain(&[vec![0.0, 1.0], vec![1.0]], &c), Err(Error::InvalidData(_))));
        assert!(matches!(run_chain(&[vec![0.0, f64::NAN]], &c), Err(Error::InvalidData(_))));
    }

    #[test]
    fn single_step_chain() {
        let y = data(1, 5);
        let c = small_config(20);
        let mut blocks = Vec::new();
        let mut sampler = GibbsSampler::new(&y, &c)
            .unwrap()
            .with_observer(|e: &ProposalEvent<'_>| blocks.push(e.block));
        let mut rng = RngStream::new(1);
        let mut state = sampler.initial_state();
        sampler.sweep(&mut rng, &mut state);
        drop(sampler);
        assert_eq!(blocks, vec![Block::Latent(0), Block::Nu, Block::D]);
    }

    #[test]
    fn sweep_order_and_determinism() {
        let y = data(4, 6);
        let c = small_config(3);
        let mut blocks = Vec::new();
        {
            let mut sampler = GibbsSampler::new(&y, &c)
                .unwrap()
                .with_observer(|e: &ProposalEvent<'_>| blocks.push(e.block));
            let mut rng = RngStream::new(2);
            let mut state = sampler.initial_state();
            sampler.sweep(&mut rng, &mut state);
        }
        assert_eq!(
            blocks,
            vec![Block::Latent(0), Block::Latent(1), Block::Latent(2), Block::Latent(3), Block::Nu, Block::D]
        );

        let s0 = ChainState::initial(4, 2, 5.0, 0.5);
        let a = gibbs_sweep(&mut RngStream::new(9), &s0, &y, &c).unwrap();
        let b = gibbs_sweep(&mut RngStream::new(9), &s0, &y, &c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sweep_index, 1);
    }

    #[test]
    fn identity_proposals_leave_state_unchanged() {
        let y = data(6, 7);
        let c = small_config(10);
        let mut sampler = GibbsSampler::new(&y, &c).unwrap().with_controls(SweepControls {
            propose_current: true,
            ..Default::default()
        });
        let mut rng = RngStream::new(3);
        let start = ChainState {
            q_inv_seq: (0..6)
                .map(|k| SpdMatrix::from_rows(&[[1.0 + 0.1 * k as f64, 0.2], [0.2, 0.8]]).unwrap())
                .collect(),
            nu: 4.2,
            d: 0.3,
            sweep_index: 0,
        };
        let mut state = start.clone();
        for _ in 0..5 {
            sampler.sweep(&mut rng, &mut state);
        }
        assert_eq!(state.q_inv_seq, start.q_inv_seq);
        assert_eq!((state.nu, state.d), (start.nu, start.d));
        let counts = sampler.counts();
        assert!(counts.q_accepted.iter().all(|&a| a == 5));
        assert_eq!((counts.nu_accepted, counts.d_accepted), (5, 5));
    }

    #[test]
    fn smoke_run_keeps_support() {
        let y = data(2, 8);
        let c = small_config(50);
        let rec = run_chain(&y, &c).unwrap();
        assert_eq!(rec.nu_trace.len(), 50);
        assert_eq!(rec.state_samples.len(), 50);
        assert!(rec.nu_trace.iter().all(|&nu| nu > 2.0));
        assert!(rec.d_trace.iter().all(|d| (-1.0..=1.0).contains(d)));
        assert!(rec.final_state.is_valid(2));
        for s in &rec.state_samples {
            assert!(s.iter().all(|q| crate::matrix::cholesky(q.as_matrix()).is_ok()));
        }
        let a = &rec.acceptance;
        assert!(a.q_accepted.iter().zip(&a.q_proposed).all(|(x, n)| x <= n));
        assert!(a.nu_accepted <= a.nu_proposed && a.d_accepted <= a.d_proposed);
        assert_eq!(run_chain(&y, &c).unwrap(), rec);
    }

    #[test]
    fn thinned_recording_schedule() {
        let y = data(3, 9);
        let c = SamplerConfig {
            n_iters: 30,
            burn_in_states: 10,
            burn_in_params: 5,
            thin_states: 7,
            thin_params: 2,
            ..SamplerConfig::defaults(2)
        };
        let rec = run_chain(&y, &c).unwrap();
        assert_eq!(rec.state_sweeps, vec![10, 17, 24]);
        assert_eq!(rec.state_samples.len(), 3);
    }

    #[test]
    fn multi_chain_zero_matches_single() {
        let y = data(3, 10);
        let c = small_config(15);
        let chains = run_chains(&y, &c, 3).unwrap();
        assert_eq!(chains.len(), 3);
        assert_eq!(chains[0], run_chain(&y, &c).unwrap());
        assert_ne!(chains[1].nu_trace, chains[0].nu_trace);
    }

    #[test]
    fn fixed_blocks_are_held() {
        let y = data(4, 11);
        let c = small_config(20);
        let rec = GibbsSampler::new(&y, &c)
            .unwrap()
            .with_controls(SweepControls {
                fixed_d: Some(0.0),
                fixed_nu: Some(6.0),
                ..Default::default()
            })
            .run();
        assert!(rec.d_trace.iter().all(|&d| d == 0.0));
        assert!(rec.nu_trace.iter().all(|&nu| nu == 6.0));
        assert_eq!(rec.acceptance.nu_proposed, 0);
    }
}

//! Unnormalized log conditional posteriors for each Gibbs block.
//!
//! Every target is assembled from calls into [`crate::distributions`]
//! (transition densities `W_m(ν, S_k/ν)` with `S_k = (Q_{k−1}⁻¹)^d`, the
//! observation density `N(0, Ω_k)`, the prior on `ν`). Constants that do not
//! depend on the block being updated are kept, so values differ from the
//! hand-expanded conditionals by a block-wise additive constant only.
//!
//! Numerical failures map to `f64::NEG_INFINITY`.

use crate::distributions::{logpdf_mvn_zero, logpdf_prior_nu, logpdf_wishart};
use crate::error::Result;
use crate::matrix::{frac_power, SpdMatrix};
use crate::model::correlation_from_inverse;

pub(crate) fn or_neg_inf(r: Result<f64>) -> f64 {
    match r {
        Ok(v) if !v.is_nan() => v,
        _ => f64::NEG_INFINITY,
    }
}

/// `S_k / ν = (Q_{k−1}⁻¹)^d / ν`, the scale of `Q_k⁻¹ | Q_{k−1}⁻¹`.
pub fn transition_scale(q_prev_inv: &SpdMatrix, nu: f64, d: f64) -> Result<SpdMatrix> {
    frac_power(q_prev_inv, d)?.scale(1.0 / nu)
}

/// `ln p(Q_k⁻¹ | Q_{k−1}⁻¹, ν, d)`.
pub fn log_transition(q_inv: &SpdMatrix, q_prev_inv: &SpdMatrix, nu: f64, d: f64) -> Result<f64> {
    logpdf_wishart(q_inv, nu, &transition_scale(q_prev_inv, nu, d)?)
}

/// `ln N(y; 0, Ω)` with `Ω` the correlation matrix of `(Q⁻¹)⁻¹`.
pub fn log_observation(y: &[f64], q_inv: &SpdMatrix) -> Result<f64> {
    let omega = correlation_from_inverse(q_inv)?;
    Ok(logpdf_mvn_zero(y, &omega.to_spd()?))
}

/// Cached pieces of the conditional for one latent block.
pub(crate) struct LatentTarget<'a> {
    own_scale: SpdMatrix,
    next: Option<&'a SpdMatrix>,
    y: &'a [f64],
    nu: f64,
    d: f64,
    with_likelihood: bool,
}

impl<'a> LatentTarget<'a> {
    pub(crate) fn new(
        q_prev_inv: &SpdMatrix,
        q_next_inv: Option<&'a SpdMatrix>,
        y: &'a [f64],
        nu: f64,
        d: f64,
        with_likelihood: bool,
    ) -> Result<Self> {
        Ok(Self {
            own_scale: transition_scale(q_prev_inv, nu, d)?,
            next: q_next_inv,
            y,
            nu,
            d,
            with_likelihood,
        })
    }

    fn eval(&self, q_inv: &SpdMatrix) -> Result<f64> {
        let mut acc = logpdf_wishart(q_inv, self.nu, &self.own_scale)?;
        if let Some(next) = self.next {
            acc += log_transition(next, q_inv, self.nu, self.d)?;
        }
        if self.with_likelihood {
            acc += log_observation(self.y, q_inv)?;
        }
        Ok(acc)
    }

    pub(crate) fn log_g(&self, q_inv: &SpdMatrix) -> f64 {
        or_neg_inf(self.eval(q_inv))
    }
}

/// Conditional of an interior state `Q_k⁻¹` (`k < K`):
/// `ln N(y_k; 0, Ω_k) + ln W(Q_{k+1}⁻¹; ν, (Q_k⁻¹)^d/ν) + ln W(Q_k⁻¹; ν, (Q_{k−1}⁻¹)^d/ν)`.
///
/// Pass the identity for `q_prev_inv` when `k = 1`.
pub fn log_g_qk(
    q_inv: &SpdMatrix,
    q_prev_inv: &SpdMatrix,
    q_next_inv: &SpdMatrix,
    y: &[f64],
    nu: f64,
    d: f64,
) -> f64 {
    match LatentTarget::new(q_prev_inv, Some(q_next_inv), y, nu, d, true) {
        Ok(t) => t.log_g(q_inv),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Conditional of the terminal state `Q_K⁻¹`:
/// `ln N(y_K; 0, Ω_K) + ln W(Q_K⁻¹; ν, (Q_{K−1}⁻¹)^d/ν)`.
pub fn log_g_qk_terminal(q_inv: &SpdMatrix, q_prev_inv: &SpdMatrix, y: &[f64], nu: f64, d: f64) -> f64 {
    match LatentTarget::new(q_prev_inv, None, y, nu, d, true) {
        Ok(t) => t.log_g(q_inv),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Conditional of `ν`: prior on `ν − m` plus every transition density, with
/// `Q_0 = I`. `−∞` for `ν ≤ m`.
pub fn log_g_nu(nu: f64, q_inv_seq: &[SpdMatrix], d: f64, alpha_nu: f64, beta_nu: f64, m: usize) -> f64 {
    let prior = logpdf_prior_nu(nu, alpha_nu, beta_nu, m);
    if prior == f64::NEG_INFINITY {
        return prior;
    }
    match NuTarget::new(q_inv_seq, d, m) {
        Ok(t) => prior + t.log_likelihood(nu),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Transition scales `S_k` cached across the two evaluations of a `ν` step.
pub(crate) struct NuTarget<'a> {
    q_inv_seq: &'a [SpdMatrix],
    scales: Vec<SpdMatrix>,
}

impl<'a> NuTarget<'a> {
    pub(crate) fn new(q_inv_seq: &'a [SpdMatrix], d: f64, m: usize) -> Result<Self> {
        let mut scales = Vec::with_capacity(q_inv_seq.len());
        let identity = SpdMatrix::identity(m);
        for k in 0..q_inv_seq.len() {
            let prev = if k == 0 { &identity } else { &q_inv_seq[k - 1] };
            scales.push(frac_power(prev, d)?);
        }
        Ok(Self { q_inv_seq, scales })
    }

    fn eval(&self, nu: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (q_inv, s) in self.q_inv_seq.iter().zip(&self.scales) {
            acc += logpdf_wishart(q_inv, nu, &s.scale(1.0 / nu)?)?;
        }
        Ok(acc)
    }

    /// Sum of transition log densities.
    pub(crate) fn log_likelihood(&self, nu: f64) -> f64 {
        or_neg_inf(self.eval(nu))
    }
}

/// Conditional of `d`:
/// `Σ_k [ −(dν/2) ln|Q_{k−1}⁻¹| − (ν/2) Tr(Q_{k−1}^d Q_k⁻¹) ]` with `Q_0 = I`,
/// `−∞` outside `[−1, 1]`. The uniform prior contributes a constant and is
/// left out.
pub fn log_g_d(d: f64, q_inv_seq: &[SpdMatrix], nu: f64) -> f64 {
    if !(-1.0..=1.0).contains(&d) {
        return f64::NEG_INFINITY;
    }
    let Some(first) = q_inv_seq.first() else {
        return 0.0;
    };
    let m = first.dim();
    // k = 1: ln|I| = 0 and Q_0^d = I
    let mut acc = -0.5 * nu * first.as_matrix().trace();
    for pair in q_inv_seq.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        debug_assert_eq!(prev.dim(), m);
        // Q_{k−1}^d = (Q_{k−1}⁻¹)^{−d}
        let q_prev_pow = match frac_power(prev, -d) {
            Ok(p) => p,
            Err(_) => return f64::NEG_INFINITY,
        };
        acc += -0.5 * d * nu * prev.log_det() - 0.5 * nu * q_prev_pow.as_matrix().trace_of_product(cur.as_matrix());
    }
    if acc.is_nan() {
        f64::NEG_INFINITY
    } else {
        acc
    }
}

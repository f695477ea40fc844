//! Proposal distributions and the Metropolis-Hastings decision.

use crate::distributions::{logpdf_wishart, sample_wishart, RngStream};
use crate::error::Result;
use crate::matrix::{diag_sqrt, frac_power, Matrix, SpdMatrix};

use super::targets::transition_scale;

/// Wishart independence proposal `W_m(dof, scale)`.
#[derive(Clone, Debug)]
pub struct WishartProposal {
    pub dof: f64,
    pub scale: SpdMatrix,
}

impl WishartProposal {
    pub fn sample(&self, rng: &mut RngStream) -> Result<SpdMatrix> {
        sample_wishart(rng, self.dof, &self.scale)
    }

    pub fn log_density(&self, x: &SpdMatrix) -> f64 {
        logpdf_wishart(x, self.dof, &self.scale).unwrap_or(f64::NEG_INFINITY)
    }
}

/// Proposal for an interior `Q_k⁻¹`:
/// `W_m(ν + 1, (ν S_k⁻¹ + Q̃ y yᵀ Q̃)⁻¹)` with `S_k = (Q_{k−1}⁻¹)^d` and
/// `Q̃ = (diag_sqrt(Q_{k−1}) + diag_sqrt(Q_{k+1})) / 2` built from the
/// non-inverted neighbours.
pub fn interior_proposal(
    q_prev_inv: &SpdMatrix,
    q_next_inv: &SpdMatrix,
    y: &[f64],
    nu: f64,
    d: f64,
) -> Result<WishartProposal> {
    let q_tilde = diag_sqrt(q_prev_inv.inverse()?.as_matrix())?
        .add(&diag_sqrt(q_next_inv.inverse()?.as_matrix())?)
        .scale(0.5);
    let s_inv = frac_power(q_prev_inv, -d)?;
    let qy = q_tilde.matvec(y);
    let precision = SpdMatrix::new(s_inv.as_matrix().scale(nu).add(&Matrix::outer(&qy)))?;
    Ok(WishartProposal {
        dof: nu + 1.0,
        scale: precision.inverse()?,
    })
}

/// Proposal for the terminal `Q_K⁻¹`: `W_m(ν + 1, S_K/ν)`.
pub fn terminal_proposal(q_prev_inv: &SpdMatrix, nu: f64, d: f64) -> Result<WishartProposal> {
    Ok(WishartProposal {
        dof: nu + 1.0,
        scale: transition_scale(q_prev_inv, nu, d)?,
    })
}

/// Draw a candidate interior state; returns it with its forward log density.
pub fn propose_qk(
    rng: &mut RngStream,
    q_prev_inv: &SpdMatrix,
    q_next_inv: &SpdMatrix,
    y: &[f64],
    nu: f64,
    d: f64,
) -> Result<(SpdMatrix, f64)> {
    let proposal = interior_proposal(q_prev_inv, q_next_inv, y, nu, d)?;
    let x = proposal.sample(rng)?;
    let lq = proposal.log_density(&x);
    Ok((x, lq))
}

/// Draw a candidate terminal state; returns it with its forward log density.
pub fn propose_qk_terminal(rng: &mut RngStream, q_prev_inv: &SpdMatrix, nu: f64, d: f64) -> Result<(SpdMatrix, f64)> {
    let proposal = terminal_proposal(q_prev_inv, nu, d)?;
    let x = proposal.sample(rng)?;
    let lq = proposal.log_density(&x);
    Ok((x, lq))
}

/// `ln g(x*) − ln g(x) + ln q(x | x*) − ln q(x* | x)`, or `None` when the
/// candidate has to be rejected outright (target or forward density out of
/// support, or NaN).
pub fn log_acceptance_ratio(log_g_star: f64, log_g_old: f64, log_q_fwd: f64, log_q_bwd: f64) -> Option<f64> {
    if log_g_star == f64::NEG_INFINITY || log_g_star.is_nan() {
        return None;
    }
    if !log_q_fwd.is_finite() {
        return None;
    }
    let r = log_g_star - log_g_old + log_q_bwd - log_q_fwd;
    if r.is_nan() {
        None
    } else {
        Some(r)
    }
}

/// Accept when `ln u < ratio` for a uniform `u ∈ (0, 1)`.
pub fn mh_decide(uniform: f64, log_g_star: f64, log_g_old: f64, log_q_fwd: f64, log_q_bwd: f64) -> bool {
    match log_acceptance_ratio(log_g_star, log_g_old, log_q_fwd, log_q_bwd) {
        None => false,
        Some(r) => r >= 0.0 || uniform.ln() < r,
    }
}

/// Metropolis-Hastings accept/reject with probability
/// `min(1, exp(ln g* − ln g + ln q_bwd − ln q_fwd))`.
pub fn mh_accept(rng: &mut RngStream, log_g_star: f64, log_g_old: f64, log_q_fwd: f64, log_q_bwd: f64) -> bool {
    let u = rng.uniform_open01();
    mh_decide(u, log_g_star, log_g_old, log_q_fwd, log_q_bwd)
}

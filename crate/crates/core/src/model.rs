//! Generative model: latent Wishart chain, correlations and observations.

use serde::{Deserialize, Serialize};

use crate::distributions::{sample_mvn_zero, sample_wishart, RngStream};
use crate::error::{Error, Result};
use crate::matrix::{frac_power, to_correlation, CorrelationMatrix, SpdMatrix};

/// Wishart degrees of freedom `nu`, persistence exponent `d`, dimension `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nu: f64,
    pub d: f64,
    pub m: usize,
}

impl ModelParams {
    /// Requires `nu > m`, `d ∈ [−1, 1]`, `m ≥ 1`.
    pub fn new(nu: f64, d: f64, m: usize) -> Result<Self> {
        let p = Self { nu, d, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("dimension m must be at least 1".into()));
        }
        if !(self.nu > self.m as f64) || !self.nu.is_finite() {
            return Err(Error::Config(format!(
                "nu = {} must exceed m = {}",
                self.nu, self.m
            )));
        }
        if !(-1.0..=1.0).contains(&self.d) {
            return Err(Error::Config(format!("d = {} must lie in [-1, 1]", self.d)));
        }
        Ok(())
    }
}

/// One realization of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    /// `Q_k⁻¹` for `k = 1..=K`.
    pub q_inv_seq: Vec<SpdMatrix>,
    pub omega_seq: Vec<CorrelationMatrix>,
    pub y_seq: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.y_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_seq.is_empty()
    }
}

/// `Ω = to_correlation(Q)` from the stored inverse `Q⁻¹`.
pub fn correlation_from_inverse(q_inv: &SpdMatrix) -> Result<CorrelationMatrix> {
    to_correlation(&q_inv.inverse()?)
}

/// `Q_k⁻¹ = (1/ν) A E A`, `A = (Q_{k−1}⁻¹)^{d/2}`, `E ~ W_m(ν, I)`.
pub fn step_latent(rng: &mut RngStream, q_prev_inv: &SpdMatrix, params: &ModelParams) -> Result<SpdMatrix> {
    let m = q_prev_inv.dim();
    let e = sample_wishart(rng, params.nu, &SpdMatrix::identity(m))?;
    let a = frac_power(q_prev_inv, params.d / 2.0)?;
    e.congruence(a.as_matrix())?.scale(1.0 / params.nu)
}

/// Forward simulation from `Q_0 = I` for `k_len` steps.
pub fn simulate(rng: &mut RngStream, params: &ModelParams, k_len: usize) -> Result<Trajectory> {
    params.validate()?;
    if k_len == 0 {
        return Err(Error::Config("number of time steps K must be at least 1".into()));
    }
    let mut q_inv_seq = Vec::with_capacity(k_len);
    let mut omega_seq = Vec::with_capacity(k_len);
    let mut y_seq = Vec::with_capacity(k_len);
    let mut prev = SpdMatrix::identity(params.m);
    for _ in 0..k_len {
        let q_inv = step_latent(rng, &prev, params)?;
        let omega = correlation_from_inverse(&q_inv)?;
        let y = sample_mvn_zero(rng, &omega.to_spd()?);
        q_inv_seq.push(q_inv.clone());
        omega_seq.push(omega);
        y_seq.push(y);
        prev = q_inv;
    }
    Ok(Trajectory {
        params: *params,
        q_inv_seq,
        omega_seq,
        y_seq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_of_steps(rng: &mut RngStream, prev: &SpdMatrix, p: &ModelParams, n: usize) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for _ in 0..n {
            let q = step_latent(rng, prev, p).unwrap();
            acc[0] += q.get(0, 0);
            acc[1] += q.get(0, 1);
            acc[2] += q.get(1, 1);
        }
        acc.map(|v| v / n as f64)
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(2.0, 0.5, 2).is_err());
        assert!(ModelParams::new(3.0, 1.5, 2).is_err());
        assert!(ModelParams::new(3.0, -1.0, 2).is_ok());
    }

    #[test]
    fn step_latent_decoupled_when_d_zero() {
        let mut rng = RngStream::new(1);
        let p = ModelParams::new(5.0, 0.0, 2).unwrap();
        let prev = SpdMatrix::from_rows(&[[3.0, 1.0], [1.0, 2.0]]).unwrap();
        let mean = mean_of_steps(&mut rng, &prev, &p, 100_000);
        // W(5, I/5): var of diag = 2/5, off-diag = 1/5
        assert!((mean[0] - 1.0).abs() < 3.0 * (0.4f64 / 1e5).sqrt() * 1.5);
        assert!(mean[1].abs() < 3.0 * (0.2f64 / 1e5).sqrt() * 1.5);
        assert!((mean[2] - 1.0).abs() < 3.0 * (0.4f64 / 1e5).sqrt() * 1.5);
    }

    #[test]
    fn step_latent_identity_start() {
        let mut rng = RngStream::new(2);
        let p = ModelParams::new(5.0, 0.8, 2).unwrap();
        let mean = mean_of_steps(&mut rng, &SpdMatrix::identity(2), &p, 100_000);
        assert!((mean[0] - 1.0).abs() < 0.01);
        assert!(mean[1].abs() < 0.01);
        assert!((mean[2] - 1.0).abs() < 0.01);
    }

    #[test]
    fn step_latent_conditional_mean() {
        // E[Q_k⁻¹ | Q_{k−1}⁻¹] = (Q_{k−1}⁻¹)^d
        let mut rng = RngStream::new(3);
        let p = ModelParams::new(5.0, 0.8, 2).unwrap();
        let prev = SpdMatrix::from_rows(&[[2.0, 0.7], [0.7, 0.8]]).unwrap();
        let target = frac_power(&prev, 0.8).unwrap();
        let n = 100_000;
        let mean = mean_of_steps(&mut rng, &prev, &p, n);
        // Var(X_ij) = (s_ij² + s_ii s_jj)/ν for W(ν, S/ν)
        let s = |i, j| target.get(i, j);
        let se = |i: usize, j: usize| ((s(i, j).powi(2) + s(i, i) * s(j, j)) / 5.0 / n as f64).sqrt();
        assert!((mean[0] - s(0, 0)).abs() < 4.0 * se(0, 0));
        assert!((mean[1] - s(0, 1)).abs() < 4.0 * se(0, 1));
        assert!((mean[2] - s(1, 1)).abs() < 4.0 * se(1, 1));
    }

    #[test]
    fn simulate_shapes_and_invariants() {
        let mut rng = RngStream::new(42);
        let p = ModelParams::new(5.0, 0.8, 2).unwrap();
        let t = simulate(&mut rng, &p, 150).unwrap();
        assert_eq!(t.q_inv_seq.len(), 150);
        assert_eq!(t.omega_seq.len(), 150);
        assert_eq!(t.y_seq.len(), 150);
        for (om, y) in t.omega_seq.iter().zip(&t.y_seq) {
            assert_eq!(om.get(0, 0), 1.0);
            assert_eq!(om.get(1, 1), 1.0);
            assert!(om.get(0, 1).abs() <= 1.0);
            assert!(y.iter().all(|v| v.is_finite()));
        }
        let mut rng2 = RngStream::new(42);
        assert_eq!(simulate(&mut rng2, &p, 150).unwrap(), t);
    }

    #[test]
    fn simulate_univariate() {
        let mut rng = RngStream::new(4);
        let p = ModelParams::new(3.0, 0.5, 1).unwrap();
        let t = simulate(&mut rng, &p, 20_000).unwrap();
        assert!(t.omega_seq.iter().all(|o| o.get(0, 0) == 1.0));
        let var = t.y_seq.iter().map(|y| y[0] * y[0]).sum::<f64>() / t.len() as f64;
        assert!((var - 1.0).abs() < 0.04);
    }

    #[test]
    fn simulate_rejects_empty() {
        let mut rng = RngStream::new(4);
        let p = ModelParams::new(3.0, 0.5, 2).unwrap();
        assert!(matches!(simulate(&mut rng, &p, 0), Err(Error::Config(_))));
    }
}

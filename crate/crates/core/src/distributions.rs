//! Random sampling and log densities for the distributions used by the model
//! and the sampler.
//!
//! All densities are returned in the log domain. `f64::NEG_INFINITY` is an
//! ordinary return value that means "outside the support"; Metropolis-Hastings
//! steps reject such points deterministically.
//!
//! Sampling mechanisms:
//! - the random stream is ChaCha8 ([`RngStream`]), seeded from a `u64`; chains
//!   are separated by ChaCha stream ids.
//! - Gamma variates come from `rand_distr::Gamma` (Marsaglia-Tsang squeeze,
//!   with the `U^{1/a}` boost for shapes below one); chi-square variates are
//!   `Gamma(k/2, scale 2)`.
//! - Wishart draws use the Bartlett decomposition.
//! - Beta variates are `G₁ / (G₁ + G₂)` for independent Gamma variates.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::matrix::{mv_log_gamma, Matrix, SpdMatrix};

const LN_2: f64 = std::f64::consts::LN_2;
const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Seedable, splittable random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for chain `chain` of a multi-chain run.
    pub fn for_chain(seed: u64, chain: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(chain);
        Self { seed, inner }
    }

    /// Forks off a new stream seeded from this one.
    pub fn split(&mut self) -> Self {
        let seed = self.inner.next_u64();
        Self::new(seed)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform_open01(&mut self) -> f64 {
        self.inner.sample(Open01)
    }

    pub fn std_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// `Gamma(shape, scale)`.
    pub fn gamma(&mut self, shape: f64, scale: f64) -> f64 {
        Gamma::new(shape, scale)
            .expect("gamma parameters validated by caller")
            .sample(&mut self.inner)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

pub fn sample_std_normal_vec(rng: &mut RngStream, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.std_normal()).collect()
}

/// `L z` with `L = chol(Σ)` and `z` standard normal.
pub fn sample_mvn_zero(rng: &mut RngStream, sigma: &SpdMatrix) -> Vec<f64> {
    let z = sample_std_normal_vec(rng, sigma.dim());
    sigma.cholesky().matvec(&z)
}

/// Log density of `N(0, Σ)` at `y`.
pub fn logpdf_mvn_zero(y: &[f64], sigma: &SpdMatrix) -> f64 {
    let m = sigma.dim() as f64;
    -0.5 * (m * LN_2PI + sigma.log_det() + sigma.inv_quad_form(y))
}

fn check_wishart_dof(nu: f64, m: usize) -> Result<()> {
    if !(nu > m as f64 - 1.0) || !nu.is_finite() {
        return Err(Error::DomainError(format!(
            "Wishart degrees of freedom {nu} must exceed {}",
            m as f64 - 1.0
        )));
    }
    Ok(())
}

/// Draw from `W_m(ν, S)` by Bartlett decomposition: `X = (L A)(L A)ᵀ`, with
/// `L = chol(S)`, `A_ii = √χ²(ν − i)` (0-based `i`) and standard normal
/// entries below the diagonal.
pub fn sample_wishart(rng: &mut RngStream, nu: f64, s: &SpdMatrix) -> Result<SpdMatrix> {
    let m = s.dim();
    check_wishart_dof(nu, m)?;
    let mut a = Matrix::zeros(m);
    for i in 0..m {
        a.set(i, i, rng.gamma((nu - i as f64) / 2.0, 2.0).sqrt());
        for j in 0..i {
            a.set(i, j, rng.std_normal());
        }
    }
    let b = s.cholesky().matmul(&a);
    SpdMatrix::from_lower_factor(b)
}

/// `ln W_m(X; ν, S) = −(νm/2) ln 2 − ln Γ_m(ν/2) − (ν/2) ln|S| + ((ν−m−1)/2) ln|X| − ½ Tr(S⁻¹X)`.
pub fn logpdf_wishart(x: &SpdMatrix, nu: f64, s: &SpdMatrix) -> Result<f64> {
    let m = s.dim();
    if x.dim() != m {
        return Err(Error::DomainError("Wishart argument and scale differ in size".into()));
    }
    check_wishart_dof(nu, m)?;
    let mf = m as f64;
    Ok(-0.5 * nu * mf * LN_2 - mv_log_gamma(m, nu / 2.0)? - 0.5 * nu * s.log_det()
        + 0.5 * (nu - mf - 1.0) * x.log_det()
        - 0.5 * s.trace_inv_times(x.as_matrix()))
}

/// `Gamma(α, rate β)` shifted right by `shift`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedGammaParams {
    pub alpha: f64,
    pub beta: f64,
    pub shift: f64,
}

/// Shifted Gamma whose mode sits at `nu_mode` and whose variance is `nu_var`.
///
/// `β = ((ν_M − m) + √((ν_M − m)² + 4 ν_var)) / (2 ν_var)`, `α = 1 + (ν_M − m) β`.
pub fn shifted_gamma_params(nu_mode: f64, nu_var: f64, m: usize) -> Result<ShiftedGammaParams> {
    let excess = nu_mode - m as f64;
    if !(excess > 0.0) || !excess.is_finite() {
        return Err(Error::DomainError(format!(
            "proposal mode {nu_mode} must exceed the dimension {m}"
        )));
    }
    if !(nu_var > 0.0) || !nu_var.is_finite() {
        return Err(Error::DomainError(format!("proposal variance {nu_var} must be positive")));
    }
    let beta = (excess + (excess * excess + 4.0 * nu_var).sqrt()) / (2.0 * nu_var);
    Ok(ShiftedGammaParams {
        alpha: 1.0 + excess * beta,
        beta,
        shift: m as f64,
    })
}

/// `shift + g`, `g ~ Gamma(α, rate β)`.
pub fn sample_shifted_gamma(rng: &mut RngStream, params: &ShiftedGammaParams) -> f64 {
    params.shift + rng.gamma(params.alpha, 1.0 / params.beta)
}

pub fn logpdf_shifted_gamma(nu: f64, params: &ShiftedGammaParams) -> f64 {
    let x = nu - params.shift;
    if !(x > 0.0) {
        return f64::NEG_INFINITY;
    }
    let ShiftedGammaParams { alpha, beta, .. } = *params;
    alpha * beta.ln() - ln_gamma(alpha) + (alpha - 1.0) * x.ln() - beta * x
}

/// `Beta(a, 1/a)` mapped onto `[−1, 1]` by `d = 2x − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledBetaParams {
    a: f64,
}

impl ScaledBetaParams {
    /// Fails unless `a > 0`.
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::DomainError(format!("Beta shape {a} must be positive")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        1.0 / self.a
    }

    /// `E[d] = 2a²/(a² + 1) − 1`.
    pub fn mean(&self) -> f64 {
        let a2 = self.a * self.a;
        2.0 * a2 / (a2 + 1.0) - 1.0
    }
}

/// Beta shape for a proposal on `d` centred (in mean) at `d_mean`, clamped to
/// `[1/a_f, a_f]`.
pub fn beta_prop_param(d_mean: f64, a_f: f64) -> Result<ScaledBetaParams> {
    if !(-1.0..=1.0).contains(&d_mean) {
        return Err(Error::DomainError(format!("mean {d_mean} outside [-1, 1]")));
    }
    if !(a_f > 1.0) || !a_f.is_finite() {
        return Err(Error::DomainError(format!("clamp a_f = {a_f} must exceed 1")));
    }
    let mu = (1.0 + d_mean) / 2.0;
    // μ/(1−μ) with 1−μ = (1−d)/2; d = 1 gives +∞ and clamps to a_f.
    let raw = (mu / ((1.0 - d_mean) / 2.0)).sqrt();
    ScaledBetaParams::new(raw.min(a_f).max(1.0 / a_f))
}

/// Draw on the open interval (−1, 1).
///
/// `d = (G₁ − G₂)/(G₁ + G₂)` with `G₁ ~ Gamma(a)`, `G₂ ~ Gamma(1/a)`. A draw
/// that rounds onto ±1 is redrawn.
pub fn sample_scaled_beta(rng: &mut RngStream, params: &ScaledBetaParams) -> f64 {
    loop {
        let g1 = rng.gamma(params.a(), 1.0);
        let g2 = rng.gamma(params.b(), 1.0);
        let d = (g1 - g2) / (g1 + g2);
        if d.is_finite() && d > -1.0 && d < 1.0 {
            return d;
        }
    }
}

/// `ln Beta((d+1)/2; a, 1/a) − ln 2` on (−1, 1), `−∞` elsewhere.
pub fn logpdf_scaled_beta(d: f64, params: &ScaledBetaParams) -> f64 {
    if !(d > -1.0 && d < 1.0) {
        return f64::NEG_INFINITY;
    }
    let (a, b) = (params.a(), params.b());
    let x = (1.0 + d) / 2.0;
    let one_minus_x = (1.0 - d) / 2.0;
    (a - 1.0) * x.ln() + (b - 1.0) * one_minus_x.ln() - ln_beta(a, b) - LN_2
}

/// Gamma(α_ν, rate β_ν) prior on `ν − m`, with the standard Gamma normalizer.
pub fn logpdf_prior_nu(nu: f64, alpha_nu: f64, beta_nu: f64, m: usize) -> f64 {
    let x = nu - m as f64;
    if !(x > 0.0) {
        return f64::NEG_INFINITY;
    }
    alpha_nu * beta_nu.ln() - ln_gamma(alpha_nu) + (alpha_nu - 1.0) * x.ln() - beta_nu * x
}

/// Uniform prior on `[−1, 1]`.
pub fn logpdf_prior_d(d: f64) -> f64 {
    if (-1.0..=1.0).contains(&d) {
        -LN_2
    } else {
        f64::NEG_INFINITY
    }
}

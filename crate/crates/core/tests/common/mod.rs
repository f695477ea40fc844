//! Independent reference implementations for integration tests.
//!
//! Everything here goes through nalgebra and statrs rather than the crate's
//! own kernels, and the target densities are written out term by term.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{Beta, Continuous, Gamma};
use statrs::function::gamma::ln_gamma;

use mvsv_dfc::{Matrix, SpdMatrix};

pub type Na = DMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn na(m: &SpdMatrix) -> Na {
    na_plain(m.as_matrix())
}

pub fn na_plain(m: &Matrix) -> Na {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

pub fn spd(a: &Na) -> SpdMatrix {
    let rows: Vec<Vec<f64>> = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
    SpdMatrix::from_rows(&rows).expect("oracle produced a non-SPD matrix")
}

/// `A Aᵀ + shift·I` with standard normal `A`.
pub fn random_spd_na(r: &mut ChaCha8Rng, m: usize, shift: f64) -> Na {
    let a = DMatrix::from_fn(m, m, |_, _| r.sample::<f64, _>(StandardNormal));
    let x = &a * a.transpose() + DMatrix::identity(m, m) * shift;
    (&x + x.transpose()) * 0.5
}

pub fn random_spd(r: &mut ChaCha8Rng, m: usize, shift: f64) -> SpdMatrix {
    spd(&random_spd_na(r, m, shift))
}

pub fn random_vec(r: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| r.sample(StandardNormal)).collect()
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.random::<f64>()
}

pub fn sym_pow(a: &Na, p: f64) -> Na {
    let e = SymmetricEigen::new(a.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| l.powf(p)));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

pub fn ln_det(a: &Na) -> f64 {
    a.determinant().ln()
}

pub fn inv(a: &Na) -> Na {
    a.clone().try_inverse().expect("singular")
}

pub fn diag_sqrt(a: &Na) -> Na {
    DMatrix::from_diagonal(&a.diagonal().map(f64::sqrt))
}

pub fn max_rel_diff(a: &Na, b: &Na) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

/// `π^{m(m−1)/4} ∏_{i=1}^{m} Γ((ν − i + 1)/2)` in logs.
pub fn ln_mv_gamma(m: usize, half_nu: f64) -> f64 {
    let nu = 2.0 * half_nu;
    (m * (m - 1)) as f64 / 4.0 * std::f64::consts::PI.ln()
        + (1..=m).map(|i| ln_gamma((nu - i as f64 + 1.0) / 2.0)).sum::<f64>()
}

pub fn wishart_logpdf(x: &Na, nu: f64, s: &Na) -> f64 {
    let m = x.nrows() as f64;
    -(nu * m / 2.0) * 2f64.ln() - ln_mv_gamma(x.nrows(), nu / 2.0) - (nu / 2.0) * ln_det(s)
        + ((nu - m - 1.0) / 2.0) * ln_det(x)
        - 0.5 * (inv(s) * x).trace()
}

/// `ln N(y; 0, Ω)` with `Ω` the correlation matrix of `Q = (Q⁻¹)⁻¹`.
pub fn mvn_corr_logpdf(y: &[f64], q_inv: &Na) -> f64 {
    let q = inv(q_inv);
    let dm = DMatrix::from_diagonal(&q.diagonal().map(|v| 1.0 / v.sqrt()));
    let omega = &dm * q * &dm;
    let yv = DVector::from_column_slice(y);
    let m = y.len() as f64;
    -0.5 * m * (2.0 * std::f64::consts::PI).ln() - 0.5 * ln_det(&omega)
        - 0.5 * (yv.transpose() * inv(&omega) * &yv)[(0, 0)]
}

/// Log of the interior conditional, written out in its expanded form:
/// `|Q_k⁻¹|^{(ν+1−m−1)/2} eTr(−ν/2 S_k⁻¹ Q_k⁻¹) |Q_k⁻¹|^{−dν/2}
///  |Q̃_k| eTr(−½ (Q̃_k y yᵀ Q̃_k Q_k⁻¹ + ν S_{k+1}⁻¹ Q_{k+1}⁻¹))`.
pub fn interior_conditional(q_inv: &Na, prev_inv: &Na, next_inv: &Na, y: &[f64], nu: f64, d: f64) -> f64 {
    let m = q_inv.nrows() as f64;
    let s_k_inv = sym_pow(prev_inv, -d);
    let s_next_inv = sym_pow(q_inv, -d);
    let qt = diag_sqrt(&inv(q_inv));
    let yv = DVector::from_column_slice(y);
    let yy = &yv * yv.transpose();
    ((nu + 1.0 - m - 1.0) / 2.0) * ln_det(q_inv) - (nu / 2.0) * (&s_k_inv * q_inv).trace()
        + (-d * nu / 2.0) * ln_det(q_inv)
        + ln_det(&qt)
        - 0.5 * ((&qt * &yy * &qt * q_inv).trace() + nu * (&s_next_inv * next_inv).trace())
}

/// Log of the terminal conditional:
/// `|S_K⁻¹|^{ν/2} |Q_K⁻¹|^{(ν+1−m−1)/2} eTr(−ν/2 S_K⁻¹ Q_K⁻¹) |Q̃_K| eTr(−½ Q̃_K y yᵀ Q̃_K Q_K⁻¹)`.
pub fn terminal_conditional(q_inv: &Na, prev_inv: &Na, y: &[f64], nu: f64, d: f64) -> f64 {
    let m = q_inv.nrows() as f64;
    let s_inv = sym_pow(prev_inv, -d);
    let qt = diag_sqrt(&inv(q_inv));
    let yv = DVector::from_column_slice(y);
    let yy = &yv * yv.transpose();
    (nu / 2.0) * ln_det(&s_inv) + ((nu + 1.0 - m - 1.0) / 2.0) * ln_det(q_inv)
        - (nu / 2.0) * (&s_inv * q_inv).trace()
        + ln_det(&qt)
        - 0.5 * (&qt * &yy * &qt * q_inv).trace()
}

/// `ln g(ν) = ln (ν−m)^{α−1} − K ln Γ_m(ν/2) + (mνK/2) ln ν
///   − (ν/2)(2β + mK ln 2 + Σ_k (ln|S_k| − ln|Q_k⁻¹| + Tr(S_k⁻¹ Q_k⁻¹)))`,
/// `S_k = (Q_{k−1}⁻¹)^d`, `Q_0 = I`.
pub fn nu_conditional(nu: f64, chain: &[Na], d: f64, alpha: f64, beta: f64) -> f64 {
    let m = chain[0].nrows();
    if nu <= m as f64 {
        return f64::NEG_INFINITY;
    }
    let mf = m as f64;
    let k = chain.len() as f64;
    let mut sum = 0.0;
    let mut prev = DMatrix::identity(m, m);
    for q in chain {
        let s = sym_pow(&prev, d);
        sum += ln_det(&s) - ln_det(q) + (inv(&s) * q).trace();
        prev = q.clone();
    }
    (alpha - 1.0) * (nu - mf).ln() - k * ln_mv_gamma(m, nu / 2.0) + (mf * nu * k / 2.0) * nu.ln()
        - (nu / 2.0) * (2.0 * beta + mf * k * 2f64.ln() + sum)
}

/// `ln g(d) = Σ_k (−dν/2) ln|Q_{k−1}⁻¹| − (ν/2) Tr(Q_{k−1}^d Q_k⁻¹)` on `[−1, 1]`.
pub fn d_conditional(d: f64, chain: &[Na], nu: f64) -> f64 {
    if !(-1.0..=1.0).contains(&d) {
        return f64::NEG_INFINITY;
    }
    let m = chain[0].nrows();
    let mut prev_inv = DMatrix::identity(m, m);
    let mut acc = 0.0;
    for q_inv in chain {
        let q_prev_pow_d = sym_pow(&inv(&prev_inv), d);
        acc += (-d * nu / 2.0) * ln_det(&prev_inv) - (nu / 2.0) * (q_prev_pow_d * q_inv).trace();
        prev_inv = q_inv.clone();
    }
    acc
}

/// Shifted-Gamma proposal parameters, mode `ν_M`, variance `ν_var`.
pub fn shifted_gamma_alpha_beta(nu_mode: f64, nu_var: f64, m: usize) -> (f64, f64) {
    let x = nu_mode - m as f64;
    let beta = (x + (x * x + 4.0 * nu_var).sqrt()) / (2.0 * nu_var);
    (1.0 + x * beta, beta)
}

pub fn shifted_gamma_logpdf(nu: f64, nu_mode: f64, nu_var: f64, m: usize) -> f64 {
    let (a, b) = shifted_gamma_alpha_beta(nu_mode, nu_var, m);
    if nu <= m as f64 {
        return f64::NEG_INFINITY;
    }
    Gamma::new(a, b).unwrap().ln_pdf(nu - m as f64)
}

pub fn beta_param(d_mean: f64, a_f: f64) -> f64 {
    let mu = (1.0 + d_mean) / 2.0;
    (mu / (1.0 - mu)).sqrt().min(a_f).max(1.0 / a_f)
}

pub fn scaled_beta_logpdf(d: f64, d_mean: f64, a_f: f64) -> f64 {
    let a = beta_param(d_mean, a_f);
    if d <= -1.0 || d >= 1.0 {
        return f64::NEG_INFINITY;
    }
    Beta::new(a, 1.0 / a).unwrap().ln_pdf((1.0 + d) / 2.0) - 2f64.ln()
}

/// Accept iff `ln u < ln g* − ln g + ln q_bwd − ln q_fwd`.
pub fn mh_oracle(u: f64, lg_star: f64, lg_old: f64, lq_fwd: f64, lq_bwd: f64) -> bool {
    let r = lg_star - lg_old + lq_bwd - lq_fwd;
    u.ln() < r
}

//! Fit simulated data and compare the posterior with the truth.
//!
//! Uses the default schedule (10000 sweeps); expect a few seconds in release
//! mode.

use mvsv_dfc::model::simulate;
use mvsv_dfc::posterior::{summarize, SummaryOptions};
use mvsv_dfc::sampler::run_chain;
use mvsv_dfc::{ModelParams, Result, RngStream, SamplerConfig};

fn main() -> Result<()> {
    let truth = ModelParams::new(5.0, 0.8, 2)?;
    let traj = simulate(&mut RngStream::new(11), &truth, 150)?;

    let config = SamplerConfig::defaults(2).with_seed(1);
    let record = run_chain(&traj.y_seq, &config)?;
    let summary = summarize(&record, &SummaryOptions::from_config(&config))?;

    let band = |s: &[f64]| {
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| mvsv_dfc::posterior::percentile_sorted(&v, p);
        (q(2.5), q(50.0), q(97.5))
    };
    let (lo, mid, hi) = band(&summary.nu_samples);
    println!("nu: true {:.2}, median {mid:.2}, 95% [{lo:.2}, {hi:.2}]", truth.nu);
    let (lo, mid, hi) = band(&summary.d_samples);
    println!("d:  true {:.2}, median {mid:.2}, 95% [{lo:.2}, {hi:.2}]", truth.d);

    let mut covered = 0;
    for (t, true_corr) in summary.corr_percentiles.iter().zip(&traj.omega_seq) {
        let v = &t.pairs[0].values;
        let r = true_corr.get(0, 1);
        if v[0] <= r && r <= v[2] {
            covered += 1;
        }
    }
    println!("true correlation inside the 95% band at {covered}/{} time points", traj.len());

    let rates = &summary.acceptance_rates;
    println!("acceptance: Q {:.3}, nu {:.3}, d {:.3}", rates.q_mean, rates.nu, rates.d);
    Ok(())
}

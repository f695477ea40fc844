//! Independent chains from one seed, with a simple between-chain check.

use mvsv_dfc::model::simulate;
use mvsv_dfc::posterior::thin_and_burn;
use mvsv_dfc::sampler::run_chains;
use mvsv_dfc::{ModelParams, Result, RngStream, SamplerConfig};

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (mean, x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

fn main() -> Result<()> {
    let traj = simulate(&mut RngStream::new(5), &ModelParams::new(5.0, 0.8, 2)?, 100)?;
    let mut config = SamplerConfig::defaults(2).with_seed(2024);
    config.n_iters = 4000;
    config.burn_in_params = 1000;
    config.thin_params = 10;

    let chains = run_chains(&traj.y_seq, &config, 4)?;
    let mut means = Vec::new();
    let mut within = 0.0;
    for (c, record) in chains.iter().enumerate() {
        let nu = thin_and_burn(&record.nu_trace, config.burn_in_params, config.thin_params)?;
        let (m, v) = mean_var(&nu);
        println!("chain {c}: nu mean {m:.3}, sd {:.3}, {} samples", v.sqrt(), nu.len());
        means.push(m);
        within += v / chains.len() as f64;
    }
    let (_, between) = mean_var(&means);
    println!("between-chain variance of means {between:.4}, mean within-chain variance {within:.4}");
    Ok(())
}

//! Watching individual Metropolis-Hastings decisions through an observer.

use mvsv_dfc::model::simulate;
use mvsv_dfc::sampler::{Block, GibbsSampler, ProposalEvent};
use mvsv_dfc::{ModelParams, Result, RngStream, SamplerConfig};

fn main() -> Result<()> {
    let traj = simulate(&mut RngStream::new(1), &ModelParams::new(5.0, 0.8, 2)?, 8)?;
    let mut config = SamplerConfig::defaults(2).with_seed(4);
    config.n_iters = 3;
    config.burn_in_states = 0;
    config.burn_in_params = 0;

    let log = |e: &ProposalEvent<'_>| {
        let block = match e.block {
            Block::Latent(k) => format!("Q_{}", k + 1),
            Block::Nu => "nu".to_string(),
            Block::D => "d".to_string(),
        };
        let ratio = e.log_g_star - e.log_g_old + e.log_q_bwd - e.log_q_fwd;
        println!(
            "sweep {} {block:>4}: log ratio {ratio:9.3}, ln u {:8.3} -> {}",
            e.state.sweep_index,
            e.uniform.ln(),
            if e.accepted { "accept" } else { "reject" }
        );
    };
    let record = GibbsSampler::new(&traj.y_seq, &config)?.with_observer(log).run();
    println!("final nu {:.3}, d {:.3}", record.final_state.nu, record.final_state.d);
    Ok(())
}

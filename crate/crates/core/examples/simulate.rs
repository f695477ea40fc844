//! Forward simulation of observations and latent correlations.

use mvsv_dfc::model::simulate;
use mvsv_dfc::{ModelParams, Result, RngStream};

fn main() -> Result<()> {
    let params = ModelParams::new(5.0, 0.8, 3)?;
    let traj = simulate(&mut RngStream::new(42), &params, 150)?;
    println!("K = {}, m = {}", traj.len(), params.m);
    println!("  k      y_1      y_2      y_3   rho_12   rho_13   rho_23");
    for k in (0..traj.len()).step_by(15) {
        let y = &traj.y_seq[k];
        let r = traj.omega_seq[k].off_diagonals();
        println!(
            "{:3} {:8.3} {:8.3} {:8.3} {:8.3} {:8.3} {:8.3}",
            k + 1,
            y[0],
            y[1],
            y[2],
            r[0],
            r[1],
            r[2]
        );
    }
    Ok(())
}

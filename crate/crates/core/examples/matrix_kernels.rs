//! SPD matrix kernels: factorization, fractional powers, correlation.

use mvsv_dfc::matrix::{diag_sqrt, frac_power, mv_log_gamma, to_correlation};
use mvsv_dfc::{Result, SpdMatrix};

fn main() -> Result<()> {
    let q = SpdMatrix::from_rows(&[[4.0, 1.2, 0.4], [1.2, 2.0, -0.3], [0.4, -0.3, 1.0]])?;
    println!("Q = {q:?}");
    println!("ln|Q| = {:.6}", q.log_det());

    let half = frac_power(&q, 0.5)?;
    let back = half.as_matrix().matmul(half.as_matrix());
    println!("Q^(1/2) Q^(1/2) - Q, max abs = {:.2e}", back.sub(q.as_matrix()).max_abs());

    let inv = q.inverse()?;
    let minus_one = frac_power(&q, -1.0)?;
    println!("Q^(-1) vs inverse, max abs = {:.2e}", inv.as_matrix().sub(minus_one.as_matrix()).max_abs());

    let corr = to_correlation(&q)?;
    println!("correlation = {corr:?}");
    println!("off-diagonals = {:?}", corr.off_diagonals());
    println!("diag_sqrt(Q) = {:?}", diag_sqrt(q.as_matrix())?.diag());

    println!("ln Gamma_3(4.5) = {:.6}", mv_log_gamma(3, 4.5)?);
    Ok(())
}

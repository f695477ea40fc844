//! Wishart and normal samplers with their densities, plus the proposal
//! families used for the degrees of freedom and the memory parameter.

use mvsv_dfc::distributions::{
    beta_prop_param, logpdf_scaled_beta, logpdf_shifted_gamma, logpdf_wishart, sample_mvn_zero, sample_scaled_beta,
    sample_shifted_gamma, sample_wishart, shifted_gamma_params,
};
use mvsv_dfc::{Matrix, Result, RngStream, SpdMatrix};

fn main() -> Result<()> {
    let mut rng = RngStream::new(7);
    let scale = SpdMatrix::from_rows(&[[1.0, 0.5], [0.5, 2.0]])?;
    let nu = 6.0;

    let n = 20_000;
    let mut mean = Matrix::zeros(2);
    for _ in 0..n {
        mean = mean.add(sample_wishart(&mut rng, nu, &scale)?.as_matrix());
    }
    println!("Wishart mean / nu = {:?}", mean.scale(1.0 / (n as f64 * nu)));
    println!("scale            = {scale:?}");

    let x = sample_wishart(&mut rng, nu, &scale)?;
    println!("ln W(X; 6, S) = {:.4}", logpdf_wishart(&x, nu, &scale)?);
    println!("y ~ N(0, S): {:?}", sample_mvn_zero(&mut rng, &scale));

    let g = shifted_gamma_params(5.0, 0.1, 2)?;
    let draw = sample_shifted_gamma(&mut rng, &g);
    println!("nu proposal: alpha {:.3}, beta {:.3}, draw {draw:.4}, ln q {:.4}", g.alpha, g.beta, logpdf_shifted_gamma(draw, &g));

    for d in [-0.5, 0.0, 0.8, 1.0] {
        let p = beta_prop_param(d, 5.0)?;
        let draw = sample_scaled_beta(&mut rng, &p);
        println!(
            "d proposal around {d:5.2}: a {:.3}, mean {:.3}, draw {draw:.4}, ln q {:.4}",
            p.a(),
            p.mean(),
            logpdf_scaled_beta(draw, &p)
        );
    }
    Ok(())
}

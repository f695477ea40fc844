//! Dynamic functional connectivity from a multivariate stochastic volatility
//! model.
//!
//! Observations `y_k ~ N(0, Ω_k)` are driven by a latent Wishart process on
//! `Q_k⁻¹`:
//!
//! ```text
//! Q_k⁻¹ = (1/ν) Q_{k−1}^{−d/2} E_k Q_{k−1}^{−d/2},   E_k ~ W_m(ν, I)
//! Ω_k   = diag(Q_k)^{−1/2} Q_k diag(Q_k)^{−1/2}
//! ```
//!
//! with `Q_0 = I`. The [`sampler`] runs a Metropolis-within-Gibbs chain over
//! `Q_1⁻¹ … Q_K⁻¹`, `ν` and `d`; [`posterior`] turns the chain into
//! percentile bands for every correlation and empirical densities for the two
//! parameters; [`io`] loads and standardizes CSV data and writes results.
//!
//! ```no_run
//! use mvsv_dfc::{model, sampler, posterior, RngStream, ModelParams, SamplerConfig};
//!
//! let mut rng = RngStream::new(42);
//! let truth = model::simulate(&mut rng, &ModelParams::new(5.0, 0.8, 2)?, 150)?;
//! let config = SamplerConfig::defaults(2).with_seed(7);
//! let record = sampler::run_chain(&truth.y_seq, &config)?;
//! let summary = posterior::summarize(&record, &posterior::SummaryOptions::from_config(&config))?;
//! println!("median correlation at k = 1: {}", summary.corr_percentiles[0].pairs[0].values[1]);
//! # Ok::<(), mvsv_dfc::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod distributions;
pub mod error;
pub mod io;
pub mod matrix;
pub mod model;
pub mod posterior;
pub mod sampler;

pub use distributions::RngStream;
pub use error::{Error, Result};
pub use matrix::{CorrelationMatrix, Matrix, SpdMatrix};
pub use model::{ModelParams, Trajectory};
pub use posterior::PosteriorSummary;
pub use sampler::{ChainRecord, ChainState, SamplerConfig};

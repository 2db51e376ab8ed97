//! Numerical experiments on pseudospectra of Haar-random compressions.
//!
//! The crate provides the building blocks for a family of desk-scale
//! verification experiments in non-Hermitian random matrix theory:
//!
//! * [`rand_frames`] — seeded Haar sampling on the set of matrices with
//!   orthonormal columns, and the cubic polarization net;
//! * [`compressions`] — compressions `Q*AQ`, generalized Schur complements,
//!   rotated Hermitian parts, singular values;
//! * [`bspline`] — exact piecewise-polynomial B-splines and the density of
//!   Hermitian quadratic forms `q*Hq`;
//! * [`numrange`] — numerical-range geometry from support-function samples,
//!   with certified inner/outer polygon estimates;
//! * [`numerical_measure`] — the planar density of `q*Mq` by Radon inversion,
//!   small-ball probabilities and their theoretical bounds;
//! * [`tail_bounds`] — least-singular-value tail bounds for random
//!   compressions and their Monte Carlo verification;
//! * [`pseudospectrum`] — certified pseudospectral area, global shifted
//!   singular-value minima, and expected-area bound evaluators.
//!
//! All Monte Carlo loops draw from counter-based [`rng::RngStream`]s, so runs
//! are reproducible bit-for-bit regardless of thread count. With the default
//! `parallel` feature the batch loops fan out via rayon; building with
//! `--no-default-features` gives a fully sequential crate with identical
//! results.

pub mod bspline;
pub mod compressions;
mod error;
mod exec;
pub mod matrix;
pub mod numerical_measure;
pub mod numrange;
pub mod pseudospectrum;
pub mod quad;
pub mod rand_frames;
pub mod rng;
pub mod stats;
pub mod tail_bounds;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use rng::RngStream;

/// Cap the worker pool used by the data-parallel batch loops. Results do not
/// depend on the thread count; this only tunes throughput. No-op when built
/// without the `parallel` feature.
pub fn set_worker_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

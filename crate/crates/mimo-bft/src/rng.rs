//! Seeded, splittable random streams and complex Gaussian sampling.
//!
//! Every Monte Carlo trial owns its own stream, derived from
//! (master_seed, trial_index), so serial and parallel runs draw identical
//! numbers per trial.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SimError};
use crate::matrix::ComplexMatrix;

/// Handle naming one deterministic draw sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Draw one CN(0, variance) scalar: independent real and imaginary parts,
/// each N(0, variance/2).
pub fn draw_cn<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draw an m x n matrix of i.i.d. CN(0, variance) entries, row-major order.
pub fn draw_cn_matrix<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    variance: f64,
) -> Result<ComplexMatrix> {
    if variance <= 0.0 {
        return Err(SimError::NonPositiveVariance(variance));
    }
    let mut out = ComplexMatrix::zeros(m, n);
    for r in 0..m {
        for c in 0..n {
            out.set(r, c, draw_cn(rng, variance));
        }
    }
    Ok(out)
}

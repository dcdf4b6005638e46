//! Compensated summation and empirical moment estimates with standard errors.
//!
//! All Monte Carlo acceptance checks are phrased as 3-standard-error bands
//! around analytic values; the estimators here supply those bands.

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Neumaier compensated sum. Order-insensitive to well below 1e-12 relative
/// for the trial counts used here.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean and its standard error for real samples.
#[derive(Debug, Clone, Copy)]
pub struct RealMoments {
    pub mean: f64,
    pub var: f64,
    pub se_mean: f64,
    pub n: usize,
}

pub fn empirical_real_moments(samples: &[f64]) -> Result<RealMoments> {
    if samples.len() < 2 {
        return Err(SimError::TooFewSamples {
            need: 2,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let mean = neumaier_sum(samples.iter().copied()) / n as f64;
    let var = neumaier_sum(samples.iter().map(|x| (x - mean) * (x - mean))) / (n - 1) as f64;
    Ok(RealMoments {
        mean,
        var,
        se_mean: (var / n as f64).sqrt(),
        n,
    })
}

/// Sample moments of complex samples.
///
/// `var` is the total complex variance E{|x - mean|^2} (unbiased); `se_var`
/// is the standard error of that estimate, computed from the per-sample
/// squared deviations. `se_re`/`se_im` are per-component standard errors of
/// the mean.
#[derive(Debug, Clone, Copy)]
pub struct ComplexMoments {
    pub mean: Complex64,
    pub var: f64,
    pub se_mean: f64,
    pub se_re: f64,
    pub se_im: f64,
    pub se_var: f64,
    pub n: usize,
}

pub fn empirical_complex_moments(samples: &[Complex64]) -> Result<ComplexMoments> {
    if samples.len() < 2 {
        return Err(SimError::TooFewSamples {
            need: 2,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let nf = n as f64;
    let mean_re = neumaier_sum(samples.iter().map(|z| z.re)) / nf;
    let mean_im = neumaier_sum(samples.iter().map(|z| z.im)) / nf;
    let mean = Complex64::new(mean_re, mean_im);
    let var_re = neumaier_sum(samples.iter().map(|z| (z.re - mean_re).powi(2))) / (nf - 1.0);
    let var_im = neumaier_sum(samples.iter().map(|z| (z.im - mean_im).powi(2))) / (nf - 1.0);
    let var = var_re + var_im;
    // SE of the variance estimate from the spread of |x - mean|^2
    let sq_devs: Vec<f64> = samples.iter().map(|z| (z - mean).norm_sqr()).collect();
    let sq_mean = neumaier_sum(sq_devs.iter().copied()) / nf;
    let sq_var = neumaier_sum(sq_devs.iter().map(|v| (v - sq_mean) * (v - sq_mean))) / (nf - 1.0);
    Ok(ComplexMoments {
        mean,
        var,
        se_mean: (var / nf).sqrt(),
        se_re: (var_re / nf).sqrt(),
        se_im: (var_im / nf).sqrt(),
        se_var: (sq_var / nf).sqrt(),
        n,
    })
}

/// Empirical cross-correlation E{x conj(y)} with per-component standard
/// errors, for orthogonality checks.
#[derive(Debug, Clone, Copy)]
pub struct CrossCorrelation {
    pub mean: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub n: usize,
}

pub fn empirical_cross_correlation(pairs: &[(Complex64, Complex64)]) -> Result<CrossCorrelation> {
    if pairs.len() < 2 {
        return Err(SimError::TooFewSamples {
            need: 2,
            got: pairs.len(),
        });
    }
    let products: Vec<Complex64> = pairs.iter().map(|(x, y)| x * y.conj()).collect();
    let m = empirical_complex_moments(&products)?;
    Ok(CrossCorrelation {
        mean: m.mean,
        se_re: m.se_re,
        se_im: m.se_im,
        n: m.n,
    })
}

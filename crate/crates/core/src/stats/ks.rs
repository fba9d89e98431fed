//! One-sample Kolmogorov–Smirnov distance.

use serde::Serialize;

use crate::{Error, Result};

/// A distribution function. `cdf_left(x)` is the limit from the left, equal
/// to `cdf(x)` for continuous laws.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Standard normal law.
#[derive(Debug, Clone, Copy, Default)]
pub struct StdNormal;

impl Cdf for StdNormal {
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x)
    }
}

/// `Φ(x) = erfc(−x/√2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    StdNormal,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSResult {
    pub statistic: f64,
    pub sample_size: u64,
    pub reference: Reference,
}

/// `sup |F_n − F|` evaluated at the sample points, from both sides of each
/// jump of the empirical distribution function. Ties are grouped.
pub fn ks_statistic<C: Cdf + ?Sized>(samples: &[f64], reference: &C) -> Result<f64> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("KS needs a non-empty sample without NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let n_f = n as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == x {
            j += 1;
        }
        let below = i as f64 / n_f;
        let at = j as f64 / n_f;
        d = d
            .max((at - reference.cdf(x)).abs())
            .max((below - reference.cdf_left(x)).abs());
        i = j;
    }
    Ok(d.min(1.0))
}

pub fn ks_normal(samples: &[f64]) -> Result<KSResult> {
    Ok(KSResult {
        statistic: ks_statistic(samples, &StdNormal)?,
        sample_size: samples.len() as u64,
        reference: Reference::StdNormal,
    })
}

pub fn ks_custom<C: Cdf + ?Sized>(samples: &[f64], reference: &C) -> Result<KSResult> {
    Ok(KSResult {
        statistic: ks_statistic(samples, reference)?,
        sample_size: samples.len() as u64,
        reference: Reference::Custom,
    })
}

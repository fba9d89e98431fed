//! Statistics of `μ`/`λ` viewed as random variables on `{1, …, n}` with the
//! uniform measure, and of their summatory walks.
//!
//! Sequence statistics read values through [`SignSource`], so the same code
//! runs over sieved sequences and synthetic test inputs. Every estimator is a
//! fold over blocks merged in ascending block order; integer aggregates are
//! exact and floating ones use compensated summation.

mod average;
mod blocks;
mod distribution;
mod envelope;
mod ks;

pub use average::{average_summatory, fit_sqrt, AverageObserver, AverageSample, AverageSummatory, SqrtFit};
pub use blocks::{
    block_scaling, block_sums_distribution, raw_block_sums, BlockSums, ScalingRow, MIN_BLOCKS, MIN_WINDOW,
};
pub(crate) use distribution::char_fn_from_counts;
pub use distribution::{
    char_fn, lag_covariance, limit_law, moments, value_counts, value_distribution, EmpiricalDistribution,
    LagCovariance, MomentSummary, ValueCounts,
};
pub use envelope::{envelope_check, EnvelopeObserver, EnvelopeReport, Exceedance, Phi};
pub use ks::{ks_custom, ks_normal, ks_statistic, normal_cdf, Cdf, KSResult, Reference, StdNormal};

use crate::arith::{Kind, Sieve};
use crate::{Error, Result};

/// Limiting variance `D[μ] = 6/π²`.
pub const MOBIUS_VARIANCE: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
/// Limiting mass of `{+1}` (and of `{−1}`) for `μ`: `3/π²`.
pub const MOBIUS_SIGN_MASS: f64 = 3.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// Limiting variance of `μ` or `λ`.
pub fn limit_variance(kind: Kind) -> f64 {
    match kind {
        Kind::Mobius => MOBIUS_VARIANCE,
        Kind::Liouville => 1.0,
    }
}

/// A finite sequence `f(1), …, f(len)` of codes in `{−1, 0, +1}`.
pub trait SignSource: Sync {
    fn len(&self) -> u64;

    /// Overwrites `out` with `f(lo), …, f(hi − 1)`; `1 <= lo < hi <= len + 1`.
    fn fill(&self, lo: u64, hi: u64, out: &mut Vec<i8>) -> Result<()>;

    /// Variance used to normalize block sums.
    fn limit_variance(&self) -> f64 {
        1.0
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `μ(1..=n)` or `λ(1..=n)` from the shared sieve.
#[derive(Debug, Clone, Copy)]
pub struct Sieved {
    kind: Kind,
    n: u64,
    sieve: &'static Sieve,
}

impl Sieved {
    pub fn new(kind: Kind, n: u64) -> Result<Self> {
        let sieve = Sieve::global();
        if n == 0 || n >= sieve.limit() {
            return Err(Error::domain(format!(
                "sequence length {n} outside [1, {})",
                sieve.limit()
            )));
        }
        Ok(Sieved { kind, n, sieve })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }
}

impl SignSource for Sieved {
    fn len(&self) -> u64 {
        self.n
    }

    fn fill(&self, lo: u64, hi: u64, out: &mut Vec<i8>) -> Result<()> {
        self.sieve.fill_kind(lo, hi, self.kind, out)
    }

    fn limit_variance(&self) -> f64 {
        limit_variance(self.kind)
    }
}

impl SignSource for [i8] {
    fn len(&self) -> u64 {
        <[i8]>::len(self) as u64
    }

    fn fill(&self, lo: u64, hi: u64, out: &mut Vec<i8>) -> Result<()> {
        if lo == 0 || lo >= hi || hi > <[i8]>::len(self) as u64 + 1 {
            return Err(Error::domain(format!("range [{lo}, {hi}) outside the sequence")));
        }
        out.clear();
        out.extend_from_slice(&self[(lo - 1) as usize..(hi - 1) as usize]);
        Ok(())
    }
}

impl SignSource for Vec<i8> {
    fn len(&self) -> u64 {
        self.as_slice().len() as u64
    }

    fn fill(&self, lo: u64, hi: u64, out: &mut Vec<i8>) -> Result<()> {
        self.as_slice().fill(lo, hi, out)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Population mean and variance with compensated sums.
pub(crate) fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = xs
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / n;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive() {
        let mut naive = 0.0f64;
        let mut comp = CompensatedSum::default();
        for v in std::iter::once(1e16).chain(std::iter::repeat_n(1.0, 10_000)) {
            naive += v;
            comp.add(v);
        }
        assert_eq!(comp.value(), 1e16 + 10_000.0);
        assert_ne!(naive, comp.value());
    }

    #[test]
    fn slice_source_bounds() {
        let v: Vec<i8> = vec![1, -1, 0];
        let mut out = Vec::new();
        v.fill(2, 4, &mut out).unwrap();
        assert_eq!(out, vec![-1, 0]);
        assert!(v.fill(0, 2, &mut out).is_err());
        assert!(v.fill(2, 5, &mut out).is_err());
        assert!(Sieved::new(Kind::Mobius, 0).is_err());
    }
}

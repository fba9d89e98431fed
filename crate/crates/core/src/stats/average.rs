//! Running average `A(n) = (1/n) Σ_{k<=n} L(k)` and its `c·√n` fit.

use serde::Serialize;

use crate::summatory::{Checkpoint, Walk, WalkObserver};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AverageSample {
    pub n: u64,
    /// `Σ_{k<=n} L(k)`, exact.
    pub sum: i128,
    pub average: f64,
}

/// Least-squares `c` in `A(n) ≈ c·√n`; the exponent is fixed at ½.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqrtFit {
    pub coefficient: f64,
    /// Root of the summed squared residuals at the optimum.
    pub residual: f64,
    pub n_lo: u64,
    pub n_hi: u64,
}

impl SqrtFit {
    pub fn predict(&self, n: u64) -> f64 {
        self.coefficient * (n as f64).sqrt()
    }
}

/// Minimizes `Σ (a_i − c·√n_i)²`, giving `c = Σ a_i √n_i / Σ n_i`.
pub fn fit_sqrt(points: &[(u64, f64)]) -> Result<SqrtFit> {
    if points.is_empty() || points.iter().any(|&(n, a)| n == 0 || !a.is_finite()) {
        return Err(Error::domain("sqrt fit needs at least one point with n >= 1"));
    }
    let num: f64 = points.iter().map(|&(n, a)| a * (n as f64).sqrt()).sum();
    let den: f64 = points.iter().map(|&(n, _)| n as f64).sum();
    let c = num / den;
    let rss: f64 = points
        .iter()
        .map(|&(n, a)| {
            let r = a - c * (n as f64).sqrt();
            r * r
        })
        .sum();
    Ok(SqrtFit {
        coefficient: c,
        residual: rss.sqrt(),
        n_lo: points.iter().map(|p| p.0).min().unwrap_or(0),
        n_hi: points.iter().map(|p| p.0).max().unwrap_or(0),
    })
}

/// Walk observer recording `Σ L(k)` at the requested points.
#[derive(Debug, Clone)]
pub struct AverageObserver {
    points: Vec<u64>,
    next: usize,
    sum: i128,
    samples: Vec<AverageSample>,
}

impl AverageObserver {
    pub fn new(points: &[u64]) -> Result<Self> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sample points must be strictly increasing"));
        }
        if points.first().is_some_and(|&n| n < 10) {
            return Err(Error::domain("sample points must be at least 10"));
        }
        Ok(AverageObserver {
            points: points.to_vec(),
            next: 0,
            sum: 0,
            samples: Vec::with_capacity(points.len()),
        })
    }

    pub fn finish(self) -> Result<AverageSummatory> {
        if self.samples.len() != self.points.len() {
            return Err(Error::domain(format!(
                "walk stopped before sample point {}",
                self.points[self.samples.len()]
            )));
        }
        AverageSummatory::new(self.samples)
    }
}

impl WalkObserver for AverageObserver {
    #[inline]
    fn observe(&mut self, n: u64, _m: i64, l: i64) {
        self.sum += l as i128;
        if self.points.get(self.next) == Some(&n) {
            self.samples.push(AverageSample {
                n,
                sum: self.sum,
                average: self.sum as f64 / n as f64,
            });
            self.next += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageSummatory {
    pub samples: Vec<AverageSample>,
    /// Fit over every sample.
    pub fit: SqrtFit,
}

impl AverageSummatory {
    fn new(samples: Vec<AverageSample>) -> Result<Self> {
        let fit = fit_sqrt(&samples.iter().map(|s| (s.n, s.average)).collect::<Vec<_>>())?;
        Ok(AverageSummatory { samples, fit })
    }

    /// Fit restricted to samples with `lo <= n <= hi`.
    pub fn fit_range(&self, lo: u64, hi: u64) -> Result<SqrtFit> {
        let pts: Vec<(u64, f64)> = self
            .samples
            .iter()
            .filter(|s| (lo..=hi).contains(&s.n))
            .map(|s| (s.n, s.average))
            .collect();
        fit_sqrt(&pts)
    }

    pub fn at(&self, n: u64) -> Option<f64> {
        self.samples.iter().find(|s| s.n == n).map(|s| s.average)
    }
}

/// Walks `[1, max point]` and returns `A(n)` at each sample point.
pub fn average_summatory(walk: &Walk<'_>, sample_points: &[u64]) -> Result<AverageSummatory> {
    let mut obs = AverageObserver::new(sample_points)?;
    let end = *sample_points.last().ok_or_else(|| Error::domain("no sample points"))?;
    walk.run(Checkpoint::ORIGIN, end, &mut obs)?;
    obs.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve_block, Kind};
    use crate::exec::Engine;

    #[test]
    fn a_of_ten() {
        let e = Engine::new(1, 1 << 12).unwrap();
        let r = average_summatory(&Walk::new(&e), &[10]).unwrap();
        assert_eq!(r.samples[0].sum, -5);
        assert_eq!(r.samples[0].average, -0.5);
    }

    #[test]
    fn matches_brute_force_to_ten_thousand() {
        let e = Engine::new(2, 999).unwrap();
        let lam = sieve_block(1, 10_001, Kind::Liouville).unwrap();
        let mut l = 0i64;
        let mut total = 0i64;
        let mut expect = Vec::new();
        for (i, &v) in lam.values().iter().enumerate() {
            l += v as i64;
            total += l;
            let n = i as u64 + 1;
            if n >= 10 {
                expect.push((n, total as f64 / n as f64));
            }
        }
        let points: Vec<u64> = expect.iter().map(|p| p.0).collect();
        let r = average_summatory(&Walk::new(&e), &points).unwrap();
        for (s, (n, a)) in r.samples.iter().zip(&expect) {
            assert_eq!(s.n, *n);
            assert_eq!(s.average, *a);
        }
    }

    #[test]
    fn fit_is_least_squares() {
        let pts: Vec<(u64, f64)> = (1..50u64)
            .map(|k| (k * 1000, -0.45 * ((k * 1000) as f64).sqrt() + (k as f64).sin()))
            .collect();
        let fit = fit_sqrt(&pts).unwrap();
        let rss = |c: f64| -> f64 { pts.iter().map(|&(n, a)| (a - c * (n as f64).sqrt()).powi(2)).sum() };
        assert!((fit.residual - rss(fit.coefficient).sqrt()).abs() < 1e-9);
        for dc in [1e-4, -1e-4, 1e-2, -1e-2] {
            assert!(rss(fit.coefficient + dc) > rss(fit.coefficient));
        }
        assert_eq!((fit.n_lo, fit.n_hi), (1000, 49_000));
    }

    #[test]
    fn exact_sqrt_data_recovers_coefficient() {
        let pts: Vec<(u64, f64)> = [100u64, 400, 900]
            .iter()
            .map(|&n| (n, 2.0 * (n as f64).sqrt()))
            .collect();
        let fit = fit_sqrt(&pts).unwrap();
        assert!((fit.coefficient - 2.0).abs() < 1e-15);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn rejects_bad_points() {
        let e = Engine::new(1, 1 << 12).unwrap();
        let w = Walk::new(&e);
        assert!(average_summatory(&w, &[]).is_err());
        assert!(average_summatory(&w, &[9, 20]).is_err());
        assert!(average_summatory(&w, &[20, 20]).is_err());
        assert!(fit_sqrt(&[]).is_err());
    }
}

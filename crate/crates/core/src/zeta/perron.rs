//! Truncated Perron integral
//! `(1/2πi) ∫_{b−iT}^{b+iT} F(s) x^s / s ds` with `b = 1 + 1/log x`.
//!
//! The integrand at `s̄` is the conjugate of the integrand at `s`, so the
//! integral equals `(1/π) ∫_0^T Re[F(b+it) x^{b+it} / (b+it)] dt`, taken by
//! composite Simpson on a fixed grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{invert, Target, ZetaLine, ZetaParams};
use crate::exec::Engine;
use crate::stats::CompensatedSum;
use crate::summatory::partial_sums;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronJob {
    pub target: Target,
    pub x: f64,
    /// Truncation height `T`.
    pub t_max: f64,
    /// Largest allowed Simpson step.
    pub step: f64,
}

impl PerronJob {
    /// Job with the coarsest admissible step `π / (4 log x)`.
    pub fn new(target: Target, x: f64, t_max: f64) -> Result<Self> {
        if !x.is_finite() || x < 2.0 {
            return Err(Error::domain(format!("x = {x} must be at least 2")));
        }
        let job = PerronJob {
            target,
            x,
            t_max,
            step: Self::max_step(x),
        };
        job.validate()?;
        Ok(job)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    /// `π / (4 log x)`: eight grid points per period of `x^{it}`.
    pub fn max_step(x: f64) -> f64 {
        PI / (4.0 * x.ln())
    }

    /// Abscissa of the vertical line.
    pub fn b(&self) -> f64 {
        1.0 + 1.0 / self.x.ln()
    }

    fn validate(&self) -> Result<()> {
        if !self.x.is_finite() || self.x < 2.0 {
            return Err(Error::domain(format!("x = {} must be at least 2", self.x)));
        }
        if !self.t_max.is_finite() || self.t_max < 2.0 {
            return Err(Error::domain(format!("T = {} must be at least 2", self.t_max)));
        }
        if !(self.step > 0.0) || self.step > Self::max_step(self.x) * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "step {} must lie in (0, π/(4 log x)] = (0, {}]",
                self.step,
                Self::max_step(self.x)
            )));
        }
        Ok(())
    }

    /// Number of Simpson intervals (even) and the resulting grid spacing.
    fn grid(&self) -> (usize, f64) {
        let mut m = (self.t_max / self.step).ceil() as usize;
        m = m.max(2);
        if m % 2 == 1 {
            m += 1;
        }
        (m, self.t_max / m as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub target: Target,
    pub x: f64,
    pub t_max: f64,
    pub approx: f64,
    /// `Σ_{n<=x} f(n)`.
    pub exact: i64,
    pub abs_error: f64,
    /// Integrand evaluations.
    pub evaluations: u64,
}

struct Integrand {
    target: Target,
    b: f64,
    ln_x: f64,
    x_b: f64,
    line: ZetaLine,
    double_line: Option<ZetaLine>,
}

impl Integrand {
    fn new(job: &PerronJob) -> Result<Self> {
        let b = job.b();
        let params = ZetaParams::default();
        let double_line = match job.target {
            Target::Mertens => None,
            Target::Liouville => Some(ZetaLine::new(2.0 * b, 2.0 * job.t_max, params)?),
        };
        Ok(Integrand {
            target: job.target,
            b,
            ln_x: job.x.ln(),
            x_b: job.x.powf(b),
            line: ZetaLine::new(b, job.t_max, params)?,
            double_line,
        })
    }

    fn eval(&self, t: f64) -> Result<f64> {
        let s = Complex64::new(self.b, t);
        let inv = invert(self.line.eval(t)?, s)?;
        let f = match (&self.target, &self.double_line) {
            (Target::Liouville, Some(line)) => line.eval(2.0 * t)? * inv,
            _ => inv,
        };
        let (sin, cos) = (t * self.ln_x).sin_cos();
        let x_s = Complex64::new(cos, sin) * self.x_b;
        Ok((f * x_s / s).re)
    }
}

/// Evaluates the truncated integral and compares it with the exact sum.
pub fn perron_truncated(job: &PerronJob) -> Result<QuadratureResult> {
    job.validate()?;
    let integrand = Integrand::new(job)?;
    let (m, h) = job.grid();
    let values: Vec<f64> = (0..=m)
        .into_par_iter()
        .map(|j| integrand.eval(j as f64 * h))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::default();
    for (j, &v) in values.iter().enumerate() {
        let w = if j == 0 || j == m {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * v);
    }
    let approx = acc.value() * h / 3.0 / PI;

    let floor = job.x.floor() as u64;
    let sums = partial_sums(&Engine::with_workers(1)?, floor)?;
    let exact = sums.get(job.target.kind());
    Ok(QuadratureResult {
        target: job.target,
        x: job.x,
        t_max: job.t_max,
        approx,
        exact,
        abs_error: (approx - exact as f64).abs(),
        evaluations: values.len() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderScan {
    pub target: Target,
    pub x: f64,
    pub rows: Vec<QuadratureResult>,
    /// Least-squares slope of `log(abs_error)` against `log T`.
    pub slope: f64,
}

/// Perron error at each `T`, plus the fitted log-log slope.
pub fn remainder_scan(target: Target, x: f64, ts: &[f64]) -> Result<RemainderScan> {
    if ts.len() < 2 {
        return Err(Error::domain("remainder scan needs at least two values of T"));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("T values must be strictly increasing"));
    }
    let rows = ts
        .iter()
        .map(|&t| perron_truncated(&PerronJob::new(target, x, t)?))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.t_max.ln(), r.abs_error.max(f64::MIN_POSITIVE).ln()))
        .collect();
    Ok(RemainderScan {
        target,
        x,
        slope: ls_slope(&pts),
        rows,
    })
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

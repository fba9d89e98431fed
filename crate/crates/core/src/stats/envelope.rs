//! Scan of `|S(n)| <= φ(n)·√n` over a whole walk.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::Kind;
use crate::summatory::{Checkpoint, Walk, WalkObserver};
use crate::{Error, Result};

const TOP: usize = 10;
/// Violation locations kept verbatim; the count is always exact.
const MAX_LOCATIONS: usize = 1_000;

/// Slowly increasing envelope factor, natural logarithms throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phi {
    Log,
    LogLog,
    SqrtLog,
}

impl Phi {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            Phi::Log => n.ln(),
            Phi::LogLog => n.ln().ln(),
            Phi::SqrtLog => n.ln().sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Phi::Log => "log",
            Phi::LogLog => "loglog",
            Phi::SqrtLog => "sqrt_log",
        }
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Phi {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log" => Ok(Phi::Log),
            "loglog" | "log_log" => Ok(Phi::LogLog),
            "sqrt_log" | "sqrtlog" => Ok(Phi::SqrtLog),
            other => Err(format!("unknown phi `{other}` (expected log, loglog or sqrt_log)")),
        }
    }
}

/// `|S(n)| / (φ(n)·√n)`; infinite where the bound is not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exceedance {
    pub n: u64,
    pub value: i64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub kind: Kind,
    pub phi: Phi,
    pub n_max: u64,
    pub violations: u64,
    /// First violation locations, at most 1000.
    pub locations: Vec<u64>,
    /// The ten largest ratios, largest first, ties by smaller `n`.
    pub largest: Vec<Exceedance>,
}

#[derive(Debug, Clone, Default)]
struct Track {
    violations: u64,
    locations: Vec<u64>,
    largest: Vec<Exceedance>,
}

impl Track {
    #[inline]
    fn check(&mut self, n: u64, value: i64, bound: f64) {
        let a = value.unsigned_abs() as f64;
        if a > bound {
            self.violations += 1;
            if self.locations.len() < MAX_LOCATIONS {
                self.locations.push(n);
            }
        }
        let floor = if self.largest.len() < TOP {
            f64::NEG_INFINITY
        } else {
            self.largest[TOP - 1].ratio
        };
        let ratio = if bound > 0.0 { a / bound } else { f64::INFINITY };
        if ratio > floor {
            let e = Exceedance { n, value, bound, ratio };
            let pos = self.largest.partition_point(|x| x.ratio >= ratio);
            self.largest.insert(pos, e);
            self.largest.truncate(TOP);
        }
    }
}

/// Tracks both walks at once.
#[derive(Debug, Clone)]
pub struct EnvelopeObserver {
    phi: Phi,
    n_max: u64,
    m: Track,
    l: Track,
}

impl EnvelopeObserver {
    pub fn new(phi: Phi) -> Self {
        EnvelopeObserver {
            phi,
            n_max: 0,
            m: Track::default(),
            l: Track::default(),
        }
    }

    pub fn report(&self, kind: Kind) -> EnvelopeReport {
        let t = match kind {
            Kind::Mobius => &self.m,
            Kind::Liouville => &self.l,
        };
        EnvelopeReport {
            kind,
            phi: self.phi,
            n_max: self.n_max,
            violations: t.violations,
            locations: t.locations.clone(),
            largest: t.largest.clone(),
        }
    }
}

impl WalkObserver for EnvelopeObserver {
    #[inline]
    fn observe(&mut self, n: u64, m: i64, l: i64) {
        self.n_max = n;
        if n < 2 {
            return;
        }
        let x = n as f64;
        let bound = self.phi.eval(x) * x.sqrt();
        self.m.check(n, m, bound);
        self.l.check(n, l, bound);
    }
}

/// Counts `n` in `[2, n_max]` with `|S(n)| > φ(n)·√n` for `M` (`Kind::Mobius`)
/// or `L` (`Kind::Liouville`).
pub fn envelope_check(walk: &Walk<'_>, phi: Phi, kind: Kind, n_max: u64) -> Result<EnvelopeReport> {
    if n_max < 2 {
        return Err(Error::domain("envelope check needs n_max >= 2"));
    }
    let mut obs = EnvelopeObserver::new(phi);
    walk.run(Checkpoint::ORIGIN, n_max, &mut obs)?;
    Ok(obs.report(kind))
}

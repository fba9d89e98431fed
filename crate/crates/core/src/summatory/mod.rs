//! Partial sums `M(x) = Σ μ(k)` and `L(x) = Σ λ(k)`.
//!
//! [`Walk`] streams both sums through any [`WalkObserver`]; [`Accumulator`]
//! is the observer that keeps checkpoints. A checkpoint is recorded at every
//! stride multiple, at every change of sign (−, 0, +) of either walk, and at
//! every new extreme of either walk, plus the first and last `x`. With those
//! rows present, sign events, extremes and running `max|S|` records can all
//! be recovered from the checkpoint list alone, including after a save/load.

mod events;
mod io;

use std::time::Instant;

use serde::Serialize;

pub use events::{ratio_diagnostic, scan_sign_events, RatioDiagnostic, RatioRecord, SignEvent};
pub use io::{from_csv, load_checkpoints, save_checkpoints, to_csv};

use crate::arith::{Kind, Sieve};
use crate::exec::Engine;
use crate::{Error, Result};

/// Default checkpoint stride.
pub const DEFAULT_STRIDE: u64 = 1_000_000;

/// `(x, M(x), L(x))`. `x = 0` is the empty walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Checkpoint {
    pub x: u64,
    pub m: i64,
    pub l: i64,
}

impl Checkpoint {
    pub const ORIGIN: Checkpoint = Checkpoint { x: 0, m: 0, l: 0 };

    pub fn new(x: u64, m: i64, l: i64) -> Self {
        Checkpoint { x, m, l }
    }

    pub fn get(&self, which: Kind) -> i64 {
        match which {
            Kind::Mobius => self.m,
            Kind::Liouville => self.l,
        }
    }
}

/// Receives `(n, M(n), L(n))` for every `n` of a walk, in order.
pub trait WalkObserver {
    fn observe(&mut self, n: u64, m: i64, l: i64);
}

impl<O: WalkObserver + ?Sized> WalkObserver for &mut O {
    #[inline]
    fn observe(&mut self, n: u64, m: i64, l: i64) {
        (**self).observe(n, m, l)
    }
}

macro_rules! tuple_observer {
    ($($name:ident . $idx:tt),+) => {
        impl<$($name: WalkObserver),+> WalkObserver for ($($name,)+) {
            #[inline]
            fn observe(&mut self, n: u64, m: i64, l: i64) {
                $(self.$idx.observe(n, m, l);)+
            }
        }
    };
}

tuple_observer!(A.0);
tuple_observer!(A.0, B.1);
tuple_observer!(A.0, B.1, C.2);
tuple_observer!(A.0, B.1, C.2, D.3);
tuple_observer!(A.0, B.1, C.2, D.3, E.4);

/// Sequential reducer over sieve blocks produced on an [`Engine`].
pub struct Walk<'a> {
    engine: &'a Engine,
    sieve: &'a Sieve,
    progress: bool,
}

impl<'a> Walk<'a> {
    pub fn new(engine: &'a Engine) -> Self {
        Walk {
            engine,
            sieve: Sieve::global(),
            progress: false,
        }
    }

    pub fn with_sieve(engine: &'a Engine, sieve: &'a Sieve) -> Self {
        Walk {
            engine,
            sieve,
            progress: false,
        }
    }

    /// Report progress on stderr for long walks.
    pub fn progress(mut self, on: bool) -> Self {
        self.progress = on;
        self
    }

    pub fn engine(&self) -> &Engine {
        self.engine
    }

    pub fn sieve(&self) -> &Sieve {
        self.sieve
    }

    /// Continues from `start` through `end` inclusive. Returns the final
    /// checkpoint.
    pub fn run<O: WalkObserver>(&self, start: Checkpoint, end: u64, obs: &mut O) -> Result<Checkpoint> {
        if end < start.x {
            return Err(Error::domain(format!("walk end {end} precedes start {}", start.x)));
        }
        if end == start.x {
            return Ok(start);
        }
        if end >= self.sieve.limit() {
            return Err(Error::domain(format!(
                "walk end {end} is beyond the sieve limit {}",
                self.sieve.limit()
            )));
        }
        let sieve = self.sieve;
        let mut m = start.m;
        let mut l = start.l;
        let began = Instant::now();
        let mut next_report = 0u64;
        self.engine.ordered(
            start.x + 1,
            end + 1,
            |lo, hi| sieve.pair(lo, hi),
            |lo, (mu, lambda)| {
                for (i, (&dm, &dl)) in mu.values().iter().zip(lambda.values()).enumerate() {
                    m += dm as i64;
                    l += dl as i64;
                    obs.observe(lo + i as u64, m, l);
                }
                if self.progress && lo >= next_report {
                    eprintln!("walk: {} / {end} ({:.1}s)", mu.hi() - 1, began.elapsed().as_secs_f64());
                    next_report = lo + (1 << 25);
                }
                Ok(())
            },
        )?;
        Ok(Checkpoint::new(end, m, l))
    }
}

/// Exact `(x, M(x), L(x))` from block sums.
pub fn partial_sums(engine: &Engine, x: u64) -> Result<Checkpoint> {
    if x == 0 {
        return Ok(Checkpoint::ORIGIN);
    }
    let sieve = Sieve::global();
    let mut m = 0i64;
    let mut l = 0i64;
    engine.ordered(
        1,
        x + 1,
        |lo, hi| sieve.pair(lo, hi).map(|(mu, la)| (mu.sum(), la.sum())),
        |_, (dm, dl)| {
            m += dm;
            l += dl;
            Ok(())
        },
    )?;
    Ok(Checkpoint::new(x, m, l))
}

fn sign(v: i64) -> i8 {
    v.signum() as i8
}

/// Checkpoint-recording observer.
#[derive(Debug, Clone)]
pub struct Accumulator {
    stride: u64,
    checkpoints: Vec<Checkpoint>,
    last: Checkpoint,
    sign_m: i8,
    sign_l: i8,
    min_m: i64,
    max_m: i64,
    min_l: i64,
    max_l: i64,
}

impl Accumulator {
    pub fn new(stride: u64) -> Result<Self> {
        if stride == 0 {
            return Err(Error::domain("checkpoint stride must be at least 1"));
        }
        Ok(Accumulator {
            stride,
            checkpoints: Vec::new(),
            last: Checkpoint::ORIGIN,
            sign_m: 0,
            sign_l: 0,
            min_m: 0,
            max_m: 0,
            min_l: 0,
            max_l: 0,
        })
    }

    /// Picks up where `series` ended, carrying signs and extremes.
    pub fn resume(series: WalkSeries, stride: u64) -> Result<Self> {
        let mut acc = Accumulator::new(stride)?;
        let Some(summary) = series.summary() else {
            return Ok(acc);
        };
        let last = *series.last().expect("non-empty series");
        acc.last = last;
        acc.sign_m = sign(last.m);
        acc.sign_l = sign(last.l);
        acc.min_m = summary.min_m;
        acc.max_m = summary.max_m;
        acc.min_l = summary.min_l;
        acc.max_l = summary.max_l;
        acc.checkpoints = series.checkpoints;
        Ok(acc)
    }

    /// Where a walk feeding this accumulator should continue from.
    pub fn position(&self) -> Checkpoint {
        self.last
    }

    pub fn finish(mut self) -> WalkSeries {
        if self.last.x > 0 && self.checkpoints.last().map(|c| c.x) != Some(self.last.x) {
            self.checkpoints.push(self.last);
        }
        WalkSeries {
            checkpoints: self.checkpoints,
        }
    }
}

impl WalkObserver for Accumulator {
    #[inline]
    fn observe(&mut self, n: u64, m: i64, l: i64) {
        let sm = sign(m);
        let sl = sign(l);
        let mut keep = n % self.stride == 0;
        if self.last.x == 0 {
            self.min_m = m;
            self.max_m = m;
            self.min_l = l;
            self.max_l = l;
            keep = true;
        } else {
            if sm != self.sign_m || sl != self.sign_l {
                keep = true;
            }
            if m > self.max_m {
                self.max_m = m;
                keep = true;
            } else if m < self.min_m {
                self.min_m = m;
                keep = true;
            }
            if l > self.max_l {
                self.max_l = l;
                keep = true;
            } else if l < self.min_l {
                self.min_l = l;
                keep = true;
            }
        }
        self.sign_m = sm;
        self.sign_l = sl;
        self.last = Checkpoint { x: n, m, l };
        if keep {
            self.checkpoints.push(self.last);
        }
    }
}

/// Accumulates `[1, range_end]` with the given checkpoint stride.
pub fn accumulate(walk: &Walk<'_>, range_end: u64, stride: u64) -> Result<WalkSeries> {
    if range_end == 0 {
        return Err(Error::domain("range_end must be at least 1"));
    }
    let mut acc = Accumulator::new(stride)?;
    walk.run(Checkpoint::ORIGIN, range_end, &mut acc)?;
    Ok(acc.finish())
}

/// Checkpoints of one walk over `[1, n_max]`, ascending in `x`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WalkSeries {
    checkpoints: Vec<Checkpoint>,
}

impl WalkSeries {
    /// Validates ordering and the `|S(x)| <= x`, `L(x) ≡ x (mod 2)` invariants.
    pub fn new(checkpoints: Vec<Checkpoint>) -> Result<Self> {
        if let Some((i, _)) = checkpoints
            .iter()
            .enumerate()
            .find(|(i, c)| !checkpoint_plausible(c) || (*i > 0 && checkpoints[i - 1].x >= c.x))
        {
            return Err(Error::domain(format!(
                "checkpoint {i} ({:?}) breaks ordering or value bounds",
                checkpoints[i]
            )));
        }
        Ok(WalkSeries { checkpoints })
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn n_max(&self) -> u64 {
        self.last().map_or(0, |c| c.x)
    }

    /// Extremes, first non-negative/positive `L`, and sign-change counts.
    /// `None` for an empty series.
    pub fn summary(&self) -> Option<WalkSummary> {
        let first = *self.checkpoints.first()?;
        let mut s = WalkSummary {
            n_max: self.n_max(),
            first_pos_l: None,
            first_nonneg_l: None,
            min_m: first.m,
            argmin_m: first.x,
            max_m: first.m,
            argmax_m: first.x,
            min_l: first.l,
            argmin_l: first.x,
            max_l: first.l,
            argmax_l: first.x,
            sign_changes_m: 0,
            sign_changes_l: 0,
        };
        let mut prev = first;
        for &c in &self.checkpoints {
            if c.m < s.min_m {
                (s.min_m, s.argmin_m) = (c.m, c.x);
            }
            if c.m > s.max_m {
                (s.max_m, s.argmax_m) = (c.m, c.x);
            }
            if c.l < s.min_l {
                (s.min_l, s.argmin_l) = (c.l, c.x);
            }
            if c.l > s.max_l {
                (s.max_l, s.argmax_l) = (c.l, c.x);
            }
            if c.x > 1 {
                if s.first_pos_l.is_none() && c.l > 0 {
                    s.first_pos_l = Some(c.x);
                }
                if s.first_nonneg_l.is_none() && c.l >= 0 {
                    s.first_nonneg_l = Some(c.x);
                }
            }
            if sign(c.m) != sign(prev.m) {
                s.sign_changes_m += 1;
            }
            if sign(c.l) != sign(prev.l) {
                s.sign_changes_l += 1;
            }
            prev = c;
        }
        Some(s)
    }
}

fn checkpoint_plausible(c: &Checkpoint) -> bool {
    c.x >= 1 && c.m.unsigned_abs() <= c.x && c.l.unsigned_abs() <= c.x && (c.l - c.x as i64).rem_euclid(2) == 0
}

/// Walk statistics; serializes to a flat JSON object with stable keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkSummary {
    pub n_max: u64,
    #[serde(rename = "first_pos_L")]
    pub first_pos_l: Option<u64>,
    #[serde(rename = "first_nonneg_L")]
    pub first_nonneg_l: Option<u64>,
    #[serde(rename = "min_M")]
    pub min_m: i64,
    #[serde(rename = "argmin_M")]
    pub argmin_m: u64,
    #[serde(rename = "max_M")]
    pub max_m: i64,
    #[serde(rename = "argmax_M")]
    pub argmax_m: u64,
    #[serde(rename = "min_L")]
    pub min_l: i64,
    #[serde(rename = "argmin_L")]
    pub argmin_l: u64,
    #[serde(rename = "max_L")]
    pub max_l: i64,
    #[serde(rename = "argmax_L")]
    pub argmax_l: u64,
    #[serde(rename = "sign_changes_M")]
    pub sign_changes_m: u64,
    #[serde(rename = "sign_changes_L")]
    pub sign_changes_l: u64,
}

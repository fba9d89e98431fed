//! Segmented sieve for `μ` and `λ` over contiguous ranges.
//!
//! Each base prime `p <= √hi` is applied with full multiplicity: every
//! multiple of `p^j` gets one parity flip and one factor `p` in a running
//! product, and `j >= 2` marks the entry as not squarefree. Whatever is left
//! when the product falls short of `k` is a single prime above `√hi`, which
//! flips the parity once more.

use std::io::Write;
use std::sync::OnceLock;

use super::{isqrt, small_primes, Kind};
use crate::{Error, Result};

/// Largest exclusive upper end a [`Sieve`] accepts by default.
pub const DEFAULT_LIMIT: u64 = 1 << 40;
/// Default number of entries per produced block.
pub const DEFAULT_BLOCK_LEN: usize = 1 << 22;
/// Inner working segment; keeps the product/state scratch in cache.
const SEGMENT_LEN: usize = 1 << 16;

const ODD: u8 = 1;
const SQUAREFUL: u8 = 2;

/// Sign codes of `μ` or `λ` over `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSequence {
    lo: u64,
    hi: u64,
    kind: Kind,
    values: Vec<i8>,
}

impl SignSequence {
    /// Wraps externally produced codes, checking the sequence invariants
    /// that do not need factoring (range shape, code alphabet, no zero for λ).
    pub fn from_values(lo: u64, kind: Kind, values: Vec<i8>) -> Result<Self> {
        if lo == 0 || values.is_empty() {
            return Err(Error::domain("sign sequence needs lo >= 1 and at least one value"));
        }
        let bad = match kind {
            Kind::Mobius => values.iter().position(|v| !(-1..=1).contains(v)),
            Kind::Liouville => values.iter().position(|&v| v != 1 && v != -1),
        };
        if let Some(i) = bad {
            return Err(Error::domain(format!(
                "invalid {kind} code {} at k = {}",
                values[i],
                lo + i as u64
            )));
        }
        let hi = lo + values.len() as u64;
        Ok(SignSequence { lo, hi, kind, values })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i8> {
        self.values
    }

    /// Value at `k`, if `k` lies in the block.
    pub fn get(&self, k: u64) -> Option<i8> {
        if k < self.lo || k >= self.hi {
            return None;
        }
        Some(self.values[(k - self.lo) as usize])
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().map(|&v| v as i64).sum()
    }
}

/// Base-prime table plus the range limit it covers. Immutable once built,
/// so one instance is shared by every worker.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    primes: Vec<u32>,
}

impl Sieve {
    /// Sieve accepting ranges with `hi <= limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=DEFAULT_LIMIT).contains(&limit) {
            return Err(Error::domain(format!("sieve limit must lie in [2, 2^40], got {limit}")));
        }
        Ok(Sieve {
            limit,
            primes: small_primes(isqrt(limit - 1)),
        })
    }

    /// Process-wide sieve with the default `2^40` limit.
    pub fn global() -> &'static Sieve {
        static GLOBAL: OnceLock<Sieve> = OnceLock::new();
        GLOBAL.get_or_init(|| Sieve::new(DEFAULT_LIMIT).expect("default limit is valid"))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check_range(&self, lo: u64, hi: u64) -> Result<()> {
        if lo == 0 || lo >= hi {
            return Err(Error::domain(format!(
                "invalid sieve range [{lo}, {hi}): need 1 <= lo < hi"
            )));
        }
        if hi > self.limit {
            return Err(Error::domain(format!(
                "sieve range end {hi} exceeds limit {}",
                self.limit
            )));
        }
        Ok(())
    }

    pub fn block(&self, lo: u64, hi: u64, kind: Kind) -> Result<SignSequence> {
        self.check_range(lo, hi)?;
        let mut values = vec![0i8; (hi - lo) as usize];
        match kind {
            Kind::Mobius => self.fill(lo, hi, Some(&mut values), None),
            Kind::Liouville => self.fill(lo, hi, None, Some(&mut values)),
        }
        Ok(SignSequence { lo, hi, kind, values })
    }

    /// `μ` and `λ` over the same range in one pass.
    pub fn pair(&self, lo: u64, hi: u64) -> Result<(SignSequence, SignSequence)> {
        self.check_range(lo, hi)?;
        let len = (hi - lo) as usize;
        let mut mu = vec![0i8; len];
        let mut lambda = vec![0i8; len];
        self.fill(lo, hi, Some(&mut mu), Some(&mut lambda));
        Ok((
            SignSequence {
                lo,
                hi,
                kind: Kind::Mobius,
                values: mu,
            },
            SignSequence {
                lo,
                hi,
                kind: Kind::Liouville,
                values: lambda,
            },
        ))
    }

    /// Writes codes for `[lo, hi)` into `out`, resizing it. Reuses the
    /// caller's allocation across blocks.
    pub fn fill_kind(&self, lo: u64, hi: u64, kind: Kind, out: &mut Vec<i8>) -> Result<()> {
        self.check_range(lo, hi)?;
        out.clear();
        out.resize((hi - lo) as usize, 0);
        match kind {
            Kind::Mobius => self.fill(lo, hi, Some(out), None),
            Kind::Liouville => self.fill(lo, hi, None, Some(out)),
        }
        Ok(())
    }

    fn fill(&self, lo: u64, hi: u64, mut mu: Option<&mut [i8]>, mut lambda: Option<&mut [i8]>) {
        let mut prod = vec![0u64; SEGMENT_LEN];
        let mut state = vec![0u8; SEGMENT_LEN];
        let mut seg_lo = lo;
        while seg_lo < hi {
            let seg_hi = hi.min(seg_lo + SEGMENT_LEN as u64);
            let len = (seg_hi - seg_lo) as usize;
            self.segment(seg_lo, seg_hi, &mut prod[..len], &mut state[..len]);
            let off = (seg_lo - lo) as usize;
            if let Some(mu) = mu.as_deref_mut() {
                for (dst, &s) in mu[off..off + len].iter_mut().zip(&state[..len]) {
                    *dst = if s & SQUAREFUL != 0 {
                        0
                    } else if s & ODD != 0 {
                        -1
                    } else {
                        1
                    };
                }
            }
            if let Some(lambda) = lambda.as_deref_mut() {
                for (dst, &s) in lambda[off..off + len].iter_mut().zip(&state[..len]) {
                    *dst = 1 - 2 * (s & ODD) as i8;
                }
            }
            seg_lo = seg_hi;
        }
    }

    fn segment(&self, lo: u64, hi: u64, prod: &mut [u64], state: &mut [u8]) {
        prod.fill(1);
        state.fill(0);
        let len = prod.len() as u64;
        let root = isqrt(hi - 1);
        for &p in &self.primes {
            let p = p as u64;
            if p > root {
                break;
            }
            let mut q = p;
            let mut squareful = 0u8;
            loop {
                let mut i = lo.div_ceil(q) * q - lo;
                while i < len {
                    let j = i as usize;
                    prod[j] *= p;
                    state[j] = (state[j] ^ ODD) | squareful;
                    i += q;
                }
                if q > (hi - 1) / p {
                    break;
                }
                q *= p;
                squareful = SQUAREFUL;
            }
        }
        for (i, (&pr, s)) in prod.iter().zip(state.iter_mut()).enumerate() {
            if pr != lo + i as u64 {
                *s ^= ODD;
            }
        }
    }
}

/// Block of `kind` values over `[lo, hi)` using the shared default sieve.
pub fn sieve_block(lo: u64, hi: u64, kind: Kind) -> Result<SignSequence> {
    Sieve::global().block(lo, hi, kind)
}

/// Debug dump: header `n,mu,lambda` then one row per `n` in `[lo, hi)`.
pub fn write_debug_csv<W: Write>(sieve: &Sieve, lo: u64, hi: u64, mut out: W) -> Result<()> {
    let map_io = |e| Error::io("<sieve dump>", e);
    writeln!(out, "n,mu,lambda").map_err(map_io)?;
    let mut start = lo;
    while start < hi {
        let end = hi.min(start + DEFAULT_BLOCK_LEN as u64);
        let (mu, lambda) = sieve.pair(start, end)?;
        for (i, (m, l)) in mu.values().iter().zip(lambda.values()).enumerate() {
            writeln!(out, "{},{},{}", start + i as u64, m, l).map_err(map_io)?;
        }
        start = end;
    }
    Ok(())
}

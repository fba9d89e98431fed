//! Ordered parallel block production.
//!
//! Blocks are computed on a worker pool in waves and handed to the consumer
//! strictly in ascending range order. Block boundaries depend only on
//! `block_len`, never on the worker count, so any reduction performed by the
//! consumer is bit-identical across worker counts.

use rayon::prelude::*;

use crate::arith::DEFAULT_BLOCK_LEN;
use crate::{Error, Result};

pub struct Engine {
    pool: rayon::ThreadPool,
    workers: usize,
    block_len: u64,
}

impl Engine {
    pub fn new(workers: usize, block_len: u64) -> Result<Self> {
        if workers == 0 {
            return Err(Error::domain("worker count must be at least 1"));
        }
        if block_len == 0 {
            return Err(Error::domain("block length must be at least 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
        Ok(Engine {
            pool,
            workers,
            block_len,
        })
    }

    pub fn with_workers(workers: usize) -> Result<Self> {
        Engine::new(workers, DEFAULT_BLOCK_LEN as u64)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn block_len(&self) -> u64 {
        self.block_len
    }

    /// Runs `f` inside the worker pool, so nested rayon calls use it.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    /// Splits `[lo, hi)` into `block_len` pieces, maps them in parallel and
    /// feeds the results to `consume` in ascending order.
    pub fn ordered<T, M, C>(&self, lo: u64, hi: u64, map: M, mut consume: C) -> Result<()>
    where
        T: Send,
        M: Fn(u64, u64) -> Result<T> + Sync,
        C: FnMut(u64, T) -> Result<()>,
    {
        let ranges: Vec<(u64, u64)> = block_ranges(lo, hi, self.block_len).collect();
        let wave = (2 * self.workers).max(1);
        for chunk in ranges.chunks(wave) {
            let results: Vec<Result<T>> = self
                .pool
                .install(|| chunk.par_iter().map(|&(a, b)| map(a, b)).collect());
            for (&(a, _), r) in chunk.iter().zip(results) {
                consume(a, r?)?;
            }
        }
        Ok(())
    }
}

impl Default for Engine {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        Engine::with_workers(workers).expect("default engine")
    }
}

/// `[lo, hi)` cut into consecutive pieces of at most `len` entries.
pub fn block_ranges(lo: u64, hi: u64, len: u64) -> impl Iterator<Item = (u64, u64)> {
    let len = len.max(1);
    let mut start = lo;
    std::iter::from_fn(move || {
        if start >= hi {
            return None;
        }
        let end = hi.min(start.saturating_add(len));
        let r = (start, end);
        start = end;
        Some(r)
    })
}

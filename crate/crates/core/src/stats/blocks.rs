//! Disjoint block sums `Σ_{k in block b} f(k)` with `W` terms per block.

use serde::Serialize;

use super::ks::{ks_normal, KSResult};
use super::{mean_variance, SignSource};
use crate::exec::Engine;
use crate::{Error, Result};

pub const MIN_WINDOW: u64 = 100;
pub const MIN_BLOCKS: u64 = 100;

fn check_window(n: u64, w: u64) -> Result<u64> {
    if w < MIN_WINDOW {
        return Err(Error::domain(format!("block width {w} is below {MIN_WINDOW}")));
    }
    let blocks = n / w;
    if blocks < MIN_BLOCKS {
        return Err(Error::domain(format!(
            "only {blocks} blocks of width {w} fit in n = {n}; need {MIN_BLOCKS}"
        )));
    }
    Ok(blocks)
}

/// Raw sums of the `⌊n/W⌋` leading blocks, one vector per requested `W`,
/// computed in a single pass over the sequence.
pub fn raw_block_sums<S: SignSource + ?Sized>(engine: &Engine, src: &S, widths: &[u64]) -> Result<Vec<Vec<i64>>> {
    let n = src.len();
    let counts = widths
        .iter()
        .map(|&w| check_window(n, w))
        .collect::<Result<Vec<u64>>>()?;
    let end = widths.iter().zip(&counts).map(|(w, b)| w * b).max().unwrap_or(0);
    let mut sums: Vec<Vec<i64>> = counts.iter().map(|&b| vec![0; b as usize]).collect();
    if end == 0 {
        return Ok(sums);
    }
    engine.ordered(
        1,
        end + 1,
        |lo, hi| {
            let mut buf = Vec::new();
            src.fill(lo, hi, &mut buf)?;
            let mut parts: Vec<Vec<(usize, i64)>> = Vec::with_capacity(widths.len());
            for (&w, &b) in widths.iter().zip(&counts) {
                let stop = hi.min(w * b + 1);
                let mut out = Vec::new();
                let mut k = lo;
                while k < stop {
                    let idx = (k - 1) / w;
                    let block_end = stop.min((idx + 1) * w + 1);
                    let s: i64 = buf[(k - lo) as usize..(block_end - lo) as usize]
                        .iter()
                        .map(|&v| v as i64)
                        .sum();
                    out.push((idx as usize, s));
                    k = block_end;
                }
                parts.push(out);
            }
            Ok(parts)
        },
        |_, parts| {
            for (dst, part) in sums.iter_mut().zip(parts) {
                for (idx, s) in part {
                    dst[idx] += s;
                }
            }
            Ok(())
        },
    )?;
    Ok(sums)
}

/// Block sums normalized by `√(W·v)` and their distance to `N(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSums {
    pub width: u64,
    pub samples: Vec<f64>,
    pub mean: f64,
    /// Population variance of the normalized samples.
    pub variance: f64,
    pub ks: KSResult,
}

pub fn block_sums_distribution<S: SignSource + ?Sized>(engine: &Engine, src: &S, width: u64) -> Result<BlockSums> {
    let raw = raw_block_sums(engine, src, &[width])?.remove(0);
    let scale = (width as f64 * src.limit_variance()).sqrt();
    let samples: Vec<f64> = raw.iter().map(|&s| s as f64 / scale).collect();
    let (mean, variance) = mean_variance(&samples);
    let ks = ks_normal(&samples)?;
    Ok(BlockSums {
        width,
        samples,
        mean,
        variance,
        ks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub width: u64,
    pub blocks: u64,
    /// Population standard deviation of the raw block sums.
    pub stddev: f64,
}

/// Spread of raw block sums as the block width grows.
pub fn block_scaling<S: SignSource + ?Sized>(engine: &Engine, src: &S, widths: &[u64]) -> Result<Vec<ScalingRow>> {
    let sums = raw_block_sums(engine, src, widths)?;
    Ok(widths
        .iter()
        .zip(sums)
        .map(|(&width, raw)| {
            let xs: Vec<f64> = raw.iter().map(|&s| s as f64).collect();
            let (_, var) = mean_variance(&xs);
            ScalingRow {
                width,
                blocks: raw.len() as u64,
                stddev: var.sqrt(),
            }
        })
        .collect())
}

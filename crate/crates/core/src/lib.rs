//! Workbench for the Mertens function `M(x)` and the Liouville summatory
//! function `L(x)`.
//!
//! * [`arith`]: pointwise Möbius/Liouville values by trial division and a
//!   segmented sieve producing them in bulk.
//! * [`summatory`]: streaming partial sums with checkpoints, sign events,
//!   running records and the `max|M| / max|L|` growth diagnostic.
//! * [`stats`]: value distributions, moments, characteristic functions, lag
//!   covariances, block-sum normality diagnostics, the `A(n) ≈ c·√n` fit and
//!   the `φ(n)·√n` envelope scan.
//! * [`zeta`]: Euler–Maclaurin `ζ(s)` and truncated Perron quadrature for
//!   `M(x)` and `L(x)`.
//! * [`cli`]: the `summa` command line.

pub mod arith;
pub mod cli;
mod error;
pub mod exec;
pub mod output;
pub mod stats;
pub mod summatory;
pub mod zeta;

pub use error::{Error, Result};

/// Version string recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

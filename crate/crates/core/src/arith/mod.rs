//! Möbius `μ(k)` and Liouville `λ(k)`, pointwise and in bulk.
//!
//! [`factor`] is the slow trial-division oracle; [`sieve`] produces long
//! contiguous runs of values and is what everything downstream consumes.

pub mod factor;
pub mod sieve;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use factor::{factorize, liouville_of, mobius_of, Factorization, FACTOR_LIMIT};
pub use sieve::{sieve_block, Sieve, SignSequence, DEFAULT_BLOCK_LEN, DEFAULT_LIMIT};

/// Which arithmetic function a sequence of sign codes holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mobius,
    Liouville,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::Mobius, Kind::Liouville];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Mobius => "mobius",
            Kind::Liouville => "liouville",
        }
    }

    /// Pointwise value through the factorization oracle.
    pub fn eval(self, n: u64) -> crate::Result<i8> {
        match self {
            Kind::Mobius => mobius_of(n),
            Kind::Liouville => liouville_of(n),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mobius" | "mu" | "mertens" => Ok(Kind::Mobius),
            "liouville" | "lambda" => Ok(Kind::Liouville),
            other => Err(format!("unknown kind `{other}` (expected mobius or liouville)")),
        }
    }
}

/// Largest `r` with `r * r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primes `<= bound` by the plain sieve of Eratosthenes.
pub(crate) fn small_primes(bound: u64) -> Vec<u32> {
    let bound = bound as usize;
    if bound < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j <= bound {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

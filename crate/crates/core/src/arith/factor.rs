//! Trial-division factorization, the pointwise oracle for `μ` and `λ`.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Trial division uses primes up to `10^6`, which settles every `n <= 10^12`.
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;
const TRIAL_BOUND: u64 = 1_000_000;

fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| super::small_primes(TRIAL_BOUND))
}

/// Prime factorization `n = Π p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Ω(n): number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// ω(n): number of distinct prime factors.
    pub fn small_omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.small_omega() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn liouville(&self) -> i8 {
        if self.big_omega() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Re-multiplies the factors; `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("cannot factorize 0"));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::domain(format!(
            "{n} exceeds the trial-division bound {FACTOR_LIMIT}"
        )));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in trial_primes() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        // rest has no prime factor <= min(10^6, sqrt(rest)), and rest <= 10^12
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn mobius_of(n: u64) -> Result<i8> {
    factorize(n).map(|f| f.mobius())
}

pub fn liouville_of(n: u64) -> Result<i8> {
    factorize(n).map(|f| f.liouville())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Deterministic Miller–Rabin for 64-bit inputs; independent of trial division.
    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n % p == 0 {
                return n == p;
            }
        }
        let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
        let pow = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                e >>= 1;
            }
            r
        };
        let s = (n - 1).trailing_zeros();
        let d = (n - 1) >> s;
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = pow(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    fn check_valid(f: &Factorization) {
        assert_eq!(f.product(), Some(f.n()));
        for w in f.factors().windows(2) {
            assert!(w[0].0 < w[1].0);
        }
        for &(p, e) in f.factors() {
            assert!(e >= 1);
            assert!(is_prime(p), "{p} listed as prime in {}", f.n());
        }
    }

    #[test]
    fn small_cases() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(mobius_of(1).unwrap(), 1);
        assert_eq!(mobius_of(4).unwrap(), 0);
        assert_eq!(mobius_of(30).unwrap(), -1);
        assert_eq!(liouville_of(1).unwrap(), 1);
        assert_eq!(liouville_of(12).unwrap(), -1);
        assert_eq!(liouville_of(9).unwrap(), 1);
    }

    #[test]
    fn polya_counterexample_factors() {
        let f = factorize(906_150_257).unwrap();
        check_valid(&f);
        assert_eq!(f.factors(), &[(10_039, 1), (90_263, 1)]);
        assert_eq!(f.liouville(), 1);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        assert!(matches!(factorize(FACTOR_LIMIT + 1), Err(Error::Domain(_))));
        assert!(factorize(FACTOR_LIMIT).is_ok());
    }

    #[test]
    fn large_prime_and_square_near_bound() {
        // 999_999_000_001 = 10^12 - 10^6 + 1 is prime; 999_983^2 is the largest prime square below 10^12.
        let p = 999_999_000_001u64;
        assert!(is_prime(p));
        assert_eq!(factorize(p).unwrap().factors(), &[(p, 1)]);
        let sq = 999_983u64 * 999_983;
        assert_eq!(factorize(sq).unwrap().factors(), &[(999_983, 2)]);
        assert_eq!(mobius_of(sq).unwrap(), 0);
        assert_eq!(liouville_of(sq).unwrap(), 1);
    }

    #[test]
    fn mobius_sum_over_divisors() {
        for n in 1..=100_000u64 {
            let mut total = 0i64;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    total += mobius_of(d).unwrap() as i64;
                    if d * d != n {
                        total += mobius_of(n / d).unwrap() as i64;
                    }
                }
                d += 1;
            }
            assert_eq!(total, (n == 1) as i64, "n = {n}");
        }
    }

    #[test]
    fn liouville_from_mobius() {
        for n in 1..=100_000u64 {
            let mut total = 0i64;
            let mut d = 1;
            while d * d <= n {
                if n % (d * d) == 0 {
                    total += mobius_of(n / (d * d)).unwrap() as i64;
                }
                d += 1;
            }
            assert_eq!(total, liouville_of(n).unwrap() as i64, "n = {n}");
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    proptest! {
        #[test]
        fn factorization_is_valid(n in 1u64..=FACTOR_LIMIT) {
            check_valid(&factorize(n).unwrap());
        }

        #[test]
        fn multiplicative_on_coprime(m in 1u64..=1_000_000, n in 1u64..=1_000_000) {
            prop_assume!(gcd(m, n) == 1);
            prop_assert_eq!(liouville_of(m * n).unwrap(), liouville_of(m).unwrap() * liouville_of(n).unwrap());
            prop_assert_eq!(mobius_of(m * n).unwrap(), mobius_of(m).unwrap() * mobius_of(n).unwrap());
        }

        #[test]
        fn squarefree_values_agree(n in 1u64..=FACTOR_LIMIT) {
            let f = factorize(n).unwrap();
            if f.mobius() != 0 {
                prop_assert_eq!(f.mobius(), f.liouville());
            }
        }
    }
}

use num_complex::Complex64;
use serde::Serialize;

use super::ks::Cdf;
use super::{SignSource, MOBIUS_SIGN_MASS};
use crate::arith::Kind;
use crate::exec::Engine;
use crate::{Error, Result};

/// Occurrences of `−1`, `0`, `+1` in `f(1..=n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ValueCounts {
    pub minus: u64,
    pub zero: u64,
    pub plus: u64,
}

impl ValueCounts {
    pub fn n(&self) -> u64 {
        self.minus + self.zero + self.plus
    }

    fn add_block(&mut self, values: &[i8]) {
        for &v in values {
            match v {
                -1 => self.minus += 1,
                0 => self.zero += 1,
                _ => self.plus += 1,
            }
        }
    }
}

pub fn value_counts<S: SignSource + ?Sized>(engine: &Engine, src: &S) -> Result<ValueCounts> {
    let n = src.len();
    if n == 0 {
        return Err(Error::domain("empty sequence"));
    }
    let mut total = ValueCounts::default();
    engine.ordered(
        1,
        n + 1,
        |lo, hi| {
            let mut buf = Vec::new();
            src.fill(lo, hi, &mut buf)?;
            let mut c = ValueCounts::default();
            c.add_block(&buf);
            Ok(c)
        },
        |_, c| {
            total.minus += c.minus;
            total.zero += c.zero;
            total.plus += c.plus;
            Ok(())
        },
    )?;
    Ok(total)
}

/// Finite discrete distribution: increasing support with masses summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    support: Vec<f64>,
    masses: Vec<f64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
    n: u64,
}

impl EmpiricalDistribution {
    /// `n` is the sample size the masses came from (0 for a theoretical law).
    pub fn new(support: Vec<f64>, masses: Vec<f64>, n: u64) -> Result<Self> {
        if support.is_empty() || support.len() != masses.len() {
            return Err(Error::domain("support and masses must be non-empty and equally long"));
        }
        if support.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("support must be strictly increasing"));
        }
        if masses.iter().any(|m| !(0.0..=1.0).contains(m)) {
            return Err(Error::domain("masses must lie in [0, 1]"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("masses sum to {total}, not 1")));
        }
        let mut cumulative: Vec<f64> = masses
            .iter()
            .scan(0.0, |acc, &m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        *cumulative.last_mut().expect("non-empty") = 1.0;
        Ok(EmpiricalDistribution {
            support,
            masses,
            cumulative,
            n,
        })
    }

    /// Builds from integer multiplicities so the distribution function takes
    /// exactly the values `j / n`.
    fn from_multiplicities(support: Vec<f64>, counts: &[u64]) -> Self {
        let n: u64 = counts.iter().sum();
        let n_f = n as f64;
        let masses = counts.iter().map(|&c| c as f64 / n_f).collect();
        let cumulative = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc as f64 / n_f)
            })
            .collect();
        EmpiricalDistribution {
            support,
            masses,
            cumulative,
            n,
        }
    }

    pub fn from_counts(c: ValueCounts) -> Result<Self> {
        let n = c.n();
        if n == 0 {
            return Err(Error::domain("no observations"));
        }
        Ok(EmpiricalDistribution::from_multiplicities(
            vec![-1.0, 0.0, 1.0],
            &[c.minus, c.zero, c.plus],
        ))
    }

    /// Empirical law of a real sample.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("need a non-empty finite sample"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mut support = Vec::new();
        let mut counts = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j < n && sorted[j] == sorted[i] {
                j += 1;
            }
            support.push(sorted[i]);
            counts.push((j - i) as u64);
            i = j;
        }
        Ok(EmpiricalDistribution::from_multiplicities(support, &counts))
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mass_at(&self, y: f64) -> f64 {
        self.support
            .iter()
            .position(|&s| s == y)
            .map_or(0.0, |i| self.masses[i])
    }

    /// Largest gap between the two distribution functions.
    pub fn sup_distance(&self, other: &EmpiricalDistribution) -> f64 {
        self.support
            .iter()
            .chain(&other.support)
            .map(|&y| (self.cdf(y) - other.cdf(y)).abs())
            .fold(0.0, f64::max)
    }
}

impl Cdf for EmpiricalDistribution {
    fn cdf(&self, y: f64) -> f64 {
        match self.support.partition_point(|&s| s <= y) {
            0 => 0.0,
            k => self.cumulative[k - 1],
        }
    }

    fn cdf_left(&self, y: f64) -> f64 {
        match self.support.partition_point(|&s| s < y) {
            0 => 0.0,
            k => self.cumulative[k - 1],
        }
    }
}

/// Limiting value distribution: masses `3/π², 1 − 6/π², 3/π²` for `μ`,
/// `½, 0, ½` for `λ`, on support `{−1, 0, +1}`.
pub fn limit_law(kind: Kind) -> EmpiricalDistribution {
    let masses = match kind {
        Kind::Mobius => vec![MOBIUS_SIGN_MASS, 1.0 - 2.0 * MOBIUS_SIGN_MASS, MOBIUS_SIGN_MASS],
        Kind::Liouville => vec![0.5, 0.0, 0.5],
    };
    EmpiricalDistribution::new(vec![-1.0, 0.0, 1.0], masses, 0).expect("limit laws are valid")
}

pub fn value_distribution<S: SignSource + ?Sized>(engine: &Engine, src: &S) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::from_counts(value_counts(engine, src)?)
}

/// Mean `M[ξ]` and variance `D[ξ] = M[ξ²] − M[ξ]²` of `f(1..=n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub n: u64,
}

impl MomentSummary {
    pub fn from_counts(c: ValueCounts) -> Result<Self> {
        let n = c.n();
        if n == 0 {
            return Err(Error::domain("no observations"));
        }
        let n_f = n as f64;
        let mean = (c.plus as f64 - c.minus as f64) / n_f;
        let mean_sq = (c.plus + c.minus) as f64 / n_f;
        Ok(MomentSummary {
            mean,
            variance: (mean_sq - mean * mean).max(0.0),
            n,
        })
    }
}

pub fn moments<S: SignSource + ?Sized>(engine: &Engine, src: &S) -> Result<MomentSummary> {
    MomentSummary::from_counts(value_counts(engine, src)?)
}

/// `φ(t) = (1/n) Σ e^{i t f(k)}`.
pub fn char_fn<S: SignSource + ?Sized>(engine: &Engine, src: &S, t: f64) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    Ok(char_fn_from_counts(value_counts(engine, src)?, t))
}

pub(crate) fn char_fn_from_counts(c: ValueCounts, t: f64) -> Complex64 {
    let n = c.n() as f64;
    let (s, co) = t.sin_cos();
    // e^{it} and e^{-it} share the real part; the imaginary parts cancel pairwise.
    let re = ((c.plus + c.minus) as f64 * co + c.zero as f64) / n;
    let im = (c.plus as f64 - c.minus as f64) * s / n;
    Complex64::new(re, im)
}

/// `(1/(n−h)) Σ_{k<=n−h} f(k)f(k+h) − mean(f(1..n−h))·mean(f(h+1..n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagCovariance {
    pub h: u64,
    pub n: u64,
    pub cov: f64,
}

pub fn lag_covariance<S: SignSource + ?Sized>(engine: &Engine, src: &S, h: u64) -> Result<LagCovariance> {
    let n = src.len();
    if h == 0 || h >= n {
        return Err(Error::domain(format!("lag {h} must satisfy 1 <= h < n = {n}")));
    }
    let pairs = n - h;
    let (mut prod, mut head, mut tail) = (0i64, 0i64, 0i64);
    engine.ordered(
        1,
        pairs + 1,
        |lo, hi| {
            let mut buf = Vec::new();
            src.fill(lo, hi + h, &mut buf)?;
            let len = (hi - lo) as usize;
            let lag = h as usize;
            let mut p = 0i64;
            let mut a = 0i64;
            let mut b = 0i64;
            for i in 0..len {
                let x = buf[i] as i64;
                let y = buf[i + lag] as i64;
                p += x * y;
                a += x;
                b += y;
            }
            Ok((p, a, b))
        },
        |_, (p, a, b)| {
            prod += p;
            head += a;
            tail += b;
            Ok(())
        },
    )?;
    let m = pairs as f64;
    let cov = prod as f64 / m - (head as f64 / m) * (tail as f64 / m);
    Ok(LagCovariance { h, n, cov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Sieved;
    use proptest::prelude::*;

    fn engine() -> Engine {
        Engine::new(2, 1 << 14).unwrap()
    }

    #[test]
    fn liouville_to_ten() {
        let d = value_distribution(&engine(), &Sieved::new(Kind::Liouville, 10).unwrap()).unwrap();
        // λ(1..=10) = 1,−1,−1,1,−1,1,−1,−1,1,1: five of each sign, matching L(10) = 0.
        assert_eq!(d.masses(), &[0.5, 0.0, 0.5]);
        assert_eq!(d.n(), 10);
    }

    #[test]
    fn moments_of_two_liouville_values() {
        let m = moments(&engine(), &Sieved::new(Kind::Liouville, 2).unwrap()).unwrap();
        assert_eq!((m.mean, m.variance, m.n), (0.0, 1.0, 2));
    }

    #[test]
    fn char_fn_at_zero_is_one() {
        let e = engine();
        for kind in Kind::ALL {
            for n in [1, 7, 10_000] {
                let z = char_fn(&e, &Sieved::new(kind, n).unwrap(), 0.0).unwrap();
                assert_eq!(z, Complex64::new(1.0, 0.0));
            }
        }
        assert!(char_fn(&e, &Sieved::new(Kind::Mobius, 5).unwrap(), f64::NAN).is_err());
    }

    #[test]
    fn char_fn_matches_direct_sum() {
        let e = engine();
        let src = Sieved::new(Kind::Mobius, 5_000).unwrap();
        let mut vals = Vec::new();
        src.fill(1, 5_001, &mut vals).unwrap();
        for t in [0.3, 1.0, 2.5, -4.0] {
            let direct: Complex64 = vals
                .iter()
                .map(|&v| Complex64::from_polar(1.0, t * v as f64))
                .sum::<Complex64>()
                / 5_000.0;
            let z = char_fn(&e, &src, t).unwrap();
            assert!((z - direct).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn lag_covariance_constant_sequence() {
        let ones = vec![1i8; 1_000];
        let c = lag_covariance(&engine(), &ones, 3).unwrap();
        assert_eq!(c.cov, 0.0);
        assert!(lag_covariance(&engine(), &ones, 1_000).is_err());
        assert!(lag_covariance(&engine(), &ones, 0).is_err());
    }

    #[test]
    fn lag_covariance_brute_force_across_blocks() {
        let e = Engine::new(3, 97).unwrap();
        let src = Sieved::new(Kind::Liouville, 10_000).unwrap();
        let mut v = Vec::new();
        src.fill(1, 10_001, &mut v).unwrap();
        for h in [1usize, 2, 50, 500] {
            let m = v.len() - h;
            let p: i64 = (0..m).map(|i| (v[i] * v[i + h]) as i64).sum();
            let a: i64 = v[..m].iter().map(|&x| x as i64).sum();
            let b: i64 = v[h..].iter().map(|&x| x as i64).sum();
            let expect = p as f64 / m as f64 - (a as f64 / m as f64) * (b as f64 / m as f64);
            let got = lag_covariance(&e, &src, h as u64).unwrap();
            assert!((got.cov - expect).abs() < 1e-15, "h = {h}");
        }
    }

    #[test]
    fn limit_laws() {
        let mu = limit_law(Kind::Mobius);
        assert!((mu.mass_at(1.0) - 0.303_963_550_927_013_3).abs() < 1e-15);
        assert!((mu.cdf(-0.5) - MOBIUS_SIGN_MASS).abs() < 1e-15);
        assert!((mu.cdf(0.5) - (1.0 - MOBIUS_SIGN_MASS)).abs() < 1e-15);
        let la = limit_law(Kind::Liouville);
        assert_eq!(la.cdf(0.0), 0.5);
        assert_eq!(la.cdf_left(-1.0), 0.0);
        assert_eq!(la.cdf(1.0), 1.0);
        assert_eq!(la.sup_distance(&la), 0.0);
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(EmpiricalDistribution::new(vec![0.0, 1.0], vec![0.5, 0.6], 2).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, 0.0], vec![0.5, 0.5], 2).is_err());
        assert!(EmpiricalDistribution::new(vec![], vec![], 0).is_err());
        assert!(EmpiricalDistribution::from_samples(&[]).is_err());
    }

    proptest! {
        #[test]
        fn counts_invariants(kind_mu in any::<bool>(), n in 1u64..200_000) {
            let kind = if kind_mu { Kind::Mobius } else { Kind::Liouville };
            let e = engine();
            let src = Sieved::new(kind, n).unwrap();
            let d = value_distribution(&e, &src).unwrap();
            prop_assert!((d.masses().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            if kind == Kind::Liouville {
                prop_assert_eq!(d.mass_at(0.0), 0.0);
            }
            let m = moments(&e, &src).unwrap();
            let mean_sq = d.mass_at(1.0) + d.mass_at(-1.0);
            prop_assert!((m.variance - (mean_sq - m.mean * m.mean)).abs() <= 1e-12);
            if kind == Kind::Liouville {
                prop_assert!((m.variance - (1.0 - m.mean * m.mean)).abs() <= 1e-12);
            }
        }

        #[test]
        fn char_fn_bounded(n in 1u64..50_000, t in -100.0f64..100.0) {
            let z = char_fn(&engine(), &Sieved::new(Kind::Mobius, n).unwrap(), t).unwrap();
            prop_assert!(z.norm() <= 1.0 + 1e-12);
        }
    }
}

//! `ζ(s)` by Euler–Maclaurin summation and truncated Perron quadrature for
//! `M(x)` and `L(x)`.

mod perron;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use perron::{perron_truncated, remainder_scan, PerronJob, QuadratureResult, RemainderScan};

use crate::arith::Kind;
use crate::{Error, Result};

pub type ComplexValue = Complex64;

/// Supported evaluation window for [`zeta`].
pub const MIN_RE: f64 = 0.4;
pub const MAX_RE: f64 = 6.0;
pub const MAX_IM: f64 = 1e4;
/// Guard radius around the pole at `s = 1`.
pub const POLE_GUARD: f64 = 1e-6;
/// Largest admissible size of the first omitted Euler–Maclaurin term.
pub const TAIL_TOLERANCE: f64 = 1e-11;
/// `|ζ(s)|` below this counts as a zero when dividing by it.
pub const ZERO_TOLERANCE: f64 = 1e-10;

const MAX_ORDER: usize = 12;

/// `B_2, B_4, …, B_26` as exact fractions.
const BERNOULLI: [(f64, f64); MAX_ORDER + 1] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
];

/// `B_{2k} / (2k)!` for `k = 1..=13`.
fn em_coefficients() -> &'static [f64; MAX_ORDER + 1] {
    static C: OnceLock<[f64; MAX_ORDER + 1]> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0f64;
        for (k, slot) in out.iter_mut().enumerate() {
            let two_k = 2 * (k + 1);
            fact *= ((two_k - 1) * two_k) as f64;
            let (num, den) = BERNOULLI[k];
            *slot = num / den / fact;
        }
        out
    })
}

const LN_TABLE_LEN: usize = 20_001;

fn ln_table() -> &'static [f64] {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| (0..LN_TABLE_LEN).map(|n| (n.max(1) as f64).ln()).collect())
}

#[inline]
fn ln_n(n: usize) -> f64 {
    match ln_table().get(n) {
        Some(&v) => v,
        None => (n as f64).ln(),
    }
}

/// Euler–Maclaurin truncation control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaParams {
    /// Fixed cutoff `N`; `None` picks `max(30, ⌈2|im s|⌉)`.
    pub cutoff: Option<u64>,
    /// Number of Bernoulli correction terms, 2 to 12.
    pub bernoulli_order: usize,
}

impl Default for ZetaParams {
    fn default() -> Self {
        ZetaParams {
            cutoff: None,
            bernoulli_order: 8,
        }
    }
}

impl ZetaParams {
    fn validate(&self) -> Result<()> {
        if let Some(n) = self.cutoff {
            if n < 10 {
                return Err(Error::domain(format!("cutoff {n} is below 10")));
            }
        }
        if !(2..=MAX_ORDER).contains(&self.bernoulli_order) {
            return Err(Error::domain(format!(
                "bernoulli_order {} outside [2, {MAX_ORDER}]",
                self.bernoulli_order
            )));
        }
        Ok(())
    }

    fn cutoff_for(&self, im: f64) -> usize {
        self.cutoff.unwrap_or_else(|| (2.0 * im.abs()).ceil().max(30.0) as u64) as usize
    }
}

fn check_window(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {s}")));
    }
    if !(MIN_RE..=MAX_RE).contains(&s.re) || s.im.abs() > MAX_IM {
        return Err(Error::domain(format!(
            "s = {s} outside the window {MIN_RE} <= re <= {MAX_RE}, |im| <= {MAX_IM}"
        )));
    }
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(Error::domain(format!("s = {s} is within {POLE_GUARD} of the pole")));
    }
    Ok(())
}

/// Kahan-compensated complex sum.
#[derive(Default)]
struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Euler–Maclaurin evaluation given `n^{-re s}` for `1 <= n <= N`.
fn euler_maclaurin(s: Complex64, n_cut: usize, order: usize, magnitude: impl Fn(usize) -> f64) -> Result<Complex64> {
    let mut acc = KahanSum::default();
    for n in 1..n_cut {
        let (sin, cos) = (s.im * ln_n(n)).sin_cos();
        acc.add(Complex64::new(cos, -sin) * magnitude(n));
    }
    let n_f = n_cut as f64;
    let (sin, cos) = (s.im * ln_n(n_cut)).sin_cos();
    let n_pow = Complex64::new(cos, -sin) * magnitude(n_cut); // N^{-s}
    acc.add(n_pow * n_f / (s - 1.0));
    acc.add(n_pow * 0.5);

    let coeffs = em_coefficients();
    let inv_n2 = 1.0 / (n_f * n_f);
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut power = n_pow / n_f; // N^{-s-2k+1}
    let mut prev = f64::INFINITY;
    for (k, &c) in coeffs.iter().enumerate().take(order + 1) {
        let term = rising * power * c;
        let size = term.norm();
        if size > prev {
            return Err(Error::Accuracy(format!(
                "Euler–Maclaurin terms grow at k = {} for s = {s}, N = {n_cut}",
                k + 1
            )));
        }
        prev = size;
        if k == order {
            if size > TAIL_TOLERANCE {
                return Err(Error::Accuracy(format!(
                    "first omitted term {size:.3e} exceeds {TAIL_TOLERANCE:.0e} for s = {s}, N = {n_cut}"
                )));
            }
            break;
        }
        acc.add(term);
        let j = (2 * k + 1) as f64;
        rising *= (s + j) * (s + j + 1.0);
        power *= inv_n2;
    }
    Ok(acc.sum)
}

/// Riemann `ζ(s)` for `0.4 <= re s <= 6`, `|im s| <= 10^4`, `s ≠ 1`.
pub fn zeta(s: ComplexValue, params: &ZetaParams) -> Result<ComplexValue> {
    params.validate()?;
    check_window(s)?;
    let n_cut = params.cutoff_for(s.im);
    let sigma = s.re;
    euler_maclaurin(s, n_cut, params.bernoulli_order, |n| (-sigma * ln_n(n)).exp())
}

/// `ζ(σ + it)` along a fixed vertical line, reusing the `n^{-σ}` table.
pub(crate) struct ZetaLine {
    sigma: f64,
    params: ZetaParams,
    magnitudes: Vec<f64>,
}

impl ZetaLine {
    pub(crate) fn new(sigma: f64, max_im: f64, params: ZetaParams) -> Result<Self> {
        params.validate()?;
        check_window(Complex64::new(sigma, max_im.min(MAX_IM)))?;
        let n = params.cutoff_for(max_im);
        let magnitudes = (0..=n).map(|k| (-sigma * ln_n(k)).exp()).collect();
        Ok(ZetaLine {
            sigma,
            params,
            magnitudes,
        })
    }

    pub(crate) fn eval(&self, t: f64) -> Result<Complex64> {
        let s = Complex64::new(self.sigma, t);
        check_window(s)?;
        let n_cut = self.params.cutoff_for(t);
        let mags = &self.magnitudes;
        let sigma = self.sigma;
        euler_maclaurin(s, n_cut, self.params.bernoulli_order, |n| match mags.get(n) {
            Some(&m) => m,
            None => (-sigma * ln_n(n)).exp(),
        })
    }
}

/// Which summatory function a Dirichlet series generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mertens,
    Liouville,
}

impl Target {
    pub const ALL: [Target; 2] = [Target::Mertens, Target::Liouville];

    pub fn name(self) -> &'static str {
        match self {
            Target::Mertens => "mertens",
            Target::Liouville => "liouville",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Target::Mertens => Kind::Mobius,
            Target::Liouville => Kind::Liouville,
        }
    }
}

impl From<Kind> for Target {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Mobius => Target::Mertens,
            Kind::Liouville => Target::Liouville,
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse::<Kind>()
            .map(Target::from)
            .map_err(|_| format!("unknown target `{s}` (expected mertens or liouville)"))
    }
}

fn invert(z: Complex64, at: Complex64) -> Result<Complex64> {
    if z.norm() < ZERO_TOLERANCE {
        return Err(Error::Singularity(format!("ζ({at}) = {z} vanishes")));
    }
    Ok(z.inv())
}

/// `Σ f(n)/n^s`: `1/ζ(s)` for Mertens, `ζ(2s)/ζ(s)` for Liouville.
#[allow(non_snake_case)]
pub fn dirichlet_F(target: Target, s: ComplexValue) -> Result<ComplexValue> {
    let params = ZetaParams::default();
    let inv = invert(zeta(s, &params)?, s)?;
    match target {
        Target::Mertens => Ok(inv),
        Target::Liouville => Ok(zeta(2.0 * s, &params)? * inv),
    }
}

/// `−1/ζ(½) ≈ 0.6847673`, the coefficient in `L(n) ≈ 1 − c·√n`.
pub fn leading_constant() -> Result<f64> {
    let z = zeta(Complex64::new(0.5, 0.0), &ZetaParams::default())?;
    Ok(-1.0 / z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Direct series `Σ_{n<=N} n^{-s}` plus the midpoint-rule tail
    /// `∫_{N+½}^∞ u^{-s} du`; independent of the Euler–Maclaurin path.
    fn direct_series(s: Complex64, terms: u64) -> Complex64 {
        let mut acc = KahanSum::default();
        for n in 1..=terms {
            acc.add((-s * (n as f64).ln()).exp());
        }
        let tail = (-(s - 1.0) * (terms as f64 + 0.5).ln()).exp() / (s - 1.0);
        acc.sum + tail
    }

    fn z(re: f64, im: f64) -> Complex64 {
        zeta(Complex64::new(re, im), &ZetaParams::default()).unwrap()
    }

    #[test]
    fn zeta_two() {
        let oracle = direct_series(Complex64::new(2.0, 0.0), 10_000_000);
        assert!((oracle.re - 1.644_934_066_848_226_4).abs() < 1e-13);
        let v = z(2.0, 0.0);
        assert!((v.re - 1.644_934_066_848_226_4).abs() < 1e-10);
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn zeta_half() {
        let v = z(0.5, 0.0);
        assert!((v.re + 1.460_354_508_8).abs() < 1e-8, "{v}");
        assert!((v.re + 1.460_354_508_809_586_8).abs() < 1e-12);
    }

    #[test]
    fn first_zero_on_critical_line() {
        // scan |ζ(½ + it)| on [14, 14.3] with step 1e-3, then golden-section refine
        let f = |t: f64| z(0.5, t).norm();
        let mut best = 14.0;
        let mut t = 14.0;
        while t <= 14.3 {
            if f(t) < f(best) {
                best = t;
            }
            t += 1e-3;
        }
        let (mut a, mut b) = (best - 1e-3, best + 1e-3);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let zero = 0.5 * (a + b);
        assert!((zero - 14.134_725).abs() < 1e-5, "located {zero}");
        assert!(f(14.134_725) <= 1e-5);
    }

    #[test]
    fn matches_direct_series_right_of_one_and_a_half() {
        for (re, im) in [(1.5, 0.0), (1.5, 7.3), (2.2, -30.0), (3.0, 120.0), (1.8, 1000.0)] {
            let s = Complex64::new(re, im);
            let oracle = direct_series(s, 10_000_000);
            let v = zeta(s, &ZetaParams::default()).unwrap();
            assert!((v - oracle).norm() < 1e-8, "s = {s}: {v} vs {oracle}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let s = Complex64::new(rng.gen_range(MIN_RE..=MAX_RE), rng.gen_range(-MAX_IM..=MAX_IM));
            let p = ZetaParams::default();
            let a = zeta(s.conj(), &p).unwrap();
            let b = zeta(s, &p).unwrap().conj();
            assert!((a - b).norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn two_cutoffs_agree() {
        // Different N give independent truncations of the same function.
        for (re, im) in [(0.5, 0.0), (0.6, 50.0), (0.9, 2500.0), (2.0, 9_999.0)] {
            let s = Complex64::new(re, im);
            let a = zeta(s, &ZetaParams::default()).unwrap();
            let n = ZetaParams::default().cutoff_for(im) as u64;
            let b = zeta(
                s,
                &ZetaParams {
                    cutoff: Some(n + 137),
                    bernoulli_order: 10,
                },
            )
            .unwrap();
            assert!((a - b).norm() < 1e-10, "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn line_evaluator_matches_pointwise() {
        let line = ZetaLine::new(1.2, 500.0, ZetaParams::default()).unwrap();
        for t in [0.0, 3.3, 250.0, 499.9] {
            let a = line.eval(t).unwrap();
            let b = z(1.2, t);
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn domain_and_accuracy_errors() {
        let p = ZetaParams::default();
        assert!(matches!(zeta(Complex64::new(1.0, 0.0), &p), Err(Error::Domain(_))));
        assert!(matches!(zeta(Complex64::new(1.0, 5e-7), &p), Err(Error::Domain(_))));
        assert!(zeta(Complex64::new(1.0, 2e-6), &p).is_ok());
        assert!(matches!(zeta(Complex64::new(0.3, 0.0), &p), Err(Error::Domain(_))));
        assert!(matches!(zeta(Complex64::new(6.1, 0.0), &p), Err(Error::Domain(_))));
        assert!(matches!(zeta(Complex64::new(2.0, 1.1e4), &p), Err(Error::Domain(_))));
        assert!(zeta(
            Complex64::new(2.0, 0.0),
            &ZetaParams {
                cutoff: Some(9),
                bernoulli_order: 8
            }
        )
        .is_err());
        assert!(zeta(
            Complex64::new(2.0, 0.0),
            &ZetaParams {
                cutoff: None,
                bernoulli_order: 13
            }
        )
        .is_err());
        let coarse = ZetaParams {
            cutoff: Some(10),
            bernoulli_order: 8,
        };
        assert!(matches!(
            zeta(Complex64::new(0.5, 2000.0), &coarse),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn dirichlet_series_values() {
        let two = Complex64::new(2.0, 0.0);
        let m = dirichlet_F(Target::Mertens, two).unwrap();
        assert!((m.re - 0.607_927_101_9).abs() < 1e-9);
        assert!((m.re - 6.0 / (PI * PI)).abs() < 1e-12);
        let l = dirichlet_F(Target::Liouville, two).unwrap();
        assert!((l.re - PI * PI / 15.0).abs() < 1e-9);
        assert!((l.re - 0.657_973_626_739_290_3).abs() < 1e-12);
    }

    #[test]
    fn mertens_series_partial_sums_at_b() {
        let b = 1.0 + 1.0 / 1000f64.ln();
        let f = dirichlet_F(Target::Mertens, Complex64::new(b, 0.0)).unwrap();
        assert!(f.re.is_finite() && f.im.abs() < 1e-15);
        let mu = crate::arith::sieve_block(1, 10_000_001, Kind::Mobius).unwrap();
        let n_terms = mu.len() as f64;
        let (mut raw, mut smoothed) = (0.0, 0.0);
        for (i, &v) in mu.values().iter().enumerate().filter(|(_, &v)| v != 0) {
            let n = (i + 1) as f64;
            let term = v as f64 * n.powf(-b);
            raw += term;
            smoothed += term * (1.0 - n / n_terms);
        }
        // The raw partial sum still carries the tail ~ |M(N)|·N^{-b} ≈ 1e-5;
        // the first Riesz mean damps it below 1e-6.
        assert!((raw - f.re).abs() < 2e-5, "raw {raw} vs {}", f.re);
        assert!((smoothed - f.re).abs() < 1e-6, "smoothed {smoothed} vs {}", f.re);
    }

    #[test]
    fn zeros_are_singular() {
        let zero = Complex64::new(0.5, 14.134_725_141_734_693);
        assert!(matches!(dirichlet_F(Target::Mertens, zero), Err(Error::Singularity(_))));
    }

    #[test]
    fn leading_constant_value() {
        let c = leading_constant().unwrap();
        assert!((c - 0.684_767_3).abs() < 1e-5);
        assert!((c - 0.684_765).abs() < 5e-6);
        assert!((1.0 / c + z(0.5, 0.0).re).abs() < 1e-12);
    }
}

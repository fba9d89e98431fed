use serde::Serialize;

use super::{sign, WalkSeries};
use crate::arith::Kind;
use crate::{Error, Result};

/// The sign of the selected walk moved from `old_sign` to `new_sign` at `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignEvent {
    pub n: u64,
    pub old_sign: i8,
    pub new_sign: i8,
}

/// Every `n` where the sign (−, 0, +) of `M` (`Kind::Mobius`) or `L`
/// (`Kind::Liouville`) differs from its sign at `n - 1`.
///
/// Relies on the accumulator's guarantee that each sign event is itself a
/// checkpoint, so the sign is constant between consecutive rows.
pub fn scan_sign_events(series: &WalkSeries, which: Kind) -> Vec<SignEvent> {
    series
        .checkpoints()
        .windows(2)
        .filter_map(|w| {
            let old_sign = sign(w[0].get(which));
            let new_sign = sign(w[1].get(which));
            (old_sign != new_sign).then_some(SignEvent {
                n: w[1].x,
                old_sign,
                new_sign,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRecord {
    pub x: u64,
    pub max_abs_m: u64,
    pub max_abs_l: u64,
    pub ratio: f64,
}

/// Running `max_{m<=x} |M(m)| / max_{m<=x} |L(m)|` at chosen sample points.
///
/// The pointwise quotient `M(x)/L(x)` is useless near the zeros of `L`;
/// the running records keep the growth-order comparison well defined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioDiagnostic {
    pub records: Vec<RatioRecord>,
}

pub fn ratio_diagnostic(series: &WalkSeries, sample_points: &[u64]) -> Result<RatioDiagnostic> {
    if sample_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sample points must be strictly increasing"));
    }
    if let Some(&x) = sample_points.first() {
        if x == 0 {
            return Err(Error::domain("sample points start at 1"));
        }
    }
    if let Some(&x) = sample_points.last() {
        if x > series.n_max() {
            return Err(Error::domain(format!(
                "sample point {x} is beyond the series end {}",
                series.n_max()
            )));
        }
    }
    let cps = series.checkpoints();
    let mut i = 0;
    let (mut max_m, mut max_l) = (0u64, 0u64);
    let mut records = Vec::with_capacity(sample_points.len());
    for &x in sample_points {
        while i < cps.len() && cps[i].x <= x {
            max_m = max_m.max(cps[i].m.unsigned_abs());
            max_l = max_l.max(cps[i].l.unsigned_abs());
            i += 1;
        }
        records.push(RatioRecord {
            x,
            max_abs_m: max_m,
            max_abs_l: max_l,
            ratio: max_m as f64 / max_l as f64,
        });
    }
    Ok(RatioDiagnostic { records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Engine;
    use crate::summatory::{accumulate, Checkpoint, Walk};

    fn series(n: u64, stride: u64) -> WalkSeries {
        let e = Engine::new(1, 1 << 10).unwrap();
        accumulate(&Walk::new(&e), n, stride).unwrap()
    }

    fn ev(n: u64, old_sign: i8, new_sign: i8) -> SignEvent {
        SignEvent { n, old_sign, new_sign }
    }

    #[test]
    fn liouville_events_to_ten() {
        let s = series(10, 1_000_000);
        assert_eq!(
            scan_sign_events(&s, Kind::Liouville),
            vec![
                ev(2, 1, 0),
                ev(3, 0, -1),
                ev(4, -1, 0),
                ev(5, 0, -1),
                ev(6, -1, 0),
                ev(7, 0, -1),
                ev(10, -1, 0),
            ]
        );
        assert_eq!(scan_sign_events(&series(2, 7), Kind::Mobius), vec![ev(2, 1, 0)]);
    }

    #[test]
    fn events_match_brute_force_with_any_stride() {
        let n = 20_000;
        let dense = series(n, 1);
        for stride in [3, 1000, 1 << 30] {
            let sparse = series(n, stride);
            for which in Kind::ALL {
                assert_eq!(scan_sign_events(&sparse, which), scan_sign_events(&dense, which));
            }
        }
    }

    #[test]
    fn constant_sign_has_no_events() {
        let s = WalkSeries::new(vec![
            Checkpoint::new(3, -1, -1),
            Checkpoint::new(5, -1, -1),
            Checkpoint::new(9, -2, -3),
        ])
        .unwrap();
        assert!(scan_sign_events(&s, Kind::Liouville).is_empty());
        assert!(scan_sign_events(&s, Kind::Mobius).is_empty());
    }

    #[test]
    fn ratio_small_x() {
        let s = series(10, 1_000_000);
        let d = ratio_diagnostic(&s, &[2, 10]).unwrap();
        assert_eq!(d.records[0].max_abs_m, 1);
        assert_eq!(d.records[0].max_abs_l, 1);
        assert_eq!(d.records[0].ratio, 1.0);
        assert_eq!(d.records[1].max_abs_m, 2);
        assert_eq!(d.records[1].max_abs_l, 2);
        assert_eq!(d.records[1].ratio, 1.0);
    }

    #[test]
    fn ratio_records_match_dense_scan() {
        let n = 30_000;
        let dense = series(n, 1);
        let sparse = series(n, 10_000);
        let points: Vec<u64> = (1..=n).step_by(113).collect();
        let a = ratio_diagnostic(&sparse, &points).unwrap();
        let b = ratio_diagnostic(&dense, &points).unwrap();
        assert_eq!(a, b);
        for w in a.records.windows(2) {
            assert!(w[0].max_abs_m <= w[1].max_abs_m && w[0].max_abs_l <= w[1].max_abs_l);
        }
    }

    #[test]
    fn ratio_rejects_bad_points() {
        let s = series(100, 10);
        assert!(ratio_diagnostic(&s, &[5, 5]).is_err());
        assert!(ratio_diagnostic(&s, &[101]).is_err());
        assert!(ratio_diagnostic(&s, &[0, 3]).is_err());
    }
}

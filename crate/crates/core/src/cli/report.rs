//! The full reproduction suite: every experiment at one `n_max`, one CSV
//! per experiment and a single `report.json`.

use serde::Serialize;

use super::commands::*;
use super::config::Settings;
use super::{Failure, UsageError};
use crate::arith::Kind;
use crate::exec::Engine;
use crate::stats::{
    self, block_scaling, block_sums_distribution, lag_covariance, limit_law, value_counts, AverageObserver,
    EmpiricalDistribution, EnvelopeObserver, EnvelopeReport, LagCovariance, MomentSummary, ScalingRow, Sieved, SqrtFit,
};
use crate::summatory::{self, ratio_diagnostic, Accumulator, Checkpoint, RatioDiagnostic, Walk, WalkSummary};
use crate::zeta::{self, perron_truncated, remainder_scan, PerronJob, QuadratureResult, Target, ZetaParams};
use crate::Result;

const CHARFN_TS: [f64; 3] = [0.5, 1.0, 2.0];
const SCALING_WIDTHS: [u64; 4] = [1000, 2000, 4000, 8000];
const RECOVERY_XS: [f64; 4] = [10.5, 20.5, 50.5, 100.5];
const RECOVERY_T: f64 = 2000.0;
const SCAN_X: f64 = 5000.5;
const SCAN_TS: [f64; 4] = [250.0, 500.0, 1000.0, 2000.0];
const FIRST_COVARIANCE_N: u64 = 10_000;

#[derive(Serialize)]
struct KindReport {
    kind: Kind,
    distribution: EmpiricalDistribution,
    limit_distribution: EmpiricalDistribution,
    sup_distance: f64,
    moments: MomentSummary,
    limit_variance: f64,
    char_fn: Vec<CharFnRow>,
    covariance: Vec<LagCovariance>,
    block_scaling: Vec<ScalingRow>,
    block_sums: BlockSumsSummary,
}

#[derive(Serialize)]
struct AverageReport {
    fit: SqrtFit,
    upper_fit: SqrtFit,
    first: Option<stats::AverageSample>,
    last: Option<stats::AverageSample>,
}

#[derive(Serialize)]
struct ScanReport {
    target: Target,
    x: f64,
    slope: f64,
}

#[derive(Serialize)]
struct PerronReport {
    recovery: Vec<QuadratureResult>,
    recovered: bool,
    scans: Vec<ScanReport>,
}

#[derive(Serialize)]
struct Report {
    n_max: u64,
    kinds: Vec<KindReport>,
    walk: WalkSummary,
    average: AverageReport,
    envelope: Vec<EnvelopeReport>,
    ratio: RatioDiagnostic,
    perron: PerronReport,
    zeta_half: f64,
    leading_constant: f64,
}

fn note(progress: bool, what: &str) {
    if progress {
        eprintln!("report: {what}");
    }
}

/// Covariance sample sizes: `10^4, 10^5, …` up to `n`, then `n`.
fn covariance_ns(n: u64) -> Vec<u64> {
    decades(n)
        .into_iter()
        .filter(|&m| m >= FIRST_COVARIANCE_N.min(n))
        .collect()
}

/// The requested block width, shrunk when `n` holds too few blocks.
fn block_width(window: u64, n: u64) -> Result<u64, Failure> {
    let w = window.min(n / stats::MIN_BLOCKS);
    if w < stats::MIN_WINDOW {
        return Err(UsageError(format!("n_max = {n} is too small for the block experiments")).into());
    }
    Ok(w)
}

pub(super) fn run(settings: &Settings, engine: &Engine, out: &mut Outputs, progress: bool) -> Result<(), Failure> {
    let n = n_max(settings)?;
    let stride = stride(settings)?;
    let phi = settings.phi()?;
    let width = block_width(settings.get("window")?, n)?;
    let widths: Vec<u64> = SCALING_WIDTHS
        .iter()
        .copied()
        .filter(|&w| n / w >= stats::MIN_BLOCKS)
        .collect();

    let mut distribution = out.csv_doc(DISTRIBUTION_HEADER);
    let mut moments = out.csv_doc(MOMENTS_HEADER);
    let mut charfn = out.csv_doc(CHARFN_HEADER);
    let mut covariance = out.csv_doc(COVARIANCE_HEADER);
    let mut scaling = out.csv_doc(SCALING_HEADER);
    let mut block_sums = out.csv_doc(BLOCK_SUMS_HEADER);
    let mut kinds = Vec::new();
    for kind in Kind::ALL {
        note(progress, &format!("{kind} value statistics"));
        let src = Sieved::new(kind, n)?;
        let counts = value_counts(engine, &src)?;
        let dist = EmpiricalDistribution::from_counts(counts)?;
        let mom = MomentSummary::from_counts(counts)?;
        let cf = char_fn_rows(counts, kind, &CHARFN_TS)?;
        distribution_csv(&mut distribution, kind, &dist);
        moments_row(&mut moments, kind, &mom);
        char_fn_csv(&mut charfn, kind, n, &cf);

        note(progress, &format!("{kind} lag covariance"));
        let mut covs = Vec::new();
        for m in covariance_ns(n) {
            let c = lag_covariance(engine, &Sieved::new(kind, m)?, 1)?;
            covariance.row([
                kind.name().to_string(),
                c.n.to_string(),
                c.h.to_string(),
                fmt_f64(c.cov),
            ]);
            covs.push(c);
        }

        note(progress, &format!("{kind} block sums"));
        let rows = if widths.is_empty() {
            Vec::new()
        } else {
            block_scaling(engine, &src, &widths)?
        };
        scaling_csv(&mut scaling, kind, &rows);
        let blocks = block_sums_distribution(engine, &src, width)?;
        block_sums_csv(&mut block_sums, kind, &blocks);

        let limit = limit_law(kind);
        kinds.push(KindReport {
            kind,
            sup_distance: dist.sup_distance(&limit),
            distribution: dist,
            limit_distribution: limit,
            moments: mom,
            limit_variance: stats::limit_variance(kind),
            char_fn: cf,
            covariance: covs,
            block_scaling: rows,
            block_sums: BlockSumsSummary::from(&blocks),
        });
    }
    out.csv("distribution.csv", &distribution)?;
    out.csv("moments.csv", &moments)?;
    out.csv("charfn.csv", &charfn)?;
    out.csv("covariance.csv", &covariance)?;
    out.csv("block_scaling.csv", &scaling)?;
    out.csv("block_sums.csv", &block_sums)?;

    note(progress, "summatory walk");
    let grid = average_grid(n);
    let mut observers = (
        Accumulator::new(stride)?,
        AverageObserver::new(&grid)?,
        EnvelopeObserver::new(phi),
    );
    Walk::new(engine)
        .progress(progress)
        .run(Checkpoint::ORIGIN, n, &mut observers)?;
    let (acc, avg, env) = observers;
    let series = acc.finish();
    let avg = avg.finish()?;
    let upper = upper_fit(&avg, n)?;
    let envelope: Vec<EnvelopeReport> = Kind::ALL.iter().map(|&k| env.report(k)).collect();
    let ratio = ratio_diagnostic(&series, &decades(n))?;

    let checkpoints = summatory::to_csv(&series, Some(out.provenance()));
    out.csv_text("checkpoints.csv", &checkpoints)?;
    let mut doc = out.csv_doc(AVERAGE_HEADER);
    average_csv(&mut doc, &avg, &upper);
    out.csv("average.csv", &doc)?;
    let mut doc = out.csv_doc(ENVELOPE_HEADER);
    for r in &envelope {
        envelope_csv(&mut doc, r);
    }
    out.csv("envelope.csv", &doc)?;
    let mut doc = out.csv_doc(RATIO_HEADER);
    ratio_csv(&mut doc, &ratio);
    out.csv("ratio.csv", &doc)?;

    note(progress, "Perron integrals");
    let perron = engine.install(perron_suite)?;
    let mut doc = out.csv_doc(PERRON_HEADER);
    perron_csv(&mut doc, &perron.recovery);
    for (scan_rows, _) in &perron.scan_rows {
        perron_csv(&mut doc, scan_rows);
    }
    out.csv("perron.csv", &doc)?;

    let zeta_half = zeta::zeta(num_complex::Complex64::new(0.5, 0.0), &ZetaParams::default())?.re;
    let report = Report {
        n_max: n,
        kinds,
        walk: series.summary().expect("walk covers at least x = 1"),
        average: AverageReport {
            fit: avg.fit,
            upper_fit: upper,
            first: avg.samples.first().copied(),
            last: avg.samples.last().copied(),
        },
        envelope,
        ratio,
        perron: PerronReport {
            recovered: perron.recovery.iter().all(|r| r.approx.round() as i64 == r.exact),
            recovery: perron.recovery,
            scans: perron.scan_rows.into_iter().map(|(_, s)| s).collect(),
        },
        zeta_half,
        leading_constant: zeta::leading_constant()?,
    };
    out.json_always("report.json", &report)?;
    Ok(())
}

struct PerronRuns {
    recovery: Vec<QuadratureResult>,
    scan_rows: Vec<(Vec<QuadratureResult>, ScanReport)>,
}

fn perron_suite() -> Result<PerronRuns> {
    let mut recovery = Vec::new();
    for target in [Target::Mertens, Target::Liouville] {
        for x in RECOVERY_XS {
            recovery.push(perron_truncated(&PerronJob::new(target, x, RECOVERY_T)?)?);
        }
    }
    let mut scan_rows = Vec::new();
    for target in [Target::Mertens, Target::Liouville] {
        let scan = remainder_scan(target, SCAN_X, &SCAN_TS)?;
        let summary = ScanReport {
            target,
            x: scan.x,
            slope: scan.slope,
        };
        scan_rows.push((scan.rows, summary));
    }
    Ok(PerronRuns { recovery, scan_rows })
}

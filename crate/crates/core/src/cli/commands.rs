use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;

use super::config::{Command, Format, Settings};
use super::{report, Failure, UsageError};
use crate::arith::{Kind, Sieve};
use crate::exec::Engine;
pub(super) use crate::output::fmt_f64;
use crate::output::{to_json_string, write_file, CsvDoc};
use crate::stats::{
    self, block_scaling, block_sums_distribution, lag_covariance, limit_law, value_counts, EmpiricalDistribution,
    EnvelopeObserver, EnvelopeReport, MomentSummary, Phi, Sieved,
};
use crate::summatory::{self, accumulate, ratio_diagnostic, scan_sign_events, Walk, WalkSeries};
use crate::zeta::{perron_truncated, remainder_scan, PerronJob, QuadratureResult};
use crate::{Error, Result};

/// Where a command's files go, and in which formats.
pub(super) struct Outputs {
    dir: PathBuf,
    format: Format,
    provenance: String,
    written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Doc<'a, T: Serialize> {
    provenance: &'a str,
    result: &'a T,
}

impl Outputs {
    fn new(settings: &Settings) -> Result<Self, Failure> {
        let dir = settings.out_dir();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Outputs {
            dir,
            format: settings.format()?,
            provenance: settings.provenance(),
            written: Vec::new(),
        })
    }

    pub(super) fn csv_doc(&self, header: &str) -> CsvDoc {
        CsvDoc::new(Some(&self.provenance), header)
    }

    pub(super) fn csv(&mut self, name: &str, doc: &CsvDoc) -> Result<()> {
        if self.format.csv() {
            let path = self.dir.join(name);
            doc.write_to(&path)?;
            self.written.push(path);
        }
        Ok(())
    }

    pub(super) fn csv_text(&mut self, name: &str, text: &str) -> Result<()> {
        if self.format.csv() {
            let path = self.dir.join(name);
            write_file(&path, text)?;
            self.written.push(path);
        }
        Ok(())
    }

    pub(super) fn provenance(&self) -> &str {
        &self.provenance
    }

    pub(super) fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if self.format.json() {
            self.json_always(name, value)?;
        }
        Ok(())
    }

    /// Writes `name` whatever the configured format.
    pub(super) fn json_always<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        {
            let path = self.dir.join(name);
            let doc = Doc {
                provenance: &self.provenance,
                result: value,
            };
            write_file(&path, &to_json_string(&doc))?;
            self.written.push(path);
        }
        Ok(())
    }
}

pub(super) fn dispatch(settings: &Settings, progress: bool) -> Result<Vec<PathBuf>, Failure> {
    let workers = settings
        .workers()?
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let block_len: u64 = settings.get("block_len")?;
    if block_len == 0 {
        return Err(UsageError("block_len must be at least 1".into()).into());
    }
    let engine = Engine::new(workers, block_len)?;
    let mut out = Outputs::new(settings)?;
    match settings.command() {
        Command::Sieve => sieve(settings, &engine, &mut out)?,
        Command::Walk => walk(settings, &engine, &mut out, progress)?,
        Command::Stats => stats_op(settings, &engine, &mut out, progress)?,
        Command::Perron => engine.install(|| perron(settings, &mut out))?,
        Command::Report => report::run(settings, &engine, &mut out, progress)?,
    }
    Ok(out.written)
}

pub(super) fn n_max(settings: &Settings) -> Result<u64, Failure> {
    let n: u64 = settings.get("n_max")?;
    let limit = Sieve::global().limit();
    if n == 0 || n >= limit {
        return Err(UsageError(format!("n_max must lie in [1, {limit})")).into());
    }
    Ok(n)
}

pub(super) fn stride(settings: &Settings) -> Result<u64, Failure> {
    let s: u64 = settings.get("stride")?;
    if s == 0 {
        return Err(UsageError("stride must be at least 1".into()).into());
    }
    Ok(s)
}

fn sieve(settings: &Settings, engine: &Engine, out: &mut Outputs) -> Result<(), Failure> {
    let lo: u64 = settings.get("lo")?;
    let hi = n_max(settings)?;
    if lo == 0 || lo > hi {
        return Err(UsageError(format!("need 1 <= lo <= n_max, got lo = {lo}, n_max = {hi}")).into());
    }
    #[derive(Serialize)]
    struct SieveSummary {
        lo: u64,
        hi: u64,
        sum_mu: i64,
        sum_lambda: i64,
        squarefree: u64,
    }
    let mut doc = out.csv_doc("n,mu,lambda");
    let mut summary = SieveSummary {
        lo,
        hi,
        sum_mu: 0,
        sum_lambda: 0,
        squarefree: 0,
    };
    let keep_rows = out.format.csv();
    let sieve = Sieve::global();
    engine.ordered(
        lo,
        hi + 1,
        |a, b| sieve.pair(a, b),
        |a, (mu, lambda)| {
            for (i, (&m, &l)) in mu.values().iter().zip(lambda.values()).enumerate() {
                summary.sum_mu += m as i64;
                summary.sum_lambda += l as i64;
                summary.squarefree += (m != 0) as u64;
                if keep_rows {
                    doc.row([(a + i as u64).to_string(), m.to_string(), l.to_string()]);
                }
            }
            Ok(())
        },
    )?;
    out.csv("sieve.csv", &doc)?;
    out.json("sieve.json", &summary)?;
    Ok(())
}

pub(super) fn events_csv(out: &Outputs, series: &WalkSeries) -> CsvDoc {
    let mut doc = out.csv_doc("kind,n,old_sign,new_sign");
    for kind in Kind::ALL {
        for e in scan_sign_events(series, kind) {
            doc.row([
                kind.name().to_string(),
                e.n.to_string(),
                e.old_sign.to_string(),
                e.new_sign.to_string(),
            ]);
        }
    }
    doc
}

fn walk(settings: &Settings, engine: &Engine, out: &mut Outputs, progress: bool) -> Result<(), Failure> {
    let n = n_max(settings)?;
    let stride = stride(settings)?;
    let series = accumulate(&Walk::new(engine).progress(progress), n, stride)?;
    let checkpoints = summatory::to_csv(&series, Some(&out.provenance));
    out.csv_text("checkpoints.csv", &checkpoints)?;
    let events = events_csv(out, &series);
    out.csv("events.csv", &events)?;
    #[derive(Serialize)]
    struct WalkDoc {
        summary: summatory::WalkSummary,
        checkpoints: usize,
    }
    let summary = series.summary().expect("walk covers at least x = 1");
    out.json(
        "walk.json",
        &WalkDoc {
            summary,
            checkpoints: series.checkpoints().len(),
        },
    )?;
    Ok(())
}

/// `10, 100, …` up to `n`, then `n` itself.
pub(super) fn decades(n: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = std::iter::successors(Some(10u64), |p| p.checked_mul(10))
        .take_while(|&p| p <= n)
        .collect();
    if pts.last() != Some(&n) && n >= 10 {
        pts.push(n);
    }
    pts
}

/// `d·10^k` for `d = 1..9`, from 10 up to `n`, then `n` itself.
pub(super) fn average_grid(n: u64) -> Vec<u64> {
    let mut pts = Vec::new();
    let mut p = 10u64;
    'outer: loop {
        for d in 1..10u64 {
            match d.checked_mul(p) {
                Some(v) if v <= n => pts.push(v),
                _ => break 'outer,
            }
        }
        match p.checked_mul(10) {
            Some(q) => p = q,
            None => break,
        }
    }
    if pts.last() != Some(&n) && n >= 10 {
        pts.push(n);
    }
    pts
}

pub(super) fn distribution_csv(doc: &mut CsvDoc, kind: Kind, d: &EmpiricalDistribution) {
    let limit = limit_law(kind);
    for (&y, &m) in d.support().iter().zip(d.masses()) {
        doc.row([
            kind.name().to_string(),
            d.n().to_string(),
            fmt_f64(y),
            fmt_f64(m),
            fmt_f64(limit.mass_at(y)),
        ]);
    }
}

pub(super) fn moments_row(doc: &mut CsvDoc, kind: Kind, m: &MomentSummary) {
    doc.row([
        kind.name().to_string(),
        m.n.to_string(),
        fmt_f64(m.mean),
        fmt_f64(m.variance),
        fmt_f64(stats::limit_variance(kind)),
    ]);
}

/// Characteristic function of the limiting law at `t`.
pub(super) fn limit_char_fn(kind: Kind, t: f64) -> Complex64 {
    let law = limit_law(kind);
    law.support()
        .iter()
        .zip(law.masses())
        .map(|(&y, &m)| m * Complex64::new(0.0, t * y).exp())
        .sum()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub(super) struct CharFnRow {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub limit_re: f64,
    pub limit_im: f64,
}

pub(super) fn char_fn_rows(counts: stats::ValueCounts, kind: Kind, ts: &[f64]) -> Result<Vec<CharFnRow>> {
    ts.iter()
        .map(|&t| {
            if !t.is_finite() {
                return Err(Error::domain("t must be finite"));
            }
            let v = stats::char_fn_from_counts(counts, t);
            let lim = limit_char_fn(kind, t);
            Ok(CharFnRow {
                t,
                re: v.re,
                im: v.im,
                limit_re: lim.re,
                limit_im: lim.im,
            })
        })
        .collect()
}

pub(super) fn char_fn_csv(doc: &mut CsvDoc, kind: Kind, n: u64, rows: &[CharFnRow]) {
    for r in rows {
        doc.row([
            kind.name().to_string(),
            n.to_string(),
            fmt_f64(r.t),
            fmt_f64(r.re),
            fmt_f64(r.im),
            fmt_f64(r.limit_re),
            fmt_f64(r.limit_im),
        ]);
    }
}

pub(super) const DISTRIBUTION_HEADER: &str = "kind,n,value,mass,limit_mass";
pub(super) const MOMENTS_HEADER: &str = "kind,n,mean,variance,limit_variance";
pub(super) const CHARFN_HEADER: &str = "kind,n,t,re,im,limit_re,limit_im";
pub(super) const COVARIANCE_HEADER: &str = "kind,n,h,cov";
pub(super) const SCALING_HEADER: &str = "kind,width,blocks,stddev,stddev_over_sqrt_width";
pub(super) const BLOCK_SUMS_HEADER: &str = "kind,width,block,normalized_sum";
pub(super) const AVERAGE_HEADER: &str = "n,sum_L,average,fitted";
pub(super) const ENVELOPE_HEADER: &str = "kind,phi,n_max,violations,rank,n,value,bound,ratio";
pub(super) const RATIO_HEADER: &str = "x,max_abs_M,max_abs_L,ratio";
pub(super) const PERRON_HEADER: &str = "target,x,T,approx,exact,abs_error,evaluations";

pub(super) fn scaling_csv(doc: &mut CsvDoc, kind: Kind, rows: &[stats::ScalingRow]) {
    for r in rows {
        doc.row([
            kind.name().to_string(),
            r.width.to_string(),
            r.blocks.to_string(),
            fmt_f64(r.stddev),
            fmt_f64(r.stddev / (r.width as f64).sqrt()),
        ]);
    }
}

pub(super) fn block_sums_csv(doc: &mut CsvDoc, kind: Kind, b: &stats::BlockSums) {
    for (i, &s) in b.samples.iter().enumerate() {
        doc.row([
            kind.name().to_string(),
            b.width.to_string(),
            (i + 1).to_string(),
            fmt_f64(s),
        ]);
    }
}

/// Block-sum summary without the per-block samples.
#[derive(Debug, Clone, Serialize)]
pub(super) struct BlockSumsSummary {
    pub width: u64,
    pub blocks: u64,
    pub mean: f64,
    pub variance: f64,
    pub ks: stats::KSResult,
}

impl From<&stats::BlockSums> for BlockSumsSummary {
    fn from(b: &stats::BlockSums) -> Self {
        BlockSumsSummary {
            width: b.width,
            blocks: b.samples.len() as u64,
            mean: b.mean,
            variance: b.variance,
            ks: b.ks,
        }
    }
}

pub(super) fn envelope_csv(doc: &mut CsvDoc, r: &EnvelopeReport) {
    for (rank, e) in r.largest.iter().enumerate() {
        doc.row([
            r.kind.name().to_string(),
            r.phi.name().to_string(),
            r.n_max.to_string(),
            r.violations.to_string(),
            (rank + 1).to_string(),
            e.n.to_string(),
            e.value.to_string(),
            fmt_f64(e.bound),
            fmt_f64(e.ratio),
        ]);
    }
}

pub(super) fn average_csv(doc: &mut CsvDoc, avg: &stats::AverageSummatory, fit: &stats::SqrtFit) {
    for s in &avg.samples {
        doc.row([
            s.n.to_string(),
            s.sum.to_string(),
            fmt_f64(s.average),
            fmt_f64(fit.predict(s.n)),
        ]);
    }
}

pub(super) fn ratio_csv(doc: &mut CsvDoc, r: &summatory::RatioDiagnostic) {
    for rec in &r.records {
        doc.row([
            rec.x.to_string(),
            rec.max_abs_m.to_string(),
            rec.max_abs_l.to_string(),
            fmt_f64(rec.ratio),
        ]);
    }
}

pub(super) fn perron_csv(doc: &mut CsvDoc, rows: &[QuadratureResult]) {
    for r in rows {
        doc.row([
            r.target.name().to_string(),
            fmt_f64(r.x),
            fmt_f64(r.t_max),
            fmt_f64(r.approx),
            r.exact.to_string(),
            fmt_f64(r.abs_error),
            r.evaluations.to_string(),
        ]);
    }
}

/// The `A(n) ≈ c√n` fit over the top two decades when they exist.
pub(super) fn upper_fit(avg: &stats::AverageSummatory, n: u64) -> Result<stats::SqrtFit> {
    if n / 100 >= 10 {
        avg.fit_range(n / 100, n)
    } else {
        Ok(avg.fit)
    }
}

fn stats_op(settings: &Settings, engine: &Engine, out: &mut Outputs, progress: bool) -> Result<(), Failure> {
    let kind = settings.kind()?;
    let n = n_max(settings)?;
    let op: String = settings.get("op")?;
    let src = Sieved::new(kind, n)?;
    match op.as_str() {
        "distribution" => {
            let d = EmpiricalDistribution::from_counts(value_counts(engine, &src)?)?;
            let mut doc = out.csv_doc(DISTRIBUTION_HEADER);
            distribution_csv(&mut doc, kind, &d);
            out.csv("distribution.csv", &doc)?;
            #[derive(Serialize)]
            struct Body {
                kind: Kind,
                distribution: EmpiricalDistribution,
                limit: EmpiricalDistribution,
                sup_distance: f64,
            }
            let limit = limit_law(kind);
            let sup_distance = d.sup_distance(&limit);
            out.json(
                "distribution.json",
                &Body {
                    kind,
                    distribution: d,
                    limit,
                    sup_distance,
                },
            )?;
        }
        "moments" => {
            let m = MomentSummary::from_counts(value_counts(engine, &src)?)?;
            let mut doc = out.csv_doc(MOMENTS_HEADER);
            moments_row(&mut doc, kind, &m);
            out.csv("moments.csv", &doc)?;
            #[derive(Serialize)]
            struct Body {
                kind: Kind,
                moments: MomentSummary,
                limit_variance: f64,
            }
            out.json(
                "moments.json",
                &Body {
                    kind,
                    moments: m,
                    limit_variance: stats::limit_variance(kind),
                },
            )?;
        }
        "charfn" => {
            let ts: Vec<f64> = settings.list("t")?;
            let rows = char_fn_rows(value_counts(engine, &src)?, kind, &ts)?;
            let mut doc = out.csv_doc(CHARFN_HEADER);
            char_fn_csv(&mut doc, kind, n, &rows);
            out.csv("charfn.csv", &doc)?;
            out.json("charfn.json", &rows)?;
        }
        "covariance" => {
            let h: u64 = settings.get("lag")?;
            let c = lag_covariance(engine, &src, h)?;
            let mut doc = out.csv_doc(COVARIANCE_HEADER);
            doc.row([
                kind.name().to_string(),
                c.n.to_string(),
                c.h.to_string(),
                fmt_f64(c.cov),
            ]);
            out.csv("covariance.csv", &doc)?;
            out.json("covariance.json", &c)?;
        }
        "blocks" => {
            let w: u64 = settings.get("window")?;
            let b = block_sums_distribution(engine, &src, w)?;
            let mut doc = out.csv_doc(BLOCK_SUMS_HEADER);
            block_sums_csv(&mut doc, kind, &b);
            out.csv("block_sums.csv", &doc)?;
            out.json("block_sums.json", &BlockSumsSummary::from(&b))?;
        }
        "scaling" => {
            let widths: Vec<u64> = settings.list("widths")?;
            let rows = block_scaling(engine, &src, &widths)?;
            let mut doc = out.csv_doc(SCALING_HEADER);
            scaling_csv(&mut doc, kind, &rows);
            out.csv("block_scaling.csv", &doc)?;
            out.json("block_scaling.json", &rows)?;
        }
        "average" => {
            let avg = stats::average_summatory(&Walk::new(engine).progress(progress), &average_grid(n))?;
            let upper = upper_fit(&avg, n)?;
            let mut doc = out.csv_doc(AVERAGE_HEADER);
            average_csv(&mut doc, &avg, &upper);
            out.csv("average.csv", &doc)?;
            #[derive(Serialize)]
            struct Body {
                fit: stats::SqrtFit,
                upper_fit: stats::SqrtFit,
                samples: usize,
            }
            out.json(
                "average.json",
                &Body {
                    fit: avg.fit,
                    upper_fit: upper,
                    samples: avg.samples.len(),
                },
            )?;
        }
        "envelope" => {
            let phi: Phi = settings.phi()?;
            let mut obs = EnvelopeObserver::new(phi);
            Walk::new(engine)
                .progress(progress)
                .run(summatory::Checkpoint::ORIGIN, n, &mut obs)?;
            let r = obs.report(kind);
            let mut doc = out.csv_doc(ENVELOPE_HEADER);
            envelope_csv(&mut doc, &r);
            out.csv("envelope.csv", &doc)?;
            out.json("envelope.json", &r)?;
        }
        "ratio" => {
            let series = accumulate(&Walk::new(engine).progress(progress), n, summatory::DEFAULT_STRIDE)?;
            let r = ratio_diagnostic(&series, &decades(n))?;
            let mut doc = out.csv_doc(RATIO_HEADER);
            ratio_csv(&mut doc, &r);
            out.csv("ratio.csv", &doc)?;
            out.json("ratio.json", &r)?;
        }
        other => {
            return Err(UsageError(format!(
                "unknown op {other:?} (expected distribution, moments, charfn, covariance, blocks, scaling, \
                 average, envelope or ratio)"
            ))
            .into())
        }
    }
    Ok(())
}

fn perron(settings: &Settings, out: &mut Outputs) -> Result<(), Failure> {
    let target = settings.target()?;
    let x: f64 = settings.get("x")?;
    let ts: Vec<f64> = settings.list("T")?;
    #[derive(Serialize)]
    struct Body {
        rows: Vec<QuadratureResult>,
        slope: Option<f64>,
    }
    let body = if ts.len() == 1 {
        Body {
            rows: vec![perron_truncated(&PerronJob::new(target, x, ts[0])?)?],
            slope: None,
        }
    } else {
        let scan = remainder_scan(target, x, &ts)?;
        Body {
            rows: scan.rows,
            slope: Some(scan.slope),
        }
    };
    let mut doc = out.csv_doc(PERRON_HEADER);
    perron_csv(&mut doc, &body.rows);
    out.csv("perron.csv", &doc)?;
    out.json("perron.json", &body)?;
    Ok(())
}

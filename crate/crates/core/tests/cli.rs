//! End-to-end runs of the `summa` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn summa(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_summa"))
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .arg("--quiet")
        .output()
        .unwrap()
}

fn ok(args: &[&str], out_dir: &Path) -> Output {
    let out = summa(args, out_dir);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// CSV rows after the comment line and the header.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn walk_writes_checkpoints_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["walk", "--n-max", "1000000", "--stride", "100000"], dir.path());
    let listed = String::from_utf8(out.stdout).unwrap();
    assert_eq!(listed.lines().count(), 3, "{listed}");

    let cps = rows(&dir.path().join("checkpoints.csv"));
    assert!(cps.len() >= 10);
    let strides = cps
        .iter()
        .filter(|r| r[0].parse::<u64>().unwrap() % 100_000 == 0)
        .count();
    assert_eq!(strides, 10);

    let doc = json(&dir.path().join("walk.json"));
    let summary = doc["result"]["summary"].as_object().unwrap();
    let mut keys: Vec<&str> = summary.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "argmax_L",
            "argmax_M",
            "argmin_L",
            "argmin_M",
            "first_nonneg_L",
            "first_pos_L",
            "max_L",
            "max_M",
            "min_L",
            "min_M",
            "n_max",
            "sign_changes_L",
            "sign_changes_M"
        ]
    );
    assert_eq!(summary["n_max"], 1_000_000);
    assert!(summary["first_pos_L"].is_null());

    // The written series loads back, comment line included.
    let series = summa::summatory::load_checkpoints(dir.path().join("checkpoints.csv")).unwrap();
    assert_eq!(series.n_max(), 1_000_000);
    assert_eq!(series.summary().unwrap().min_m, summary["min_M"].as_i64().unwrap());
}

#[test]
fn perron_recovers_mertens_at_100() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["perron", "--target", "mertens", "--x", "100.5", "--T", "1000"],
        dir.path(),
    );
    let r = rows(&dir.path().join("perron.csv"));
    assert_eq!(r.len(), 1);
    let approx: f64 = r[0][3].parse().unwrap();
    assert_eq!(r[0][4], "1");
    assert_eq!(approx.round() as i64, 1);
    assert!(json(&dir.path().join("perron.json"))["result"]["slope"].is_null());
}

#[test]
fn perron_scan_reports_a_slope() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["perron", "--target", "liouville", "--x", "200.5", "--T", "100,200,400"],
        dir.path(),
    );
    assert_eq!(rows(&dir.path().join("perron.csv")).len(), 3);
    assert!(json(&dir.path().join("perron.json"))["result"]["slope"].is_f64());
}

#[test]
fn liouville_distribution_at_1e8() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "stats",
            "--kind",
            "liouville",
            "--n-max",
            "100000000",
            "--op",
            "distribution",
        ],
        dir.path(),
    );
    let r = rows(&dir.path().join("distribution.csv"));
    let mass = |value: &str| -> f64 {
        r.iter()
            .find(|row| row[2].parse::<f64>().unwrap() == value.parse::<f64>().unwrap())
            .map(|row| row[3].parse().unwrap())
            .unwrap()
    };
    assert!((mass("-1") - 0.5).abs() < 1e-3);
    assert!((mass("1") - 0.5).abs() < 1e-3);
    assert_eq!(mass("0"), 0.0);
}

#[test]
fn every_stats_op_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (op, file) in [
        ("distribution", "distribution"),
        ("moments", "moments"),
        ("charfn", "charfn"),
        ("covariance", "covariance"),
        ("blocks", "block_sums"),
        ("scaling", "block_scaling"),
        ("average", "average"),
        ("envelope", "envelope"),
        ("ratio", "ratio"),
    ] {
        ok(
            &["stats", "--kind", "mobius", "--n-max", "1000000", "--op", op],
            dir.path(),
        );
        for ext in ["csv", "json"] {
            let path = dir.path().join(format!("{file}.{ext}"));
            let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("{op}: no {file}.{ext}"));
            assert!(text.contains("command=stats"), "{op}");
            assert!(text.contains(&format!("op={op}")), "{op}");
        }
    }
    let cf = rows(&dir.path().join("charfn.csv"));
    assert_eq!(cf.len(), 3);
    for row in cf {
        let (re, limit): (f64, f64) = (row[3].parse().unwrap(), row[5].parse().unwrap());
        assert!((re - limit).abs() < 2e-3);
    }
}

#[test]
fn sieve_lists_small_values() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sieve", "--lo", "1", "--n-max", "10"], dir.path());
    let r = rows(&dir.path().join("sieve.csv"));
    let mu: Vec<i8> = r.iter().map(|row| row[1].parse().unwrap()).collect();
    let lambda: Vec<i8> = r.iter().map(|row| row[2].parse().unwrap()).collect();
    assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    assert_eq!(lambda, [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]);
    let doc = json(&dir.path().join("sieve.json"));
    assert_eq!(doc["result"]["sum_mu"], -1);
    assert_eq!(doc["result"]["sum_lambda"], 0);
}

#[test]
fn outputs_start_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["walk", "--n-max", "5000", "--stride", "1000"], dir.path());
    let version = env!("CARGO_PKG_VERSION");
    for name in ["checkpoints.csv", "events.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let first = text.lines().next().unwrap();
        assert!(
            first.starts_with(&format!("# summa {version} command=walk ")),
            "{first}"
        );
        assert!(first.contains("n_max=5000") && first.contains("stride=1000"));
        assert!(!text.contains('\r'));
    }
    let doc = json(&dir.path().join("walk.json"));
    assert!(doc["provenance"].as_str().unwrap().starts_with("summa "));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# walk settings\nn_max = 5000\ncheckpoint_stride = 1000\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    ok(&["walk", "--config", cfg, "--n-max", "3000"], dir.path());
    let doc = json(&dir.path().join("walk.json"));
    assert_eq!(doc["result"]["summary"]["n_max"], 3000);
    let prov = doc["provenance"].as_str().unwrap();
    assert!(prov.contains("stride=1000") && prov.contains("format=json"), "{prov}");
    assert!(!dir.path().join("checkpoints.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(summa(&["walk", "--no-such-flag"], dir.path()).status.code(), Some(2));
    assert_eq!(summa(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(summa(&["walk", "--n-max", "many"], dir.path()).status.code(), Some(2));
    assert_eq!(summa(&["stats", "--op", "median"], dir.path()).status.code(), Some(2));

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "n_max=10\ncolour=blue\n").unwrap();
    let out = summa(&["walk", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    // Valid invocations whose computation is rejected.
    let out = summa(&["perron", "--x", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = summa(
        &["stats", "--op", "covariance", "--n-max", "10", "--lag", "20"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));

    let help = Command::new(env!("CARGO_BIN_EXE_summa"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("report"));
}

#[test]
fn report_writes_every_document() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["report", "--n-max", "1000000", "--stride", "100000"], dir.path());
    for name in [
        "distribution.csv",
        "moments.csv",
        "charfn.csv",
        "covariance.csv",
        "block_scaling.csv",
        "block_sums.csv",
        "checkpoints.csv",
        "ratio.csv",
        "average.csv",
        "envelope.csv",
        "perron.csv",
        "report.json",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let report = json(&dir.path().join("report.json"));
    let r = &report["result"];
    assert_eq!(r["n_max"], 1_000_000);
    assert_eq!(r["perron"]["recovered"], true);
    assert_eq!(r["perron"]["recovery"].as_array().unwrap().len(), 8);
    assert_eq!(r["walk"]["n_max"], 1_000_000);
    assert!((r["leading_constant"].as_f64().unwrap() - 0.684765).abs() < 1e-5);
    assert_eq!(r["kinds"].as_array().unwrap().len(), 2);
}

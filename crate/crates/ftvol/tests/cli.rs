use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ftvol(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftvol"))
        .current_dir(dir)
        .env_remove("FTVOL_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = ftvol(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn synth(dir: &Path, days: usize, extra: &[&str]) -> PathBuf {
    let days = days.to_string();
    let mut args = vec![
        "synth",
        "--days",
        &days,
        "--seed",
        "11",
        "--output",
        "prices.csv",
    ];
    args.extend_from_slice(extra);
    ok(dir, &args);
    dir.join("prices.csv")
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn prices(path: &Path) -> Vec<f64> {
    rows(path).iter().map(|r| r[1].parse().unwrap()).collect()
}

#[test]
fn returns_has_one_row_per_price_pair() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 300, &[]);
    ok(
        tmp.path(),
        &["returns", "--input", "prices.csv", "--out-dir", "out"],
    );
    let r = rows(&tmp.path().join("out/returns.csv"));
    assert_eq!(r.len(), 299);
    assert_eq!(r[0][0], "1");
    assert_eq!(r[0][1], "2000-01-04");
    let meta: Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("out/returns.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["return_kind"], "simple");

    ok(
        tmp.path(),
        &[
            "returns",
            "--input",
            "prices.csv",
            "--kind",
            "log",
            "--out-dir",
            "log",
        ],
    );
    let p = prices(&tmp.path().join("prices.csv"));
    let lr = rows(&tmp.path().join("log/returns.csv"));
    let first: f64 = lr[0][2].parse().unwrap();
    assert!((first - (p[1] / p[0]).ln()).abs() < 1e-9);
}

#[test]
fn synth_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let args = [
        "synth",
        "--days",
        "500",
        "--seed",
        "3",
        "--regimes",
        "0:0.005,250:0.03",
    ];
    ok(tmp.path(), &args);
    let first = fs::read(tmp.path().join("synth.csv")).unwrap();
    let first_meta = fs::read(tmp.path().join("synth.csv.meta.json")).unwrap();
    ok(tmp.path(), &args);
    assert_eq!(first, fs::read(tmp.path().join("synth.csv")).unwrap());
    assert_eq!(
        first_meta,
        fs::read(tmp.path().join("synth.csv.meta.json")).unwrap()
    );

    ok(
        tmp.path(),
        &[
            "synth",
            "--days",
            "500",
            "--seed",
            "4",
            "--output",
            "other.csv",
        ],
    );
    assert_ne!(first, fs::read(tmp.path().join("other.csv")).unwrap());
}

#[test]
fn zero_vol_synth_is_flat() {
    let tmp = TempDir::new().unwrap();
    let p = synth(tmp.path(), 100, &["--vol", "0", "--initial", "42"]);
    assert!(prices(&p).iter().all(|&x| x == 42.0));
}

#[test]
fn synth_regimes_change_dispersion() {
    let tmp = TempDir::new().unwrap();
    let p = prices(&synth(
        tmp.path(),
        2000,
        &["--regimes", "0:0.005,1000:0.03"],
    ));
    let lr: Vec<f64> = p.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let sd = |x: &[f64]| {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
    };
    let (calm, wild) = (sd(&lr[..999]), sd(&lr[999..]));
    assert!((calm - 0.005).abs() < 0.001, "calm {calm}");
    assert!((wild - 0.03).abs() < 0.004, "wild {wild}");
}

#[test]
fn compare_reports_expected_node_counts() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 4040, &[]);
    let out = ok(
        tmp.path(),
        &["compare", "--input", "prices.csv", "--out-dir", "cmp"],
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("monthly"));
    let report: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("cmp/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["input"]["rows"], 4040);
    let nodes: Vec<(String, u64, u64)> = report["horizons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| {
            (
                h["name"].as_str().unwrap().to_string(),
                h["T"].as_u64().unwrap(),
                h["nodes"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        nodes,
        [
            ("yearly".to_string(), 252, 16),
            ("monthly".to_string(), 21, 192),
            ("weekly".to_string(), 5, 808)
        ]
    );
    for h in report["horizons"].as_array().unwrap() {
        let r = h["pearson"].as_f64().unwrap();
        assert!((-1.0..=1.0).contains(&r));
    }
    for name in ["yearly", "monthly", "weekly"] {
        for table in ["pointwise", "scatter", "adjusted"] {
            let path = tmp.path().join(format!("cmp/compare_{name}_{table}.csv"));
            let text = fs::read_to_string(&path).unwrap();
            assert!(!text.contains("NaN") && !text.contains("inf"));
            assert!(tmp
                .path()
                .join(format!("cmp/compare_{name}_{table}.csv.meta.json"))
                .exists());
        }
    }
}

#[test]
fn paper_and_exact_differ_only_at_boundary_nodes() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 400, &[]);
    for norm in ["exact", "paper"] {
        ok(
            tmp.path(),
            &[
                "ftvol",
                "--input",
                "prices.csv",
                "--horizon",
                "21",
                "--normalization",
                norm,
                "--out-dir",
                norm,
            ],
        );
    }
    let e = rows(&tmp.path().join("exact/ftvol_T21_components.csv"));
    let p = rows(&tmp.path().join("paper/ftvol_T21_components.csv"));
    assert_eq!(e.len(), 19);
    for (i, (a, b)) in e.iter().zip(&p).enumerate() {
        let boundary = i == 0 || i == e.len() - 1;
        assert_eq!(a[..3], b[..3]);
        if boundary {
            assert_ne!(a[3], b[3], "node {i}");
        } else {
            let (x, y): (f64, f64) = (a[3].parse().unwrap(), b[3].parse().unwrap());
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-12), "node {i}");
        }
    }
    let meta: Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("paper/ftvol_T21_deviation.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["normalization"], "paper");
    assert_eq!(meta["method"], "ft");
    assert_eq!(meta["horizon"], 21);
}

#[test]
fn deviation_is_undefined_past_last_node() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 50, &[]);
    ok(
        tmp.path(),
        &[
            "ftvol",
            "--input",
            "prices.csv",
            "--horizon",
            "20",
            "--out-dir",
            "o",
        ],
    );
    // 50 prices give floor(50 / 20) = 2 nodes, at days 1 and 21
    let d = rows(&tmp.path().join("o/ftvol_T20_deviation.csv"));
    assert_eq!(d.len(), 49);
    for r in &d {
        let t: usize = r[0].parse().unwrap();
        assert_eq!(r[3] == "true", t <= 21, "day {t}");
        assert_eq!(r[2].is_empty(), t > 21);
    }
}

#[test]
fn annualize_scales_deviation() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 200, &[]);
    ok(
        tmp.path(),
        &[
            "ftvol",
            "--input",
            "prices.csv",
            "--horizon",
            "10",
            "--out-dir",
            "raw",
        ],
    );
    ok(
        tmp.path(),
        &[
            "ftvol",
            "--input",
            "prices.csv",
            "--horizon",
            "10",
            "--annualize",
            "--out-dir",
            "ann",
        ],
    );
    let raw = rows(&tmp.path().join("raw/ftvol_T10_deviation.csv"));
    let ann = rows(&tmp.path().join("ann/ftvol_T10_deviation.csv"));
    for (a, b) in raw.iter().zip(&ann) {
        if a[2].is_empty() {
            continue;
        }
        let (x, y): (f64, f64) = (a[2].parse().unwrap(), b[2].parse().unwrap());
        assert!((x * 252f64.sqrt() - y).abs() <= 1e-8 * y.abs().max(1e-12));
    }
    let meta: Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("ann/ftvol_T10_deviation.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["annualized"], true);
    assert_eq!(meta["annualization_is_extension"], true);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 4040, &[]);
    let too_long = ftvol(
        tmp.path(),
        &["ftvol", "--input", "prices.csv", "--horizon", "5000"],
    );
    assert_eq!(too_long.status.code(), Some(2));

    fs::write(tmp.path().join("empty.csv"), "").unwrap();
    let empty = ftvol(tmp.path(), &["returns", "--input", "empty.csv"]);
    assert_eq!(empty.status.code(), Some(2));

    fs::write(
        tmp.path().join("bad.csv"),
        "date,close\n2000-01-03,1\n2000-01-04,-2\n",
    )
    .unwrap();
    let bad = ftvol(tmp.path(), &["returns", "--input", "bad.csv"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 3"));

    let missing = ftvol(tmp.path(), &["returns", "--input", "missing.csv"]);
    assert_eq!(missing.status.code(), Some(1));

    let no_input = ftvol(tmp.path(), &["returns"]);
    assert_eq!(no_input.status.code(), Some(2));

    let bad_flag = ftvol(
        tmp.path(),
        &["compare", "--input", "prices.csv", "--shape", "cubic"],
    );
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn config_file_env_and_flags_layer() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 300, &[]);
    fs::write(
        tmp.path().join("run.conf"),
        "input = prices.csv\nhorizons = monthly:21\nout_dir = from_file\n",
    )
    .unwrap();
    ok(tmp.path(), &["compare", "--config", "run.conf"]);
    assert!(tmp
        .path()
        .join("from_file/compare_monthly_scatter.csv")
        .exists());

    let env = Command::new(env!("CARGO_BIN_EXE_ftvol"))
        .current_dir(tmp.path())
        .env("FTVOL_OUT_DIR", "from_env")
        .args(["compare", "--config", "run.conf"])
        .output()
        .unwrap();
    assert!(env.status.success());
    assert!(tmp.path().join("from_env/report.json").exists());

    let flag = Command::new(env!("CARGO_BIN_EXE_ftvol"))
        .current_dir(tmp.path())
        .env("FTVOL_OUT_DIR", "from_env2")
        .args([
            "compare",
            "--config",
            "run.conf",
            "--out-dir",
            "from_flag",
            "--horizons",
            "w:5",
        ])
        .output()
        .unwrap();
    assert!(flag.status.success());
    assert!(tmp.path().join("from_flag/compare_w_scatter.csv").exists());
    assert!(!tmp.path().join("from_env2").exists());
}

#[test]
fn flat_prices_report_degenerate_correlation() {
    let tmp = TempDir::new().unwrap();
    synth(tmp.path(), 300, &["--vol", "0"]);
    ok(tmp.path(), &["compare", "--input", "prices.csv", "--horizons", "21", "--out-dir", "c"]);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("c/report.json")).unwrap()).unwrap();
    let h = &report["horizons"][0];
    assert!(h["pearson"].is_null());
    assert_eq!(h["pearson_error"], "DegenerateVariance");
    assert_eq!(h["mean_ft"], 0.0);
}

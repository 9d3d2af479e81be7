use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn duality(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duality"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of the first CSV block on stdout (up to the first blank line).
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

const MIXED: &str = "[source.direct]\np_a = 0.5\ngamma = [0.0, 0.0]\n";
const PURE_07: &str = "[source.purification]\nc_a = [0.8366600265340756, 0.0]\nc_b = [0.5477225575051661, 0.0]\nm = [[1.0, 0.0]]\nn = [[1.0, 0.0]]\n";
const COHERENT: &str = "[source.direct]\np_a = 0.5\ngamma = [0.5, 0.0]\n";

#[test]
fn report_maximally_mixed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "mixed.toml", MIXED);
    let o = duality(&["report"], &cfg);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("scalar: V=0 D=0 mu=0 residual=0"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn report_pure_state_and_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "pure.toml", PURE_07);
    let out = dir.path().join("report.csv");
    let o = duality(&["report", "--out", out.to_str().unwrap()], &cfg);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows = csv_rows(&csv);
    assert_eq!(rows[0], ["mode", "V", "D", "mu", "residual"]);
    assert_eq!(rows[1][0], "scalar");
    assert!((num(&rows[1][1]) - 0.916_515).abs() < 1e-6);
    assert!((num(&rows[1][2]) - 0.4).abs() < 1e-12);
    assert!((num(&rows[1][3]) - 1.0).abs() < 1e-12);
    assert!(num(&rows[1][4]).abs() <= 1e-12);
    assert!(stdout(&o).contains("triangle:"));
}

#[test]
fn report_rejects_cauchy_schwarz_violation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bad.toml",
        "[source.direct]\np_a = 0.9\ngamma = [0.45, 0.0]\n",
    );
    let o = duality(&["report"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Cauchy-Schwarz"), "{err}");
    assert!(err.contains("bad.toml:1:"), "{err}");
}

#[test]
fn report_with_modes_and_geometry() {
    let dir = TempDir::new().unwrap();
    let body = "[source.direct]\np_a = 0.7\ngamma = [0.3, 0.0]\n[modes]\neps_a = [[1.0, 0.0], [0.0, 0.0]]\neps_b = [[0.8, 0.0], [0.6, 0.0]]\n[geometry]\nwavelength = 1.0\nr_a = [0.0, 0.0, 0.0]\nr_b = [0.5, 0.0, 0.0]\nr_hat = [1.0, 0.0, 0.0]\n";
    let cfg = write_config(&dir, "pol.toml", body);
    let o = duality(&["report"], &cfg);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("polarized:")).unwrap();
    let vp = num(line
        .split_whitespace()
        .nth(1)
        .unwrap()
        .trim_start_matches("V_P="));
    assert!((vp - 0.6).abs() < 1e-6, "{line}");
    assert!(text.contains("detector: theta=3.14159"), "{text}");
}

#[test]
fn malformed_config_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "broken.toml", "[source.direct\np_a = 0.5\n");
    assert_eq!(duality(&["report"], &cfg).status.code(), Some(1));
    let missing = dir.path().join("absent.toml");
    assert_eq!(duality(&["report"], &missing).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_duality"))
        .arg("nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fringes_tables() {
    let dir = TempDir::new().unwrap();
    let flat = write_config(&dir, "flat.toml", MIXED);
    let o = duality(&["fringes"], &flat);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["theta", "rate"]);
    assert_eq!(rows.len(), 65);
    assert!(rows[1..].iter().all(|r| num(&r[1]) == 1.0));

    let coherent = write_config(&dir, "coherent.toml", COHERENT);
    let rows = csv_rows(&stdout(&duality(&["fringes", "--angles", "8"], &coherent)));
    assert_eq!(rows.len(), 9);
    assert_eq!(num(&rows[1][0]), 0.0);
    assert_eq!(num(&rows[1][1]), 2.0);
    assert!(num(&rows[5][1]).abs() < 1e-14);

    let explicit = write_config(
        &dir,
        "scan.toml",
        &format!("{COHERENT}[scan]\ntheta = [0.0, 1.0, 2.0]\n"),
    );
    let rows = csv_rows(&stdout(&duality(&["fringes"], &explicit)));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][0], "1");
}

#[test]
fn montecarlo_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let body = "[source.direct]\np_a = 0.7\ngamma = [0.3, 0.0]\n[simulation]\nangles = 64\nmean_total = 1e5\nseed = 12345\n";
    let cfg = write_config(&dir, "mc.toml", body);
    let a = duality(&["montecarlo"], &cfg);
    let b = duality(&["montecarlo"], &cfg);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let text = stdout(&a);
    assert_eq!(csv_rows(&text).len(), 65);
    let v_line = text.lines().find(|l| l.starts_with("V_hat,")).unwrap();
    let f: Vec<f64> = v_line.split(',').skip(1).map(num).collect();
    assert!((f[0] - 0.6).abs() <= 3.0 * f[1], "{v_line}");
    assert!(text.lines().any(|l| l.starts_with("D_hat,")));
    assert!(text.lines().any(|l| l.starts_with("residual_hat,")));

    let c = duality(&["montecarlo", "--seed", "7"], &cfg);
    assert_ne!(a.stdout, c.stdout);

    let out = dir.path().join("counts.csv");
    let d = duality(&["montecarlo", "--out", out.to_str().unwrap()], &cfg);
    assert!(stdout(&d).starts_with("V_hat,"));
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("theta,counts\n"));
}

#[test]
fn montecarlo_requires_seed_and_positive_mean() {
    let dir = TempDir::new().unwrap();
    let no_seed = write_config(
        &dir,
        "a.toml",
        &format!("{MIXED}[simulation]\nmean_total = 100.0\n"),
    );
    assert_eq!(duality(&["montecarlo"], &no_seed).status.code(), Some(1));
    assert!(duality(&["montecarlo", "--seed", "3"], &no_seed)
        .status
        .success());
    let zero = write_config(
        &dir,
        "b.toml",
        &format!("{MIXED}[simulation]\nmean_total = 0.0\nseed = 1\n"),
    );
    assert_eq!(duality(&["montecarlo"], &zero).status.code(), Some(1));
    let no_sim = write_config(&dir, "c.toml", MIXED);
    assert_eq!(duality(&["montecarlo"], &no_sim).status.code(), Some(1));
}

fn stokes_summary(text: &str) -> Vec<f64> {
    let lines: Vec<&str> = text.lines().collect();
    let i = lines.iter().position(|l| *l == "V0,V1,V2,V3,VP").unwrap();
    lines[i + 1].split(',').map(num).collect()
}

#[test]
fn stokes_summaries() {
    let dir = TempDir::new().unwrap();
    let partial = "[source.direct]\np_a = 0.5\ngamma = [0.4, 0.0]\n[modes]\neps_a = [[1.0, 0.0], [0.0, 0.0]]\neps_b = [[0.8, 0.0], [0.6, 0.0]]\n";
    let o = duality(&["stokes"], &write_config(&dir, "s.toml", partial));
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(csv_rows(&text)[0], ["theta", "S0", "S1", "S2", "S3"]);
    assert_eq!(csv_rows(&text).len(), 4097);
    for (got, want) in stokes_summary(&text)
        .iter()
        .zip([0.64, 0.64, 0.48, 0.48, 0.8])
    {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }

    let same = "[source.direct]\np_a = 0.5\ngamma = [0.4, 0.0]\n[modes]\neps_a = [[1.0, 0.0], [0.0, 0.0]]\neps_b = [[1.0, 0.0], [0.0, 0.0]]\n";
    let v = stokes_summary(&stdout(&duality(
        &["stokes"],
        &write_config(&dir, "t.toml", same),
    )));
    assert!(v[2].abs() < 1e-12 && v[3].abs() < 1e-12);

    let incoherent = format!(
        "{MIXED}[modes]\neps_a = [[1.0, 0.0], [0.0, 0.0]]\neps_b = [[0.8, 0.0], [0.6, 0.0]]\n"
    );
    let v = stokes_summary(&stdout(&duality(
        &["stokes", "--angles", "512"],
        &write_config(&dir, "u.toml", &incoherent),
    )));
    assert!(v.iter().all(|x| x.abs() < 1e-12));

    assert_eq!(
        duality(&["stokes"], &write_config(&dir, "v.toml", MIXED))
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        duality(
            &["stokes", "--angles", "16"],
            &write_config(&dir, "w.toml", &incoherent)
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sweep_tables() {
    let dir = TempDir::new().unwrap();
    let mixing: Vec<String> = (0..11).map(|i| format!("{:.1}", i as f64 / 10.0)).collect();
    let body = format!(
        "{MIXED}[sweep]\np_a = 0.5\nmixing = [{}]\n",
        mixing.join(", ")
    );
    let rows = csv_rows(&stdout(&duality(
        &["sweep"],
        &write_config(&dir, "a.toml", &body),
    )));
    assert_eq!(rows[0], ["mixing", "V", "D", "mu", "residual"]);
    assert_eq!(rows.len(), 12);
    for r in &rows[1..] {
        assert!((num(&r[3]) - num(&r[0])).abs() < 1e-12);
    }
    assert_eq!(num(&rows[1][3]), 0.0);
    assert!((num(&rows[11][3]) - 1.0).abs() < 1e-12);

    let one = format!("{MIXED}[sweep]\np_a = 1.0\nmixing = [0.0, 0.5, 1.0]\n");
    for r in &csv_rows(&stdout(&duality(
        &["sweep"],
        &write_config(&dir, "b.toml", &one),
    )))[1..]
    {
        assert_eq!((num(&r[1]), num(&r[2])), (0.0, 1.0));
    }

    let empty = format!("{MIXED}[sweep]\np_a = 0.3\nmixing = []\n");
    let o = duality(&["sweep"], &write_config(&dir, "c.toml", &empty));
    assert!(o.status.success());
    assert_eq!(stdout(&o), "mixing,V,D,mu,residual\n");
}

#[test]
fn csv_uses_lf_only() {
    let dir = TempDir::new().unwrap();
    let o = duality(&["fringes"], &write_config(&dir, "a.toml", COHERENT));
    assert!(!o.stdout.contains(&b'\r'));
}

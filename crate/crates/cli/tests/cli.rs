use std::f64::consts::{E, PI};
use std::process::{Command, Output};

fn ubound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ubound"))
        .args(args)
        .env_remove("UBOUND_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses a CSV body (header skipped, `#` lines ignored) into rows of optional
/// numbers.
fn csv(text: &str) -> Vec<Vec<Option<f64>>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().ok()).collect())
        .collect()
}

fn value_after(text: &str, prefix: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no {prefix:?} in {text}"));
    line[prefix.len()..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn constants_examples() {
    let o = ubound(&["constants", "--b", "1", "--c", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("regime: critical"));
    assert!((value_after(&text, "K = ") - 2.0 / E).abs() < 1e-12);
    assert!(text.contains("K = 0.7357588823"));

    let o = ubound(&["constants", "--b", "2", "--c", "3"]);
    assert!((value_after(&stdout(&o), "K = ") - 0.5).abs() < 1e-12);

    let o = ubound(&["constants", "--b", "0", "--c", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("b > 0"));
}

#[test]
fn sweep_b_approaches_four_over_pi() {
    let o = ubound(&["sweep", "--axis", "b", "--range", "1e-3:1e6:12:log", "--c", "1"]);
    assert!(o.status.success());
    let rows = csv(&stdout(&o));
    assert_eq!(rows.len(), 12);
    let last: Vec<f64> = rows.iter().map(|r| r.last().unwrap().unwrap()).collect();
    assert!((last[11] - 4.0 / PI).abs() < 1e-6);
    assert!(last.windows(2).all(|w| w[1] < w[0]));
    for r in &rows {
        let (closed, oracle) = (r[2].unwrap(), r[3].unwrap());
        assert!((closed - oracle).abs() <= 1e-9);
    }
}

#[test]
fn sweep_c_is_decreasing_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = ubound(&["sweep", "--axis", "c", "--range", "0.01:1000:25:log", "--b", "1", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let rows = csv(&String::from_utf8(ta).unwrap());
    let k: Vec<f64> = rows.iter().map(|r| r[2].unwrap()).collect();
    assert!(k.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let args = ["sweep", "--axis", "c", "--range", "0.1:100:16:log", "--b", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_ubound")).args(args).env("UBOUND_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_ubound")).args(args).env("UBOUND_THREADS", "4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_ubound")).args(args).env("UBOUND_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let o = ubound(&["sweep", "--axis", "c", "--range", "1:2:3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ubound(&["sweep", "--axis", "c", "--range", "2:1:3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ubound(&["construct", "--epsilon", "1", "--length-l", "2", "--modes", "/nonexistent/spec.txt", "--c", "30"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ubound(&["equivalence", "--b", "2", "--c", "3", "--period", "10,5", "--horizon", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.sig");
    let o = ubound(&[
        "construct", "--epsilon", "1", "--length-l", "2", "--modes", "4,16,64", "--c", "23", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((value_after(&text, "threshold c = ") - 512f64.sqrt()).abs() < 1e-12);
    assert!((value_after(&text, "guaranteed lower bound = ") - 0.010_353).abs() < 1e-6);
    assert!(text.contains("sandwich lower <= exact <= upper: holds"));
    let f = ubound::signal::read_signal(&path).unwrap();
    assert_eq!(f.channels(), 3);
    assert!((f.sup_norm() - 1.0).abs() < 1e-15);

    // Below the threshold, and a ratio violation.
    let o = ubound(&["construct", "--epsilon", "1", "--length-l", "2", "--modes", "4,16,64", "--c", "20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sqrt(4Lλ_n/ε)"));
    let o = ubound(&["construct", "--epsilon", "1", "--length-l", "2", "--modes", "4,8", "--c", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(2L/ε)"));

    let o = ubound(&["construct", "--epsilon", "1", "--length-l", "2", "--modes", "geometric:4:4:3", "--c", "23"]);
    assert!(o.status.success());
}

#[test]
fn construct_from_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    std::fs::write(&path, "4 0\n0 16\n").unwrap();
    let o = ubound(&["construct", "--epsilon", "1", "--length-l", "2", "--matrix", path.to_str().unwrap(), "--c", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("n = 2"));
}

#[test]
fn equivalence_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eq.csv");
    let o = ubound(&[
        "equivalence", "--b", "2", "--c", "3", "--period", "5,10,20", "--horizon", "5,10,20", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("overall: PASS"));
    let rows = csv(&std::fs::read_to_string(&path).unwrap());
    let gaps: Vec<f64> = rows.iter().take(3).map(|r| r[4].unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!((rows[2][2].unwrap() - 0.5).abs() < 1e-8);

    let o = ubound(&["equivalence", "--b", "1", "--c", "2", "--period", "40", "--horizon", "40"]);
    let ob_p = stdout(&o).lines().find(|l| l.trim_start().starts_with("40 ")).unwrap().split_whitespace().nth(1).unwrap().parse::<f64>().unwrap();
    assert!((ob_p - 2.0 / E).abs() <= 1e-8);

    let o = ubound(&["equivalence", "--b", "2", "--c", "3", "--period", "5", "--horizon", "5", "--amplitude", "0"]);
    assert!(stdout(&o).contains("ob_g0 = 0.000000000000000"));
}

#[test]
fn laplacian_demo_examples() {
    let o = ubound(&["laplacian-demo", "--dimension", "2", "--modes", "10000", "--range", "10:10000:10:log"]);
    assert!(o.status.success());
    let rows = csv(&stdout(&o));
    let lower: Vec<f64> = rows.iter().map(|r| r[2].unwrap()).collect();
    assert!(lower.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-14)));
    assert!(lower.last().unwrap() > &lower[0]);
    for r in &rows {
        let (lo, exact, up) = (r[2].unwrap(), r[3].unwrap(), r[5].unwrap());
        assert!(lo <= exact && exact <= up);
        if let Some(log) = r[4] {
            assert!(log <= exact);
        }
    }

    let o = ubound(&["laplacian-demo", "--dimension", "1", "--modes", "1000", "--range", "10:10000:4:log"]);
    let rows = csv(&stdout(&o));
    assert!(rows.last().unwrap()[2].unwrap() > rows[0][2].unwrap());

    // One mode: no growth in the guaranteed lower bound.
    let o = ubound(&["laplacian-demo", "--dimension", "2", "--modes", "1", "--range", "10:10000:4:log"]);
    let rows = csv(&stdout(&o));
    assert!(rows.iter().all(|r| (r[2].unwrap() - rows[0][2].unwrap()).abs() < 1e-14));
}

#[test]
fn duality_check_is_seeded() {
    let a = ubound(&["duality-check", "--b", "2", "--c", "0.5", "--seed", "11", "--count", "200"]);
    let b = ubound(&["duality-check", "--b", "2", "--c", "0.5", "--seed", "11", "--count", "200"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("duality: holds"));
    assert_eq!(ubound(&["duality-check", "--b", "2", "--c", "0.5"]).status.code(), Some(2));
}

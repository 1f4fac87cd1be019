use std::path::Path;
use std::process::Command;

use zgv_cli::output::emit_candidates;
use zgv_cli::{emit_results, fmt17, format_matrix_market, load_pencil, parse_material, parse_matrix_market, write_matrix_market, CliError};
use zgv_core::dense::random::MatrixRng;
use zgv_core::refine::{Classification, ZgvPoint};
use zgv_core::waveguide::example21;
use zgv_core::C;

fn zgv(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zgv")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn point(k: f64, omega: f64, class: Classification) -> ZgvPoint<f64> {
    ZgvPoint {
        k,
        omega,
        u: vec![],
        z: vec![],
        residual: 1.25e-13,
        classification: class,
        omega_gap: 0.1,
        lambda: C::new(0.0, k),
        mu: C::new(omega * omega, 0.0),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn pencil_files(dir: &Path) -> [std::path::PathBuf; 4] {
    let p = example21::<f64>();
    let names = ["l0.mtx", "l1.mtx", "l2.mtx", "m.mtx"];
    let mats = [p.l0(), p.l1(), p.l2(), p.m()];
    let mut out = names.map(|n| dir.join(n));
    for (path, a) in out.iter_mut().zip(mats) {
        write_matrix_market(path, a).unwrap();
    }
    out
}

#[test]
fn one_by_one_matrix_market() {
    let a = parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n-2.5\n", "a").unwrap();
    assert_eq!((a.rows(), a.cols()), (1, 1));
    assert_eq!(a[(0, 0)], C::new(-2.5, 0.0));
}

#[test]
fn matrix_market_round_trip_is_bitwise() {
    let mut rng = MatrixRng::new(3);
    let a = rng.real::<f64>(4, 3);
    let b = parse_matrix_market(&format_matrix_market(&a), "rt").unwrap();
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
}

#[test]
fn coordinate_symmetric_and_skew_are_expanded() {
    let sym = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 4\n2 1 3\n";
    let a = parse_matrix_market(sym, "s").unwrap();
    assert_eq!(a[(0, 1)], C::new(3.0, 0.0));
    assert_eq!(a[(1, 0)], C::new(3.0, 0.0));
    assert_eq!(a[(1, 1)], C::new(0.0, 0.0));
    let skew = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1.5\n";
    let b = parse_matrix_market(skew, "k").unwrap();
    assert_eq!(b[(1, 0)], C::new(1.5, 0.0));
    assert_eq!(b[(0, 1)], C::new(-1.5, 0.0));
    let int = "%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 2 7\n";
    assert_eq!(parse_matrix_market(int, "i").unwrap()[(0, 1)], C::new(7.0, 0.0));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad = "%%MatrixMarket matrix array real general\n2 1\n1.0\nabc\n";
    match parse_matrix_market(bad, "bad.mtx") {
        Err(CliError::Parse { file, line, .. }) => {
            assert_eq!(file, "bad.mtx");
            assert_eq!(line, 4);
        }
        other => panic!("{other:?}"),
    }
    let short = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n";
    assert!(matches!(parse_matrix_market(short, "s"), Err(CliError::Parse { .. })));
    assert!(matches!(parse_matrix_market("1 1\n1\n", "nohdr"), Err(CliError::Parse { line: 1, .. })));
}

#[test]
fn complex_entries_with_imaginary_part_are_rejected_by_the_loader() {
    let dir = tempfile::tempdir().unwrap();
    let [l0, l1, l2, _] = pencil_files(dir.path());
    let m = write(dir.path(), "mc.mtx", "%%MatrixMarket matrix array complex general\n3 3\n1 0\n0 0\n0 0\n0 0\n1 0.5\n0 0\n0 0\n0 0\n1 0\n");
    let err = load_pencil([&l0, &l1, &l2, &m].map(|p| p.as_path())).unwrap_err();
    assert!(matches!(err, CliError::NonRealEntries(_)), "{err:?}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn dimension_mismatch_names_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let [l0, l1, l2, _] = pencil_files(dir.path());
    let m = write(dir.path(), "small.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n");
    let err = load_pencil([&l0, &l1, &l2, &m].map(|p| p.as_path())).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, CliError::DimensionMismatch(_)), "{err:?}");
    assert!(msg.contains("small.mtx") && msg.contains("l0.mtx"), "{msg}");
}

#[test]
fn isotropic_and_voigt_materials_agree() {
    let iso = parse_material("rho = 7900\nh = 0.001\nct = 3200\ncl = 5900\n", "iso").unwrap();
    let c66 = 7900.0 * 3200.0f64.powi(2);
    let c11 = 7900.0 * 5900.0f64.powi(2);
    let c12 = c11 - 2.0 * c66;
    let text = format!("rho = 7900\nh = 1e-3\nC11 = {c11}\nC22 = {c11}\nC33 = {c11}\nC12 = {c12}\nC13 = {c12}\nC23 = {c12}\nC44 = {c66}\nC55 = {c66}\nC66 = {c66}\n");
    let voigt = parse_material(&text, "voigt").unwrap();
    for i in 0..6 {
        for j in 0..6 {
            assert!((iso.c[i][j] - voigt.c[i][j]).abs() <= 1e-6 * c11, "{i}{j}");
        }
    }
}

#[test]
fn material_errors() {
    match parse_material("rho = 1\nh = 1\nct = 1\ncl = 2\nnu = 0.3\n", "m.toml") {
        Err(CliError::Parse { line, message, .. }) => {
            assert_eq!(line, 5);
            assert!(message.contains("nu"));
        }
        other => panic!("{other:?}"),
    }
    let missing = parse_material("h = 1\nct = 1\ncl = 2\n", "m").unwrap_err();
    assert!(missing.to_string().contains("rho"));
    // C11 < C12 makes the stiffness indefinite
    let bad = parse_material("rho = 1\nh = 1\nC11 = 1\nC22 = 1\nC33 = 1\nC12 = 2\nC13 = 2\nC23 = 2\nC44 = 1\nC55 = 1\nC66 = 1\n", "m").unwrap_err();
    assert!(matches!(bad, CliError::Core(zgv_core::Error::InvalidMaterial(_))), "{bad:?}");
    assert_eq!(bad.exit_code(), 2);
    assert!(matches!(parse_material("rho = [1\n", "m"), Err(CliError::Parse { .. })));
}

#[test]
fn fmt17_keeps_seventeen_significant_digits() {
    for x in [0.23926082553630293, 1.0642395605257018, 1.25e-13, 34.329590001, -7.0] {
        assert_eq!(fmt17(x).parse::<f64>().unwrap().to_bits(), x.to_bits(), "{}", fmt17(x));
    }
    assert_eq!(fmt17(1.5), "1.5000000000000000");
}

#[test]
fn empty_results_write_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("empty");
    let files = emit_results(&[], None, &prefix).unwrap();
    assert_eq!(files.len(), 1);
    assert_eq!(std::fs::read_to_string(&files[0]).unwrap(), "k,omega,classification,residual,omega_gap\n");
    let cand = emit_candidates(&[], &prefix).unwrap();
    assert_eq!(std::fs::read_to_string(cand).unwrap().lines().count(), 1);
}

#[test]
fn results_are_sorted_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [point(1.06, 0.239, Classification::Zgv), point(0.0, 0.267, Classification::TrivialZgv), point(0.42, 0.35, Classification::Crossing)];
    let a = emit_results(&pts, None, &dir.path().join("a")).unwrap();
    let b = emit_results(&pts, None, &dir.path().join("b")).unwrap();
    let ta = std::fs::read_to_string(&a[0]).unwrap();
    assert_eq!(std::fs::read(&a[0]).unwrap(), std::fs::read(&b[0]).unwrap());
    let classes: Vec<&str> = ta.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(classes, ["trivial_zgv", "crossing", "zgv"]);
}

#[test]
fn exit_codes() {
    assert_eq!(zgv(&[]).0, 2);
    assert_eq!(zgv(&["scan", "--out", "x"]).0, 2);
    assert_eq!(zgv(&["--help"]).0, 0);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    let missing = zgv(&["scan", "--l0", "nope.mtx", "--l1", "nope.mtx", "--l2", "nope.mtx", "--m", "nope.mtx", "--k-min", "0", "--k-max", "1", "--out", out]);
    assert_eq!(missing.0, 2);
    assert!(missing.2.contains("nope.mtx"));
    assert_eq!(zgv(&["scan", "--model", "example21", "--k-min", "2", "--k-max", "1", "--out", out]).0, 2);
    assert_eq!(zgv(&["scan", "--model", "example21", "--delta", "-1", "--out", out]).0, 2);
}

#[test]
fn manifest_records_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let (code, stdout, _) = zgv(&["scan", "--model", "example21", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1 zgv point(s)"), "{stdout}");
    let text = std::fs::read_to_string(dir.path().join("run_manifest.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "scan");
    assert_eq!(v["input"]["model"], "example21");
    assert_eq!(v["config"]["delta"], 1e-2);
    assert_eq!(v["config"]["m"], 8);
    assert!(v["seed"].is_u64() && v["version"].is_string() && v["timestamp_unix"].is_u64());
    assert_eq!(v["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn matrix_files_reproduce_the_built_in_model() {
    let dir = tempfile::tempdir().unwrap();
    let [l0, l1, l2, m] = pencil_files(dir.path());
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let files_prefix = s(&dir.path().join("files"));
    let model_prefix = s(&dir.path().join("model"));
    let (l0, l1, l2, m) = (s(&l0), s(&l1), s(&l2), s(&m));
    let range = ["--k-min", "0.05", "--k-max", "2", "--dk", "0.1"];
    let mut a = vec!["scan", "--l0", &l0, "--l1", &l1, "--l2", &l2, "--m", &m, "--out", &files_prefix];
    a.extend(range);
    let mut b = vec!["scan", "--model", "example21", "--out", &model_prefix];
    b.extend(range);
    assert_eq!(zgv(&a).0, 0);
    assert_eq!(zgv(&b).0, 0);
    let fa = std::fs::read(format!("{files_prefix}_zgv.csv")).unwrap();
    let fb = std::fs::read(format!("{model_prefix}_zgv.csv")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn disperse_oracle_and_refine_commands() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("ex");
    let p = prefix.to_str().unwrap();
    assert_eq!(zgv(&["disperse", "--model", "example21", "--k-min", "0", "--k-max", "2", "--k-steps", "201", "--out", p]).0, 0);
    let disp = std::fs::read_to_string(format!("{p}_dispersion.csv")).unwrap();
    assert!(disp.starts_with("k,branch,omega\n"));
    assert_eq!(disp.lines().count(), 1 + 201 * 3);
    assert_eq!(zgv(&["oracle", "--model", "example21", "--k-min", "0.05", "--k-max", "2", "--out", p]).0, 0);
    let oracle = std::fs::read_to_string(format!("{p}_oracle.csv")).unwrap();
    assert!(oracle.lines().skip(1).any(|l| l.starts_with("1.064")), "{oracle}");
    let (code, stdout, _) = zgv(&["refine", "--model", "example21", "--k0", "1.06", "--omega0", "0.24", "--out", p]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("zgv"), "{stdout}");
}

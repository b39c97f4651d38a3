use fockent::cli::{run_cli, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use fockent::measures::wootters_state;
use fockent::{StateFile, Statistics, C64};

fn run(args: &[&str]) -> fockent::cli::CliOutcome {
    run_cli(std::iter::once("fockent").chain(args.iter().copied()))
}

fn singlet_file(dir: &tempfile::TempDir) -> String {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let psi = wootters_state(Statistics::Fermion, [z, C64::new(h, 0.0), C64::new(-h, 0.0), z]).unwrap();
    let path = dir.path().join("singlet.json");
    std::fs::write(&path, StateFile::from_state(&psi).to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn measure_reports_one_ebit_for_the_singlet() {
    let dir = tempfile::tempdir().unwrap();
    let path = singlet_file(&dir);
    let out = run(&["measure", "--state", &path]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("site entropy B: 1.0000"));
    assert!(out.stdout.contains("eta: 1.0000"));
    assert!(out.stdout.contains("tangle: 1.0000"));

    let json = run(&["--format", "structured", "measure", "--state", &path]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["command"], "measure");
    assert!(v["tolerances"]["rank"].as_f64().unwrap() > 0.0);
    assert!((v["report"]["eta"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn structured_output_is_deterministic() {
    let a = run(&["--format", "structured", "omar"]);
    let b = run(&["--format", "structured", "omar"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn state_info_lists_terms() {
    let dir = tempfile::tempdir().unwrap();
    let path = singlet_file(&dir);
    let out = run(&["state-info", "--state", &path]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("|1001⟩"));
    assert!(out.stdout.contains("particle numbers: [2]"));
}

#[test]
fn missing_or_malformed_state_is_a_domain_error() {
    let out = run(&["state-info", "--state", "/nonexistent/state.json"]);
    assert_eq!(out.code, EXIT_DOMAIN);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"statistics":"fermion","modes":[],"terms":[]}"#).unwrap();
    let out = run(&["measure", "--state", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn perturb_reports_orders() {
    let out = run(&["perturb", "--generator", "hubbard", "--measure", "eta"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("order: 1"));
    let out = run(&["perturb", "--generator", "hopping", "--measure", "eta", "--evolution", "first-order"]);
    assert!(out.stdout.contains("order: 2"));
    assert!(out.stdout.contains("coefficient: 0.5000"));
    let csv = run(&["--format", "csv-series", "perturb", "--generator", "hopping", "--measure", "reduced-matrix"]);
    assert_eq!(csv.stdout.lines().next(), Some("epsilon,value,change"));
    assert_eq!(csv.stdout.lines().count(), 4);
}

#[test]
fn bell_curve_flags_destroyed_points() {
    let out = run(&[
        "--format", "csv-series", "bell-curve", "--kind", "psi-plus", "--grid", "0.99,0.999", "--destroyed-threshold", "0.05",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let rows: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(rows[0], "overlap,eta,prenormalization_norm,destroyed");
    assert!(rows[1].ends_with(",0"));
    let last: Vec<&str> = rows[2].split(',').collect();
    assert_eq!(last[1], "");
    assert_eq!(last[3], "1");

    let grid = run(&["--format", "csv-series", "bell-curve", "--kind", "psi-minus", "--grid", "0:0.95:20"]);
    assert_eq!(grid.stdout.lines().count(), 21);
}

#[test]
fn omar_ends_with_best_channel() {
    let out = run(&["omar"]);
    assert_eq!(out.code, EXIT_OK);
    let last = out.stdout.lines().last().unwrap();
    assert!(last.starts_with("best channel: single_qubit_first p = 0.3750"), "{last}");
}

#[test]
fn teleport_modes() {
    let out = run(&["teleport", "--source", "0.6,0.48i,0,0.64"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("average fidelity: 1.0000"));
    let out = run(&["--format", "csv-series", "teleport", "--mode", "coherent", "--statistics", "boson", "--alpha-sq", "1,4"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 3);
    let out = run(&["teleport", "--mode", "coherent"]);
    assert_eq!(out.code, EXIT_DOMAIN);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bell-curve", "--kind", "psi"]).code, EXIT_USAGE);
    assert_eq!(run(&["bell-curve", "--kind", "psi-plus", "--grid", "1,0.5,0.7"]).code, EXIT_USAGE);
    assert_eq!(run(&["bell-curve", "--kind", "psi-plus", "--destroyed-threshold", "-1"]).code, EXIT_USAGE);
    assert_eq!(run(&["teleport", "--source", "1,0"]).code, EXIT_USAGE);
    assert_eq!(run(&["--format", "xml", "omar"]).code, EXIT_USAGE);
}

#[test]
fn overlap_outside_range_is_a_domain_error() {
    let out = run(&["bell-curve", "--kind", "psi-minus", "--grid", "0.5,1.0"]);
    assert_eq!(out.code, EXIT_DOMAIN);
}

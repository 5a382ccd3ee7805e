use std::path::Path;
use std::process::{Command, Output};

use mnl_core::exponents::MixedExponents;
use mnl_core::norms::{lpq_norm, lrs_norm, CoefficientMatrix, QuadratureSpec};
use mnl_core::random::{gaussian_matrix, rng_for};
use mnl_core::trigsum::{eval_sum, EvalPlan};

fn mnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mnl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_at_parseval_point() {
    let o = mnl(&[
        "bound", "--M", "4", "--N", "4", "--p", "2", "--q", "2", "--r", "2", "--s", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(value(&text, "theta"), 0.5);
    assert_eq!(value(&text, "upper"), 1.0);
}

#[test]
fn reciprocal_and_lebesgue_flags_agree() {
    let a = mnl(&[
        "bound", "--M", "3", "--N", "5", "--p", "inf", "--q", "4", "--r", "1", "--s", "2",
    ]);
    let b = mnl(&[
        "bound", "--M", "3", "--N", "5", "--alpha", "0", "--beta", "0.25", "--gamma", "1",
        "--delta", "0.5",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn validation_errors_exit_one() {
    let cases: [&[&str]; 5] = [
        &[
            "bound", "--M", "4", "--N", "4", "--p", "0.5", "--q", "2", "--r", "2", "--s", "2",
        ],
        &[
            "bound", "--M", "4", "--N", "4", "--p", "2", "--q", "2", "--r", "2",
        ],
        &[
            "bound", "--M", "4", "--N", "4", "--p", "2", "--alpha", "0.5", "--q", "2", "--r", "2",
            "--s", "2",
        ],
        &["frobnicate"],
        &[
            "norm",
            "--matrix",
            "/nonexistent/matrix.json",
            "--p",
            "2",
            "--q",
            "2",
            "--r",
            "2",
            "--s",
            "2",
        ],
    ];
    for args in cases {
        assert_eq!(mnl(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(mnl(&["--help"]).status.code(), Some(0));
    assert_eq!(mnl(&["--version"]).status.code(), Some(0));
}

#[test]
fn invalid_thread_cap_is_a_validation_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_mnl"))
        .args([
            "bound", "--M", "2", "--N", "2", "--p", "2", "--q", "2", "--r", "2", "--s", "2",
        ])
        .env("MNL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn chirp_check_reports_invariant_breach() {
    let o = mnl(&["chirp-check", "--eta", "0.2", "--M-ladder", "1024:4096"]);
    let text = stdout(&o);
    assert!(text.contains("slope="));
    let slope = value(&text, "slope");
    assert_eq!(o.status.code(), Some(if slope > 0.1 { 2 } else { 0 }));
}

#[test]
fn eval_then_norm_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let matrix_path = dir.path().join("a.json");
    let grid_path = dir.path().join("s.json");
    let a = gaussian_matrix(5, 3, &mut rng_for(42, 0));
    a.write(&matrix_path).unwrap();

    let o = mnl(&[
        "eval",
        "--matrix",
        path_str(&matrix_path),
        "--out",
        path_str(&grid_path),
        "--kx",
        "20",
        "--ky",
        "12",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let e = MixedExponents::from_lebesgue(3.0, 1.5, 4.0, 2.0).unwrap();
    let flags = ["--p", "3", "--q", "1.5", "--r", "4", "--s", "2"];

    let mut args = vec!["norm", "--grid", path_str(&grid_path)];
    args.extend(flags);
    let lrs = value(&stdout(&mnl(&args)), "lrs");
    let grid = eval_sum(&a, &EvalPlan::transform(20, 12)).unwrap();
    let expected = lrs_norm(&grid, &e, &QuadratureSpec::default()).value;
    assert!((lrs - expected).abs() <= 1e-12 * expected);

    let mut args = vec!["norm", "--matrix", path_str(&matrix_path)];
    args.extend(flags);
    let lpq = value(&stdout(&mnl(&args)), "lpq");
    let reread = CoefficientMatrix::read(&matrix_path).unwrap();
    assert_eq!(reread, a);
    assert!((lpq - lpq_norm(&a, &e)).abs() <= 1e-12 * lpq);
}

#[test]
fn seeded_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let jsonl = dir.path().join(format!("{name}.jsonl"));
        let o = Command::new(env!("CARGO_BIN_EXE_mnl"))
            .args([
                "sweep",
                "--ladder",
                "2,3",
                "--exponents",
                "2,2,2,2",
                "--exponents",
                "1,inf,2,inf",
                "--seed",
                "11",
                "--restarts",
                "3",
                "--max-iters",
                "40",
                "--csv",
                path_str(&csv),
                "--jsonl",
                path_str(&jsonl),
            ])
            .env("MNL_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        (std::fs::read(csv).unwrap(), std::fs::read(jsonl).unwrap())
    };
    let first = run("a", "1");
    let second = run("b", "4");
    assert_eq!(first, second);

    let csv = String::from_utf8(first.0).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "M,N,alpha,beta,gamma,delta,theta,phi_or_blank,upper,lower,searched,ratio_lower,ratio_searched"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn opnorm_at_parseval_point() {
    let o = mnl(&[
        "opnorm", "--M", "4", "--N", "4", "--p", "2", "--q", "2", "--r", "2", "--s", "2", "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((report["searched"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(report["sandwich_ok"], true);
}

#[test]
fn extremal_reports_follow_schema() {
    for kind in ["chirp", "column", "row", "ones", "unit"] {
        let o = mnl(&[
            "extremal", "--kind", kind, "--M", "8", "--N", "4", "--p", "2", "--q", "1", "--r",
            "inf", "--s", "2",
        ]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        for key in ["kind", "M", "N", "exponents", "lower", "upper", "ratio"] {
            assert!(report.get(key).is_some(), "{kind} lacks {key}");
        }
        assert!(report["lower"].as_f64().unwrap() <= report["upper"].as_f64().unwrap());
    }
}

#[test]
fn unit_index_out_of_range_is_rejected() {
    let o = mnl(&[
        "extremal", "--kind", "unit", "--M", "2", "--N", "2", "--row", "2", "--p", "2", "--q", "2",
        "--r", "2", "--s", "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nonortho_check_small() {
    let o = mnl(&[
        "nonortho-check",
        "--sizes",
        "2,4",
        "--samples",
        "5",
        "--seed",
        "3",
        "--max-growth",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("empirical_constant="));
}

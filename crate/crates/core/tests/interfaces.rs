use mnl_core::extremizers::{verify_dirichlet_lower, DirichletKind, ExtremizerReport};
use mnl_core::opnorm::BoundReport;
use mnl_core::prelude::*;
use proptest::prelude::*;

#[test]
fn matrix_json_layout() {
    let a = CoefficientMatrix::from_fn(2, 3, |m, n| Complex64::new(m as f64, n as f64)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(json["M"], 2);
    assert_eq!(json["N"], 3);
    let entries = json["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert_eq!(entries[1], serde_json::json!([0.0, 1.0]));
    assert_eq!(entries[3], serde_json::json!([1.0, 0.0]));
}

#[test]
fn malformed_matrix_json_is_rejected() {
    assert!(CoefficientMatrix::from_json(r#"{"M":2,"N":2,"entries":[[1,0]]}"#).is_err());
    assert!(CoefficientMatrix::from_json(r#"{"M":1,"N":1}"#).is_err());
}

#[test]
fn grid_json_layout() {
    let g = GridFunction::from_fn(2, 2, |x, y| Complex64::new(x, y)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(json["Kx"], 2);
    assert_eq!(json["Ky"], 2);
    assert_eq!(json["samples"].as_array().unwrap().len(), 4);
}

#[test]
fn extremizer_report_keys() {
    let e = MixedExponents::new(0.0, 0.5, 0.5, 0.5).unwrap();
    let r = verify_dirichlet_lower(DirichletKind::Column, 4, 4, &e, None).unwrap();
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["kind", "M", "N", "exponents", "lower", "upper", "ratio"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert!(json.get("eta").is_none());
    let back: ExtremizerReport = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn bound_report_csv_blank_phi() {
    let e = MixedExponents::new(0.9, 0.1, 0.5, 0.3).unwrap();
    let cfg = SearchConfig {
        restarts: 1,
        max_iters: 5,
        ..SearchConfig::default()
    };
    let r = estimate(2, 2, &e, &cfg).unwrap();
    let rec = r.csv_record();
    assert_eq!(rec.len(), BoundReport::CSV_HEADER.len());
    assert!(r.phi.is_none());
    assert!(rec[7].is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_file_round_trip(
        rows in 1usize..6,
        cols in 1usize..6,
        seed in any::<u64>(),
    ) {
        let a = gaussian_matrix(rows, cols, &mut rng_for(seed, 0));
        let dir = std::env::temp_dir().join(format!("mnl-rt-{seed}-{rows}-{cols}"));
        a.write(&dir).unwrap();
        let b = CoefficientMatrix::read(&dir).unwrap();
        std::fs::remove_file(&dir).ok();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn transform_matches_direct(
        rows in 1usize..7,
        cols in 1usize..7,
        seed in any::<u64>(),
    ) {
        let a = gaussian_matrix(rows, cols, &mut rng_for(seed, 1));
        let (kx, ky) = (2 * rows + 1, 3 * cols);
        let f = eval_sum(&a, &EvalPlan::transform(kx, ky)).unwrap();
        let d = eval_sum(&a, &EvalPlan::direct(kx, ky)).unwrap();
        prop_assert!(mnl_core::trigsum::max_rel_diff(&f, &d) < 1e-12);
    }
}

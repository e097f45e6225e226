use koppelman_cli::{emit_plotdata, run, Check, Relation, Scenario, ScenarioConfig};
use proptest::prelude::*;

#[test]
fn checks_compare_against_stored_tolerances() {
    assert!(Check::below("a", 1e-5, 1e-4).passed);
    assert!(!Check::below("a", 1e-4, 1e-4).passed);
    assert!(!Check::below("a", f64::NAN, 1.0).passed);
    assert!(Check::count("a", 0).passed);
    assert!(!Check::count("a", 1).passed);
    assert!(Check::new("a", 0.3, 0.3, Relation::AtMost).passed);
}

#[test]
fn classify_report_lists_the_gaps() {
    let mut cfg = ScenarioConfig::for_scenario(Scenario::CuspClassify);
    cfg.geometry.kmax = Some(8);
    let r = run(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.data["non_extending"], serde_json::json!([1]));
    assert_eq!(r.data["table"].as_array().unwrap().len(), 9);
}

#[test]
fn moment_report_for_tau() {
    let mut cfg = ScenarioConfig::for_scenario(Scenario::MomentCheck);
    cfg.geometry.phi = Some("tau".into());
    let r = run(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.data["extends"], false);
    assert_eq!(
        r.data["report"]["residues"]["0"],
        serde_json::json!([1.0, 0.0])
    );
}

#[test]
fn canonical_report_excludes_timings() {
    let cfg = ScenarioConfig::for_scenario(Scenario::WeightAudit).with_preset("hefer");
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    assert!(a.meta.timings.contains_key("total"));
    assert!(!a.canonical_json().unwrap().contains("timings"));
    assert!(a.to_json().unwrap().contains("timings"));
}

#[test]
fn solver_timings_move_to_meta() {
    let mut cfg = ScenarioConfig::for_scenario(Scenario::VerifyKoppelman);
    cfg.grid.name = "2x2".into();
    let r = run(&cfg).unwrap();
    assert!(r.meta.timings.contains_key("solve"));
    assert!(!r.canonical_json().unwrap().contains("runtime_s"));
}

#[test]
fn plot_data_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::for_scenario(Scenario::VerifyKoppelman);
    let r = run(&cfg).unwrap();
    assert!(r.passed());
    let path = dir.path().join("grid.csv");
    emit_plotdata(&r, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "re(z),im(z),re(val),im(val),residual");

    let again = dir.path().join("again.csv");
    emit_plotdata(&run(&cfg).unwrap(), &again).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&ScenarioConfig::for_scenario(Scenario::StructureForm)).unwrap();
    assert!(r.plot.is_empty());
    let path = dir.path().join("empty.csv");
    emit_plotdata(&r, &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "re(z),im(z),re(val),im(val),residual\n"
    );
}

#[test]
fn unwritable_path_is_an_io_error() {
    let r = run(&ScenarioConfig::for_scenario(Scenario::StructureForm)).unwrap();
    let err = emit_plotdata(&r, std::path::Path::new("/nonexistent/dir/x.csv")).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn structure_form_radii() {
    let mut cfg = ScenarioConfig::for_scenario(Scenario::StructureForm);
    cfg.geometry.radii = vec![1.5];
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    // the blow-up fit needs two radii
    cfg.geometry.radii = vec![0.5];
    assert_eq!(run(&cfg).unwrap().checks.len(), 1);
    cfg.geometry.radii = vec![0.2, 0.4];
    assert_eq!(run(&cfg).unwrap().checks.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classify_agrees_with_gap_count(r in 2u32..6, s in 3u32..10) {
        prop_assume!(r < s && gcd(r, s) == 1);
        let mut cfg = ScenarioConfig::for_scenario(Scenario::CuspClassify);
        cfg.geometry.r = r;
        cfg.geometry.s = s;
        let report = run(&cfg).unwrap();
        prop_assert!(report.passed());
        // a numerical semigroup ⟨r, s⟩ has (r−1)(s−1)/2 gaps
        let gaps = report.data["non_extending"].as_array().unwrap().len() as u32;
        prop_assert_eq!(gaps, (r - 1) * (s - 1) / 2);
    }

    #[test]
    fn moment_verdict_matches_oracle(k in -4i64..14, a in 0i64..12) {
        let mut cfg = ScenarioConfig::for_scenario(Scenario::MomentCheck);
        cfg.geometry.phi = Some(format!("tau^{k} + 2*tau^{a}"));
        let report = run(&cfg).unwrap();
        prop_assert!(report.passed());
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

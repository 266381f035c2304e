use std::path::PathBuf;

use coxsurf::load::{digest, parse_file};
use coxsurf::schema::SurfaceFile;
use coxsurf::{corpus, parse_surface, parse_surface_str, run, InputError, EXIT_INPUT, EXIT_OK, EXIT_UNDETERMINED};
use coxsurf_core::num::{fmt_rat, parse_rat, rat};
use coxsurf_core::DivisorClass;
use proptest::prelude::*;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coxsurf-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn dp6_expands_to_rank_four() {
    let s = parse_surface("dp6.json").unwrap();
    assert_eq!(s.data.lattice.rank(), 4);
    assert_eq!(s.data.negative_curves.len(), 6);
}

#[test]
fn quartic_blowup_lattice() {
    let s = parse_surface("quartic_blowup.json").unwrap();
    assert_eq!(s.data.lattice.gram(), &[vec![4, 0], vec![0, -1]]);
    assert_eq!(s.data.lattice.canonical(), DivisorClass::from_ints(&[0, 1]));
}

#[test]
fn e8_fibration_rank_sum() {
    let s = parse_surface("e8_extremal.json").unwrap();
    assert_eq!(s.data.fibration.as_ref().unwrap().rank_sum(), 8);
}

#[test]
fn every_corpus_file_loads() {
    for name in corpus::names() {
        let s = parse_surface(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!s.digest.is_empty());
    }
}

#[test]
fn round_trip_is_idempotent() {
    for name in corpus::names() {
        let text = corpus::get(name).unwrap();
        let file = parse_file(text, name).unwrap();
        let once = file.canonical_json();
        let again: SurfaceFile = parse_file(&once, name).unwrap();
        assert_eq!(again, file, "{name}");
        assert_eq!(again.canonical_json(), once, "{name}");
        assert_eq!(digest(&again), digest(&file), "{name}");
        let pretty = serde_json::to_string_pretty(&file).unwrap();
        assert_eq!(digest(&parse_file(&pretty, name).unwrap()), digest(&file), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    for name in ["dp4", "e8_extremal", "tower_depth2", "unknown-kappa"] {
        let a = run(&["--json", "classify", name]);
        let b = run(&["--json", "classify", name]);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
    let (_, v) = json(&["info", "dp6"]);
    assert_eq!(v["input_digest"].as_str().unwrap(), parse_surface("dp6").unwrap().digest);
}

proptest! {
    #[test]
    fn rationals_round_trip(p in -10_000i64..=10_000, q in 1i64..=10_000) {
        let x = rat(p, q);
        let s = fmt_rat(&x);
        prop_assert_eq!(parse_rat(&s), Some(x));
    }
}

#[test]
fn report_fractions_parse_back() {
    let (code, v) = json(&["zariski", "tower_depth2", "--class=-K"]);
    assert_eq!(code, EXIT_OK);
    let coeffs: Vec<_> = v["results"]["negative_support"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| parse_rat(e["coefficient"].as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(coeffs, [rat(1, 3), rat(1, 4)]);
}

#[test]
fn schema_errors_are_line_anchored() {
    let text = "{\n  \"name\": \"x\",\n  \"preset\": {\"kind\": \"plane_blowup\", \"points\": 2},\n  \"bogus\": 1\n}\n";
    match parse_surface_str(text, "mem.json") {
        Err(InputError::Syntax { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    let p = scratch("bad.json", text);
    let out = run(&["classify", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains(&format!("{}:4:", p.display())), "{}", out.stderr);
}

#[test]
fn invariant_failures_exit_one() {
    let asymmetric = r#"{"name": "a", "gram": [[1, 2], [0, -1]], "canonical": [-3, 1]}"#;
    let elliptic = r#"{"name": "e", "gram": [[-1, 0], [0, -1]], "canonical": [1, 1]}"#;
    let both = r#"{"name": "b", "preset": {"kind": "hirzebruch", "n": 1}, "gram": [[1]], "canonical": [-3]}"#;
    let short = r#"{"name": "s", "preset": {"kind": "plane_blowup", "points": 2}, "negative_curves": [{"class": [0, 1]}]}"#;
    let fiber = r#"{"name": "f", "preset": {"kind": "plane_blowup", "points": 9}, "fibration": {"m": 1, "fibers": ["E8"]}}"#;
    for (i, text) in [asymmetric, elliptic, both, short, fiber].iter().enumerate() {
        assert!(matches!(parse_surface_str(text, "mem"), Err(InputError::Invalid { .. })), "case {i}");
        let p = scratch(&format!("invalid{i}.json"), text);
        assert_eq!(run(&["info", p.to_str().unwrap()]).code, EXIT_INPUT, "case {i}");
    }
    assert_eq!(run(&["info", "no-such-file.json"]).code, EXIT_INPUT);
}

#[test]
fn relative_model_resolves_next_to_the_file() {
    let p = scratch("model.json", corpus::get("four_a2_extremal").unwrap());
    let tower = r#"{"name": "t", "preset": {"kind": "tower", "depth": 1}, "relative_minimal_model": "model.json"}"#;
    let t = scratch("tower.json", tower);
    let s = parse_surface(t.to_str().unwrap()).unwrap();
    assert_eq!(s.data.relative_minimal_model.as_ref().unwrap().name, "four_a2_extremal");
    assert!(p.exists());
}

#[test]
fn classify_quartic_with_certificate() {
    let (code, v) = json(&["classify", "quartic_blowup.json", "--flag", "restriction-nontorsion"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["results"]["cox_fg"], "false");
    assert_eq!(v["results"]["eff_polyhedral"], "true");
    let (code, v) = json(&["classify", "quartic_blowup.json"]);
    assert_eq!(code, EXIT_UNDETERMINED);
    assert_eq!(v["results"]["cox_fg"], "undetermined");
}

#[test]
fn tower_table_ends_at_mu_three() {
    let (code, v) = json(&["tower", "--steps", "3"]);
    assert_eq!(code, EXIT_OK);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["mu"], "253/84");
    let text = run(&["tower", "--steps", "3"]).stdout;
    assert!(text.trim_end().lines().last().unwrap().contains("253/84"), "{text}");
}

#[test]
fn classify_unknown_kappa_is_undetermined() {
    let (code, v) = json(&["classify", "unknown-kappa.json"]);
    assert_eq!(code, EXIT_UNDETERMINED);
    assert_eq!(v["results"]["kappa_anti"], "0|1");
    assert_eq!(v["exit_code"], EXIT_UNDETERMINED);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(&["classify", "dp6", "--no-such-option"]).code, EXIT_INPUT);
    assert_eq!(run(&["classify", "dp6", "--flag", "bogus"]).code, EXIT_INPUT);
    assert_eq!(run(&["zariski", "dp6", "--class", "1,2"]).code, EXIT_INPUT);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn every_subcommand_runs_on_the_corpus() {
    for args in [
        vec!["info", "dp5"],
        vec!["negcurves", "dp5", "--bound", "3"],
        vec!["dual", "quartic_blowup"],
        vec!["rays", "f2"],
        vec!["zariski", "dp7", "--class=-K"],
        vec!["tower", "--steps", "5", "--variant", "node"],
        vec!["classify", "e8_extremal"],
        vec!["check-effc", "dp7", "--bound", "3"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
        let (code, v) = json(&args);
        assert_eq!(code, EXIT_OK);
        assert_eq!(v["exit_code"], EXIT_OK, "{args:?}");
    }
}

const FLAGS: [&str; 8] = [
    "k-trivial",
    "k3-or-enriques",
    "aut-finite",
    "anticanonical-nef",
    "minimal",
    "general-position",
    "anticanonical-rigid",
    "restriction-nontorsion",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exit_codes_follow_the_verdict(
        file in proptest::sample::select(vec!["p2", "dp5", "cubic_pencil", "quartic_blowup", "unknown-kappa", "four_a2_extremal", "k3_quartic"]),
        mask in 0u8..=255,
    ) {
        let mut args = vec!["--json", "classify", file];
        for (i, f) in FLAGS.iter().enumerate() {
            if mask & (1 << i) != 0 {
                args.extend(["--flag", f]);
            }
        }
        let out = run(&args);
        match out.code {
            EXIT_INPUT => prop_assert!(!out.stderr.is_empty()),
            code => {
                let v: Value = serde_json::from_str(&out.stdout).unwrap();
                let undetermined = v["results"]["cox_fg"] == "undetermined" || v["results"]["eff_polyhedral"] == "undetermined";
                prop_assert_eq!(code, if undetermined { EXIT_UNDETERMINED } else { EXIT_OK });
                prop_assert_eq!(&v["exit_code"], &Value::from(code));
            }
        }
    }
}

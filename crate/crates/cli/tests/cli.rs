use incompat_cli::{monte_carlo_estimate, run};
use incompat_core::catalog::{build_urn_example, save_system, build_card_example};
use incompat_core::compat::CriterionReport;
use incompat_core::measure::parse_events;
use incompat_core::quantum::ExperimentReport;
use incompat_core::rational::ratio;
use incompat_core::Error;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("incompat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn analyze_card_pair() {
    let o = cli(&["analyze", "--builtin", "card", "--pairs", "Face:King,Suit:Spades"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let line = o.out.lines().find(|l| l.contains("(3) order exchange")).unwrap();
    assert!(line.contains("7/24") && line.contains("1/4") && line.contains("fails"), "{line}");
}

#[test]
fn prob_grue_dotted() {
    let o = cli(&[
        "prob",
        "--builtin",
        "urn",
        "--prep",
        "Pattern:Plain",
        "--seq",
        "ColorBlind:Grue,Pattern:Dotted",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(o.out, "1/6\n");
}

#[test]
fn help_exits_zero() {
    let o = cli(&["analyze", "--help"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("Usage"));
    assert!(o.err.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["analyze"],
        vec!["analyze", "--builtin", "nope"],
        vec!["frobnicate"],
        vec!["analyze", "--builtin", "card", "--bogus"],
        vec!["analyze", "--system", "/definitely/not/here.json"],
        vec!["analyze", "--builtin", "card", "--pairs", "Face:King"],
        vec!["simulate", "--builtin", "urn", "--seq", "Color:Green"],
        vec!["search", "--seed", "1", "--vars", "A2"],
        vec!["search", "--seed", "1", "--trials", "0"],
        vec!["quantum", "--seed", "1", "--dims", "x"],
    ] {
        let o = cli(&args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.out);
        assert!(!o.err.is_empty());
    }
}

#[test]
fn validation_errors_exit_three() {
    let dir = std::env::temp_dir().join(format!("incompat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"dynamics": "urn", "variables": [], "colour": 1}"#).unwrap();
    let o = cli(&["analyze", "--system", bad.to_str().unwrap()]);
    assert_eq!(o.code, 3, "{}", o.err);

    let o = cli(&["prob", "--builtin", "urn", "--seq", "Colour:Green"]);
    assert_eq!(o.code, 3);
    let o = cli(&["prob", "--builtin", "urn", "--prep", "Color:Green,Color:Blue", "--seq", "Color:Green"]);
    assert_eq!(o.code, 3);
    assert!(o.err.contains("probability zero"));
}

#[test]
fn assert_compatible_exit_codes() {
    assert_eq!(cli(&["analyze", "--builtin", "card", "--assert-compatible"]).code, 1);
    assert_eq!(cli(&["analyze", "--builtin", "deck-discard", "--assert-compatible"]).code, 0);
    assert_eq!(
        cli(&["analyze", "--builtin", "urn", "--pairs", "Color:Yellow,ColorBlind:Yellow", "--assert-compatible"]).code,
        0
    );
}

#[test]
fn system_file_matches_builtin() {
    let dir = std::env::temp_dir().join(format!("incompat-cli-sys-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("card.json");
    std::fs::write(&path, save_system(&build_card_example())).unwrap();
    let from_file = cli(&["analyze", "--system", path.to_str().unwrap(), "--json"]);
    let builtin = cli(&["analyze", "--builtin", "card", "--json"]);
    let a: serde_json::Value = serde_json::from_str(&from_file.out).unwrap();
    let b: serde_json::Value = serde_json::from_str(&builtin.out).unwrap();
    assert_eq!(a["pairs"], b["pairs"]);
    assert_eq!(a["sharpness"], b["sharpness"]);
}

#[test]
fn analyze_json_round_trips_reports() {
    let o = cli(&["analyze", "--builtin", "urn", "--json"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    let pairs = v["pairs"].as_array().unwrap();
    assert!(!pairs.is_empty());
    for pair in pairs {
        for r in pair["reports"].as_array().unwrap() {
            let parsed: CriterionReport = serde_json::from_value(r.clone()).unwrap();
            assert_eq!(&serde_json::to_value(&parsed).unwrap(), r);
        }
    }
    assert_eq!(v["all_order_exchange_hold"], false);
}

#[test]
fn quantum_json_round_trips() {
    let o = cli(&["quantum", "--dims", "2,3", "--trials", "6", "--rho-samples", "5", "--seed", "3", "--json"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let report: ExperimentReport = serde_json::from_str(&o.out).unwrap();
    assert_eq!(report.trials.len(), 6);
    assert!(report.perfect());
    let text = cli(&["quantum", "--dims", "2,3", "--trials", "6", "--rho-samples", "5", "--seed", "3"]);
    assert!(text.out.contains("no disagreements"));
}

#[test]
fn quantum_tolerance_flag() {
    let o = cli(&["quantum", "--dims", "2", "--trials", "2", "--rho-samples", "1", "--seed", "1", "--tolerance", "1e-7"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("tolerance: 1.00000e-7"), "{}", o.out);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["analyze", "--builtin", "urn"],
        vec!["search", "--trials", "20", "--seed", "9", "--json"],
        vec!["quantum", "--trials", "4", "--rho-samples", "3", "--seed", "2"],
        vec!["simulate", "--builtin", "card", "--seq", "Face:King,Suit:Spades", "--trials", "2000", "--seed", "4"],
    ] {
        let a = cli(&args);
        let b = cli(&args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.err);
        assert_eq!(a.out, b.out);
    }
}

#[test]
fn interfere_defaults_to_block() {
    let o = cli(&[
        "interfere",
        "--builtin",
        "urn",
        "--prep",
        "Pattern:Plain",
        "--coarse",
        "ColorBlind:Grue",
        "--follow",
        "Pattern:Dotted",
        "--json",
    ]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["deficit"]["num"], "1");
    assert_eq!(v["deficit"]["den"], "18");
    assert_eq!(v["fine"].as_array().unwrap().len(), 2);

    let bad = cli(&["interfere", "--builtin", "urn", "--coarse", "ColorBlind:Grue", "--fine", "Color:Green"]);
    assert_eq!(bad.code, 3);
}

#[test]
fn search_text_summary() {
    let o = cli(&["search", "--configs", "2", "--vars", "A:2,B:2", "--trials", "5", "--seed", "11"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.starts_with("trials: 5"));
}

#[test]
fn monte_carlo_certain_event() {
    let sys = build_urn_example(true);
    let prep = parse_events("Color:Green").unwrap();
    let seq = parse_events("ColorBlind:Grue").unwrap();
    let est = monte_carlo_estimate(&sys, &prep, &seq, 500, 3).unwrap();
    assert_eq!(est.exact, ratio(1, 1));
    assert_eq!(est.hits, 500);
    assert!(est.within_bound);
}

#[test]
fn monte_carlo_errors_and_determinism() {
    let sys = build_urn_example(true);
    let seq = parse_events("Pattern:Dotted").unwrap();
    let impossible = parse_events("Color:Yellow,Pattern:Striped").unwrap();
    assert_eq!(monte_carlo_estimate(&sys, &impossible, &seq, 10, 1).unwrap_err(), Error::ZeroCondition);
    assert!(matches!(monte_carlo_estimate(&sys, &[], &seq, 0, 1), Err(Error::InvalidArgument(_))));
    let a = monte_carlo_estimate(&sys, &[], &seq, 3000, 42).unwrap();
    let b = monte_carlo_estimate(&sys, &[], &seq, 3000, 42).unwrap();
    assert_eq!(a.hits, b.hits);
    assert!(a.within_bound);
}

#[test]
fn monte_carlo_deck_discard_with_exhaustion() {
    // Discard-everything deck: three Kings in a row from four cards is impossible.
    let sys = incompat_core::catalog::build_deck(incompat_core::catalog::DeckRule::AlwaysDiscard);
    let seq = parse_events("Face:King,Face:King,Face:King").unwrap();
    let est = monte_carlo_estimate(&sys, &[], &seq, 1000, 5).unwrap();
    assert_eq!(est.exact, ratio(0, 1));
    assert_eq!(est.hits, 0);
    let seq = parse_events("Face:King,Suit:Spades,Face:Queen").unwrap();
    let est = monte_carlo_estimate(&sys, &[], &seq, 20_000, 6).unwrap();
    assert!(est.within_bound, "{est:?}");
}

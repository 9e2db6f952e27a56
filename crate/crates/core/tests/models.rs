use std::path::PathBuf;

use sspa_core::ctmc::{build_generator, numeric_generator, solve_invariant};
use sspa_core::prodform::{grcat_solve, verify_against_joint, SolverConfig, Status, SystemSpec};
use sspa_core::semantics::{
    is_closed, is_well_formed, process_transitions, validate_cooperation, Lts, Process, WellFormedMode,
};
use sspa_core::syntax::{desugar, parse_model, Label, Model, Term};

fn load(name: &str) -> Model {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    desugar(&parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}")))
}

#[test]
fn every_model_parses() {
    for name in [
        "fig1.sspa",
        "biological.sspa",
        "biological_text_trigger.sspa",
        "biological_spoiled.sspa",
        "associativity.sspa",
        "generator.sspa",
        "independent.sspa",
    ] {
        load(name);
    }
}

#[test]
fn fig1_shapes() {
    let env = load("fig1.sspa");
    let open = Lts::explore(&Term::ident("A0"), &env, 100).unwrap();
    assert_eq!(open.len(), 4);
    assert_eq!(open.transition_count(), 4);
    let passive = (0..4)
        .flat_map(|i| open.edges(i))
        .filter(|e| e.rate.is_passive())
        .count();
    assert_eq!(passive, 2);
    assert!(!is_closed(&Term::ident("A0"), &env));

    let closed = Lts::explore(&Term::ident("Z"), &env, 100).unwrap();
    assert_eq!(closed.len(), 4);
    assert_eq!(closed.transition_count(), 4);
    assert!((0..4).flat_map(|i| closed.edges(i)).all(|e| !e.rate.is_passive()));
    assert!(is_closed(&Term::ident("Z"), &env));
}

#[test]
fn biological_components_are_well_formed() {
    let env = load("biological.sspa");
    for c in ["E0", "C0", "T0"] {
        let wf = is_well_formed(&Term::ident(c), &env, WellFormedMode::Strict).unwrap();
        assert!(wf.is_well_formed(), "{c}: {:?}", wf.violations);
    }
    let Process::Coop { coop, parts } = Process::named("S", &env).unwrap() else {
        panic!("S is a system")
    };
    let report = validate_cooperation(&coop, &parts, &env);
    assert!(report.is_ok() && report.warnings.is_empty());
}

#[test]
fn text_trigger_needs_lenient_mode() {
    let env = load("biological_text_trigger.sspa");
    let t0 = Term::ident("T0");
    assert!(!is_well_formed(&t0, &env, WellFormedMode::Strict)
        .unwrap()
        .is_well_formed());
    assert!(is_well_formed(&t0, &env, WellFormedMode::Lenient)
        .unwrap()
        .is_well_formed());
}

#[test]
fn biological_measures() {
    let env = load("biological.sspa");
    let e = Lts::explore(&Term::ident("E0"), &env, 10).unwrap();
    let q = numeric_generator::<f64>(&build_generator(&e)).unwrap();
    let pi = solve_invariant(&q, true).unwrap().measure.values;
    assert!((pi[0] - 2.0 / 3.0).abs() < 1e-15 && (pi[1] - 1.0 / 3.0).abs() < 1e-15);

    let c = Lts::explore(&Term::ident("C0"), &env, 10).unwrap();
    assert_eq!(c.state_names(), vec!["C0", "C1", "C2", "C3"]);
}

#[test]
fn biological_solve_and_oracle() {
    let env = load("biological.sspa");
    let sys = SystemSpec::from_model("S", &env).unwrap();
    let config = SolverConfig::default();
    let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
    assert_eq!(sol.status, Status::Satisfied);
    let ka = sol.kappas[&Label::new("a")];
    assert!((ka - 2.0).abs() / 2.0 < 1e-10, "kappa_a = {ka}");
    let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
    assert_eq!(oracle.states, 16);
    assert!(oracle.gap_abs.unwrap() < 1e-9);
}

#[test]
fn spoiled_model_is_violated() {
    let env = load("biological_spoiled.sspa");
    let sys = SystemSpec::from_model("S", &env).unwrap();
    let config = SolverConfig::default();
    let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
    assert_eq!(sol.status, Status::Violated);
    let spread = sol.reports.iter().find(|r| r.label.as_str() == "a").unwrap();
    assert_eq!(spread.rates[0], 0.0);
    assert!(spread.rates[1] > 0.0);
    let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
    assert!(oracle.gap_abs.unwrap() > 1e-3);
}

#[test]
fn stuck_cooperation_has_no_moves() {
    let env = load("associativity.sspa");
    let inner = Process::named("Inner", &env).unwrap();
    assert!(process_transitions(&inner, &env).unwrap().is_empty());
    let pair = Process::named("Pair", &env).unwrap();
    assert_eq!(process_transitions(&pair, &env).unwrap().len(), 1);
}

#[test]
fn independent_system() {
    let env = load("independent.sspa");
    let sys = SystemSpec::from_model("Both", &env).unwrap();
    let config = SolverConfig::default();
    let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
    assert_eq!(sol.status, Status::Satisfied);
    let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
    assert!(oracle.gap_abs.unwrap() < 1e-12);
}

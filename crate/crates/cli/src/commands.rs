use std::fmt::Write as _;
use std::path::Path;

use petgraph::dot::{Config, Dot};
use petgraph::graph::DiGraph;
use serde_json::{Map, Value};
use sspa_core::prodform::{
    grcat_solve, verify_against_joint, OracleReport, ProductFormSolution, SolverConfig, Status, SystemSpec,
};
use sspa_core::semantics::{
    is_closed, is_well_formed_with_budget, strong_bisimilar_across, validate_cooperation, LabelSet, Lts, Process,
};
use sspa_core::syntax::{desugar, desugar_term, parse_model, parse_term, Model, Term};
use sspa_core::Error;

use crate::json::{self, num, nums, strings, text_num};
use crate::{error_code, exit, Format, Mode, Outcome};

/// Reads, parses and desugars a model file.
pub fn load_model(path: &Path) -> Result<Model, Outcome> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Outcome::error(exit::INPUT, format!("{}: {e}", path.display())))?;
    let model = parse_model(&text).map_err(|e| Outcome::error(error_code(&e), format!("{}:{e}", path.display())))?;
    Ok(desugar(&model))
}

fn fail(e: &Error) -> Outcome {
    Outcome::error(error_code(e), format!("error: {e}"))
}

fn set_text(set: &LabelSet) -> String {
    let names: Vec<&str> = set.iter().map(|l| l.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Equations written by the user; desugaring adds names containing `#`.
fn user_equations(env: &Model) -> impl Iterator<Item = &String> {
    env.equations.keys().filter(|n| !n.contains('#'))
}

pub fn cmd_check(file: &Path, mode: Mode, format: Format, budget: usize) -> Outcome {
    let env = match load_model(file) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let mut ok = true;
    let mut text = String::new();
    let mut processes = Vec::new();
    for name in user_equations(&env) {
        let term = Term::ident(name.as_str());
        let wf = match is_well_formed_with_budget(&term, &env, mode.into(), budget) {
            Ok(wf) => wf,
            Err(e) => return fail(&e),
        };
        let closed = is_closed(&term, &env);
        ok &= wf.is_well_formed();
        let violations: Vec<String> = wf.violations.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            text,
            "{name}: active {} passive {} unique {} closed {} well-formed {}",
            set_text(&wf.labels.active),
            set_text(&wf.labels.passive),
            set_text(&wf.labels.unique_passive),
            yes_no(closed),
            yes_no(wf.is_well_formed())
        );
        for v in &violations {
            let _ = writeln!(text, "  {v}");
        }
        let mut p = Map::new();
        p.insert("name".into(), Value::from(name.as_str()));
        p.insert("active".into(), strings(&wf.labels.active));
        p.insert("passive".into(), strings(&wf.labels.passive));
        p.insert("unique_passive".into(), strings(&wf.labels.unique_passive));
        p.insert("closed".into(), Value::from(closed));
        p.insert("well_formed".into(), Value::from(wf.is_well_formed()));
        p.insert("violations".into(), strings(&violations));
        processes.push(Value::Object(p));
    }

    let mut systems = Vec::new();
    for (name, decl) in &env.systems {
        let parts = match decl
            .components
            .iter()
            .map(|c| Process::named(c, &env))
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let report = validate_cooperation(&decl.coop, &parts, &env);
        ok &= report.is_ok();
        let clashes: Vec<String> = report
            .clashes
            .iter()
            .map(|c| {
                format!(
                    "`{}` and `{}` are both {} on `{}`",
                    decl.components[c.first], decl.components[c.second], c.role, c.label
                )
            })
            .collect();
        let warnings: Vec<String> = report.warnings.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            text,
            "system {name} = coop {} ({}): {}",
            set_text(&decl.coop),
            decl.components.join(", "),
            if report.is_ok() { "valid" } else { "invalid" }
        );
        for c in &clashes {
            let _ = writeln!(text, "  clash: {c}");
        }
        for w in &warnings {
            let _ = writeln!(text, "  warning: {w}");
        }
        let mut s = Map::new();
        s.insert("name".into(), Value::from(name.as_str()));
        s.insert("coop".into(), strings(&decl.coop));
        s.insert("components".into(), strings(&decl.components));
        s.insert("valid".into(), Value::from(report.is_ok()));
        s.insert("clashes".into(), strings(&clashes));
        s.insert("warnings".into(), strings(&warnings));
        systems.push(Value::Object(s));
    }

    let code = if ok { exit::OK } else { exit::FAILED };
    match format {
        Format::Text => Outcome::with_code(code, text),
        Format::Json => {
            let mut r = json::report("check");
            r.insert(
                "mode".into(),
                Value::from(match mode {
                    Mode::Strict => "strict",
                    Mode::Lenient => "lenient",
                }),
            );
            r.insert("ok".into(), Value::from(ok));
            r.insert("processes".into(), Value::Array(processes));
            r.insert("systems".into(), Value::Array(systems));
            Outcome::with_code(code, json::render(r))
        }
    }
}

fn collect_idents<'a>(t: &'a Term, out: &mut Vec<&'a str>) {
    match t {
        Term::Nil => {}
        Term::Ident(n) => out.push(n),
        Term::Choice(bs) => bs.iter().for_each(|p| collect_idents(&p.cont, out)),
        Term::Closure(body, ..) => collect_idents(body, out),
    }
}

/// A defined process or system name, or else a term over the model's
/// equations such as `A0[b <- 0.5]`.
fn resolve(env: &mut Model, name: &str) -> Result<Process, Error> {
    if env.equations.contains_key(name) || env.systems.contains_key(name) {
        return Process::named(name, env);
    }
    let term = parse_term(name).map_err(|_| Error::UnknownName(name.to_string()))?;
    let mut idents = Vec::new();
    collect_idents(&term, &mut idents);
    if let Some(missing) = idents.iter().find(|n| !env.equations.contains_key(**n)) {
        return Err(Error::UnknownName(missing.to_string()));
    }
    Ok(Process::Simple(desugar_term(&term, "Arg", env)))
}

fn write_dot(lts: &Lts<Process>, path: &Path) -> std::io::Result<()> {
    let mut g: DiGraph<String, String> = DiGraph::new();
    let nodes: Vec<_> = lts.state_names().into_iter().map(|n| g.add_node(n)).collect();
    for (i, &from) in nodes.iter().enumerate() {
        for e in lts.edges(i) {
            for _ in 0..e.multiplicity {
                g.add_edge(from, nodes[e.target], format!("{},{}", e.label, e.rate));
            }
        }
    }
    let dot = Dot::with_attr_getters(
        &g,
        &[Config::EdgeNoLabel, Config::NodeNoLabel],
        &|_, e| {
            let style = if e.weight().ends_with(",?") {
                ", style=dashed"
            } else {
                ""
            };
            format!("label={:?}{style}", e.weight())
        },
        &|_, (_, name)| format!("label={name:?}"),
    );
    std::fs::write(path, format!("{dot:?}"))
}

pub fn cmd_lts(file: &Path, name: &str, dot: Option<&Path>, format: Format, budget: usize) -> Outcome {
    let mut env = match load_model(file) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let process = match resolve(&mut env, name) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let lts = match Lts::explore(&process, &env, budget) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    if let Some(path) = dot {
        if let Err(e) = write_dot(&lts, path) {
            return Outcome::error(exit::FAILED, format!("{}: {e}", path.display()));
        }
    }
    let names = lts.state_names();
    let count: usize = (0..lts.len()).flat_map(|i| lts.edges(i)).map(|e| e.multiplicity).sum();
    let mut out = match format {
        Format::Text => {
            let mut text = String::new();
            for (i, source) in names.iter().enumerate() {
                for e in lts.edges(i) {
                    for _ in 0..e.multiplicity {
                        let _ = writeln!(text, "{source} --{},{}--> {}", e.label, e.rate, names[e.target]);
                    }
                }
            }
            Outcome::ok(text)
        }
        Format::Json => {
            let mut transitions = Vec::new();
            for i in 0..lts.len() {
                for e in lts.edges(i) {
                    let mut t = Map::new();
                    t.insert("source".into(), Value::from(i));
                    t.insert("label".into(), Value::from(e.label.as_str()));
                    t.insert("rate".into(), e.rate.value().map_or_else(|| Value::from("?"), num));
                    t.insert("target".into(), Value::from(e.target));
                    t.insert("multiplicity".into(), Value::from(e.multiplicity));
                    transitions.push(Value::Object(t));
                }
            }
            let mut r = json::report("lts");
            r.insert("name".into(), Value::from(name));
            r.insert("states".into(), strings(&names));
            r.insert("transitions".into(), Value::Array(transitions));
            Outcome::ok(json::render(r))
        }
    };
    let plural = |n: usize, word: &str| format!("{n} {word}{}", if n == 1 { "" } else { "s" });
    out.stderr = format!("{}, {}\n", plural(lts.len(), "state"), plural(count, "transition"));
    out
}

fn solution_code(status: Status) -> i32 {
    match status {
        Status::Satisfied => exit::OK,
        Status::Violated => exit::VIOLATED,
        Status::NotConverged => exit::NOT_CONVERGED,
    }
}

fn solve_system(
    file: &Path,
    system: &str,
    config: &SolverConfig,
) -> Result<(Model, SystemSpec, ProductFormSolution<f64>), Outcome> {
    let env = load_model(file)?;
    let spec = SystemSpec::from_model(system, &env).map_err(|e| fail(&e))?;
    let sol = grcat_solve::<f64>(&spec, &env, config).map_err(|e| fail(&e))?;
    Ok((env, spec, sol))
}

fn solution_text(sol: &ProductFormSolution<f64>) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "system {}: {} after {} iterations",
        sol.system, sol.status, sol.iterations
    );
    for (label, k) in &sol.kappas {
        let _ = writeln!(t, "kappa {label} = {}", text_num(*k));
    }
    for r in &sol.reports {
        let rates: Vec<String> = r.rates.iter().map(|&x| text_num(x)).collect();
        let _ = writeln!(
            t,
            "reversed {} rates on {}: [{}] spread {}",
            r.label,
            r.component,
            rates.join(", "),
            text_num(r.spread)
        );
    }
    for c in &sol.components {
        let _ = writeln!(t, "component {} closed as {}", c.name, c.closed);
        for (s, &p) in c.states.iter().zip(&c.measure.values) {
            let _ = writeln!(t, "  {s} {}", text_num(p));
        }
    }
    let _ = writeln!(t, "product");
    for (s, &p) in sol.product_state_names().iter().zip(&sol.product.values) {
        let _ = writeln!(t, "  {s} {}", text_num(p));
    }
    for u in &sol.unmatched_passive {
        let _ = writeln!(t, "unmatched passive: {u}");
    }
    for w in &sol.warnings {
        let _ = writeln!(t, "warning: {w}");
    }
    t
}

fn solution_json(command: &str, sol: &ProductFormSolution<f64>) -> Map<String, Value> {
    let mut r = json::report(command);
    r.insert("system".into(), Value::from(sol.system.as_str()));
    r.insert("status".into(), Value::from(sol.status.as_str()));
    let kappas: Map<String, Value> = sol.kappas.iter().map(|(l, &k)| (l.to_string(), num(k))).collect();
    r.insert("kappas".into(), Value::Object(kappas));
    let conditions = sol
        .reports
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("component".into(), Value::from(c.component.as_str()));
            m.insert("label".into(), Value::from(c.label.as_str()));
            m.insert("kappa".into(), num(c.kappa));
            m.insert("spread".into(), num(c.spread));
            m.insert("rates".into(), nums(&c.rates));
            Value::Object(m)
        })
        .collect();
    r.insert("conditions".into(), Value::Array(conditions));
    let components = sol
        .components
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), Value::from(c.name.as_str()));
            m.insert("closed".into(), Value::from(c.closed.to_string()));
            m.insert("states".into(), strings(&c.states));
            m.insert("pi".into(), nums(&c.measure.values));
            Value::Object(m)
        })
        .collect();
    r.insert("components".into(), Value::Array(components));
    let mut product = Map::new();
    product.insert("states".into(), strings(sol.product_state_names()));
    product.insert("pi".into(), nums(&sol.product.values));
    r.insert("product".into(), Value::Object(product));
    r.insert("iterations".into(), Value::from(sol.iterations));
    r.insert("residuals".into(), nums(&sol.residuals));
    r.insert("unmatched_passive".into(), strings(&sol.unmatched_passive));
    r.insert("warnings".into(), strings(&sol.warnings));
    r
}

pub fn cmd_solve(file: &Path, system: &str, config: &SolverConfig, format: Format) -> Outcome {
    let (_, _, sol) = match solve_system(file, system, config) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let code = solution_code(sol.status);
    match format {
        Format::Text => Outcome::with_code(code, solution_text(&sol)),
        Format::Json => Outcome::with_code(code, json::render(solution_json("solve", &sol))),
    }
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn oracle_text(o: &OracleReport<f64>, agrees: Option<bool>) -> String {
    let mut t = String::new();
    let show = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), text_num);
    let _ = writeln!(
        t,
        "joint chain: {} states, {} reachable, irreducible {}",
        o.states,
        o.reachable,
        yes_no(o.joint_irreducible)
    );
    let _ = writeln!(
        t,
        "reachable set equals product space: {}",
        yes_no(o.reachable_equals_product)
    );
    let _ = writeln!(t, "gap abs {} rel {}", show(o.gap_abs), show(o.gap_rel));
    let _ = writeln!(t, "null residual {}", text_num(o.null_residual));
    let verdict = match agrees {
        Some(true) => "oracle agrees",
        Some(false) => "oracle DISAGREES",
        None => "no verdict to compare",
    };
    let _ = writeln!(t, "{verdict}");
    t
}

pub fn cmd_verify(file: &Path, system: &str, config: &SolverConfig, format: Format) -> Outcome {
    let (env, spec, sol) = match solve_system(file, system, config) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let oracle = match verify_against_joint(&spec, &sol, &env, config) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let agrees = oracle.agrees_with(sol.status, config.check_tol);
    let code = match (sol.status, agrees) {
        (Status::NotConverged, _) => exit::NOT_CONVERGED,
        (_, Some(true)) => exit::OK,
        (_, Some(false)) => exit::INCONSISTENT,
        // Violated, but the joint chain is reducible so there is no measure
        // to compare with.
        (_, None) => exit::FAILED,
    };
    match format {
        Format::Text => {
            let mut t = solution_text(&sol);
            t.push_str(&oracle_text(&oracle, agrees));
            Outcome::with_code(code, t)
        }
        Format::Json => {
            let mut r = solution_json("verify", &sol);
            let mut o = Map::new();
            o.insert("states".into(), Value::from(oracle.states));
            o.insert("reachable".into(), Value::from(oracle.reachable));
            o.insert(
                "reachable_equals_product".into(),
                Value::from(oracle.reachable_equals_product),
            );
            o.insert("joint_irreducible".into(), Value::from(oracle.joint_irreducible));
            o.insert("gap_abs".into(), opt_num(oracle.gap_abs));
            o.insert("gap_rel".into(), opt_num(oracle.gap_rel));
            o.insert("null_residual".into(), num(oracle.null_residual));
            o.insert("agrees".into(), agrees.map_or(Value::Null, Value::from));
            r.insert("oracle".into(), Value::Object(o));
            Outcome::with_code(code, json::render(r))
        }
    }
}

pub fn cmd_bisim(file: &Path, first: &str, second: &str, witness: bool, format: Format, budget: usize) -> Outcome {
    let mut env = match load_model(file) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let resolved = resolve(&mut env, first).and_then(|a| Ok((a, resolve(&mut env, second)?)));
    let (a, b) = match resolved {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let verdict = match strong_bisimilar_across(&a, &env, &b, &env, budget) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let code = if verdict.bisimilar { exit::OK } else { exit::FAILED };
    match format {
        Format::Text => {
            let sign = if verdict.bisimilar { "≅" } else { "≇" };
            let mut t = format!("{first} {sign} {second}\n");
            if witness {
                for block in &verdict.partition {
                    let _ = writeln!(t, "  {{{}}}", block.join(", "));
                }
            }
            Outcome::with_code(code, t)
        }
        Format::Json => {
            let mut r = json::report("bisim");
            r.insert("first".into(), Value::from(first));
            r.insert("second".into(), Value::from(second));
            r.insert("bisimilar".into(), Value::from(verdict.bisimilar));
            if witness {
                let blocks: Vec<Value> = verdict.partition.iter().map(strings).collect();
                r.insert("partition".into(), Value::Array(blocks));
            }
            Outcome::with_code(code, json::render(r))
        }
    }
}

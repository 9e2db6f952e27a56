use std::collections::BTreeMap;
use std::fmt;

use super::kron::{assemble_product, unflatten};
use crate::ctmc::{
    build_generator, evaluate_generator, solve_invariant_with_budget, GeneratorMatrix, Measure, RateExpr,
    DEFAULT_SOLVE_BUDGET,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semantics::{
    apply_closure_set, is_well_formed_with_budget, validate_cooperation, LabelAnalysis, LabelSet, Lts, Process,
    WellFormedMode, DEFAULT_STATE_BUDGET,
};
use crate::syntax::{Label, Model, Rate, Term};

/// Candidate reversed rate per cooperation label.
pub type KappaAssignment<S> = BTreeMap<Label, S>;

/// A flat cooperation of named simple processes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub name: String,
    pub coop: LabelSet,
    pub components: Vec<String>,
}

impl SystemSpec {
    pub fn new<I, L, C>(name: impl Into<String>, coop: I, components: &[C]) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Label>,
        C: AsRef<str>,
    {
        SystemSpec {
            name: name.into(),
            coop: coop.into_iter().map(Into::into).collect(),
            components: components.iter().map(|c| c.as_ref().to_string()).collect(),
        }
    }

    /// Looks up a declared system. Every component must name a process
    /// equation, not another system.
    pub fn from_model(name: &str, env: &Model) -> Result<Self> {
        let decl = env
            .systems
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        if decl.components.iter().any(|c| env.systems.contains_key(c)) {
            return Err(Error::NestedSystem(name.to_string()));
        }
        Ok(SystemSpec {
            name: name.to_string(),
            coop: decl.coop.clone(),
            components: decl.components.clone(),
        })
    }

    /// The same system with components listed in `order`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        SystemSpec {
            name: self.name.clone(),
            coop: self.coop.clone(),
            components: order.iter().map(|&i| self.components[i].clone()).collect(),
        }
    }

    pub fn process(&self) -> Process {
        Process::Coop {
            coop: self.coop.clone(),
            parts: self.parts(),
        }
    }

    fn parts(&self) -> Vec<Process> {
        self.components
            .iter()
            .map(|c| Process::Simple(Term::ident(c.as_str())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub init_kappa: f64,
    /// Weight of the new estimate in the damped update.
    pub damping: f64,
    /// Relative gap between a kappa and its refit below which iteration stops.
    pub conv_tol: f64,
    /// Relative spread of reversed rates accepted as constant.
    pub check_tol: f64,
    pub max_iter: usize,
    pub mode: WellFormedMode,
    pub state_budget: usize,
    pub solve_budget: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            init_kappa: 1.0,
            damping: 0.5,
            conv_tol: 1e-10,
            check_tol: 1e-8,
            max_iter: 500,
            mode: WellFormedMode::Strict,
            state_budget: DEFAULT_STATE_BUDGET,
            solve_budget: DEFAULT_SOLVE_BUDGET,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.init_kappa) {
            return Err(Error::InvalidConfig(format!(
                "initial kappa must be positive, got {}",
                self.init_kappa
            )));
        }
        if !(positive(self.damping) && self.damping <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if !positive(self.conv_tol) || !positive(self.check_tol) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Violated,
    NotConverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::NotConverged => "not_converged",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-state reversed rates of one cooperation label on its active owner.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport<S> {
    pub component: String,
    pub label: Label,
    pub rates: Vec<S>,
    /// `(max - min) / mean`, or `max - min` when the mean is negligible.
    pub spread: S,
    /// Mean of `rates`.
    pub kappa: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSolution<S> {
    pub name: String,
    /// The component with every passive cooperation label closed.
    pub closed: Term,
    pub states: Vec<String>,
    pub measure: Measure<S>,
    pub residual: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormSolution<S> {
    pub system: String,
    pub status: Status,
    pub kappas: KappaAssignment<S>,
    pub components: Vec<ComponentSolution<S>>,
    /// Kronecker product of the component measures, component 1 outermost.
    pub product: Measure<S>,
    pub reports: Vec<ConditionReport<S>>,
    pub iterations: usize,
    /// Largest relative kappa refit gap, one entry per iteration.
    pub residuals: Vec<S>,
    /// States that do not offer exactly one passive transition on one of
    /// their passive cooperation labels. Pairwise cooperation then blocks or
    /// multiplies the partner's rate, and no product form is certified.
    pub unmatched_passive: Vec<String>,
    pub warnings: Vec<String>,
}

impl<S: Scalar> ProductFormSolution<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.states.len()).collect()
    }

    /// Joint state names in product order, e.g. `(E0, C1, T0)`.
    pub fn product_state_names(&self) -> Vec<String> {
        let dims = self.dims();
        (0..self.product.len())
            .map(|k| {
                let parts: Vec<&str> = unflatten(k, &dims)
                    .iter()
                    .zip(&self.components)
                    .map(|(&i, c)| c.states[i].as_str())
                    .collect();
                format!("({})", parts.join(", "))
            })
            .collect()
    }

    pub fn max_spread(&self) -> S {
        self.reports.iter().fold(S::zero(), |m, r| m.max(r.spread))
    }
}

/// Closes every passive label of `term` with its kappa. All passive labels
/// must lie in `coop` and carry a kappa.
pub fn close_component<S: Scalar>(
    term: &Term,
    coop: &LabelSet,
    kappas: &KappaAssignment<S>,
    env: &Model,
) -> Result<Term> {
    let passive = LabelAnalysis::for_term(env, term).passive(term);
    let mut assignment = BTreeMap::new();
    for label in passive {
        let kappa = match kappas.get(&label) {
            Some(k) if coop.contains(&label) => *k,
            _ => {
                return Err(Error::Unclosable {
                    component: term.to_string(),
                    label,
                })
            }
        };
        let rate = Rate::new(kappa.as_f64())
            .ok_or_else(|| Error::InvalidConfig(format!("kappa for `{label}` must be positive, got {kappa}")))?;
        assignment.insert(label, rate);
    }
    Ok(apply_closure_set(term, &assignment))
}

/// For every state `A` of a closed chain:
/// `sum over A' of q_label(A' -> A) * pi(A') / pi(A)`, self-loops included.
pub fn reversed_rates<S: Scalar>(lts: &Lts<Term>, label: &Label, pi: &[S]) -> Result<Vec<S>> {
    reversed_rates_with(lts, label, pi, &BTreeMap::new()).map_err(|e| match e {
        Error::MissingVariable(l) => Error::OpenTransition(l),
        other => other,
    })
}

/// Reversed rates on an open chain whose passive rates take values from
/// `assignment`.
pub fn reversed_rates_with<S: Scalar>(
    lts: &Lts<Term>,
    label: &Label,
    pi: &[S],
    assignment: &KappaAssignment<S>,
) -> Result<Vec<S>> {
    assert_eq!(pi.len(), lts.len());
    let mut inflow = vec![S::zero(); lts.len()];
    for (from, &weight) in pi.iter().enumerate() {
        for e in lts.edges(from).iter().filter(|e| &e.label == label) {
            let rate = RateExpr::of_transition(&e.label, e.rate, e.multiplicity).evaluate(assignment)?;
            inflow[e.target] = inflow[e.target] + rate * weight;
        }
    }
    inflow
        .into_iter()
        .zip(pi)
        .enumerate()
        .map(|(state, (flow, &p))| {
            if p <= S::zero() {
                Err(Error::ZeroMeasure { state })
            } else {
                Ok(flow / p)
            }
        })
        .collect()
}

fn mean<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |a, &b| a + b) / S::of(v.len() as f64)
}

fn spread<S: Scalar>(v: &[S]) -> S {
    let lo = v.iter().fold(S::infinity(), |m, &x| m.min(x));
    let hi = v.iter().fold(S::neg_infinity(), |m, &x| m.max(x));
    let m = mean(v);
    if m.abs() < S::of(1e-12) {
        hi - lo
    } else {
        (hi - lo) / m.abs()
    }
}

struct Component {
    name: String,
    lts: Lts<Term>,
    generator: GeneratorMatrix,
}

/// Checked components plus, per solvable cooperation label, the index of
/// its active owner.
struct Prepared {
    components: Vec<Component>,
    owners: BTreeMap<Label, usize>,
    unmatched_passive: Vec<String>,
    warnings: Vec<String>,
}

/// Every state must offer exactly one passive transition on each passive
/// label. Strict well-formedness implies this; the lenient rule does not.
fn unmatched_passive(component: &Component, passive: &LabelSet) -> Vec<String> {
    let mut out = Vec::new();
    for label in passive {
        for i in 0..component.lts.len() {
            let n: usize = component
                .lts
                .edges(i)
                .iter()
                .filter(|e| &e.label == label && e.rate.is_passive())
                .map(|e| e.multiplicity)
                .sum();
            if n != 1 {
                out.push(format!(
                    "`{}` state {} offers {n} passive `{label}` transitions",
                    component.name,
                    component.lts.state(i)
                ));
            }
        }
    }
    out
}

fn prepare(system: &SystemSpec, env: &Model, config: &SolverConfig) -> Result<Prepared> {
    config.validate()?;
    if system.components.is_empty() {
        return Err(Error::InvalidCooperation(format!(
            "system `{}` has no components",
            system.name
        )));
    }
    for c in &system.components {
        if env.systems.contains_key(c) {
            return Err(Error::NestedSystem(system.name.clone()));
        }
        if !env.equations.contains_key(c) {
            return Err(Error::UnknownName(c.clone()));
        }
    }

    let mut components = Vec::new();
    let mut labels = Vec::new();
    for name in &system.components {
        let term = Term::ident(name.as_str());
        let wf = is_well_formed_with_budget(&term, env, config.mode, config.state_budget)?;
        if let Some(v) = wf.violations.first() {
            return Err(Error::NotWellFormed {
                component: name.clone(),
                reason: v.to_string(),
            });
        }
        if let Some(label) = wf.labels.passive.iter().find(|l| !system.coop.contains(*l)) {
            return Err(Error::Unclosable {
                component: name.clone(),
                label: label.clone(),
            });
        }
        let lts = Lts::explore(&term, env, config.state_budget)?;
        let generator = build_generator(&lts);
        components.push(Component {
            name: name.clone(),
            lts,
            generator,
        });
        labels.push(wf.labels);
    }

    let parts = system.parts();
    let report = validate_cooperation(&system.coop, &parts, env);
    if let Some(c) = report.clashes.first() {
        return Err(Error::InvalidCooperation(format!(
            "`{}` and `{}` are both {} on `{}`",
            system.components[c.first], system.components[c.second], c.role, c.label
        )));
    }

    let unmatched = components
        .iter()
        .zip(&labels)
        .flat_map(|(c, l)| unmatched_passive(c, &l.passive))
        .collect();

    let mut owners = BTreeMap::new();
    let mut warnings = Vec::new();
    for label in &system.coop {
        let owner = labels.iter().position(|l| l.active.contains(label));
        let partner = labels.iter().position(|l| l.passive.contains(label));
        match (owner, partner) {
            (Some(i), Some(_)) => {
                owners.insert(label.clone(), i);
            }
            (None, Some(k)) => {
                return Err(Error::Unclosable {
                    component: system.components[k].clone(),
                    label: label.clone(),
                })
            }
            (Some(i), None) => {
                return Err(Error::InvalidCooperation(format!(
                    "`{}` is active on `{label}` but no component is passive on it, so those transitions never fire",
                    system.components[i]
                )))
            }
            (None, None) => warnings.push(format!("label `{label}` is not used by any component and is ignored")),
        }
    }
    Ok(Prepared {
        components,
        owners,
        unmatched_passive: unmatched,
        warnings,
    })
}

fn solve_components<S: Scalar>(
    prepared: &Prepared,
    kappas: &KappaAssignment<S>,
    budget: usize,
) -> Result<Vec<(Measure<S>, S)>> {
    prepared
        .components
        .iter()
        .map(|c| {
            let q = evaluate_generator(&c.generator, kappas)?;
            let s = solve_invariant_with_budget(&q, true, budget)?;
            Ok((s.measure, s.residual))
        })
        .collect()
}

/// Searches for kappas making every reversed rate of a cooperation label
/// constant on its active owner, then assembles the product form.
///
/// Besides that condition, each state of a component must offer exactly one
/// passive transition on each of its passive labels, otherwise the status is
/// `Violated` whatever the reversed rates.
///
/// Each round closes every component with the current kappas, solves the
/// closed chains, refits each kappa as the mean reversed rate on its owner
/// and moves towards it by `damping`. Iteration stops once every refit lies
/// within `conv_tol` of the current value. The status is `Satisfied` when
/// every reversed-rate vector then has spread below `check_tol`.
pub fn grcat_solve<S: Scalar>(
    system: &SystemSpec,
    env: &Model,
    config: &SolverConfig,
) -> Result<ProductFormSolution<S>> {
    let prepared = prepare(system, env, config)?;
    let theta = S::of(config.damping);
    let conv_tol = S::of(config.conv_tol);

    let mut kappas: KappaAssignment<S> = prepared
        .owners
        .keys()
        .map(|l| (l.clone(), S::of(config.init_kappa)))
        .collect();
    let mut residuals = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut solved;
    loop {
        solved = solve_components(&prepared, &kappas, config.solve_budget)?;
        if prepared.owners.is_empty() {
            converged = true;
            break;
        }
        if iterations == config.max_iter {
            break;
        }
        iterations += 1;
        let mut gap = S::zero();
        let mut next = kappas.clone();
        for (label, &owner) in &prepared.owners {
            let rates = reversed_rates_with(&prepared.components[owner].lts, label, &solved[owner].0.values, &kappas)?;
            let fitted = mean(&rates);
            let current = kappas[label];
            gap = gap.max((fitted - current).abs() / current.abs());
            next.insert(label.clone(), theta * fitted + (S::one() - theta) * current);
        }
        residuals.push(gap);
        if gap < conv_tol {
            converged = true;
            break;
        }
        kappas = next;
    }

    let mut reports = Vec::new();
    for (label, &owner) in &prepared.owners {
        let rates = reversed_rates_with(&prepared.components[owner].lts, label, &solved[owner].0.values, &kappas)?;
        reports.push(ConditionReport {
            component: prepared.components[owner].name.clone(),
            label: label.clone(),
            spread: spread(&rates),
            kappa: mean(&rates),
            rates,
        });
    }
    let status = if !converged {
        Status::NotConverged
    } else if prepared.unmatched_passive.is_empty() && reports.iter().all(|r| r.spread < S::of(config.check_tol)) {
        Status::Satisfied
    } else {
        Status::Violated
    };

    let mut components = Vec::new();
    for (c, (measure, residual)) in prepared.components.iter().zip(solved) {
        components.push(ComponentSolution {
            name: c.name.clone(),
            closed: close_component(&Term::ident(c.name.as_str()), &system.coop, &kappas, env)?,
            states: c.lts.state_names(),
            measure,
            residual,
        });
    }
    let product = assemble_product(&components.iter().map(|c| c.measure.clone()).collect::<Vec<_>>());
    Ok(ProductFormSolution {
        system: system.name.clone(),
        status,
        kappas,
        components,
        product,
        reports,
        iterations,
        residuals,
        unmatched_passive: prepared.unmatched_passive,
        warnings: prepared.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prodform::verify_against_joint;
    use crate::syntax::{desugar, parse_model};

    const BIO: &str = "E0 = (a,1.0).E1 + (a,2.0).E0; E1 = (d,2.0).E0;
        C0 = (a,?).C1;
        C1 = (a,?).C2 + (c,0.5).C0 + (c,2.0).C1;
        C2 = (a,?).C3 + (c,0.5).C0 + (c,2.0).C2;
        C3 = (a,?).C3 + (c,0.5).C0 + (c,2.0).C3;
        T0 = (c,?).T1; T1 = (e,1.0).T0 + (c,?).T1;
        system S = coop {a, c} (E0, C0, T0);";

    fn model(text: &str) -> Model {
        desugar(&parse_model(text).unwrap())
    }

    #[test]
    fn energy_switch_reversed_rates() {
        let env = model(BIO);
        let lts = Lts::explore(&Term::ident("E0"), &env, 10).unwrap();
        let pi = [2.0 / 3.0, 1.0 / 3.0];
        let r: Vec<f64> = reversed_rates(&lts, &Label::new("a"), &pi).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-15 && (r[1] - 2.0).abs() < 1e-15);
        assert_eq!(reversed_rates(&lts, &Label::new("zz"), &pi).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn open_chain_is_refused() {
        let env = model(BIO);
        let lts = Lts::explore(&Term::ident("C0"), &env, 10).unwrap();
        assert!(matches!(
            reversed_rates(&lts, &Label::new("a"), &[0.25; 4]),
            Err(Error::OpenTransition(_))
        ));
    }

    #[test]
    fn closing_components() {
        let env = model(BIO);
        let coop: LabelSet = [Label::new("a"), Label::new("c")].into_iter().collect();
        let k: KappaAssignment<f64> = [(Label::new("a"), 2.0), (Label::new("c"), 2.0)].into_iter().collect();
        assert_eq!(
            close_component(&Term::ident("C0"), &coop, &k, &env)
                .unwrap()
                .to_string(),
            "C0[a <- 2.0]"
        );
        assert_eq!(
            close_component(&Term::ident("T0"), &coop, &k, &env)
                .unwrap()
                .to_string(),
            "T0[c <- 2.0]"
        );
        assert_eq!(
            close_component(&Term::ident("E0"), &coop, &k, &env).unwrap(),
            Term::ident("E0")
        );
        let only_a: LabelSet = [Label::new("a")].into_iter().collect();
        assert!(matches!(
            close_component(&Term::ident("T0"), &only_a, &k, &env),
            Err(Error::Unclosable { .. })
        ));
    }

    #[test]
    fn closure_matches_evaluated_generator() {
        // Syntactic closure and substituting x_a in the open generator give
        // the same chain, state for state.
        let env = model(BIO);
        let open = Lts::explore(&Term::ident("C0"), &env, 10).unwrap();
        let closed = Lts::explore(&Term::ident("C0").closure("a", Rate::new(2.0).unwrap()), &env, 10).unwrap();
        let k: KappaAssignment<f64> = [(Label::new("a"), 2.0)].into_iter().collect();
        let via_eval = evaluate_generator(&build_generator(&open), &k).unwrap();
        let via_closure = crate::ctmc::numeric_generator::<f64>(&build_generator(&closed)).unwrap();
        assert_eq!(via_eval, via_closure);
    }

    #[test]
    fn biological_system() {
        let env = model(BIO);
        let sys = SystemSpec::from_model("S", &env).unwrap();
        let config = SolverConfig::default();
        let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
        assert_eq!(sol.status, Status::Satisfied);
        assert!((sol.kappas[&Label::new("a")] - 2.0).abs() < 2e-10);
        // kappa_c from global balance at C0 of the closed cell
        let pc = &sol.components[1].measure.values;
        let formula = 0.5 * (pc[1] + pc[2] + pc[3]) / pc[0];
        assert!((sol.kappas[&Label::new("c")] - formula).abs() < 1e-9);
        assert_eq!(sol.product.len(), 16);
        let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
        assert!(oracle.gap_abs.unwrap() < 1e-9);
        assert!(oracle.reachable_equals_product);
        assert_eq!(oracle.agrees_with(sol.status, config.check_tol), Some(true));
    }

    #[test]
    fn spoiled_energy_switch() {
        let env = model(&BIO.replace("E0 = (a,1.0).E1 + (a,2.0).E0;", "E0 = (a,1.0).E1;"));
        let sys = SystemSpec::from_model("S", &env).unwrap();
        let config = SolverConfig::default();
        let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
        assert_eq!(sol.status, Status::Violated);
        let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
        assert!(oracle.gap_abs.unwrap() > 1e-3);
        assert_eq!(oracle.agrees_with(sol.status, config.check_tol), Some(true));
    }

    #[test]
    fn single_precision_run() {
        let env = model(BIO);
        let sys = SystemSpec::from_model("S", &env).unwrap();
        let config = SolverConfig {
            conv_tol: 1e-5,
            check_tol: 1e-4,
            ..SolverConfig::default()
        };
        let sol = grcat_solve::<f32>(&sys, &env, &config).unwrap();
        assert_eq!(sol.status, Status::Satisfied);
        assert!((sol.kappas[&Label::new("a")] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn lenient_trigger_is_not_certified() {
        let env = model(&BIO.replace(
            "T0 = (c,?).T1; T1 = (e,1.0).T0 + (c,?).T1;",
            "T0 = (c,?).T1 + (c,?).T0; T1 = (e,1.0).T0;",
        ));
        let sys = SystemSpec::from_model("S", &env).unwrap();
        assert!(matches!(
            grcat_solve::<f64>(&sys, &env, &SolverConfig::default()),
            Err(Error::NotWellFormed { .. })
        ));
        let config = SolverConfig {
            mode: WellFormedMode::Lenient,
            ..SolverConfig::default()
        };
        let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
        assert_eq!(sol.status, Status::Violated);
        assert_eq!(
            sol.unmatched_passive,
            vec![
                "`T0` state T0 offers 2 passive `c` transitions",
                "`T0` state T1 offers 0 passive `c` transitions"
            ]
        );
        let oracle = verify_against_joint(&sys, &sol, &env, &config).unwrap();
        assert_eq!(oracle.agrees_with(sol.status, config.check_tol), Some(true));
    }

    #[test]
    fn empty_cooperation() {
        let env = model("P = (x,1.0).Q; Q = (y,3.0).P; R = (z,2.0).R2; R2 = (w,2.0).R; system B = coop {} (P, R);");
        let sys = SystemSpec::from_model("B", &env).unwrap();
        let sol = grcat_solve::<f64>(&sys, &env, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, Status::Satisfied);
        assert_eq!(sol.iterations, 0);
        assert!(sol.kappas.is_empty());
        assert_eq!(sol.product.values, vec![0.375, 0.375, 0.125, 0.125]);
    }

    #[test]
    fn precondition_errors() {
        let env = model(
            "A1 = (a,1.0).0; A2 = (a,?).0; A3 = (a,?).0; B = (b,?).B;
             system Inner = coop {a} (A2, A3);
             system Right = coop {a} (A1, Inner);
             system Open = coop {a} (A1, B);
             system Lonely = coop {a} (A2, B);",
        );
        let cfg = SolverConfig::default();
        assert!(matches!(
            SystemSpec::from_model("Right", &env),
            Err(Error::NestedSystem(_))
        ));
        assert!(matches!(
            grcat_solve::<f64>(&SystemSpec::from_model("Inner", &env).unwrap(), &env, &cfg),
            Err(Error::InvalidCooperation(_))
        ));
        assert!(matches!(
            grcat_solve::<f64>(&SystemSpec::from_model("Open", &env).unwrap(), &env, &cfg),
            Err(Error::Unclosable { .. })
        ));
        let bad = SolverConfig {
            damping: 0.0,
            ..SolverConfig::default()
        };
        assert!(matches!(
            grcat_solve::<f64>(&SystemSpec::from_model("Lonely", &env).unwrap(), &env, &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn iteration_cap() {
        let env = model(BIO);
        let sys = SystemSpec::from_model("S", &env).unwrap();
        let config = SolverConfig {
            max_iter: 2,
            ..SolverConfig::default()
        };
        let sol = grcat_solve::<f64>(&sys, &env, &config).unwrap();
        assert_eq!(sol.status, Status::NotConverged);
        assert_eq!(sol.iterations, 2);
    }
}

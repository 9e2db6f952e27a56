use std::collections::VecDeque;
use std::fmt;

use super::kron::{flatten, unflatten};
use super::solver::{ProductFormSolution, SolverConfig, Status, SystemSpec};
use crate::ctmc::{
    build_generator, check_irreducible, numeric_generator, solve_invariant_with_budget, DenseMatrix, Measure,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semantics::{coop_transitions, Edge, Lts};
use crate::syntax::{Model, Term};

/// Relative null-vector residual below which a product vector counts as an
/// invariant measure of the joint chain.
pub const NULL_TOL: f64 = 1e-8;

/// A tuple of component states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointState(pub Vec<Term>);

impl fmt::Display for JointState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// The joint chain over the full product of the component derivative sets,
/// states in Kronecker order.
#[derive(Debug, Clone)]
pub struct JointChain {
    pub lts: Lts<JointState>,
    pub dims: Vec<usize>,
}

impl JointChain {
    pub fn build(system: &SystemSpec, env: &Model, budget: usize) -> Result<Self> {
        let parts = system
            .components
            .iter()
            .map(|c| Lts::explore(&Term::ident(c.as_str()), env, budget))
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = parts.iter().map(Lts::len).collect();
        let size = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded {
                limit: budget,
                frontier: 0,
            });
        }

        let mut states = Vec::with_capacity(size);
        let mut edges = Vec::with_capacity(size);
        for k in 0..size {
            let tuple = unflatten(k, &dims);
            let terms: Vec<Term> = tuple.iter().zip(&parts).map(|(&i, l)| l.state(i).clone()).collect();
            let out = coop_transitions(&terms, &system.coop, env)?;
            let mut row = Vec::with_capacity(out.len());
            for (t, m) in out.iter() {
                let target: Vec<usize> = t
                    .target
                    .iter()
                    .zip(&parts)
                    .map(|(s, l)| l.index_of(s).expect("component step leaves its derivative set"))
                    .collect();
                row.push(Edge {
                    label: t.label.clone(),
                    rate: t.rate,
                    target: flatten(&target, &dims),
                    multiplicity: m,
                });
            }
            states.push(JointState(terms));
            edges.push(row);
        }
        Ok(JointChain {
            lts: Lts::from_parts(states, edges),
            dims,
        })
    }

    /// Number of product states reachable from the tuple of initial states.
    pub fn reachable(&self) -> usize {
        let mut seen = vec![false; self.lts.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for e in self.lts.edges(i) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    count += 1;
                    queue.push_back(e.target);
                }
            }
        }
        count
    }

    pub fn generator<S: Scalar>(&self) -> Result<DenseMatrix<S>> {
        numeric_generator(&build_generator(&self.lts))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport<S> {
    pub states: usize,
    pub reachable: usize,
    pub reachable_equals_product: bool,
    pub joint_irreducible: bool,
    /// Directly solved, normalized joint measure; absent when the joint chain
    /// is reducible.
    pub joint: Option<Measure<S>>,
    pub gap_abs: Option<S>,
    pub gap_rel: Option<S>,
    /// `max |(pi_product Q)_j| / max |Q|`.
    pub null_residual: S,
}

impl<S: Scalar> OracleReport<S> {
    /// Whether the oracle backs the solver's verdict. `None` when there is
    /// no verdict to compare or no joint measure.
    pub fn agrees_with(&self, status: Status, check_tol: f64) -> Option<bool> {
        match status {
            Status::NotConverged => None,
            Status::Satisfied => Some(self.null_residual < S::of(NULL_TOL)),
            Status::Violated => self.gap_rel.map(|g| g > S::of(10.0 * check_tol)),
        }
    }
}

/// Solves the joint chain directly and compares it with the product vector.
pub fn verify_against_joint<S: Scalar>(
    system: &SystemSpec,
    solution: &ProductFormSolution<S>,
    env: &Model,
    config: &SolverConfig,
) -> Result<OracleReport<S>> {
    let chain = JointChain::build(system, env, config.state_budget)?;
    let q = chain.generator::<S>()?;
    let n = chain.lts.len();
    if n > config.solve_budget {
        return Err(Error::DimensionBudget {
            dimension: n,
            limit: config.solve_budget,
        });
    }
    assert_eq!(
        n,
        solution.product.len(),
        "product vector and joint chain differ in size"
    );

    let scale = q.max_abs().max(S::min_positive_value());
    let null_residual = q
        .left_mul(&solution.product.values)
        .into_iter()
        .fold(S::zero(), |m, v| m.max(v.abs()))
        / scale;
    let reachable = chain.reachable();
    let joint_irreducible = check_irreducible(&chain.lts).irreducible;

    let (joint, gap_abs, gap_rel) = if joint_irreducible {
        let pi = solve_invariant_with_budget(&q, true, config.solve_budget)?.measure;
        let mut abs = S::zero();
        let mut rel = S::zero();
        for (&p, &o) in solution.product.values.iter().zip(&pi.values) {
            let d = (p - o).abs();
            abs = abs.max(d);
            rel = rel.max(d / o.abs().max(S::min_positive_value()));
        }
        (Some(pi), Some(abs), Some(rel))
    } else {
        (None, None, None)
    };

    Ok(OracleReport {
        states: n,
        reachable,
        reachable_equals_product: reachable == n,
        joint_irreducible,
        joint,
        gap_abs,
        gap_rel,
        null_residual,
    })
}

//! From transition systems to continuous-time Markov chains: state-space
//! enumeration, symbolic and numeric generators, irreducibility and the
//! invariant measure.

mod dense;
mod generator;
mod rate;
mod solve;

pub use dense::DenseMatrix;
pub use generator::{
    build_generator, evaluate_generator, numeric_generator, rate_labelled, rate_total, GeneratorMatrix,
};
pub use rate::RateExpr;
pub use solve::{
    check_irreducible, check_irreducible_matrix, solve_invariant, solve_invariant_with_budget, InvariantSolution,
    Irreducibility, Measure, DEFAULT_SOLVE_BUDGET,
};

use crate::error::Result;
use crate::semantics::{Lts, State};
use crate::syntax::Model;

/// Derivative set of a process, enumerated breadth-first.
pub type StateSpace<S> = Lts<S>;

pub fn enumerate_states<S: State>(initial: &S, env: &Model, budget: usize) -> Result<StateSpace<S>> {
    Lts::explore(initial, env, budget)
}

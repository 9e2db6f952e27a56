//! Product-form solutions of cooperations of well-formed simple processes.
//!
//! Each component is closed by substituting a constant `kappa` for every
//! passive cooperation rate. When the reversed rate of each cooperation label
//! is the same in every state of its active owner, the joint invariant
//! measure is the Kronecker product of the closed components' measures. The
//! kappas are found by damped fixed-point iteration, and [`verify_against_joint`]
//! checks the result against a direct solve of the joint chain.

mod kron;
mod oracle;
mod solver;

pub use kron::{assemble_product, flatten, unflatten};
pub use oracle::{verify_against_joint, JointChain, JointState, OracleReport, NULL_TOL};
pub use solver::{
    close_component, grcat_solve, reversed_rates, reversed_rates_with, ComponentSolution, ConditionReport,
    KappaAssignment, ProductFormSolution, SolverConfig, Status, SystemSpec,
};

//! Simple stochastic process algebra: processes built from prefix choice,
//! identifiers and rate closure, combined by strictly pairwise cooperation,
//! with a product-form steady-state solver that is cross-checked against a
//! direct solve of the joint Markov chain.

pub mod ctmc;
pub mod error;
pub mod prodform;
pub mod scalar;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DenseMatrixF64 = ctmc::DenseMatrix<f64>;
pub type DenseMatrixF32 = ctmc::DenseMatrix<f32>;
pub type MeasureF64 = ctmc::Measure<f64>;
pub type MeasureF32 = ctmc::Measure<f32>;
pub type KappaAssignmentF64 = prodform::KappaAssignment<f64>;
pub type KappaAssignmentF32 = prodform::KappaAssignment<f32>;
pub type ProductFormSolutionF64 = prodform::ProductFormSolution<f64>;
pub type ProductFormSolutionF32 = prodform::ProductFormSolution<f32>;
pub type OracleReportF64 = prodform::OracleReport<f64>;
pub type OracleReportF32 = prodform::OracleReport<f32>;

use std::collections::BTreeMap;
use std::hash::Hash;

use super::dense::DenseMatrix;
use super::rate::RateExpr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semantics::Lts;
use crate::syntax::Label;

/// `q(from -> to)`: all transition rates between two distinct states,
/// multiplicities included.
pub fn rate_total<S: Eq + Hash>(lts: &Lts<S>, from: usize, to: usize) -> Result<RateExpr> {
    if from == to {
        return Err(Error::SelfLoopQuery(from));
    }
    let mut total = RateExpr::zero();
    for e in lts.edges(from).iter().filter(|e| e.target == to) {
        total += &RateExpr::of_transition(&e.label, e.rate, e.multiplicity);
    }
    Ok(total)
}

/// `q_a(from -> to)`: rates of `label` transitions only. Self-loops count.
pub fn rate_labelled<S: Eq + Hash>(lts: &Lts<S>, from: usize, to: usize, label: &Label) -> RateExpr {
    let mut total = RateExpr::zero();
    for e in lts.edges(from).iter().filter(|e| e.target == to && &e.label == label) {
        total += &RateExpr::of_transition(&e.label, e.rate, e.multiplicity);
    }
    total
}

/// Symbolic infinitesimal generator. Off-diagonal entries are the summed
/// rates between distinct states; self-loops are dropped; each diagonal
/// entry is minus its row's off-diagonal sum.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    rows: Vec<BTreeMap<usize, RateExpr>>,
}

impl GeneratorMatrix {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Off-diagonal entry; zero when absent. Panics on the diagonal.
    pub fn entry(&self, i: usize, j: usize) -> RateExpr {
        assert_ne!(i, j, "use exit_rate for the diagonal");
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    /// The row's off-diagonal sum; the diagonal entry is its negation.
    pub fn exit_rate(&self, i: usize) -> RateExpr {
        self.rows[i].values().fold(RateExpr::zero(), |acc, e| acc + e.clone())
    }

    pub fn off_diagonal(&self, i: usize) -> impl Iterator<Item = (usize, &RateExpr)> {
        self.rows[i].iter().map(|(&j, e)| (j, e))
    }

    pub fn is_numeric(&self) -> bool {
        self.rows.iter().all(|r| r.values().all(RateExpr::is_numeric))
    }

    /// Entries rendered as strings, e.g. `-2x_a`, `x_a`, `0`.
    pub fn render(&self) -> Vec<Vec<String>> {
        let n = self.dimension();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            let d = self.exit_rate(i);
                            if d.is_zero() {
                                "0".to_string()
                            } else if d.variables().count() + usize::from(d.constant_part() != 0.0) > 1 {
                                format!("-({d})")
                            } else {
                                format!("-{d}")
                            }
                        } else {
                            self.entry(i, j).to_string()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn build_generator<S: Eq + Hash>(lts: &Lts<S>) -> GeneratorMatrix {
    let rows = (0..lts.len())
        .map(|i| {
            let mut row: BTreeMap<usize, RateExpr> = BTreeMap::new();
            for e in lts.edges(i).iter().filter(|e| e.target != i) {
                *row.entry(e.target).or_default() += &RateExpr::of_transition(&e.label, e.rate, e.multiplicity);
            }
            row
        })
        .collect();
    GeneratorMatrix { rows }
}

/// Instantiates every passive variable. The diagonal is recomputed from the
/// evaluated row so each row sums to zero up to rounding.
pub fn evaluate_generator<T: Scalar>(g: &GeneratorMatrix, assignment: &BTreeMap<Label, T>) -> Result<DenseMatrix<T>> {
    let n = g.dimension();
    let mut q = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let mut exit = T::zero();
        for (j, e) in g.off_diagonal(i) {
            let v = e.evaluate(assignment)?;
            q[(i, j)] = v;
            exit = exit + v;
        }
        q[(i, i)] = -exit;
    }
    Ok(q)
}

/// Evaluates a generator that carries no variables.
pub fn numeric_generator<T: Scalar>(g: &GeneratorMatrix) -> Result<DenseMatrix<T>> {
    evaluate_generator(g, &BTreeMap::new())
}

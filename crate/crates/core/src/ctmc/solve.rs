use std::hash::Hash;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semantics::Lts;

pub const DEFAULT_SOLVE_BUDGET: usize = 4_000;

/// A non-negative vector over a state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<S> {
    pub values: Vec<S>,
    pub normalized: bool,
}

impl<S: Scalar> Measure<S> {
    pub fn new(values: Vec<S>, normalized: bool) -> Self {
        Measure { values, normalized }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> S {
        self.values.iter().fold(S::zero(), |a, &b| a + b)
    }

    pub fn normalize(&self) -> Measure<S> {
        let t = self.total();
        Measure {
            values: self.values.iter().map(|&v| v / t).collect(),
            normalized: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSolution<S> {
    pub measure: Measure<S>,
    /// `max_j |(pi Q)_j|`.
    pub residual: S,
}

/// Strongly connected components of the transition digraph, each sorted,
/// listed by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub components: Vec<Vec<usize>>,
}

fn sccs(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Irreducibility {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (i, j) in edges {
        if i != j {
            g.add_edge(nodes[i], nodes[j], ());
        }
    }
    let mut components: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    components.sort();
    Irreducibility {
        irreducible: components.len() <= 1,
        components,
    }
}

/// The transition digraph of an LTS, self-loops aside, is one strongly
/// connected component.
pub fn check_irreducible<S: Eq + Hash>(lts: &Lts<S>) -> Irreducibility {
    sccs(
        lts.len(),
        (0..lts.len()).flat_map(|i| lts.edges(i).iter().map(move |e| (i, e.target))),
    )
}

/// Same check on the positive off-diagonal pattern of a numeric generator.
pub fn check_irreducible_matrix<S: Scalar>(q: &DenseMatrix<S>) -> Irreducibility {
    let n = q.rows();
    sccs(
        n,
        (0..n).flat_map(|i| {
            (0..n)
                .filter(move |&j| j != i && q[(i, j)] > S::zero())
                .map(move |j| (i, j))
        }),
    )
}

pub fn solve_invariant<S: Scalar>(q: &DenseMatrix<S>, normalize: bool) -> Result<InvariantSolution<S>> {
    solve_invariant_with_budget(q, normalize, DEFAULT_SOLVE_BUDGET)
}

/// Solves `pi Q = 0` on an irreducible generator by dense elimination on
/// `Q^T` with its last equation replaced by `sum(pi) = 1`. Reducible chains
/// are refused. Unnormalized solutions are scaled so the first entry is 1.
pub fn solve_invariant_with_budget<S: Scalar>(
    q: &DenseMatrix<S>,
    normalize: bool,
    budget: usize,
) -> Result<InvariantSolution<S>> {
    let n = q.rows();
    if q.cols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: q.cols(),
        });
    }
    if n > budget {
        return Err(Error::DimensionBudget {
            dimension: n,
            limit: budget,
        });
    }
    if n == 0 {
        return Ok(InvariantSolution {
            measure: Measure::new(Vec::new(), normalize),
            residual: S::zero(),
        });
    }
    let irr = check_irreducible_matrix(q);
    if !irr.irreducible {
        return Err(Error::Reducible {
            components: irr.components.len(),
        });
    }

    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(j, i)] = q[(i, j)];
        }
    }
    for j in 0..n {
        a[(n - 1, j)] = S::one();
    }
    let mut b = vec![S::zero(); n];
    b[n - 1] = S::one();
    let mut pi = a.solve(&b)?;

    if !normalize {
        let first = pi[0];
        pi.iter_mut().for_each(|v| *v = *v / first);
    }
    let residual = q.left_mul(&pi).into_iter().fold(S::zero(), |m, v| m.max(v.abs()));
    Ok(InvariantSolution {
        measure: Measure::new(pi, normalize),
        residual,
    })
}

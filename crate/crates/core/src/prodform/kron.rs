use crate::ctmc::Measure;
use crate::scalar::Scalar;

/// Left-to-right Kronecker product. The first measure is outermost: the index
/// of a tuple `(i1, .., iN)` is `i1 * (n2 * .. * nN) + .. + iN`.
pub fn assemble_product<S: Scalar>(measures: &[Measure<S>]) -> Measure<S> {
    let mut values = vec![S::one()];
    for m in measures {
        let mut next = Vec::with_capacity(values.len() * m.len());
        for &p in &values {
            next.extend(m.values.iter().map(|&q| p * q));
        }
        values = next;
    }
    let normalized = measures.iter().all(|m| m.normalized);
    Measure::new(values, normalized)
}

/// Splits a flat product index into per-component indices.
pub fn unflatten(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub fn flatten(tuple: &[usize], dims: &[usize]) -> usize {
    tuple.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

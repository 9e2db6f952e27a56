use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use super::lts::{Lts, State, DEFAULT_STATE_BUDGET};
use crate::error::Result;
use crate::syntax::{Label, Model, RateSpec};

/// Outcome of a bisimilarity check with the coarsest stable partition of the
/// union of both transition systems as witness. States of the first system
/// are prefixed `1:`, those of the second `2:`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisimulation {
    pub bisimilar: bool,
    pub partition: Vec<Vec<String>>,
}

pub fn strong_bisimilar<S: State>(first: &S, second: &S, env: &Model) -> Result<Bisimulation> {
    strong_bisimilar_across(first, env, second, env, DEFAULT_STATE_BUDGET)
}

/// Compares two processes that may live in different models, e.g. a
/// sugared term and its desugared form.
pub fn strong_bisimilar_across<S: State>(
    first: &S,
    first_env: &Model,
    second: &S,
    second_env: &Model,
    budget: usize,
) -> Result<Bisimulation> {
    let l1 = Lts::explore(first, first_env, budget)?;
    let l2 = Lts::explore(second, second_env, budget)?;
    Ok(bisimilar_lts(&l1, 0, &l2, 0))
}

/// Signature refinement on the disjoint union. Transitions are matched on
/// (label, rate) existentially; multiplicities play no role.
pub fn bisimilar_lts<A, B>(l1: &Lts<A>, s1: usize, l2: &Lts<B>, s2: usize) -> Bisimulation
where
    A: std::fmt::Display + Eq + Hash,
    B: std::fmt::Display + Eq + Hash,
{
    let n1 = l1.len();
    let n = n1 + l2.len();
    let succ = |i: usize| -> Vec<(&Label, RateSpec, usize)> {
        if i < n1 {
            l1.edges(i).iter().map(|e| (&e.label, e.rate, e.target)).collect()
        } else {
            l2.edges(i - n1)
                .iter()
                .map(|e| (&e.label, e.rate, e.target + n1))
                .collect()
        }
    };
    let graph: Vec<_> = (0..n).map(succ).collect();

    // current block plus the set of (label, rate, target block) moves
    type Signature<'a> = BTreeSet<(&'a Label, RateSpec, usize)>;
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Signature), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for i in 0..n {
            let sig: BTreeSet<_> = graph[i].iter().map(|&(l, r, t)| (l, r, block[t])).collect();
            let fresh = ids.len();
            next[i] = *ids.entry((block[i], sig)).or_insert(fresh);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    let mut partition = vec![Vec::new(); count];
    for i in 0..n {
        let name = if i < n1 {
            format!("1:{}", l1.state(i))
        } else {
            format!("2:{}", l2.state(i - n1))
        };
        partition[block[i]].push(name);
    }
    Bisimulation {
        bisimilar: block[s1] == block[s2 + n1],
        partition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Process;
    use crate::syntax::{desugar, parse_model, Term};

    #[test]
    fn reflexive() {
        let env = desugar(&parse_model("A = (a,1).(b,?).A;").unwrap());
        let a = Term::ident("A");
        assert!(strong_bisimilar(&a, &a, &env).unwrap().bisimilar);
    }

    #[test]
    fn multiplicity_is_ignored() {
        let env = parse_model("A = (a,1).A + (a,1).A; B = (a,1).B;").unwrap();
        assert!(
            strong_bisimilar(&Term::ident("A"), &Term::ident("B"), &env)
                .unwrap()
                .bisimilar
        );
    }

    #[test]
    fn rates_are_observed() {
        let env = parse_model("A = (a,1).A; B = (a,2).B; C = (a,?).C;").unwrap();
        assert!(
            !strong_bisimilar(&Term::ident("A"), &Term::ident("B"), &env)
                .unwrap()
                .bisimilar
        );
        assert!(
            !strong_bisimilar(&Term::ident("A"), &Term::ident("C"), &env)
                .unwrap()
                .bisimilar
        );
    }

    #[test]
    fn cooperation_is_not_associative() {
        let env = parse_model(
            "A1 = (a,1.0).0; A2 = (a,?).0; A3 = (a,?).0; Z = 0;
             system Inner = coop {a} (A2, A3);
             system Right = coop {a} (A1, Inner);
             system Pair = coop {a} (A1, A2);
             system Left = coop {a} (Pair, A3);",
        )
        .unwrap();
        let zero = Process::named("Z", &env).unwrap();
        let right = Process::named("Right", &env).unwrap();
        let left = Process::named("Left", &env).unwrap();
        assert!(strong_bisimilar(&right, &zero, &env).unwrap().bisimilar);
        assert!(!strong_bisimilar(&left, &zero, &env).unwrap().bisimilar);
        assert!(!strong_bisimilar(&left, &right, &env).unwrap().bisimilar);
    }

    #[test]
    fn witness_partition_covers_both_systems() {
        let env = parse_model("A = (a,1).B; B = (b,1).A; C = (a,1).D; D = (b,1).C;").unwrap();
        let r = strong_bisimilar(&Term::ident("A"), &Term::ident("C"), &env).unwrap();
        assert!(r.bisimilar);
        assert_eq!(r.partition.len(), 2);
        assert!(r.partition.iter().all(|b| b.len() == 2));
    }
}

use std::collections::{HashMap, VecDeque};
use std::fmt::Display;
use std::hash::Hash;

use super::transitions::{canonicalize, derive_transitions, process_transitions, Process, TransitionMultiset};
use crate::error::{Error, Result};
use crate::syntax::{Label, Model, RateSpec, Term};

pub const DEFAULT_STATE_BUDGET: usize = 100_000;

/// Something with an operational semantics: simple processes and
/// interacting processes.
pub trait State: Clone + Ord + Hash + Display {
    fn canonical(&self) -> Self;
    fn successors(&self, env: &Model) -> Result<TransitionMultiset<Self>>;

    /// The state exploration starts from. Defaults to the canonical form.
    fn entry(&self, _env: &Model) -> Self {
        self.canonical()
    }
}

/// Unfolds identifiers that merely name another identifier or a closure, so
/// `Z = A0[b <- r]` is explored from `A0[b <- r]` and its cycle closes.
pub fn resolve_alias(term: &Term, env: &Model) -> Term {
    let mut cur = term.clone();
    let mut seen = Vec::new();
    while let Term::Ident(name) = &cur {
        match env.equation(name) {
            Some(body @ (Term::Ident(_) | Term::Closure(..))) if !seen.contains(name) => {
                seen.push(name.clone());
                cur = body.clone();
            }
            _ => break,
        }
    }
    canonicalize(&cur)
}

impl State for Term {
    fn canonical(&self) -> Self {
        canonicalize(self)
    }

    fn successors(&self, env: &Model) -> Result<TransitionMultiset<Self>> {
        derive_transitions(self, env)
    }

    fn entry(&self, env: &Model) -> Self {
        resolve_alias(self, env)
    }
}

impl State for Process {
    fn canonical(&self) -> Self {
        Process::canonical(self)
    }

    fn successors(&self, env: &Model) -> Result<TransitionMultiset<Self>> {
        process_transitions(self, env)
    }

    fn entry(&self, env: &Model) -> Self {
        match self {
            Process::Simple(t) => Process::Simple(resolve_alias(t, env)),
            Process::Coop { coop, parts } => Process::Coop {
                coop: coop.clone(),
                parts: parts.iter().map(|p| p.entry(env)).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub label: Label,
    pub rate: RateSpec,
    pub target: usize,
    pub multiplicity: usize,
}

/// A finite labelled transition system with densely numbered states.
#[derive(Debug, Clone)]
pub struct Lts<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    edges: Vec<Vec<Edge>>,
}

impl<S: State> Lts<S> {
    /// Breadth-first closure of `initial` under the transition relation.
    /// States are numbered in discovery order, successors visited in the
    /// canonical transition order, so repeated runs agree.
    pub fn explore(initial: &S, env: &Model, budget: usize) -> Result<Self> {
        let mut lts = Lts {
            states: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        };
        let mut queue = VecDeque::new();
        lts.intern(initial.entry(env), &mut queue);
        while let Some(i) = queue.pop_front() {
            if lts.states.len() > budget {
                return Err(Error::BudgetExceeded {
                    limit: budget,
                    frontier: queue.len() + 1,
                });
            }
            let out = lts.states[i].successors(env)?;
            let mut edges = Vec::with_capacity(out.len());
            for (t, m) in out.iter() {
                let target = lts.intern(t.target.canonical(), &mut queue);
                edges.push(Edge {
                    label: t.label.clone(),
                    rate: t.rate,
                    target,
                    multiplicity: m,
                });
            }
            lts.edges[i] = edges;
        }
        if lts.states.len() > budget {
            return Err(Error::BudgetExceeded {
                limit: budget,
                frontier: 0,
            });
        }
        Ok(lts)
    }

    fn intern(&mut self, state: S, queue: &mut VecDeque<usize>) -> usize {
        if let Some(&i) = self.index.get(&state) {
            return i;
        }
        let i = self.states.len();
        self.index.insert(state.clone(), i);
        self.states.push(state);
        self.edges.push(Vec::new());
        queue.push_back(i);
        i
    }
}

impl<S: Eq + Hash> Lts<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn index_of(&self, state: &S) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn edges(&self, i: usize) -> &[Edge] {
        &self.edges[i]
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Builds an LTS directly from states and edges, e.g. for tests.
    pub fn from_parts(states: Vec<S>, edges: Vec<Vec<Edge>>) -> Self
    where
        S: Clone,
    {
        assert_eq!(states.len(), edges.len());
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Lts { states, index, edges }
    }

    /// Adds a transition in place. Used to probe self-loop behaviour.
    pub fn push_edge(&mut self, from: usize, edge: Edge) {
        assert!(edge.target < self.states.len());
        self.edges[from].push(edge);
        self.edges[from].sort();
    }
}

impl<S: Display + Eq + Hash> Lts<S> {
    pub fn state_names(&self) -> Vec<String> {
        self.states.iter().map(ToString::to_string).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{desugar, parse_model};

    #[test]
    fn four_state_cycle() {
        let env = desugar(&parse_model("A0 = (a,1.0).(b,?).(a,2.0).(b,?).A0;").unwrap());
        let lts = Lts::explore(&Term::ident("A0"), &env, 100).unwrap();
        assert_eq!(lts.state_names(), vec!["A0", "A0#1", "A0#2", "A0#3"]);
        assert_eq!(lts.transition_count(), 4);
        let passive = (0..4)
            .flat_map(|i| lts.edges(i))
            .filter(|e| e.rate.is_passive())
            .count();
        assert_eq!(passive, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let env = desugar(&parse_model("A0 = (a,1.0).(b,?).(a,2.0).(b,?).A0;").unwrap());
        let err = Lts::explore(&Term::ident("A0"), &env, 2).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: 2, .. }));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let env = desugar(&parse_model("A = (b,1).B + (a,1).C; B = (c,1).A; C = (a,2).B;").unwrap());
        let first = Lts::explore(&Term::ident("A"), &env, 100).unwrap().state_names();
        for _ in 0..5 {
            assert_eq!(Lts::explore(&Term::ident("A"), &env, 100).unwrap().state_names(), first);
        }
        // (a,1).C sorts before (b,1).B
        assert_eq!(first, vec!["A", "C", "B"]);
    }
}

use std::collections::{BTreeSet, HashMap};

use super::transitions::canonicalize;
use crate::syntax::{Label, Model, Term};

pub type LabelSet = BTreeSet<Label>;

/// Active, passive and unique-passive label sets of one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelReport {
    pub active: LabelSet,
    pub passive: LabelSet,
    pub unique_passive: LabelSet,
}

/// Label-set functions over a model's identifier equations.
///
/// The recursive clauses for active and passive labels are read as least
/// fixpoints (starting from the empty set); the unique-passive clauses as a
/// greatest fixpoint starting from the label universe, which stands in for
/// the unbounded action set under the `0` clause.
#[derive(Debug, Clone)]
pub struct LabelAnalysis {
    universe: LabelSet,
    active: HashMap<String, LabelSet>,
    passive: HashMap<String, LabelSet>,
    unique: HashMap<String, LabelSet>,
}

impl LabelAnalysis {
    pub fn new(env: &Model) -> Self {
        Self::with_universe(env, env.label_universe())
    }

    /// Uses the model's labels plus any labels occurring in `extra`.
    pub fn for_term(env: &Model, extra: &Term) -> Self {
        let mut universe = env.label_universe();
        syntactic_labels(extra, &mut universe);
        Self::with_universe(env, universe)
    }

    pub fn with_universe(env: &Model, universe: LabelSet) -> Self {
        let mut analysis = LabelAnalysis {
            universe,
            active: env.equations.keys().map(|k| (k.clone(), LabelSet::new())).collect(),
            passive: env.equations.keys().map(|k| (k.clone(), LabelSet::new())).collect(),
            unique: HashMap::new(),
        };
        analysis.unique = env
            .equations
            .keys()
            .map(|k| (k.clone(), analysis.universe.clone()))
            .collect();

        loop {
            let mut changed = false;
            for (name, eq) in &env.equations {
                let a = analysis.active(&eq.term);
                let p = analysis.passive(&eq.term);
                let u = analysis.unique_passive(&eq.term);
                if analysis.active[name] != a {
                    analysis.active.insert(name.clone(), a);
                    changed = true;
                }
                if analysis.passive[name] != p {
                    analysis.passive.insert(name.clone(), p);
                    changed = true;
                }
                if analysis.unique[name] != u {
                    analysis.unique.insert(name.clone(), u);
                    changed = true;
                }
            }
            if !changed {
                return analysis;
            }
        }
    }

    pub fn universe(&self) -> &LabelSet {
        &self.universe
    }

    pub fn active(&self, term: &Term) -> LabelSet {
        match term {
            Term::Nil => LabelSet::new(),
            Term::Ident(name) => self.active.get(name).cloned().unwrap_or_default(),
            Term::Choice(branches) => {
                let mut out = LabelSet::new();
                for p in branches {
                    if !p.rate.is_passive() {
                        out.insert(p.label.clone());
                    }
                    out.extend(self.active(&p.cont));
                }
                out
            }
            Term::Closure(body, label, _) => {
                let mut out = self.active(body);
                out.insert(label.clone());
                out
            }
        }
    }

    pub fn passive(&self, term: &Term) -> LabelSet {
        match term {
            Term::Nil => LabelSet::new(),
            Term::Ident(name) => self.passive.get(name).cloned().unwrap_or_default(),
            Term::Choice(branches) => {
                let mut out = LabelSet::new();
                for p in branches {
                    if p.rate.is_passive() {
                        out.insert(p.label.clone());
                    }
                    out.extend(self.passive(&p.cont));
                }
                out
            }
            Term::Closure(body, label, _) => {
                let mut out = self.passive(body);
                out.remove(label);
                out
            }
        }
    }

    pub fn unique_passive(&self, term: &Term) -> LabelSet {
        match term {
            Term::Nil => self.universe.clone(),
            Term::Ident(name) => self.unique.get(name).cloned().unwrap_or_else(|| self.universe.clone()),
            Term::Choice(branches) => {
                if has_non_unique_passive(branches) {
                    return LabelSet::new();
                }
                let mut out: LabelSet = branches.iter().map(|p| p.label.clone()).collect();
                for p in branches {
                    let u = self.unique_passive(&p.cont);
                    out.retain(|l| u.contains(l));
                }
                out
            }
            Term::Closure(body, label, _) => {
                let mut out = self.unique_passive(body);
                out.remove(label);
                out
            }
        }
    }

    pub fn report(&self, term: &Term) -> LabelReport {
        LabelReport {
            active: self.active(term),
            passive: self.passive(term),
            unique_passive: self.unique_passive(term),
        }
    }
}

/// A passive label is not unique when two passive branches on it lead to
/// different continuations.
pub(crate) fn has_non_unique_passive(branches: &[crate::syntax::Prefix]) -> bool {
    let mut seen: HashMap<&Label, Term> = HashMap::new();
    for p in branches.iter().filter(|p| p.rate.is_passive()) {
        let cont = canonicalize(&p.cont);
        match seen.get(&p.label) {
            Some(prev) if *prev != cont => return true,
            Some(_) => {}
            None => {
                seen.insert(&p.label, cont);
            }
        }
    }
    false
}

/// Labels written anywhere in the term or the equations it can reach.
pub fn reachable_syntactic_labels(term: &Term, env: &Model) -> LabelSet {
    let mut out = LabelSet::new();
    let mut visited = BTreeSet::new();
    let mut stack = vec![term.clone()];
    while let Some(t) = stack.pop() {
        syntactic_labels(&t, &mut out);
        let mut idents = Vec::new();
        idents_of(&t, &mut idents);
        for id in idents {
            if visited.insert(id.clone()) {
                if let Some(body) = env.equation(&id) {
                    stack.push(body.clone());
                }
            }
        }
    }
    out
}

fn syntactic_labels(term: &Term, out: &mut LabelSet) {
    match term {
        Term::Nil | Term::Ident(_) => {}
        Term::Choice(branches) => {
            for p in branches {
                out.insert(p.label.clone());
                syntactic_labels(&p.cont, out);
            }
        }
        Term::Closure(body, label, _) => {
            out.insert(label.clone());
            syntactic_labels(body, out);
        }
    }
}

fn idents_of(term: &Term, out: &mut Vec<String>) {
    match term {
        Term::Nil => {}
        Term::Ident(n) => out.push(n.clone()),
        Term::Choice(branches) => branches.iter().for_each(|p| idents_of(&p.cont, out)),
        Term::Closure(body, _, _) => idents_of(body, out),
    }
}

pub fn active_labels(term: &Term, env: &Model) -> LabelSet {
    LabelAnalysis::for_term(env, term).active(term)
}

pub fn passive_labels(term: &Term, env: &Model) -> LabelSet {
    LabelAnalysis::for_term(env, term).passive(term)
}

pub fn unique_passive_labels(term: &Term, env: &Model) -> LabelSet {
    LabelAnalysis::for_term(env, term).unique_passive(term)
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{format_term, Label, Model, Prefix, RateSpec, Term};

/// One step `source --(label, rate)--> target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition<S = Term> {
    pub label: Label,
    pub rate: RateSpec,
    pub target: S,
}

/// The multi-relation of outgoing transitions of a state: identical steps are
/// kept once with their multiplicity. Iteration order is the total order on
/// (label, rate, target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMultiset<S = Term> {
    entries: BTreeMap<Transition<S>, usize>,
}

impl<S: Ord> Default for TransitionMultiset<S> {
    fn default() -> Self {
        TransitionMultiset {
            entries: BTreeMap::new(),
        }
    }
}

impl<S: Ord> TransitionMultiset<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, transition: Transition<S>, multiplicity: usize) {
        if multiplicity > 0 {
            *self.entries.entry(transition).or_insert(0) += multiplicity;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Transition<S>, usize)> {
        self.entries.iter().map(|(t, &m)| (t, m))
    }

    pub fn multiplicity(&self, transition: &Transition<S>) -> usize {
        self.entries.get(transition).copied().unwrap_or(0)
    }

    /// Number of distinct transitions.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total count including multiplicities.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn labelled<'a>(&'a self, label: &'a Label) -> impl Iterator<Item = (&'a Transition<S>, usize)> + 'a {
        self.iter().filter(move |(t, _)| &t.label == label)
    }
}

impl<S: Ord> FromIterator<(Transition<S>, usize)> for TransitionMultiset<S> {
    fn from_iter<I: IntoIterator<Item = (Transition<S>, usize)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (t, m) in iter {
            out.add(t, m);
        }
        out
    }
}

/// Canonical representative of the structural-congruence class of a term:
/// choice branches sorted by label, then rate (numbers before `?`), then the
/// rendered continuation. Idempotent.
pub fn canonicalize(term: &Term) -> Term {
    match term {
        Term::Nil | Term::Ident(_) => term.clone(),
        Term::Choice(branches) => {
            let mut keyed: Vec<(String, Prefix)> = branches
                .iter()
                .map(|p| {
                    let cont = canonicalize(&p.cont);
                    (format_term(&cont), Prefix::new(p.label.clone(), p.rate, cont))
                })
                .collect();
            keyed.sort_by(|(ka, a), (kb, b)| {
                a.label
                    .cmp(&b.label)
                    .then_with(|| a.rate.cmp(&b.rate))
                    .then_with(|| ka.cmp(kb))
            });
            Term::Choice(keyed.into_iter().map(|(_, p)| p).collect())
        }
        Term::Closure(body, label, rate) => Term::Closure(Box::new(canonicalize(body)), label.clone(), *rate),
    }
}

/// Outgoing transitions of a simple process: each choice branch contributes
/// one step, identifiers unfold through their equation, and a closure
/// `M[a <- r]` turns passive `a` steps of `M` into rate `r`, keeps every
/// other step's rate, and stays wrapped around the target.
pub fn derive_transitions(term: &Term, env: &Model) -> Result<TransitionMultiset<Term>> {
    let mut out = TransitionMultiset::new();
    let mut unfolding = Vec::new();
    collect(term, env, &mut unfolding, &mut |t| out.add(t, 1))?;
    Ok(out)
}

fn collect(
    term: &Term,
    env: &Model,
    unfolding: &mut Vec<String>,
    emit: &mut dyn FnMut(Transition<Term>),
) -> Result<()> {
    match term {
        Term::Nil => Ok(()),
        Term::Ident(name) => {
            if unfolding.contains(name) {
                return Err(Error::IllFounded { name: name.clone() });
            }
            let body = env.equation(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
            unfolding.push(name.clone());
            let r = collect(body, env, unfolding, emit);
            unfolding.pop();
            r
        }
        Term::Choice(branches) => {
            for p in branches {
                emit(Transition {
                    label: p.label.clone(),
                    rate: p.rate,
                    target: canonicalize(&p.cont),
                });
            }
            Ok(())
        }
        Term::Closure(body, label, rate) => collect(body, env, unfolding, &mut |t: Transition<Term>| {
            let closed_rate = if &t.label == label && t.rate.is_passive() {
                RateSpec::Const(*rate)
            } else {
                t.rate
            };
            emit(Transition {
                label: t.label,
                rate: closed_rate,
                target: Term::Closure(Box::new(t.target), label.clone(), *rate),
            })
        }),
    }
}

/// An interacting process: a simple process, or a cooperation over a label
/// set. Components of a cooperation may themselves be cooperations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    Simple(Term),
    Coop { coop: BTreeSet<Label>, parts: Vec<Process> },
}

impl Process {
    /// Resolves a process equation or a declared system by name.
    pub fn named(name: &str, env: &Model) -> Result<Process> {
        if env.equations.contains_key(name) {
            return Ok(Process::Simple(Term::ident(name)));
        }
        let sys = env
            .systems
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let parts = sys
            .components
            .iter()
            .map(|c| Process::named(c, env))
            .collect::<Result<Vec<_>>>()?;
        Ok(Process::Coop {
            coop: sys.coop.clone(),
            parts,
        })
    }

    pub fn coop(coop: impl IntoIterator<Item = Label>, parts: Vec<Process>) -> Self {
        Process::Coop {
            coop: coop.into_iter().collect(),
            parts,
        }
    }

    pub fn canonical(&self) -> Process {
        match self {
            Process::Simple(t) => Process::Simple(canonicalize(t)),
            Process::Coop { coop, parts } => Process::Coop {
                coop: coop.clone(),
                parts: parts.iter().map(Process::canonical).collect(),
            },
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Simple(t) => f.write_str(&format_term(t)),
            Process::Coop { parts, .. } => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    p.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Pairwise cooperation over component steps. A label outside `coop` moves
/// one component alone. A label in `coop` moves exactly two components: one
/// taking an active step at rate `r` and a different one taking a passive
/// step; the joint step has rate `r`. Multiplicities multiply.
pub fn cooperate<S: Clone + Ord>(
    state: &[S],
    moves: &[TransitionMultiset<S>],
    coop: &BTreeSet<Label>,
) -> TransitionMultiset<Vec<S>> {
    debug_assert_eq!(state.len(), moves.len());
    let mut out = TransitionMultiset::new();
    for (i, mi) in moves.iter().enumerate() {
        for (t, m) in mi.iter() {
            if !coop.contains(&t.label) {
                let mut target = state.to_vec();
                target[i] = t.target.clone();
                out.add(
                    Transition {
                        label: t.label.clone(),
                        rate: t.rate,
                        target,
                    },
                    m,
                );
                continue;
            }
            if t.rate.is_passive() {
                continue;
            }
            for (k, mk) in moves.iter().enumerate() {
                if k == i {
                    continue;
                }
                for (p, n) in mk.labelled(&t.label) {
                    if !p.rate.is_passive() {
                        continue;
                    }
                    let mut target = state.to_vec();
                    target[i] = t.target.clone();
                    target[k] = p.target.clone();
                    out.add(
                        Transition {
                            label: t.label.clone(),
                            rate: t.rate,
                            target,
                        },
                        m * n,
                    );
                }
            }
        }
    }
    out
}

/// Joint steps of a flat cooperation of simple processes.
pub fn coop_transitions(state: &[Term], coop: &BTreeSet<Label>, env: &Model) -> Result<TransitionMultiset<Vec<Term>>> {
    let moves = state
        .iter()
        .map(|t| derive_transitions(t, env))
        .collect::<Result<Vec<_>>>()?;
    Ok(cooperate(state, &moves, coop))
}

/// Outgoing transitions of an interacting process.
pub fn process_transitions(process: &Process, env: &Model) -> Result<TransitionMultiset<Process>> {
    match process {
        Process::Simple(t) => Ok(derive_transitions(t, env)?
            .iter()
            .map(|(tr, m)| {
                (
                    Transition {
                        label: tr.label.clone(),
                        rate: tr.rate,
                        target: Process::Simple(tr.target.clone()),
                    },
                    m,
                )
            })
            .collect()),
        Process::Coop { coop, parts } => {
            let moves = parts
                .iter()
                .map(|p| process_transitions(p, env))
                .collect::<Result<Vec<_>>>()?;
            Ok(cooperate(parts, &moves, coop)
                .iter()
                .map(|(tr, m)| {
                    (
                        Transition {
                            label: tr.label.clone(),
                            rate: tr.rate,
                            target: Process::Coop {
                                coop: coop.clone(),
                                parts: tr.target.clone(),
                            },
                        },
                        m,
                    )
                })
                .collect())
        }
    }
}

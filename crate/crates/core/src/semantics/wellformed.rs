use std::collections::BTreeMap;
use std::fmt;

use super::labels::{LabelAnalysis, LabelReport, LabelSet};
use super::lts::{Lts, DEFAULT_STATE_BUDGET};
use crate::error::Result;
use crate::syntax::{Label, Model, Rate, Term};

/// How the closed-process test reads its definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedReading {
    /// No passive labels remain. This is what closure produces.
    #[default]
    NoPassive,
    /// The definition's literal wording: no active labels.
    NoActive,
}

pub fn is_closed(term: &Term, env: &Model) -> bool {
    is_closed_with(term, env, ClosedReading::NoPassive)
}

pub fn is_closed_with(term: &Term, env: &Model, reading: ClosedReading) -> bool {
    let analysis = LabelAnalysis::for_term(env, term);
    match reading {
        ClosedReading::NoPassive => analysis.passive(term).is_empty(),
        ClosedReading::NoActive => analysis.active(term).is_empty(),
    }
}

pub fn apply_closure(term: &Term, label: Label, rate: Rate) -> Term {
    Term::Closure(Box::new(term.clone()), label, rate)
}

/// Closes several labels at once, innermost first in label order. The order
/// does not matter up to strong bisimilarity.
pub fn apply_closure_set(term: &Term, assignment: &BTreeMap<Label, Rate>) -> Term {
    assignment
        .iter()
        .fold(term.clone(), |t, (label, rate)| apply_closure(&t, label.clone(), *rate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WellFormedMode {
    /// Active and passive labels disjoint, and the passive labels are exactly
    /// the unique passive labels.
    #[default]
    Strict,
    /// Second condition relaxed to: every reachable state offers passive
    /// transitions on at most one label.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A label is both active and passive.
    Overlap { labels: LabelSet, witness: Option<String> },
    /// Strict mode: passive labels differ from unique passive labels.
    NotUnique {
        passive: LabelSet,
        unique: LabelSet,
        witness: Option<String>,
    },
    /// Lenient mode: a state offers several passive labels.
    SeveralPassive { state: String, labels: LabelSet },
}

fn fmt_set(set: &LabelSet) -> String {
    let names: Vec<&str> = set.iter().map(Label::as_str).collect();
    format!("{{{}}}", names.join(", "))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { labels, witness } => {
                write!(f, "condition 1: labels {} are both active and passive", fmt_set(labels))?;
                if let Some(w) = witness {
                    write!(f, " (passive at state {w})")?;
                }
                Ok(())
            }
            Violation::NotUnique {
                passive,
                unique,
                witness,
            } => {
                write!(
                    f,
                    "condition 2: passive labels {} differ from unique passive labels {}",
                    fmt_set(passive),
                    fmt_set(unique)
                )?;
                if let Some(w) = witness {
                    write!(f, " (non-unique passive choice at state {w})")?;
                }
                Ok(())
            }
            Violation::SeveralPassive { state, labels } => {
                write!(
                    f,
                    "condition 2 (lenient): state {state} offers passive labels {}",
                    fmt_set(labels)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedness {
    pub labels: LabelReport,
    pub violations: Vec<Violation>,
}

impl WellFormedness {
    pub fn is_well_formed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn is_well_formed(term: &Term, env: &Model, mode: WellFormedMode) -> Result<WellFormedness> {
    is_well_formed_with_budget(term, env, mode, DEFAULT_STATE_BUDGET)
}

pub fn is_well_formed_with_budget(
    term: &Term,
    env: &Model,
    mode: WellFormedMode,
    budget: usize,
) -> Result<WellFormedness> {
    let analysis = LabelAnalysis::for_term(env, term);
    let labels = analysis.report(term);
    let lts = Lts::explore(term, env, budget)?;

    // Passive labels offered by each reachable state, first state wins.
    let passive_at = |i: usize| -> BTreeMap<&Label, Vec<usize>> {
        let mut m: BTreeMap<&Label, Vec<usize>> = BTreeMap::new();
        for e in lts.edges(i).iter().filter(|e| e.rate.is_passive()) {
            m.entry(&e.label).or_default().push(e.target);
        }
        m
    };

    let mut violations = Vec::new();
    let overlap: LabelSet = labels.active.intersection(&labels.passive).cloned().collect();
    if !overlap.is_empty() {
        let witness = (0..lts.len())
            .find(|&i| passive_at(i).keys().any(|l| overlap.contains(*l)))
            .map(|i| lts.state(i).to_string());
        violations.push(Violation::Overlap {
            labels: overlap,
            witness,
        });
    }

    match mode {
        WellFormedMode::Strict => {
            if !labels.passive.is_empty() && labels.passive != labels.unique_passive {
                let witness = (0..lts.len())
                    .find(|&i| {
                        passive_at(i).values().any(|targets| targets.len() > 1)
                            || lts.edges(i).iter().any(|e| e.rate.is_passive() && e.multiplicity > 1)
                    })
                    .map(|i| lts.state(i).to_string());
                violations.push(Violation::NotUnique {
                    passive: labels.passive.clone(),
                    unique: labels.unique_passive.clone(),
                    witness,
                });
            }
        }
        WellFormedMode::Lenient => {
            for i in 0..lts.len() {
                let offered = passive_at(i);
                if offered.len() > 1 {
                    violations.push(Violation::SeveralPassive {
                        state: lts.state(i).to_string(),
                        labels: offered.keys().map(|l| (*l).clone()).collect(),
                    });
                    break;
                }
            }
        }
    }

    Ok(WellFormedness { labels, violations })
}

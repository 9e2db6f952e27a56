use std::fmt;

use super::labels::{LabelAnalysis, LabelSet};
use super::transitions::Process;
use crate::syntax::{Label, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Active,
    Passive,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Active => "active",
            Role::Passive => "passive",
        })
    }
}

/// Two components share a cooperation label in the same role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub first: usize,
    pub second: usize,
    pub label: Label,
    pub role: Role,
}

/// A cooperation label nobody owns in some role; its transitions can never
/// fire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocked {
    pub label: Label,
    pub missing: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CooperationReport {
    pub clashes: Vec<Clash>,
    pub warnings: Vec<Blocked>,
}

impl CooperationReport {
    pub fn is_ok(&self) -> bool {
        self.clashes.is_empty()
    }
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "components {} and {} are both {} on `{}`",
            self.first, self.second, self.role, self.label
        )
    }
}

impl fmt::Display for Blocked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "label `{}` has no {} owner and is blocked", self.label, self.missing)
    }
}

/// Active and passive labels of an interacting process. A nested cooperation
/// contributes the union of its components.
pub fn process_labels(process: &Process, analysis: &LabelAnalysis) -> (LabelSet, LabelSet) {
    match process {
        Process::Simple(t) => (analysis.active(t), analysis.passive(t)),
        Process::Coop { parts, .. } => {
            let mut active = LabelSet::new();
            let mut passive = LabelSet::new();
            for p in parts {
                let (a, q) = process_labels(p, analysis);
                active.extend(a);
                passive.extend(q);
            }
            (active, passive)
        }
    }
}

/// Checks that, restricted to the cooperation set, no two components are
/// active on the same label and no two are passive on the same label.
/// Cooperation labels lacking an active or a passive owner are warnings.
pub fn validate_cooperation(coop: &LabelSet, components: &[Process], env: &Model) -> CooperationReport {
    let analysis = LabelAnalysis::new(env);
    let sets: Vec<(LabelSet, LabelSet)> = components.iter().map(|p| process_labels(p, &analysis)).collect();

    let mut report = CooperationReport::default();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            for (role, pick) in [(Role::Active, 0), (Role::Passive, 1)] {
                let (si, sj) = if pick == 0 {
                    (&sets[i].0, &sets[j].0)
                } else {
                    (&sets[i].1, &sets[j].1)
                };
                for label in si.intersection(sj).filter(|l| coop.contains(*l)) {
                    report.clashes.push(Clash {
                        first: i,
                        second: j,
                        label: label.clone(),
                        role,
                    });
                }
            }
        }
    }
    for label in coop {
        if !sets.iter().any(|(a, _)| a.contains(label)) {
            report.warnings.push(Blocked {
                label: label.clone(),
                missing: Role::Active,
            });
        }
        if !sets.iter().any(|(_, p)| p.contains(label)) {
            report.warnings.push(Blocked {
                label: label.clone(),
                missing: Role::Passive,
            });
        }
    }
    report
}

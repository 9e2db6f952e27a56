//! Operational semantics of simple and interacting processes, label-set
//! analysis, well-formedness, cooperation checks and strong bisimilarity.

mod bisim;
mod cooperation;
mod labels;
mod lts;
mod transitions;
mod wellformed;

pub use bisim::{bisimilar_lts, strong_bisimilar, strong_bisimilar_across, Bisimulation};
pub use cooperation::{process_labels, validate_cooperation, Blocked, Clash, CooperationReport, Role};
pub use labels::{
    active_labels, passive_labels, reachable_syntactic_labels, unique_passive_labels, LabelAnalysis, LabelReport,
    LabelSet,
};
pub use lts::{resolve_alias, Edge, Lts, State, DEFAULT_STATE_BUDGET};
pub use transitions::{
    canonicalize, coop_transitions, cooperate, derive_transitions, process_transitions, Process, Transition,
    TransitionMultiset,
};
pub use wellformed::{
    apply_closure, apply_closure_set, is_closed, is_closed_with, is_well_formed, is_well_formed_with_budget,
    ClosedReading, Violation, WellFormedMode, WellFormedness,
};

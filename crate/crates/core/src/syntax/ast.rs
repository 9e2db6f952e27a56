use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use indexmap::IndexMap;

/// An action name. Case-sensitive, compared as a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "labels are nonempty");
        Label(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// A strictly positive, finite rate. Totally ordered and hashable so that
/// terms carrying rates can serve as state identities.
#[derive(Debug, Clone, Copy)]
pub struct Rate(f64);

impl Rate {
    pub fn new(value: f64) -> Option<Self> {
        (value.is_finite() && value > 0.0).then_some(Rate(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Rate {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Rate {}

impl Hash for Rate {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug formatting is the shortest string that round-trips and always
        // carries a decimal point.
        write!(f, "{:?}", self.0)
    }
}

/// Rate of a prefix: a positive real, or the passive variable `x_a` of the
/// prefix's own label. `Const` sorts before `Passive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RateSpec {
    Const(Rate),
    Passive,
}

impl RateSpec {
    pub fn is_passive(self) -> bool {
        matches!(self, RateSpec::Passive)
    }

    pub fn value(self) -> Option<f64> {
        match self {
            RateSpec::Const(r) => Some(r.value()),
            RateSpec::Passive => None,
        }
    }
}

impl fmt::Display for RateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateSpec::Const(r) => r.fmt(f),
            RateSpec::Passive => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prefix {
    pub label: Label,
    pub rate: RateSpec,
    pub cont: Term,
}

impl Prefix {
    pub fn new(label: impl Into<Label>, rate: RateSpec, cont: Term) -> Self {
        Prefix {
            label: label.into(),
            rate,
            cont,
        }
    }
}

/// A simple process. After desugaring every prefix continuation is `Nil` or
/// `Ident`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Nil,
    Ident(String),
    Choice(Vec<Prefix>),
    Closure(Box<Term>, Label, Rate),
}

impl Term {
    pub fn ident(name: impl Into<String>) -> Self {
        Term::Ident(name.into())
    }

    pub fn prefix(label: impl Into<Label>, rate: RateSpec, cont: Term) -> Self {
        Term::Choice(vec![Prefix::new(label, rate, cont)])
    }

    pub fn closure(self, label: impl Into<Label>, rate: Rate) -> Self {
        Term::Closure(Box::new(self), label.into(), rate)
    }

    /// True when the term is in the strict grammar: choices only continue
    /// with `0` or an identifier.
    pub fn is_strict(&self) -> bool {
        match self {
            Term::Nil | Term::Ident(_) => true,
            Term::Choice(branches) => branches.iter().all(|p| matches!(p.cont, Term::Nil | Term::Ident(_))),
            Term::Closure(body, _, _) => body.is_strict(),
        }
    }
}

/// Line/column of a declaration, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub term: Term,
    pub pos: Pos,
}

/// A declared cooperation `coop L (X1, ..., Xn)`. Component names refer to
/// process equations or to other systems.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDecl {
    pub coop: BTreeSet<Label>,
    pub components: Vec<String>,
    pub pos: Pos,
}

/// Identifier equations, file-level constants and declared systems, each in
/// declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub constants: IndexMap<String, f64>,
    pub equations: IndexMap<String, Equation>,
    pub systems: IndexMap<String, SystemDecl>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn equation(&self, name: &str) -> Option<&Term> {
        self.equations.get(name).map(|eq| &eq.term)
    }

    /// Adds or replaces an equation. Intended for building models in code.
    pub fn define(&mut self, name: impl Into<String>, term: Term) -> &mut Self {
        self.equations.insert(
            name.into(),
            Equation {
                term,
                pos: Pos::default(),
            },
        );
        self
    }

    pub fn declare_system<I, S>(&mut self, name: impl Into<String>, coop: I, components: &[S]) -> &mut Self
    where
        I: IntoIterator<Item = Label>,
        S: AsRef<str>,
    {
        self.systems.insert(
            name.into(),
            SystemDecl {
                coop: coop.into_iter().collect(),
                components: components.iter().map(|s| s.as_ref().to_string()).collect(),
                pos: Pos::default(),
            },
        );
        self
    }

    /// Every label mentioned anywhere in the model. Stands in for the
    /// (infinite) action set when computing unique passive labels.
    pub fn label_universe(&self) -> BTreeSet<Label> {
        fn walk(term: &Term, out: &mut BTreeSet<Label>) {
            match term {
                Term::Nil | Term::Ident(_) => {}
                Term::Choice(branches) => {
                    for p in branches {
                        out.insert(p.label.clone());
                        walk(&p.cont, out);
                    }
                }
                Term::Closure(body, label, _) => {
                    out.insert(label.clone());
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        for eq in self.equations.values() {
            walk(&eq.term, &mut out);
        }
        for sys in self.systems.values() {
            out.extend(sys.coop.iter().cloned());
        }
        out
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::syntax::{Label, RateSpec};

/// Formal non-negative combination `c0 + sum_a c_a * x_a` of a numeric part
/// and per-label passive variables. Variables on the same label are the same
/// variable, so their coefficients add up.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateExpr {
    numeric: f64,
    vars: BTreeMap<Label, f64>,
}

impl RateExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn numeric(value: f64) -> Self {
        RateExpr {
            numeric: value,
            vars: BTreeMap::new(),
        }
    }

    pub fn var(label: Label, coefficient: f64) -> Self {
        RateExpr {
            numeric: 0.0,
            vars: [(label, coefficient)].into_iter().collect(),
        }
    }

    /// The rate of a transition on `label`, counted `multiplicity` times.
    pub fn of_transition(label: &Label, rate: RateSpec, multiplicity: usize) -> Self {
        let m = multiplicity as f64;
        match rate {
            RateSpec::Const(r) => Self::numeric(r.value() * m),
            RateSpec::Passive => Self::var(label.clone(), m),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numeric == 0.0 && self.vars.is_empty()
    }

    pub fn is_numeric(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_part(&self) -> f64 {
        self.numeric
    }

    pub fn coefficient(&self, label: &Label) -> f64 {
        self.vars.get(label).copied().unwrap_or(0.0)
    }

    pub fn variables(&self) -> impl Iterator<Item = (&Label, f64)> {
        self.vars.iter().map(|(l, &c)| (l, c))
    }

    pub fn evaluate<S: Scalar>(&self, assignment: &BTreeMap<Label, S>) -> Result<S> {
        let mut total = S::of(self.numeric);
        for (label, &c) in &self.vars {
            let x = assignment
                .get(label)
                .ok_or_else(|| Error::MissingVariable(label.clone()))?;
            total = total + S::of(c) * *x;
        }
        Ok(total)
    }
}

impl AddAssign<&RateExpr> for RateExpr {
    fn add_assign(&mut self, rhs: &RateExpr) {
        self.numeric += rhs.numeric;
        for (l, c) in &rhs.vars {
            *self.vars.entry(l.clone()).or_insert(0.0) += c;
        }
    }
}

impl Add for RateExpr {
    type Output = RateExpr;

    fn add(mut self, rhs: RateExpr) -> RateExpr {
        self += &rhs;
        self
    }
}

fn fmt_coefficient(c: f64) -> String {
    if c == 1.0 {
        String::new()
    } else {
        format!("{c}")
    }
}

impl fmt::Display for RateExpr {
    /// `2x_a + 3`, variables first in label order, `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .vars
            .iter()
            .map(|(l, &c)| format!("{}x_{l}", fmt_coefficient(c)))
            .collect();
        if self.numeric != 0.0 || parts.is_empty() {
            parts.push(format!("{}", self.numeric));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Rate;

    #[test]
    fn same_label_variables_merge() {
        let a = Label::new("a");
        let e = RateExpr::of_transition(&a, RateSpec::Passive, 1) + RateExpr::of_transition(&a, RateSpec::Passive, 1);
        assert_eq!(e.to_string(), "2x_a");
        assert_eq!(e.coefficient(&a), 2.0);
    }

    #[test]
    fn mixed_expression() {
        let e = RateExpr::var(Label::new("a"), 1.0)
            + RateExpr::of_transition(&Label::new("b"), RateSpec::Const(Rate::new(3.0).unwrap()), 1);
        assert_eq!(e.to_string(), "x_a + 3");
        let assign: BTreeMap<Label, f64> = [(Label::new("a"), 0.5)].into_iter().collect();
        assert_eq!(e.evaluate(&assign).unwrap(), 3.5);
        assert!(matches!(
            e.evaluate::<f64>(&BTreeMap::new()),
            Err(Error::MissingVariable(l)) if l.as_str() == "a"
        ));
    }

    #[test]
    fn zero() {
        assert!(RateExpr::zero().is_zero());
        assert_eq!(RateExpr::zero().to_string(), "0");
    }
}

use std::collections::HashSet;

use indexmap::IndexMap;

use super::ast::{Equation, Model, Prefix, Term};

/// Rewrites every equation into the strict grammar, where prefixes continue
/// only with `0` or an identifier. Intermediate states get fresh names
/// `Parent#k`, numbered in depth-first order per top-level equation.
/// Strict equations are left untouched.
pub fn desugar(model: &Model) -> Model {
    let mut taken: HashSet<String> = model
        .equations
        .keys()
        .chain(model.systems.keys())
        .chain(model.constants.keys())
        .cloned()
        .collect();

    let mut equations = IndexMap::new();
    for (name, eq) in &model.equations {
        let mut ctx = Fresh {
            parent: name,
            next: 1,
            taken: &mut taken,
            out: Vec::new(),
        };
        let body = ctx.top(&eq.term);
        equations.insert(
            name.clone(),
            Equation {
                term: body,
                pos: eq.pos,
            },
        );
        for (fresh, term) in ctx.out {
            let term = term.expect("every reserved name is filled");
            equations.insert(fresh, Equation { term, pos: eq.pos });
        }
    }

    Model {
        constants: model.constants.clone(),
        equations,
        systems: model.systems.clone(),
    }
}

/// Desugars a standalone term, adding any fresh equations to `model`.
pub fn desugar_term(term: &Term, hint: &str, model: &mut Model) -> Term {
    let mut taken: HashSet<String> = model.equations.keys().chain(model.systems.keys()).cloned().collect();
    let mut ctx = Fresh {
        parent: hint,
        next: 1,
        taken: &mut taken,
        out: Vec::new(),
    };
    let body = ctx.top(term);
    for (fresh, t) in ctx.out {
        model.define(fresh, t.expect("every reserved name is filled"));
    }
    body
}

struct Fresh<'a> {
    parent: &'a str,
    next: usize,
    taken: &'a mut HashSet<String>,
    out: Vec<(String, Option<Term>)>,
}

impl Fresh<'_> {
    fn reserve(&mut self) -> (String, usize) {
        loop {
            let candidate = format!("{}#{}", self.parent, self.next);
            self.next += 1;
            if self.taken.insert(candidate.clone()) {
                self.out.push((candidate.clone(), None));
                return (candidate, self.out.len() - 1);
            }
        }
    }

    fn top(&mut self, term: &Term) -> Term {
        match term {
            Term::Nil | Term::Ident(_) => term.clone(),
            Term::Choice(branches) => Term::Choice(
                branches
                    .iter()
                    .map(|p| Prefix {
                        label: p.label.clone(),
                        rate: p.rate,
                        cont: self.atom(&p.cont),
                    })
                    .collect(),
            ),
            Term::Closure(body, label, rate) => Term::Closure(Box::new(self.top(body)), label.clone(), *rate),
        }
    }

    fn atom(&mut self, cont: &Term) -> Term {
        match cont {
            Term::Nil | Term::Ident(_) => cont.clone(),
            _ => {
                let (name, slot) = self.reserve();
                let body = self.top(cont);
                self.out[slot].1 = Some(body);
                Term::Ident(name)
            }
        }
    }
}

use std::fmt::{self, Write};

use super::ast::{Prefix, Term};

/// Renders a term in the concrete model syntax; the output parses back to a
/// structurally congruent term.
pub fn format_term(term: &Term) -> String {
    let mut out = String::new();
    write_term(term, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_term(self))
    }
}

fn write_term(term: &Term, out: &mut String) {
    match term {
        Term::Nil => out.push('0'),
        Term::Ident(name) => out.push_str(name),
        Term::Choice(branches) => {
            for (i, p) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_prefix(p, out);
            }
        }
        Term::Closure(body, label, rate) => {
            match body.as_ref() {
                Term::Ident(_) | Term::Closure(..) => write_term(body, out),
                _ => {
                    out.push('(');
                    write_term(body, out);
                    out.push(')');
                }
            }
            let _ = write!(out, "[{label} <- {rate}]");
        }
    }
}

fn write_prefix(p: &Prefix, out: &mut String) {
    let _ = write!(out, "({},{}).", p.label, p.rate);
    match &p.cont {
        Term::Nil | Term::Ident(_) => write_term(&p.cont, out),
        Term::Choice(inner) if inner.len() == 1 => write_prefix(&inner[0], out),
        other => {
            out.push('(');
            write_term(other, out);
            out.push(')');
        }
    }
}

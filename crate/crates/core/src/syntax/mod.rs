//! Model files: the abstract syntax of simple processes, the `.sspa` text
//! format, normalization to the strict grammar and pretty-printing.
//!
//! ```text
//! model    := (let | def | system)*
//! let      := "let" IDENT "=" NUMBER ";"
//! def      := IDENT "=" term ";"
//! system   := "system" IDENT "=" "coop" "{" labels? "}" "(" IDENT ("," IDENT)* ")" ";"
//! term     := sum | closed
//! closed   := ("0" | IDENT | "(" term ")") ("[" LABEL "<-" rate "]")*
//! sum      := prefix ("+" prefix)*
//! prefix   := "(" LABEL "," (rate | "?") ")" "." cont
//! cont     := prefix | closed
//! rate     := NUMBER | IDENT        // a positive literal or a `let` constant
//! ```

mod ast;
mod desugar;
mod format;
mod lexer;
mod parser;

pub use ast::{Equation, Label, Model, Pos, Prefix, Rate, RateSpec, SystemDecl, Term};
pub use desugar::{desugar, desugar_term};
pub use format::format_term;
pub use parser::{parse_model, parse_term};

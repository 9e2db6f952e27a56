use std::collections::BTreeSet;

use super::ast::{Equation, Label, Model, Pos, Prefix, Rate, RateSpec, SystemDecl, Term};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};

/// Parses a model file. Terms may still use nested prefixes; run
/// [`desugar`](super::desugar) before analysis.
pub fn parse_model(text: &str) -> Result<Model> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        model: Model::new(),
        refs: Vec::new(),
    };
    parser.model()?;
    parser.check_references()?;
    Ok(parser.model)
}

/// Parses a single term. Identifiers are not resolved and `let` constants
/// are unavailable.
pub fn parse_term(text: &str) -> Result<Term> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        model: Model::new(),
        refs: Vec::new(),
    };
    let term = parser.term()?;
    parser.expect(Tok::Eof)?;
    Ok(term)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    model: Model,
    /// Identifier references with their positions, resolved after the whole
    /// file is read so that definitions may appear in any order.
    refs: Vec<(String, Pos, bool)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.tokens[self.at];
        Pos {
            line: t.line,
            col: t.col,
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Syntax {
            line: p.line,
            col: p.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok((name, pos))
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn check_fresh(&self, name: &str, pos: Pos) -> Result<()> {
        if self.model.equations.contains_key(name)
            || self.model.systems.contains_key(name)
            || self.model.constants.contains_key(name)
        {
            return Err(Error::DuplicateDefinition {
                name: name.to_string(),
                line: pos.line,
                col: pos.col,
            });
        }
        Ok(())
    }

    fn model(&mut self) -> Result<()> {
        loop {
            match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) if kw == "let" && matches!(self.peek_at(1), Tok::Ident(_)) => self.constant()?,
                Tok::Ident(kw) if kw == "system" && matches!(self.peek_at(1), Tok::Ident(_)) => self.system()?,
                Tok::Ident(_) => self.definition()?,
                other => return self.error(format!("expected a definition, found {}", other.describe())),
            }
        }
    }

    fn constant(&mut self) -> Result<()> {
        self.bump();
        let (name, pos) = self.ident()?;
        self.check_fresh(&name, pos)?;
        self.expect(Tok::Eq)?;
        let value = self.positive_number()?;
        self.expect(Tok::Semi)?;
        self.model.constants.insert(name, value.value());
        Ok(())
    }

    fn definition(&mut self) -> Result<()> {
        let (name, pos) = self.ident()?;
        self.check_fresh(&name, pos)?;
        self.expect(Tok::Eq)?;
        let term = self.term()?;
        self.expect(Tok::Semi)?;
        self.model.equations.insert(name, Equation { term, pos });
        Ok(())
    }

    fn system(&mut self) -> Result<()> {
        self.bump();
        let (name, pos) = self.ident()?;
        self.check_fresh(&name, pos)?;
        self.expect(Tok::Eq)?;
        match self.peek() {
            Tok::Ident(kw) if kw == "coop" => {
                self.bump();
            }
            other => return self.error(format!("expected `coop`, found {}", other.describe())),
        }
        self.expect(Tok::LBrace)?;
        let mut coop = BTreeSet::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let (label, _) = self.ident()?;
                coop.insert(Label::new(label));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::LParen)?;
        let mut components = Vec::new();
        loop {
            let (component, cpos) = self.ident()?;
            self.refs.push((component.clone(), cpos, true));
            components.push(component);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Semi)?;
        self.model.systems.insert(name, SystemDecl { coop, components, pos });
        Ok(())
    }

    /// `(` IDENT `,` starts a prefix; any other `(` opens a parenthesized term.
    fn at_prefix(&self) -> bool {
        *self.peek() == Tok::LParen && matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Comma
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        if self.at_prefix() {
            let mut branches = vec![self.prefix()?];
            while *self.peek() == Tok::Plus {
                self.bump();
                if !self.at_prefix() {
                    return self.error("expected a prefix `(label, rate)` after `+`");
                }
                branches.push(self.prefix()?);
            }
            return Ok(Term::Choice(branches));
        }
        self.closed()
    }

    /// `0`, an identifier or a parenthesized term, followed by any number of
    /// closures.
    fn closed(&mut self) -> Result<Term> {
        let pos = self.pos();
        let mut term = match self.peek().clone() {
            Tok::Number(n) if n == "0" => {
                self.bump();
                Term::Nil
            }
            Tok::Ident(name) => {
                self.bump();
                self.refs.push((name.clone(), pos, false));
                Term::Ident(name)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                inner
            }
            other => return self.error(format!("expected a process term, found {}", other.describe())),
        };
        while *self.peek() == Tok::LBracket {
            self.bump();
            let (label, _) = self.ident()?;
            self.expect(Tok::Arrow)?;
            let rate = self.rate_value()?;
            self.expect(Tok::RBracket)?;
            term = Term::Closure(Box::new(term), Label::new(label), rate);
        }
        Ok(term)
    }

    fn prefix(&mut self) -> Result<Prefix> {
        self.expect(Tok::LParen)?;
        let (label, _) = self.ident()?;
        self.expect(Tok::Comma)?;
        let rate = if *self.peek() == Tok::Question {
            self.bump();
            RateSpec::Passive
        } else {
            RateSpec::Const(self.rate_value()?)
        };
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        let cont = self.continuation()?;
        Ok(Prefix::new(Label::new(label), rate, cont))
    }

    fn continuation(&mut self) -> Result<Term> {
        if self.at_prefix() {
            let p = self.prefix()?;
            return Ok(Term::Choice(vec![p]));
        }
        self.closed()
    }

    /// A positive numeric literal or a `let` constant.
    fn rate_value(&mut self) -> Result<Rate> {
        match self.peek().clone() {
            Tok::Ident(name) => match self.model.constants.get(&name) {
                Some(&v) => {
                    self.bump();
                    Ok(Rate::new(v).expect("constants are validated when declared"))
                }
                None => {
                    let pos = self.pos();
                    Err(Error::UndefinedIdentifier {
                        name,
                        line: pos.line,
                        col: pos.col,
                    })
                }
            },
            _ => self.positive_number(),
        }
    }

    fn positive_number(&mut self) -> Result<Rate> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(text) => {
                let value: f64 = match text.parse() {
                    Ok(v) => v,
                    Err(_) => return self.error(format!("malformed number `{text}`")),
                };
                self.bump();
                Rate::new(value).ok_or(Error::NonPositiveRate {
                    value: text,
                    line: pos.line,
                    col: pos.col,
                })
            }
            other => self.error(format!("expected a rate, found {}", other.describe())),
        }
    }

    fn check_references(&self) -> Result<()> {
        for (name, pos, component) in &self.refs {
            let is_system = *component && self.model.systems.contains_key(name);
            if !self.model.equations.contains_key(name) && !is_system {
                return Err(Error::UndefinedIdentifier {
                    name: name.clone(),
                    line: pos.line,
                    col: pos.col,
                });
            }
        }
        // Systems may nest other systems but not themselves.
        for (name, sys) in &self.model.systems {
            let mut stack: Vec<&str> = sys.components.iter().map(String::as_str).collect();
            let mut seen = BTreeSet::new();
            while let Some(c) = stack.pop() {
                if c == name {
                    return Err(Error::Syntax {
                        line: sys.pos.line,
                        col: sys.pos.col,
                        message: format!("system `{name}` contains itself"),
                    });
                }
                if let Some(inner) = self.model.systems.get(c) {
                    if seen.insert(c) {
                        stack.extend(inner.components.iter().map(String::as_str));
                    }
                }
            }
        }
        Ok(())
    }
}

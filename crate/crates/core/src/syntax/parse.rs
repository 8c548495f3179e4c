//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" iff)?
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | binder | primary
//! binder  := ("all" | "ex") var "." formula
//! primary := "_|_" | "T" | "(" formula ")" | Pred ("(" terms ")")? | term "=" term
//! term    := var | f ("(" terms ")")? | "eps" var "." formula | "(" term ")"
//! ```
//!
//! Binder bodies extend as far right as possible. Without a signature,
//! bare identifiers starting with `u`..`z` or `_` are variables, other
//! lowercase identifiers are constants or function symbols, and uppercase
//! identifiers are predicates.

use super::{Formula, Signature, Sym, SyntaxError, Term, Var};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    EqSign,
    Bot,
}

const KEYWORDS: [&str; 4] = ["all", "ex", "eps", "T"];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'=' => Tok::EqSign,
            b'-' if src[i..].starts_with("->") => {
                i += 2;
                out.push((Tok::Imp, start));
                continue;
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                out.push((Tok::Iff, start));
                continue;
            }
            b'_' if src[i..].starts_with("_|_") => {
                i += 3;
                out.push((Tok::Bot, start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(SyntaxError::Parse { pos: i, message: alloc::format!("unexpected character `{}`", c as char) })
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

/// Parser over one input string, optionally checked against a signature.
pub struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    sig: Option<&'a Signature>,
}

pub fn parse_formula(src: &str, sig: Option<&Signature>) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(src, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(src: &str, sig: Option<&Signature>) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sig: Option<&'a Signature>) -> Result<Parser<'a>, SyntaxError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len(), sig })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { pos: self.offset(), message: message.to_string() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&alloc::format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    pub fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        match self.peek() {
            Some(Tok::Ident(k)) if k == "all" || k == "ex" => {
                let forall = k == "all";
                self.pos += 1;
                let (x, body, at) = self.binder_tail()?;
                let f = if forall { Formula::forall(x, body) } else { Formula::exists(x, body) };
                f.map_err(|e| with_pos(e, at))
            }
            _ => self.primary(),
        }
    }

    fn binder_tail(&mut self) -> Result<(Var, Formula, usize), SyntaxError> {
        let at = self.offset();
        let x = match self.peek() {
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => Var::new(name),
            _ => return self.err("expected a bound variable"),
        };
        self.pos += 1;
        if let Some(sig) = self.sig {
            if sig.function_arity(x.name()).is_some() {
                return self.err("a function symbol cannot be bound");
            }
        }
        self.expect(&Tok::Dot, "`.` after the bound variable")?;
        let body = self.formula()?;
        Ok((x, body, at))
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(k)) if k == "T" => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::LParen) => {
                let save = self.pos;
                self.pos += 1;
                if let Ok(f) = self.formula() {
                    if self.eat(&Tok::RParen) && self.peek() != Some(&Tok::EqSign) {
                        return Ok(f);
                    }
                }
                self.pos = save;
                self.equation()
            }
            Some(Tok::Ident(name)) if self.is_predicate(name) => {
                let name = name.clone();
                let at = self.offset();
                self.pos += 1;
                let args = if self.peek() == Some(&Tok::LParen) { self.arguments()? } else { Vec::new() };
                self.check_arity(&name, args.len(), at, true)?;
                Ok(Formula::Atom(Sym::new(&name), args))
            }
            Some(_) => self.equation(),
            None => self.err("unexpected end of input"),
        }
    }

    fn equation(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.offset();
        let l = self.term()?;
        if !self.eat(&Tok::EqSign) {
            return self.err("expected `=` or a connective");
        }
        if let Some(sig) = self.sig {
            if !sig.identity {
                return Err(SyntaxError::UndeclaredSymbol { pos: Some(at), name: "=".to_string() });
            }
        }
        let r = self.term()?;
        Ok(Formula::Eq(l, r))
    }

    fn is_predicate(&self, name: &str) -> bool {
        if KEYWORDS.contains(&name) {
            return false;
        }
        match self.sig {
            Some(sig) => sig.predicate_arity(name).is_some(),
            None => name.starts_with(|c: char| c.is_ascii_uppercase()),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, SyntaxError> {
        self.expect(&Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma, "`,` or `)`")?;
        }
    }

    fn check_arity(&self, name: &str, found: usize, at: usize, predicate: bool) -> Result<(), SyntaxError> {
        let Some(sig) = self.sig else { return Ok(()) };
        let declared = if predicate { sig.predicate_arity(name) } else { sig.function_arity(name) };
        match declared {
            None => Err(SyntaxError::UndeclaredSymbol { pos: Some(at), name: name.to_string() }),
            Some(expected) if expected != found => {
                Err(SyntaxError::ArityMismatch { pos: Some(at), name: name.to_string(), expected, found })
            }
            Some(_) => Ok(()),
        }
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(k)) if k == "eps" => {
                self.pos += 1;
                let (x, body, at) = self.binder_tail()?;
                Term::eps(x, body).map_err(|e| with_pos(e, at))
            }
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                let at = self.offset();
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let args = self.arguments()?;
                    if self.sig.is_none() && name.starts_with(|c: char| c.is_ascii_uppercase()) {
                        return Err(SyntaxError::Parse { pos: at, message: "predicate used as a term".to_string() });
                    }
                    self.check_arity(&name, args.len(), at, false)?;
                    return Ok(Term::App(Sym::new(&name), args));
                }
                if self.is_constant(&name) {
                    self.check_arity(&name, 0, at, false)?;
                    Ok(Term::App(Sym::new(&name), Vec::new()))
                } else {
                    Ok(Term::Var(Var::new(&name)))
                }
            }
            Some(Tok::Ident(_)) => self.err("unexpected keyword"),
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn is_constant(&self, name: &str) -> bool {
        match self.sig {
            Some(sig) => sig.function_arity(name).is_some(),
            None => {
                let first = name.as_bytes()[0];
                !(first == b'_' || (b'u'..=b'z').contains(&first))
            }
        }
    }
}

fn with_pos(e: SyntaxError, at: usize) -> SyntaxError {
    match e {
        SyntaxError::VacuousBinder { var, .. } => SyntaxError::VacuousBinder { pos: Some(at), var },
        SyntaxError::ShadowedBinder { var, .. } => SyntaxError::ShadowedBinder { pos: Some(at), var },
        other => other,
    }
}

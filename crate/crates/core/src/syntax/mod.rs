//! Terms and formulas of the epsilon calculus with quantifiers.
//!
//! The public AST uses named variables. Everything that must be insensitive
//! to renaming of bound variables (comparison, set membership, matching) goes
//! through the binder-index form in [`canon`].

pub mod canon;
mod parse;
mod print;
pub mod subst;
pub mod subterm;
pub mod types;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use canon::{CFormula, CTerm};
pub use parse::{parse_formula, parse_term, Parser};
pub use subst::fresh_var;
pub use subterm::Occurrence;
pub use types::EpsilonType;

/// A variable, compared by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A function or predicate symbol name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Sym {
        Sym(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// Function application; constants are nullary applications.
    App(Sym, Vec<Term>),
    /// `eps x. A`
    Eps(Var, Box<Formula>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Sym, Vec<Term>),
    Eq(Term, Term),
    Bot,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Either kind of expression, for operations defined on both.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Term(Term),
    Formula(Formula),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinderKind {
    Epsilon,
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxError {
    Parse { pos: usize, message: String },
    UndeclaredSymbol { pos: Option<usize>, name: String },
    ArityMismatch { pos: Option<usize>, name: String, expected: usize, found: usize },
    /// The bound variable has no free occurrence in the body.
    VacuousBinder { pos: Option<usize>, var: String },
    /// The bound variable is bound again inside the body.
    ShadowedBinder { pos: Option<usize>, var: String },
    IdentityNotInLanguage,
    EpsilonNotInLanguage,
    QuantifierNotInLanguage,
    NotEpsilonTerm,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |pos: &Option<usize>| match pos {
            Some(p) => alloc::format!(" at offset {p}"),
            None => String::new(),
        };
        match self {
            SyntaxError::Parse { pos, message } => write!(f, "syntax error at offset {pos}: {message}"),
            SyntaxError::UndeclaredSymbol { pos, name } => {
                write!(f, "undeclared symbol `{name}`{}", at(pos))
            }
            SyntaxError::ArityMismatch { pos, name, expected, found } => write!(
                f,
                "`{name}` expects {expected} argument(s), found {found}{}",
                at(pos)
            ),
            SyntaxError::VacuousBinder { pos, var } => {
                write!(f, "bound variable `{var}` does not occur free in the body{}", at(pos))
            }
            SyntaxError::ShadowedBinder { pos, var } => {
                write!(f, "bound variable `{var}` is rebound inside the body{}", at(pos))
            }
            SyntaxError::IdentityNotInLanguage => f.write_str("identity is not part of the language"),
            SyntaxError::EpsilonNotInLanguage => f.write_str("epsilon terms are not part of the language"),
            SyntaxError::QuantifierNotInLanguage => f.write_str("quantifiers are not part of the language"),
            SyntaxError::NotEpsilonTerm => f.write_str("not an epsilon term"),
        }
    }
}

impl core::error::Error for SyntaxError {}

fn check_binder(x: &Var, body: &Formula) -> Result<(), SyntaxError> {
    if !body.occurs_free(x) {
        return Err(SyntaxError::VacuousBinder { pos: None, var: x.name().to_string() });
    }
    if body.binds(x) {
        return Err(SyntaxError::ShadowedBinder { pos: None, var: x.name().to_string() });
    }
    Ok(())
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Sym::new(f), args)
    }

    pub fn constant(c: &str) -> Term {
        Term::App(Sym::new(c), Vec::new())
    }

    /// `eps x. body`, enforcing the binder condition.
    pub fn eps(x: Var, body: Formula) -> Result<Term, SyntaxError> {
        check_binder(&x, &body)?;
        Ok(Term::Eps(x, Box::new(body)))
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Term::Eps(..))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.occurs_free(x)),
            Term::Eps(y, body) => y != x && body.occurs_free(x),
        }
    }

    /// Whether some binder inside this term binds `x`.
    pub fn binds(&self, x: &Var) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.binds(x)),
            Term::Eps(y, body) => y == x || body.binds(x),
        }
    }

    /// Every variable name occurring in the term, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    pub(crate) fn collect_all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_all_vars(out)),
            Term::Eps(y, body) => {
                out.insert(y.clone());
                body.collect_all_vars(out);
            }
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Term::Eps(y, body) => {
                bound.push(y.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Checks the binder condition on every binder in the term.
    pub fn check_binders(&self) -> Result<(), SyntaxError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(_, args) => args.iter().try_for_each(|a| a.check_binders()),
            Term::Eps(x, body) => {
                check_binder(x, body)?;
                body.check_binders()
            }
        }
    }

    /// Whether an epsilon term occurs anywhere inside.
    pub fn contains_eps(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_eps()),
            Term::Eps(..) => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Eps(_, body) => 1 + body.size(),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.canon() == other.canon()
    }
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Sym::new(p), args)
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Eq(l, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(x: Var, body: Formula) -> Result<Formula, SyntaxError> {
        check_binder(&x, &body)?;
        Ok(Formula::Forall(x, Box::new(body)))
    }

    pub fn exists(x: Var, body: Formula) -> Result<Formula, SyntaxError> {
        check_binder(&x, &body)?;
        Ok(Formula::Exists(x, Box::new(body)))
    }

    /// Right-nested disjunction; `_|_` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Bot;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Right-nested implication chain `p1 -> (p2 -> ... -> concl)`.
    pub fn imp_chain(premises: impl IntoIterator<Item = Formula>, concl: Formula) -> Formula {
        let premises: Vec<Formula> = premises.into_iter().collect();
        premises.into_iter().rev().fold(concl, |acc, p| Formula::imp(p, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, x: &Var) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.occurs_free(x)),
            Formula::Eq(l, r) => l.occurs_free(x) || r.occurs_free(x),
            Formula::Bot | Formula::Top => false,
            Formula::Not(a) => a.occurs_free(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.occurs_free(x) || b.occurs_free(x)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => y != x && body.occurs_free(x),
        }
    }

    pub fn binds(&self, x: &Var) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.binds(x)),
            Formula::Eq(l, r) => l.binds(x) || r.binds(x),
            Formula::Bot | Formula::Top => false,
            Formula::Not(a) => a.binds(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.binds(x) || b.binds(x)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => y == x || body.binds(x),
        }
    }

    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    pub(crate) fn collect_all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_all_vars(out)),
            Formula::Eq(l, r) => {
                l.collect_all_vars(out);
                r.collect_all_vars(out);
            }
            Formula::Bot | Formula::Top => {}
            Formula::Not(a) => a.collect_all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                out.insert(y.clone());
                body.collect_all_vars(out);
            }
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Formula::Eq(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Bot | Formula::Top => {}
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                bound.push(y.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn check_binders(&self) -> Result<(), SyntaxError> {
        match self {
            Formula::Atom(_, args) => args.iter().try_for_each(|a| a.check_binders()),
            Formula::Eq(l, r) => {
                l.check_binders()?;
                r.check_binders()
            }
            Formula::Bot | Formula::Top => Ok(()),
            Formula::Not(a) => a.check_binders(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.check_binders()?;
                b.check_binders()
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                check_binder(x, body)?;
                body.check_binders()
            }
        }
    }

    pub fn contains_eps(&self) -> bool {
        let mut found = false;
        self.visit_terms(&mut |t| found |= t.contains_eps());
        found
    }

    pub fn contains_quantifier(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(term_contains_quantifier),
            Formula::Eq(l, r) => term_contains_quantifier(l) || term_contains_quantifier(r),
            Formula::Bot | Formula::Top => false,
            Formula::Not(a) => a.contains_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.contains_quantifier() || b.contains_quantifier()
            }
            Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    pub fn contains_identity(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(term_contains_identity),
            Formula::Eq(..) => true,
            Formula::Bot | Formula::Top => false,
            Formula::Not(a) => a.contains_identity(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.contains_identity() || b.contains_identity()
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.contains_identity(),
        }
    }

    /// Calls `f` on every maximal term position of the formula (atom and
    /// identity arguments), not descending into the terms themselves.
    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(&mut *f),
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Bot | Formula::Top => {}
            Formula::Not(a) => a.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.visit_terms(f),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq(l, r) => 1 + l.size() + r.size(),
            Formula::Bot | Formula::Top => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canon() == other.canon()
    }

    /// Splits a right-nested disjunction into its disjuncts.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Formula::Or(a, b) = cur {
            out.push(&**a);
            cur = b;
        }
        out.push(cur);
        out
    }
}

fn term_contains_quantifier(t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(_, args) => args.iter().any(term_contains_quantifier),
        Term::Eps(_, body) => body.contains_quantifier(),
    }
}

fn term_contains_identity(t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(_, args) => args.iter().any(term_contains_identity),
        Term::Eps(_, body) => body.contains_identity(),
    }
}

impl Expr {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Expr::Term(t) => t.free_vars(),
            Expr::Formula(f) => f.free_vars(),
        }
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Term(a), Expr::Term(b)) => a.alpha_eq(b),
            (Expr::Formula(a), Expr::Formula(b)) => a.alpha_eq(b),
            _ => false,
        }
    }

    pub fn substitute(&self, x: &Var, t: &Term) -> Expr {
        match self {
            Expr::Term(s) => Expr::Term(s.substitute(x, t)),
            Expr::Formula(f) => Expr::Formula(f.substitute(x, t)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => t.fmt(f),
            Expr::Formula(a) => a.fmt(f),
        }
    }
}

/// Function and predicate symbols with arities, plus language flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    functions: BTreeMap<Sym, usize>,
    predicates: BTreeMap<Sym, usize>,
    pub identity: bool,
    pub epsilon: bool,
    pub quantifiers: bool,
}

impl Default for Signature {
    fn default() -> Self {
        Signature {
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
            identity: true,
            epsilon: true,
            quantifiers: true,
        }
    }
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Signature {
        self.functions.insert(Sym::new(name), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Signature {
        self.predicates.insert(Sym::new(name), arity);
        self
    }

    pub fn with_identity(mut self, identity: bool) -> Signature {
        self.identity = identity;
        self
    }

    /// Adds a symbol; fails if a symbol of the same kind is already declared
    /// with a different arity.
    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        declare(&mut self.functions, name, arity)
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        declare(&mut self.predicates, name, arity)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.functions.iter().map(|(s, a)| (s, *a))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.predicates.iter().map(|(s, a)| (s, *a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &Sym> {
        self.functions.iter().filter(|(_, a)| **a == 0).map(|(s, _)| s)
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let arity = self.function_arity(f.name()).ok_or_else(|| SyntaxError::UndeclaredSymbol {
                    pos: None,
                    name: f.name().to_string(),
                })?;
                if arity != args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        pos: None,
                        name: f.name().to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Term::Eps(x, body) => {
                if !self.epsilon {
                    return Err(SyntaxError::EpsilonNotInLanguage);
                }
                check_binder(x, body)?;
                self.check_formula(body)
            }
        }
    }

    /// Checks that the formula is well formed over this signature.
    pub fn check_formula(&self, a: &Formula) -> Result<(), SyntaxError> {
        match a {
            Formula::Atom(p, args) => {
                let arity = self.predicate_arity(p.name()).ok_or_else(|| SyntaxError::UndeclaredSymbol {
                    pos: None,
                    name: p.name().to_string(),
                })?;
                if arity != args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        pos: None,
                        name: p.name().to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(l, r) => {
                if !self.identity {
                    return Err(SyntaxError::IdentityNotInLanguage);
                }
                self.check_term(l)?;
                self.check_term(r)
            }
            Formula::Bot | Formula::Top => Ok(()),
            Formula::Not(b) => self.check_formula(b),
            Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) | Formula::Iff(b, c) => {
                self.check_formula(b)?;
                self.check_formula(c)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                if !self.quantifiers {
                    return Err(SyntaxError::QuantifierNotInLanguage);
                }
                check_binder(x, body)?;
                self.check_formula(body)
            }
        }
    }

    /// The smallest signature declaring every symbol used in the formulas.
    pub fn infer<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new().with_identity(false);
        for f in formulas {
            sig.absorb_formula(f)?;
        }
        Ok(sig)
    }

    fn absorb_term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                self.declare_function(f.name(), args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
            Term::Eps(_, body) => self.absorb_formula(body),
        }
    }

    fn absorb_formula(&mut self, a: &Formula) -> Result<(), SyntaxError> {
        match a {
            Formula::Atom(p, args) => {
                self.declare_predicate(p.name(), args.len())?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
            Formula::Eq(l, r) => {
                self.identity = true;
                self.absorb_term(l)?;
                self.absorb_term(r)
            }
            Formula::Bot | Formula::Top => Ok(()),
            Formula::Not(b) => self.absorb_formula(b),
            Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) | Formula::Iff(b, c) => {
                self.absorb_formula(b)?;
                self.absorb_formula(c)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => self.absorb_formula(body),
        }
    }
}

fn declare(map: &mut BTreeMap<Sym, usize>, name: &str, arity: usize) -> Result<(), SyntaxError> {
    match map.get(name) {
        Some(&a) if a != arity => Err(SyntaxError::ArityMismatch {
            pos: None,
            name: name.to_string(),
            expected: a,
            found: arity,
        }),
        _ => {
            map.insert(Sym::new(name), arity);
            Ok(())
        }
    }
}

impl core::borrow::Borrow<str> for Sym {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl core::borrow::Borrow<str> for Var {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        assert!(parse_term("eps x. P(x)", None).unwrap().free_vars().is_empty());
        let t = parse_term("eps x. R(x,y)", None).unwrap();
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), alloc::vec![Var::new("y")]);
        assert!(parse_term("eps x. ~R(x, eps y. R(x,y))", None).unwrap().free_vars().is_empty());
    }

    #[test]
    fn binder_condition_on_construction() {
        let body = p("P(c)");
        assert!(matches!(Formula::forall(Var::new("x"), body), Err(SyntaxError::VacuousBinder { .. })));
        let shadow = Formula::Exists(Var::new("x"), Box::new(p("P(x)")));
        let body = Formula::and(p("Q(x)"), shadow);
        assert!(matches!(Term::eps(Var::new("x"), body), Err(SyntaxError::ShadowedBinder { .. })));
    }

    #[test]
    fn signature_inference_and_checking() {
        let f = p("all x. P(f(x), c) -> x = c");
        let sig = Signature::infer([&f]).unwrap();
        assert_eq!(sig.function_arity("f"), Some(1));
        assert_eq!(sig.function_arity("c"), Some(0));
        assert_eq!(sig.predicate_arity("P"), Some(2));
        assert!(sig.identity);
        assert!(sig.check_formula(&f).is_ok());
        let narrow = Signature::new().with_predicate("P", 1).with_function("c", 0).with_function("f", 1);
        assert!(matches!(narrow.check_formula(&f), Err(SyntaxError::ArityMismatch { .. })));
    }

    #[test]
    fn disjunction_and_chain_shapes() {
        let d = Formula::disjunction([p("P(a)"), p("P(b)"), p("P(c)")]);
        assert_eq!(d, p("P(a) | (P(b) | P(c))"));
        assert_eq!(d.disjuncts().len(), 3);
        let c = Formula::imp_chain([p("P(a)"), p("P(b)")], p("P(c)"));
        assert_eq!(c, p("P(a) -> P(b) -> P(c)"));
    }
}

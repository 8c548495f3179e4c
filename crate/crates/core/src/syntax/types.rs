//! Epsilon types, degree and rank.

use super::canon::CTerm;
use super::{Formula, SyntaxError, Term, Var};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// The type of an epsilon term: the term with its immediate subterm
/// occurrences abstracted into argument slots `_x1, …, _xn` (left to right).
///
/// Patterns are stored with canonical bound-variable names, so two terms have
/// the same type iff their patterns are syntactically equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsilonType {
    pub pattern: Term,
    pub argvars: Vec<Var>,
}

impl EpsilonType {
    pub fn arity(&self) -> usize {
        self.argvars.len()
    }

    /// The pattern with `args` plugged into the slots.
    pub fn instantiate(&self, args: &[Term]) -> Term {
        assert_eq!(args.len(), self.argvars.len(), "slot count mismatch");
        let map: BTreeMap<Var, Term> = self.argvars.iter().cloned().zip(args.iter().cloned()).collect();
        self.pattern.substitute_many(&map)
    }

    /// Printed pattern; used as the key of intensional choice operators.
    pub fn key(&self) -> String {
        format!("{}", self.pattern)
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.pattern)
    }
}

impl PartialOrd for EpsilonType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsilonType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pattern.canon().cmp(&other.pattern.canon())
    }
}

impl fmt::Debug for EpsilonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsilonType({})", self.pattern)
    }
}

pub fn argvar(i: usize) -> Var {
    Var::new(&format!("_x{i}"))
}

impl Term {
    /// The epsilon type of this term and the slot fillers, left to right.
    pub fn epsilon_type(&self) -> Result<(EpsilonType, Vec<Term>), SyntaxError> {
        let Term::Eps(x, body) = self else {
            return Err(SyntaxError::NotEpsilonTerm);
        };
        let mut args = Vec::new();
        let mut scope = alloc::vec![x.clone()];
        let abstracted = abstract_formula(body, &mut scope, &mut args);
        let raw = Term::Eps(x.clone(), Box::new(abstracted));
        let pattern = raw.canon().to_term();
        let argvars = (1..=args.len()).map(argvar).collect();
        Ok((EpsilonType { pattern, argvars }, args))
    }

    /// `0` for non-epsilon terms, else one more than the largest degree of an
    /// epsilon term nested in it (a proper subterm occurrence).
    pub fn degree(&self) -> usize {
        if !self.is_eps() {
            return 0;
        }
        1 + self
            .subterm_occurrences()
            .iter()
            .filter(|o| o.term.is_eps())
            .map(|o| o.term.degree())
            .max()
            .unwrap_or(0)
    }

    /// Rank of an epsilon term.
    pub fn rank(&self) -> Result<usize, SyntaxError> {
        if !self.is_eps() {
            return Err(SyntaxError::NotEpsilonTerm);
        }
        Ok(rank_of(self))
    }

    /// Epsilon terms subordinate to this one: those occurring in its body
    /// with the bound variable free in them.
    pub fn subordinate_terms(&self) -> Vec<Term> {
        let Term::Eps(x, body) = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        collect_eps_formula(body, &mut out);
        out.retain(|e| e.occurs_free(x));
        out
    }
}

fn rank_of(e: &Term) -> usize {
    1 + e.subordinate_terms().iter().map(rank_of).max().unwrap_or(0)
}

/// Every epsilon term occurring syntactically anywhere (any position).
fn collect_eps_term(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Var(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_eps_term(a, out)),
        Term::Eps(_, body) => {
            out.push(t.clone());
            collect_eps_formula(body, out);
        }
    }
}

fn collect_eps_formula(a: &Formula, out: &mut Vec<Term>) {
    a.visit_terms(&mut |t| collect_eps_term(t, out));
}

fn abstract_term(t: &Term, scope: &mut Vec<Var>, args: &mut Vec<Term>) -> Term {
    if !scope.iter().any(|v| t.occurs_free(v)) {
        args.push(t.clone());
        return Term::Var(argvar(args.len()));
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, xs) => Term::App(f.clone(), xs.iter().map(|a| abstract_term(a, scope, args)).collect()),
        Term::Eps(y, body) => {
            scope.push(y.clone());
            let b = abstract_formula(body, scope, args);
            scope.pop();
            Term::Eps(y.clone(), Box::new(b))
        }
    }
}

fn abstract_formula(a: &Formula, scope: &mut Vec<Var>, args: &mut Vec<Term>) -> Formula {
    macro_rules! rec {
        ($b:expr) => {
            Box::new(abstract_formula($b, scope, args))
        };
    }
    match a {
        Formula::Atom(p, xs) => Formula::Atom(p.clone(), xs.iter().map(|t| abstract_term(t, scope, args)).collect()),
        Formula::Eq(l, r) => {
            let l = abstract_term(l, scope, args);
            Formula::Eq(l, abstract_term(r, scope, args))
        }
        Formula::Bot | Formula::Top => a.clone(),
        Formula::Not(b) => Formula::Not(rec!(b)),
        Formula::And(b, c) => {
            let b = rec!(b);
            Formula::And(b, rec!(c))
        }
        Formula::Or(b, c) => {
            let b = rec!(b);
            Formula::Or(b, rec!(c))
        }
        Formula::Imp(b, c) => {
            let b = rec!(b);
            Formula::Imp(b, rec!(c))
        }
        Formula::Iff(b, c) => {
            let b = rec!(b);
            Formula::Iff(b, rec!(c))
        }
        Formula::Forall(y, body) => {
            scope.push(y.clone());
            let b = rec!(body);
            scope.pop();
            Formula::Forall(y.clone(), b)
        }
        Formula::Exists(y, body) => {
            scope.push(y.clone());
            let b = rec!(body);
            scope.pop();
            Formula::Exists(y.clone(), b)
        }
    }
}

/// Canonical key of a term, handy for maps keyed up to renaming.
pub fn key(t: &Term) -> CTerm {
    t.canon()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use alloc::vec;

    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }

    #[test]
    fn type_examples() {
        let (ty, args) = t("eps x. P(x)").epsilon_type().unwrap();
        assert!(args.is_empty());
        assert!(ty.pattern.alpha_eq(&t("eps x. P(x)")));

        let (ty, args) = t("eps x. P(x, f(c), f(c))").epsilon_type().unwrap();
        assert_eq!(args, vec![t("f(c)"), t("f(c)")]);
        assert!(ty.pattern.alpha_eq(&t("eps x. P(x, _x1, _x2)")));

        let (ty, args) = t("eps x. P(x, g(x,c))").epsilon_type().unwrap();
        assert_eq!(args, vec![t("c")]);
        assert!(ty.pattern.alpha_eq(&t("eps x. P(x, g(x, _x1))")));
    }

    #[test]
    fn equivalent_terms_share_types() {
        let (a, _) = t("eps x. R(x, eps y. Q(y))").epsilon_type().unwrap();
        let (b, _) = t("eps z. R(z, eps w. Q(w))").epsilon_type().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pattern, b.pattern);
    }

    #[test]
    fn reconstruction() {
        let e = t("eps x. R(x, f(y), eps z. Q(z, x))");
        let (ty, args) = e.epsilon_type().unwrap();
        assert!(ty.instantiate(&args).alpha_eq(&e));
        assert!(t("c").epsilon_type().is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(t("eps x. P(x)").degree(), 1);
        assert_eq!(t("eps x. P(x, eps y. Q(y))").degree(), 2);
        assert_eq!(t("f(c)").degree(), 0);
        // the inner term contains the outer bound variable, so it is not nested
        assert_eq!(t("eps x. P(x, eps y. Q(x, y))").degree(), 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(t("eps x. P(x, eps y. Q(y))").rank().unwrap(), 1);
        assert_eq!(t("eps x. P(x, eps y. Q(x,y))").rank().unwrap(), 2);
        let e = t("eps x. P(x, eps y. Q(x, eps z. R(y, z)))");
        assert_eq!(e.rank().unwrap(), 3);
        assert!(t("c").rank().is_err());
    }

    #[test]
    fn type_rank_matches_term_rank() {
        for s in ["eps x. P(x, eps y. Q(x,y), f(c))", "eps x. P(x, eps y. Q(y))", "eps x. R(x, eps y. R(y, eps z. R(z, x)))"] {
            let e = t(s);
            let (ty, _) = e.epsilon_type().unwrap();
            assert_eq!(ty.rank(), e.rank().unwrap(), "{s}");
        }
    }
}

//! The epsilon translation, removing quantifiers in favour of epsilon terms.

use crate::syntax::{Formula, Term};
use alloc::boxed::Box;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationStep {
    pub source: Formula,
    pub clause: Clause,
    /// The epsilon term introduced for the bound variable.
    pub witness: Term,
    pub result: Formula,
}

/// Quantifier steps in the order they were applied (innermost first).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationTrace {
    pub steps: Vec<TranslationStep>,
}

pub fn epsilon_translate(a: &Formula) -> (Formula, TranslationTrace) {
    let mut trace = TranslationTrace::default();
    let out = tr_formula(a, &mut trace);
    (out, trace)
}

/// Translation without the trace.
pub fn translate(a: &Formula) -> Formula {
    epsilon_translate(a).0
}

pub fn translate_term(t: &Term) -> Term {
    tr_term(t, &mut TranslationTrace::default())
}

fn tr_term(t: &Term, trace: &mut TranslationTrace) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| tr_term(a, trace)).collect()),
        Term::Eps(x, body) => Term::Eps(x.clone(), Box::new(tr_formula(body, trace))),
    }
}

fn tr_formula(a: &Formula, trace: &mut TranslationTrace) -> Formula {
    let mut rec = |b: &Formula| Box::new(tr_formula(b, trace));
    match a {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| tr_term(t, trace)).collect()),
        Formula::Eq(l, r) => Formula::Eq(tr_term(l, trace), tr_term(r, trace)),
        Formula::Bot | Formula::Top => a.clone(),
        Formula::Not(b) => Formula::Not(rec(b)),
        Formula::And(b, c) => Formula::And(rec(b), rec(c)),
        Formula::Or(b, c) => Formula::Or(rec(b), rec(c)),
        Formula::Imp(b, c) => Formula::Imp(rec(b), rec(c)),
        Formula::Iff(b, c) => Formula::Iff(rec(b), rec(c)),
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let inner = tr_formula(body, trace);
            let (clause, chosen) = match a {
                Formula::Exists(..) => (Clause::Exists, inner.clone()),
                _ => (Clause::Forall, Formula::not(inner.clone())),
            };
            let witness = Term::Eps(x.clone(), Box::new(chosen));
            let result = inner.substitute(x, &witness);
            trace.steps.push(TranslationStep { source: a.clone(), clause, witness, result: result.clone() });
            result
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }

    #[test]
    fn single_quantifiers() {
        assert_eq!(translate(&f("ex x. P(x)")), f("P(eps x. P(x))"));
        assert_eq!(translate(&f("all x. P(x)")), f("P(eps x. ~P(x))"));
    }

    #[test]
    fn nested_quantifiers() {
        let (out, trace) = epsilon_translate(&f("all x. ex y. R(x,y)"));
        let expected = f("R(eps x. ~R(x, eps z. R(x,z)), eps y. R(eps x. ~R(x, eps z. R(x,z)), y))");
        assert!(out.alpha_eq(&expected), "{out}");
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].clause, Clause::Exists);
        assert_eq!(trace.steps[1].result, out);
    }

    #[test]
    fn quantifier_free_input_is_unchanged() {
        let a = f("P(eps x. P(x)) -> Q(c)");
        assert_eq!(translate(&a), a);
    }
}

//! Values of terms and truth of formulas.

use super::{Assignment, ExtChoiceFunction, IntChoiceOperator, SemanticsError, Structure};
use crate::syntax::{Formula, Term, Var};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// What picks the value of an epsilon term.
#[derive(Clone, Copy, Debug)]
pub enum Chooser<'a> {
    Ext(&'a ExtChoiceFunction),
    Int(&'a IntChoiceOperator),
}

pub fn eval_term(m: &Structure, c: Chooser<'_>, s: &Assignment, t: &Term) -> Result<usize, SemanticsError> {
    Evaluator::new(m, c).term(s, t)
}

pub fn eval_formula(m: &Structure, c: Chooser<'_>, s: &Assignment, a: &Formula) -> Result<bool, SemanticsError> {
    Evaluator::new(m, c).formula(s, a)
}

/// Evaluation in one structure under one chooser. Epsilon types are cached
/// per term node, so reusing an evaluator across assignments is cheaper
/// than calling [`eval_formula`] repeatedly.
pub struct Evaluator<'a> {
    m: &'a Structure,
    c: Chooser<'a>,
    types: BTreeMap<usize, (String, Vec<Term>)>,
}

/// Variables bound while descending, innermost last, over a base assignment.
struct Env<'s> {
    base: &'s Assignment,
    bound: Vec<(Var, usize)>,
}

impl Env<'_> {
    fn get(&self, x: &Var) -> usize {
        self.bound.iter().rev().find(|(y, _)| y == x).map(|(_, m)| *m).unwrap_or_else(|| self.base.get(x))
    }
}

impl<'a> Evaluator<'a> {
    pub fn new(m: &'a Structure, c: Chooser<'a>) -> Evaluator<'a> {
        if let Chooser::Ext(phi) = c {
            debug_assert_eq!(phi.domain_size(), m.size());
        }
        Evaluator { m, c, types: BTreeMap::new() }
    }

    pub fn term(&mut self, s: &Assignment, t: &Term) -> Result<usize, SemanticsError> {
        let mut env = Env { base: s, bound: Vec::new() };
        self.t(&mut env, t)
    }

    pub fn formula(&mut self, s: &Assignment, a: &Formula) -> Result<bool, SemanticsError> {
        let mut env = Env { base: s, bound: Vec::new() };
        self.f(&mut env, a)
    }

    fn t(&mut self, env: &mut Env<'_>, t: &Term) -> Result<usize, SemanticsError> {
        match t {
            Term::Var(x) => Ok(env.get(x)),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.t(env, a)).collect::<Result<Vec<_>, _>>()?;
                self.m.apply(f, &vals)
            }
            Term::Eps(x, body) => {
                let mask = self.satisfiers(env, x, body)?;
                match self.c {
                    Chooser::Ext(phi) => Ok(phi.choose(mask)),
                    Chooser::Int(psi) => {
                        let key = t as *const Term as usize;
                        if !self.types.contains_key(&key) {
                            let (ty, args) = t.epsilon_type()?;
                            self.types.insert(key, (ty.key(), args));
                        }
                        let (ty, args) = self.types[&key].clone();
                        let vals = args.iter().map(|a| self.t(env, a)).collect::<Result<Vec<_>, _>>()?;
                        Ok(psi.get(&ty, &vals).choose(mask))
                    }
                }
            }
        }
    }

    /// `{m : s[x/m] satisfies body}` as a bitmask.
    fn satisfiers(&mut self, env: &mut Env<'_>, x: &Var, body: &Formula) -> Result<usize, SemanticsError> {
        let mut mask = 0;
        for m in 0..self.m.size() {
            env.bound.push((x.clone(), m));
            let r = self.f(env, body);
            env.bound.pop();
            if r? {
                mask |= 1 << m;
            }
        }
        Ok(mask)
    }

    fn f(&mut self, env: &mut Env<'_>, a: &Formula) -> Result<bool, SemanticsError> {
        Ok(match a {
            Formula::Bot => false,
            Formula::Top => true,
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|t| self.t(env, t)).collect::<Result<Vec<_>, _>>()?;
                self.m.holds(p, &vals)?
            }
            Formula::Eq(l, r) => self.t(env, l)? == self.t(env, r)?,
            Formula::Not(b) => !self.f(env, b)?,
            Formula::And(b, c) => self.f(env, b)? && self.f(env, c)?,
            Formula::Or(b, c) => self.f(env, b)? || self.f(env, c)?,
            Formula::Imp(b, c) => !self.f(env, b)? || self.f(env, c)?,
            Formula::Iff(b, c) => self.f(env, b)? == self.f(env, c)?,
            Formula::Exists(x, body) => self.satisfiers(env, x, body)? != 0,
            Formula::Forall(x, body) => self.satisfiers(env, x, body)? == (1 << self.m.size()) - 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn two() -> Structure {
        let mut m = Structure::new(2).unwrap();
        m.set_predicate("P", 1, &[alloc::vec![1]]).unwrap();
        m.set_predicate("Q", 1, &[]).unwrap();
        m.set_function("c", 0, alloc::vec![0]).unwrap();
        m
    }

    fn t(s: &str) -> Term {
        crate::syntax::parse_term(s, None).unwrap()
    }

    #[test]
    fn epsilon_picks_the_only_witness() {
        let m = two();
        for table in [[0, 0, 1, 0], [1, 0, 1, 1], [0, 0, 1, 1], [1, 0, 1, 0]] {
            let phi = ExtChoiceFunction::new(2, table.to_vec()).unwrap();
            assert_eq!(eval_term(&m, Chooser::Ext(&phi), &Assignment::new(), &t("eps x. P(x)")).unwrap(), 1);
        }
    }

    #[test]
    fn empty_satisfier_set_uses_phi_of_empty() {
        let m = two();
        let phi = ExtChoiceFunction::new(2, alloc::vec![1, 0, 1, 0]).unwrap();
        assert_eq!(eval_term(&m, Chooser::Ext(&phi), &Assignment::new(), &t("eps x. Q(x)")).unwrap(), 1);
        let a = parse_formula("~Q(eps x. Q(x))", None).unwrap();
        assert!(eval_formula(&m, Chooser::Ext(&phi), &Assignment::new(), &a).unwrap());
    }

    #[test]
    fn quantifiers_and_identity() {
        let m = two();
        let phi = ExtChoiceFunction::least(2);
        let s = Assignment::new().with(&Var::new("y"), 1);
        for (src, want) in [("ex x. P(x)", true), ("all x. P(x)", false), ("P(y) & y = eps x. P(x)", true), ("c = y", false)] {
            let a = parse_formula(src, None).unwrap();
            assert_eq!(eval_formula(&m, Chooser::Ext(&phi), &s, &a).unwrap(), want, "{src}");
        }
    }

    #[test]
    fn uninterpreted_symbol_is_an_error() {
        let m = two();
        let a = parse_formula("R(c)", None).unwrap();
        let phi = ExtChoiceFunction::least(2);
        assert_eq!(
            eval_formula(&m, Chooser::Ext(&phi), &Assignment::new(), &a),
            Err(SemanticsError::Uninterpreted("R".into()))
        );
    }

    #[test]
    fn intensional_keys_by_type_and_slot_values() {
        let mut m = Structure::new(2).unwrap();
        m.set_predicate("R", 2, &[]).unwrap();
        m.set_function("c", 0, alloc::vec![0]).unwrap();
        m.set_function("d", 0, alloc::vec![1]).unwrap();
        let e = t("eps x. R(x, c)");
        let (ty, _) = e.epsilon_type().unwrap();
        let mut psi = IntChoiceOperator::constant(ExtChoiceFunction::least(2));
        psi.entries.insert((ty.key(), alloc::vec![0]), ExtChoiceFunction::new(2, alloc::vec![1, 0, 1, 0]).unwrap());
        let s = Assignment::new();
        assert_eq!(eval_term(&m, Chooser::Int(&psi), &s, &e).unwrap(), 1);
        // Same type, slot value 1: falls back to the default.
        assert_eq!(eval_term(&m, Chooser::Int(&psi), &s, &t("eps x. R(x, d)")).unwrap(), 0);
    }
}

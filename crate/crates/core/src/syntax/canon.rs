//! Binder-index normal form.
//!
//! Bound variables become de Bruijn indices (0 = innermost binder), free
//! variables keep their names. Two expressions are equal up to renaming of
//! bound variables iff their canonical forms are equal, and the derived `Ord`
//! is the canonical ordering used for tie-breaks throughout the crate.

use super::{Formula, Sym, Term, Var};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CTerm {
    Bound(u32),
    Free(Var),
    App(Sym, Vec<CTerm>),
    Eps(Box<CFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CFormula {
    Bot,
    Top,
    Atom(Sym, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Imp(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
    Forall(Box<CFormula>),
    Exists(Box<CFormula>),
}

impl Term {
    pub fn canon(&self) -> CTerm {
        canon_term(self, &mut Vec::new())
    }
}

impl Formula {
    pub fn canon(&self) -> CFormula {
        canon_formula(self, &mut Vec::new())
    }
}

fn canon_term(t: &Term, scope: &mut Vec<Var>) -> CTerm {
    match t {
        Term::Var(v) => match scope.iter().rev().position(|b| b == v) {
            Some(i) => CTerm::Bound(i as u32),
            None => CTerm::Free(v.clone()),
        },
        Term::App(f, args) => CTerm::App(f.clone(), args.iter().map(|a| canon_term(a, scope)).collect()),
        Term::Eps(x, body) => {
            scope.push(x.clone());
            let b = canon_formula(body, scope);
            scope.pop();
            CTerm::Eps(Box::new(b))
        }
    }
}

fn canon_formula(a: &Formula, scope: &mut Vec<Var>) -> CFormula {
    let bx = |f: CFormula| Box::new(f);
    match a {
        Formula::Atom(p, args) => CFormula::Atom(p.clone(), args.iter().map(|t| canon_term(t, scope)).collect()),
        Formula::Eq(l, r) => CFormula::Eq(canon_term(l, scope), canon_term(r, scope)),
        Formula::Bot => CFormula::Bot,
        Formula::Top => CFormula::Top,
        Formula::Not(b) => CFormula::Not(bx(canon_formula(b, scope))),
        Formula::And(b, c) => CFormula::And(bx(canon_formula(b, scope)), bx(canon_formula(c, scope))),
        Formula::Or(b, c) => CFormula::Or(bx(canon_formula(b, scope)), bx(canon_formula(c, scope))),
        Formula::Imp(b, c) => CFormula::Imp(bx(canon_formula(b, scope)), bx(canon_formula(c, scope))),
        Formula::Iff(b, c) => CFormula::Iff(bx(canon_formula(b, scope)), bx(canon_formula(c, scope))),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            scope.push(x.clone());
            let b = bx(canon_formula(body, scope));
            scope.pop();
            if matches!(a, Formula::Forall(..)) {
                CFormula::Forall(b)
            } else {
                CFormula::Exists(b)
            }
        }
    }
}

impl CTerm {
    /// True when no bound index escapes the term, i.e. it is a well-formed
    /// term on its own rather than a fragment under an outer binder.
    pub fn is_self_contained(&self) -> bool {
        self.closed_at(0)
    }

    fn closed_at(&self, depth: u32) -> bool {
        match self {
            CTerm::Bound(i) => *i < depth,
            CTerm::Free(_) => true,
            CTerm::App(_, args) => args.iter().all(|a| a.closed_at(depth)),
            CTerm::Eps(body) => body.closed_at(depth + 1),
        }
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            CTerm::Bound(_) => {}
            CTerm::Free(v) => {
                out.insert(v.clone());
            }
            CTerm::App(_, args) => args.iter().for_each(|a| a.collect_free(out)),
            CTerm::Eps(body) => body.collect_free(out),
        }
    }

    fn depth(&self) -> usize {
        match self {
            CTerm::Bound(_) | CTerm::Free(_) => 0,
            CTerm::App(_, args) => args.iter().map(CTerm::depth).max().unwrap_or(0),
            CTerm::Eps(body) => 1 + body.depth(),
        }
    }

    /// Back to a named term. Binders get names `_b<k>` chosen by nesting
    /// depth and disjoint from the free variables. Panics on escaping indices.
    pub fn to_term(&self) -> Term {
        let mut free = BTreeSet::new();
        self.collect_free(&mut free);
        let names = binder_names(self.depth(), &free);
        decanon_term(self, &names, 0)
    }
}

impl CFormula {
    pub fn is_self_contained(&self) -> bool {
        self.closed_at(0)
    }

    fn closed_at(&self, depth: u32) -> bool {
        match self {
            CFormula::Bot | CFormula::Top => true,
            CFormula::Atom(_, args) => args.iter().all(|a| a.closed_at(depth)),
            CFormula::Eq(l, r) => l.closed_at(depth) && r.closed_at(depth),
            CFormula::Not(b) => b.closed_at(depth),
            CFormula::And(b, c) | CFormula::Or(b, c) | CFormula::Imp(b, c) | CFormula::Iff(b, c) => {
                b.closed_at(depth) && c.closed_at(depth)
            }
            CFormula::Forall(b) | CFormula::Exists(b) => b.closed_at(depth + 1),
        }
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            CFormula::Bot | CFormula::Top => {}
            CFormula::Atom(_, args) => args.iter().for_each(|a| a.collect_free(out)),
            CFormula::Eq(l, r) => {
                l.collect_free(out);
                r.collect_free(out);
            }
            CFormula::Not(b) => b.collect_free(out),
            CFormula::And(b, c) | CFormula::Or(b, c) | CFormula::Imp(b, c) | CFormula::Iff(b, c) => {
                b.collect_free(out);
                c.collect_free(out);
            }
            CFormula::Forall(b) | CFormula::Exists(b) => b.collect_free(out),
        }
    }

    fn depth(&self) -> usize {
        match self {
            CFormula::Bot | CFormula::Top => 0,
            CFormula::Atom(_, args) => args.iter().map(CTerm::depth).max().unwrap_or(0),
            CFormula::Eq(l, r) => l.depth().max(r.depth()),
            CFormula::Not(b) => b.depth(),
            CFormula::And(b, c) | CFormula::Or(b, c) | CFormula::Imp(b, c) | CFormula::Iff(b, c) => {
                b.depth().max(c.depth())
            }
            CFormula::Forall(b) | CFormula::Exists(b) => 1 + b.depth(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let mut free = BTreeSet::new();
        self.collect_free(&mut free);
        let names = binder_names(self.depth(), &free);
        decanon_formula(self, &names, 0)
    }
}

fn binder_names(depth: usize, free: &BTreeSet<Var>) -> Vec<Var> {
    let mut names = Vec::with_capacity(depth);
    let mut k = 0usize;
    while names.len() < depth {
        let v = Var::new(&format!("_b{k}"));
        if !free.contains(&v) {
            names.push(v);
        }
        k += 1;
    }
    names
}

fn decanon_term(t: &CTerm, names: &[Var], depth: usize) -> Term {
    match t {
        CTerm::Bound(i) => {
            let i = *i as usize;
            assert!(i < depth, "escaping bound index in canonical term");
            Term::Var(names[depth - 1 - i].clone())
        }
        CTerm::Free(v) => Term::Var(v.clone()),
        CTerm::App(f, args) => Term::App(f.clone(), args.iter().map(|a| decanon_term(a, names, depth)).collect()),
        CTerm::Eps(body) => Term::Eps(names[depth].clone(), Box::new(decanon_formula(body, names, depth + 1))),
    }
}

fn decanon_formula(a: &CFormula, names: &[Var], depth: usize) -> Formula {
    let rec = |b: &CFormula| Box::new(decanon_formula(b, names, depth));
    match a {
        CFormula::Bot => Formula::Bot,
        CFormula::Top => Formula::Top,
        CFormula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| decanon_term(t, names, depth)).collect()),
        CFormula::Eq(l, r) => Formula::Eq(decanon_term(l, names, depth), decanon_term(r, names, depth)),
        CFormula::Not(b) => Formula::Not(rec(b)),
        CFormula::And(b, c) => Formula::And(rec(b), rec(c)),
        CFormula::Or(b, c) => Formula::Or(rec(b), rec(c)),
        CFormula::Imp(b, c) => Formula::Imp(rec(b), rec(c)),
        CFormula::Iff(b, c) => Formula::Iff(rec(b), rec(c)),
        CFormula::Forall(b) => Formula::Forall(names[depth].clone(), Box::new(decanon_formula(b, names, depth + 1))),
        CFormula::Exists(b) => Formula::Exists(names[depth].clone(), Box::new(decanon_formula(b, names, depth + 1))),
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_term};

    #[test]
    fn alpha_equivalence_examples() {
        let a = parse_term("eps x. P(x)", None).unwrap();
        let b = parse_term("eps y. P(y)", None).unwrap();
        assert!(a.alpha_eq(&b));
        let a = parse_formula("P(x)", None).unwrap();
        let b = parse_formula("P(y)", None).unwrap();
        assert!(!a.alpha_eq(&b));
        let a = parse_formula("all x. (P(x) & ex y. R(x,y))", None).unwrap();
        let b = parse_formula("all y. (P(y) & ex x. R(y,x))", None).unwrap();
        assert!(a.alpha_eq(&b));
    }

    #[test]
    fn free_name_is_not_confused_with_binder() {
        let a = parse_term("eps x. R(x, y)", None).unwrap();
        let b = parse_term("eps y. R(y, x)", None).unwrap();
        assert!(!a.alpha_eq(&b));
    }

    #[test]
    fn decanon_round_trip() {
        let t = parse_term("eps x. R(x, eps y. Q(y, x, _b0))", None).unwrap();
        let back = t.canon().to_term();
        assert!(back.alpha_eq(&t));
        assert!(back.check_binders().is_ok());
        assert!(back.free_vars().contains(&crate::syntax::Var::new("_b0")));
    }
}

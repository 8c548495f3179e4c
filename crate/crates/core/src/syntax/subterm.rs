//! Subterm occurrences and simultaneous subterm replacement `E[[t/u]]`.
//!
//! An occurrence of a term counts as a subterm occurrence only when none of
//! its free variables is bound by a binder of the surrounding expression.

use super::canon::CTerm;
use super::subst::Ctx;
use super::{Formula, Term, Var};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub term: Term,
    /// Child indices from the root expression.
    pub path: Vec<usize>,
    /// Not contained in any other (proper) subterm occurrence.
    pub immediate: bool,
}

fn is_occurrence(t: &Term, scope: &[Var]) -> bool {
    scope.is_empty() || !scope.iter().any(|v| t.occurs_free(v))
}

fn occ_term(t: &Term, scope: &mut Vec<Var>, path: &mut Vec<usize>, inside: bool, out: &mut Vec<Occurrence>) {
    let here = is_occurrence(t, scope);
    if here {
        out.push(Occurrence { term: t.clone(), path: path.clone(), immediate: !inside });
    }
    occ_children(t, scope, path, inside || here, out);
}

fn occ_children(t: &Term, scope: &mut Vec<Var>, path: &mut Vec<usize>, inside: bool, out: &mut Vec<Occurrence>) {
    match t {
        Term::Var(_) => {}
        Term::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                occ_term(a, scope, path, inside, out);
                path.pop();
            }
        }
        Term::Eps(x, body) => {
            scope.push(x.clone());
            path.push(0);
            occ_formula(body, scope, path, inside, out);
            path.pop();
            scope.pop();
        }
    }
}

fn occ_formula(a: &Formula, scope: &mut Vec<Var>, path: &mut Vec<usize>, inside: bool, out: &mut Vec<Occurrence>) {
    let mut child = |i: usize, b: &Formula, scope: &mut Vec<Var>, out: &mut Vec<Occurrence>| {
        path.push(i);
        occ_formula(b, scope, path, inside, out);
        path.pop();
    };
    match a {
        Formula::Atom(_, args) => {
            for (i, t) in args.iter().enumerate() {
                path.push(i);
                occ_term(t, scope, path, inside, out);
                path.pop();
            }
        }
        Formula::Eq(l, r) => {
            for (i, t) in [l, r].into_iter().enumerate() {
                path.push(i);
                occ_term(t, scope, path, inside, out);
                path.pop();
            }
        }
        Formula::Bot | Formula::Top => {}
        Formula::Not(b) => child(0, b, scope, out),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) | Formula::Iff(b, c) => {
            child(0, b, scope, out);
            child(1, c, scope, out);
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            scope.push(x.clone());
            child(0, body, scope, out);
            scope.pop();
        }
    }
}

impl Term {
    /// Proper subterm occurrences in left-to-right preorder.
    pub fn subterm_occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        occ_children(self, &mut Vec::new(), &mut Vec::new(), false, &mut out);
        out
    }

    /// Immediate subterm occurrences, left to right.
    pub fn immediate_subterms(&self) -> Vec<Term> {
        self.subterm_occurrences().into_iter().filter(|o| o.immediate).map(|o| o.term).collect()
    }

    /// `self[[t/u]]`: every subterm occurrence of a term equivalent to `t`
    /// replaced by `u`, simultaneously.
    pub fn replace_subterm(&self, t: &Term, u: &Term) -> Term {
        let target = t.canon();
        let mut ctx = ctx_for(self.all_vars(), u);
        repl_term(self, &target, u, &mut Vec::new(), &mut ctx).unwrap_or_else(|| self.clone())
    }

    /// Whether some subterm occurrence (or the term itself) is equivalent to `t`.
    pub fn has_subterm(&self, t: &Term) -> bool {
        let target = t.canon();
        self.canon() == target || self.subterm_occurrences().iter().any(|o| o.term.canon() == target)
    }
}

impl Formula {
    pub fn subterm_occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        occ_formula(self, &mut Vec::new(), &mut Vec::new(), false, &mut out);
        out
    }

    pub fn replace_subterm(&self, t: &Term, u: &Term) -> Formula {
        let target = t.canon();
        let mut ctx = ctx_for(self.all_vars(), u);
        repl_formula(self, &target, u, &mut Vec::new(), &mut ctx).unwrap_or_else(|| self.clone())
    }

    pub fn has_subterm(&self, t: &Term) -> bool {
        let target = t.canon();
        self.subterm_occurrences().iter().any(|o| o.term.canon() == target)
    }

    /// Epsilon terms with a subterm occurrence, distinct up to renaming of
    /// bound variables, in order of first occurrence.
    pub fn eps_subterms(&self) -> Vec<Term> {
        dedup_eps(self.subterm_occurrences())
    }
}

pub(crate) fn dedup_eps(occs: Vec<Occurrence>) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for o in occs {
        if o.term.is_eps() && seen.insert(o.term.canon()) {
            out.push(o.term);
        }
    }
    out
}

fn ctx_for(mut avoid: BTreeSet<Var>, u: &Term) -> Ctx {
    u.collect_all_vars(&mut avoid);
    Ctx::new(avoid)
}

// `None` means unchanged.
fn repl_term(s: &Term, target: &CTerm, u: &Term, scope: &mut Vec<Var>, ctx: &mut Ctx) -> Option<Term> {
    if is_occurrence(s, scope) && s.canon() == *target {
        return Some(ctx.insert(u, scope));
    }
    match s {
        Term::Var(_) => None,
        Term::App(f, args) => {
            let new = repl_list(args, target, u, scope, ctx)?;
            Some(Term::App(f.clone(), new))
        }
        Term::Eps(y, body) => {
            let (y, body) = repl_binder(y, body, target, u, scope, ctx)?;
            Some(Term::Eps(y, Box::new(body)))
        }
    }
}

fn repl_list(args: &[Term], target: &CTerm, u: &Term, scope: &mut Vec<Var>, ctx: &mut Ctx) -> Option<Vec<Term>> {
    let mut changed = false;
    let new: Vec<Term> = args
        .iter()
        .map(|a| match repl_term(a, target, u, scope, ctx) {
            Some(n) => {
                changed = true;
                n
            }
            None => a.clone(),
        })
        .collect();
    changed.then_some(new)
}

fn repl_binder(
    y: &Var,
    body: &Formula,
    target: &CTerm,
    u: &Term,
    scope: &mut Vec<Var>,
    ctx: &mut Ctx,
) -> Option<(Var, Formula)> {
    scope.push(y.clone());
    let attempt = repl_formula(body, target, u, scope, ctx);
    scope.pop();
    let new = attempt?;
    if !u.occurs_free(y) {
        return Some((y.clone(), new));
    }
    // The binder would capture a free variable of `u`: rename it and redo.
    let z = ctx.fresh();
    let renamed = body.rename_free(y, &z);
    scope.push(z.clone());
    let redo = repl_formula(&renamed, target, u, scope, ctx);
    scope.pop();
    Some((z, redo.unwrap_or(renamed)))
}

fn repl_formula(a: &Formula, target: &CTerm, u: &Term, scope: &mut Vec<Var>, ctx: &mut Ctx) -> Option<Formula> {
    match a {
        Formula::Atom(p, args) => Some(Formula::Atom(p.clone(), repl_list(args, target, u, scope, ctx)?)),
        Formula::Eq(l, r) => {
            let nl = repl_term(l, target, u, scope, ctx);
            let nr = repl_term(r, target, u, scope, ctx);
            if nl.is_none() && nr.is_none() {
                return None;
            }
            Some(Formula::Eq(nl.unwrap_or_else(|| l.clone()), nr.unwrap_or_else(|| r.clone())))
        }
        Formula::Bot | Formula::Top => None,
        Formula::Not(b) => Some(Formula::Not(Box::new(repl_formula(b, target, u, scope, ctx)?))),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) | Formula::Iff(b, c) => {
            let nb = repl_formula(b, target, u, scope, ctx);
            let nc = repl_formula(c, target, u, scope, ctx);
            if nb.is_none() && nc.is_none() {
                return None;
            }
            let nb = Box::new(nb.unwrap_or_else(|| (**b).clone()));
            let nc = Box::new(nc.unwrap_or_else(|| (**c).clone()));
            Some(match a {
                Formula::And(..) => Formula::And(nb, nc),
                Formula::Or(..) => Formula::Or(nb, nc),
                Formula::Imp(..) => Formula::Imp(nb, nc),
                _ => Formula::Iff(nb, nc),
            })
        }
        Formula::Forall(y, body) => {
            let (y, body) = repl_binder(y, body, target, u, scope, ctx)?;
            Some(Formula::Forall(y, Box::new(body)))
        }
        Formula::Exists(y, body) => {
            let (y, body) = repl_binder(y, body, target, u, scope, ctx)?;
            Some(Formula::Exists(y, Box::new(body)))
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_term};
    use alloc::vec;

    fn f(s: &str) -> crate::syntax::Formula {
        parse_formula(s, None).unwrap()
    }
    fn t(s: &str) -> crate::syntax::Term {
        parse_term(s, None).unwrap()
    }

    #[test]
    fn occurrences_of_nested_application() {
        let occ = f("P(f(c))").subterm_occurrences();
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[0].term, t("f(c)"));
        assert!(occ[0].immediate);
        assert_eq!(occ[1].term, t("c"));
        assert!(!occ[1].immediate);
        assert_eq!(occ[1].path, vec![0, 0]);
    }

    #[test]
    fn bound_variables_block_occurrences() {
        let occ = t("eps x. P(x, g(x,c))").subterm_occurrences();
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].term, t("c"));
        assert!(occ[0].immediate);
        assert!(t("eps x. P(x)").subterm_occurrences().is_empty());
    }

    #[test]
    fn replacement_examples() {
        assert_eq!(f("P(e) & Q(e)").replace_subterm(&t("e"), &t("c")), f("P(c) & Q(c)"));
        let e = t("eps x. P(x, eps y. Q(y))");
        let out = e.replace_subterm(&t("eps z. Q(z)"), &t("c"));
        assert!(out.alpha_eq(&t("eps x. P(x, c)")));
        let a = f("R(x, eps y. R(x, y)) | P(c)");
        assert_eq!(a.replace_subterm(&t("x"), &t("x")), a);
    }

    #[test]
    fn replacement_renames_capturing_binder() {
        let a = f("all y. R(c, y)");
        let out = a.replace_subterm(&t("c"), &t("y"));
        assert!(out.alpha_eq(&f("all z. R(y, z)")));
    }

    #[test]
    fn captured_occurrences_are_not_replaced() {
        let a = t("eps x. R(x, f(x))");
        assert_eq!(a.replace_subterm(&t("f(x)"), &t("c")), a);
    }
}

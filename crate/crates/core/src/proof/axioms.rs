//! Recognising axiom instances, always up to renaming of bound variables.

use super::{taut, Calculus, Justification};
use crate::syntax::{CFormula, CTerm, EpsilonType, Formula, Term, Var};
use alloc::collections::BTreeSet;

/// What an axiom instance was matched with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bindings {
    Taut,
    Eq1 { t: Term },
    /// `t = u -> (A[x/t] <-> A[x/u])`.
    Eq2 { t: Term, u: Term },
    /// Argument position (0-based) holding `t` and `u`.
    Eq2Pred { t: Term, u: Term, slot: usize },
    Eq2Fn { t: Term, u: Term, slot: usize },
    EqEps { ty: EpsilonType, slot: usize, t: Term, u: Term },
    /// `A(t) -> A(eps x. A(x))` with `body = A(x)`.
    Crit { body: Formula, var: Var, witness: Term, eps: Term },
    Ext { left: Term, right: Term },
    ExtMinus { left: Term, right: Term },
    AxExists { body: Formula, var: Var, witness: Term },
    AxForall { body: Formula, var: Var, witness: Term },
}

/// Whether an axiom or rule may be used in `calculus`; `identity` says
/// whether the language has `=`.
pub(crate) fn allowed(just: &Justification, calculus: Calculus, identity: bool) -> Result<(), &'static str> {
    use Justification::*;
    match just {
        Hyp | Taut | MP(..) => Ok(()),
        Eq1 | Eq2 | Eq2Pred | Eq2Fn if !identity => Err("identity axioms need `=` in the language"),
        Eq1 | Eq2 | Eq2Pred | Eq2Fn => Ok(()),
        EqEps if !identity => Err("identity axioms need `=` in the language"),
        EqEps | Crit if !calculus.has_epsilon() => Err("only available in epsilon calculi"),
        EqEps | Crit => Ok(()),
        Ext if !identity => Err("(ext) needs `=` in the language"),
        Ext | ExtMinus if !calculus.has_ext() => Err("only available in the extensional calculus"),
        Ext | ExtMinus => Ok(()),
        AxExists | AxForall | RExists(_) | RForall(_) if !calculus.has_quantifiers() => {
            Err("only available in calculi with quantifiers")
        }
        AxExists | AxForall | RExists(_) | RForall(_) => Ok(()),
    }
}

/// Matches `a` against an axiom schema. Returns `None` on mismatch, when the
/// schema is not an axiom, or when it is not available in `calculus`.
/// Identity axioms are assumed to be in the language here.
pub fn match_axiom(a: &Formula, schema: Justification, calculus: Calculus) -> Option<Bindings> {
    if allowed(&schema, calculus, true).is_err() {
        return None;
    }
    match_schema(a, schema)
}

pub(crate) fn match_schema(a: &Formula, schema: Justification) -> Option<Bindings> {
    use Justification::*;
    match schema {
        Taut => taut::is_tautology(a).ok()?.then_some(Bindings::Taut),
        Eq1 => match a {
            Formula::Eq(l, r) if l.alpha_eq(r) => Some(Bindings::Eq1 { t: l.clone() }),
            _ => None,
        },
        Eq2 => eq2(a),
        Eq2Pred => eq2_pred(a),
        Eq2Fn => eq2_fn(a),
        EqEps => eq_eps(a),
        Crit => crit(a),
        Ext => ext(a),
        ExtMinus => ext_minus(a),
        AxExists => {
            let Formula::Imp(l, r) = a else { return None };
            let Formula::Exists(x, body) = &**r else { return None };
            let witness = match_instance(body, x, l)?;
            Some(Bindings::AxExists { body: (**body).clone(), var: x.clone(), witness })
        }
        AxForall => {
            let Formula::Imp(l, r) = a else { return None };
            let Formula::Forall(x, body) = &**l else { return None };
            let witness = match_instance(body, x, r)?;
            Some(Bindings::AxForall { body: (**body).clone(), var: x.clone(), witness })
        }
        Hyp | MP(..) | RExists(_) | RForall(_) => None,
    }
}

/// Finds `t` with `target ≡ pattern[x/t]`, where `x` is free in `pattern`.
pub(crate) fn match_instance(pattern: &Formula, x: &Var, target: &Formula) -> Option<Term> {
    let mut bound = None;
    if !match_f(&pattern.canon(), x, &target.canon(), &mut bound) {
        return None;
    }
    bound.map(|c| c.to_term())
}

fn match_t(p: &CTerm, x: &Var, t: &CTerm, bound: &mut Option<CTerm>) -> bool {
    match (p, t) {
        (CTerm::Free(v), _) if v == x => {
            if !t.is_self_contained() {
                return false;
            }
            match bound {
                Some(b) => b == t,
                None => {
                    *bound = Some(t.clone());
                    true
                }
            }
        }
        (CTerm::App(f, ps), CTerm::App(g, ts)) => {
            f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_t(p, x, t, bound))
        }
        (CTerm::Eps(pb), CTerm::Eps(tb)) => match_f(pb, x, tb, bound),
        _ => p == t,
    }
}

fn match_f(p: &CFormula, x: &Var, t: &CFormula, bound: &mut Option<CTerm>) -> bool {
    use CFormula as F;
    match (p, t) {
        (F::Atom(a, ps), F::Atom(b, ts)) => {
            a == b && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_t(p, x, t, bound))
        }
        (F::Eq(p1, p2), F::Eq(t1, t2)) => match_t(p1, x, t1, bound) && match_t(p2, x, t2, bound),
        (F::Not(p), F::Not(t)) | (F::Forall(p), F::Forall(t)) | (F::Exists(p), F::Exists(t)) => {
            match_f(p, x, t, bound)
        }
        (F::And(p1, p2), F::And(t1, t2))
        | (F::Or(p1, p2), F::Or(t1, t2))
        | (F::Imp(p1, p2), F::Imp(t1, t2))
        | (F::Iff(p1, p2), F::Iff(t1, t2)) => match_f(p1, x, t1, bound) && match_f(p2, x, t2, bound),
        _ => p == t,
    }
}

/// Whether `r` arises from `l` by replacing some subterm occurrences of `t` by `u`.
pub(crate) fn replaces(l: &Formula, r: &Formula, t: &Term, u: &Term) -> bool {
    two_f(&l.canon(), &r.canon(), &t.canon(), &u.canon())
}

fn two_t(l: &CTerm, r: &CTerm, t: &CTerm, u: &CTerm) -> bool {
    if l == r || (l == t && r == u && l.is_self_contained()) {
        return true;
    }
    match (l, r) {
        (CTerm::App(f, ls), CTerm::App(g, rs)) => {
            f == g && ls.len() == rs.len() && ls.iter().zip(rs).all(|(a, b)| two_t(a, b, t, u))
        }
        (CTerm::Eps(a), CTerm::Eps(b)) => two_f(a, b, t, u),
        _ => false,
    }
}

fn two_f(l: &CFormula, r: &CFormula, t: &CTerm, u: &CTerm) -> bool {
    use CFormula as F;
    match (l, r) {
        (F::Atom(a, ls), F::Atom(b, rs)) => {
            a == b && ls.len() == rs.len() && ls.iter().zip(rs).all(|(p, q)| two_t(p, q, t, u))
        }
        (F::Eq(l1, l2), F::Eq(r1, r2)) => two_t(l1, r1, t, u) && two_t(l2, r2, t, u),
        (F::Not(a), F::Not(b)) | (F::Forall(a), F::Forall(b)) | (F::Exists(a), F::Exists(b)) => two_f(a, b, t, u),
        (F::And(a1, a2), F::And(b1, b2))
        | (F::Or(a1, a2), F::Or(b1, b2))
        | (F::Imp(a1, a2), F::Imp(b1, b2))
        | (F::Iff(a1, a2), F::Iff(b1, b2)) => two_f(a1, b1, t, u) && two_f(a2, b2, t, u),
        _ => l == r,
    }
}

fn split_eq_imp(a: &Formula) -> Option<(&Term, &Term, &Formula)> {
    let Formula::Imp(h, c) = a else { return None };
    let Formula::Eq(t, u) = &**h else { return None };
    Some((t, u, c))
}

fn eq2(a: &Formula) -> Option<Bindings> {
    let (t, u, c) = split_eq_imp(a)?;
    let Formula::Iff(l, r) = c else { return None };
    replaces(l, r, t, u).then(|| Bindings::Eq2 { t: t.clone(), u: u.clone() })
}

/// The single position where `ls` holds `t` and `rs` holds `u`, all other
/// positions agreeing.
fn one_slot(ls: &[Term], rs: &[Term], t: &Term, u: &Term) -> Option<usize> {
    if ls.len() != rs.len() {
        return None;
    }
    let (ct, cu) = (t.canon(), u.canon());
    let lc: alloc::vec::Vec<CTerm> = ls.iter().map(Term::canon).collect();
    let rc: alloc::vec::Vec<CTerm> = rs.iter().map(Term::canon).collect();
    let differing: alloc::vec::Vec<usize> = (0..lc.len()).filter(|&i| lc[i] != rc[i]).collect();
    match differing.as_slice() {
        [i] => (lc[*i] == ct && rc[*i] == cu).then_some(*i),
        [] if ct == cu => (0..lc.len()).find(|&i| lc[i] == ct),
        _ => None,
    }
}

fn eq2_pred(a: &Formula) -> Option<Bindings> {
    let (t, u, c) = split_eq_imp(a)?;
    let Formula::Imp(l, r) = c else { return None };
    let slot = match (&**l, &**r) {
        (Formula::Atom(p, ls), Formula::Atom(q, rs)) if p == q => one_slot(ls, rs, t, u)?,
        (Formula::Eq(l1, l2), Formula::Eq(r1, r2)) => {
            one_slot(&[l1.clone(), l2.clone()], &[r1.clone(), r2.clone()], t, u)?
        }
        _ => return None,
    };
    Some(Bindings::Eq2Pred { t: t.clone(), u: u.clone(), slot })
}

fn eq2_fn(a: &Formula) -> Option<Bindings> {
    let (t, u, c) = split_eq_imp(a)?;
    let Formula::Eq(Term::App(f, ls), Term::App(g, rs)) = c else { return None };
    if f != g {
        return None;
    }
    let slot = one_slot(ls, rs, t, u)?;
    Some(Bindings::Eq2Fn { t: t.clone(), u: u.clone(), slot })
}

fn eq_eps(a: &Formula) -> Option<Bindings> {
    let (t, u, c) = split_eq_imp(a)?;
    let Formula::Eq(e1, e2) = c else { return None };
    let (ty1, args1) = e1.epsilon_type().ok()?;
    let (ty2, args2) = e2.epsilon_type().ok()?;
    if ty1 != ty2 {
        return None;
    }
    let slot = one_slot(&args1, &args2, t, u)?;
    Some(Bindings::EqEps { ty: ty1, slot, t: t.clone(), u: u.clone() })
}

fn crit(a: &Formula) -> Option<Bindings> {
    let Formula::Imp(l, r) = a else { return None };
    let target = r.canon();
    for e in r.eps_subterms() {
        let Term::Eps(x, body) = &e else { continue };
        if body.substitute(x, &e).canon() != target {
            continue;
        }
        if let Some(witness) = match_instance(body, x, l) {
            return Some(Bindings::Crit { body: (**body).clone(), var: x.clone(), witness, eps: e.clone() });
        }
    }
    None
}

/// `eps z. ~(A(z) <-> B(z))` for `left = eps x. A(x)`, `right = eps y. B(y)`.
pub(crate) fn ext_witness(left: &Term, right: &Term) -> Option<Term> {
    let (Term::Eps(x, a), Term::Eps(y, b)) = (left, right) else { return None };
    let mut avoid: BTreeSet<Var> = left.all_vars();
    avoid.extend(right.all_vars());
    let z = crate::syntax::fresh_var(&avoid);
    let za = a.substitute(x, &Term::Var(z.clone()));
    let zb = b.substitute(y, &Term::Var(z.clone()));
    Term::eps(z, Formula::not(Formula::iff(za, zb))).ok()
}

/// The antecedent `A(d) <-> B(d)` of (ext) and (ext-).
pub(crate) fn ext_antecedent(left: &Term, right: &Term) -> Option<Formula> {
    let d = ext_witness(left, right)?;
    let (Term::Eps(x, a), Term::Eps(y, b)) = (left, right) else { return None };
    Some(Formula::iff(a.substitute(x, &d), b.substitute(y, &d)))
}

fn ext(a: &Formula) -> Option<Bindings> {
    let Formula::Imp(h, c) = a else { return None };
    let Formula::Eq(l, r) = &**c else { return None };
    let expected = ext_antecedent(l, r)?;
    (expected.canon() == h.canon()).then(|| Bindings::Ext { left: l.clone(), right: r.clone() })
}

fn ext_minus(a: &Formula) -> Option<Bindings> {
    let Formula::Imp(h, c) = a else { return None };
    let Formula::Iff(cl, cr) = &**c else { return None };
    if !matches!(&**h, Formula::Iff(..)) {
        return None;
    }
    let hc = h.canon();
    for d in h.eps_subterms() {
        let Term::Eps(z, body) = &d else { continue };
        let Formula::Not(inner) = &**body else { continue };
        let Formula::Iff(a, b) = &**inner else { continue };
        let (Ok(left), Ok(right)) = (Term::eps(z.clone(), (**a).clone()), Term::eps(z.clone(), (**b).clone())) else {
            continue;
        };
        let expected = Formula::iff(a.substitute(z, &d), b.substitute(z, &d));
        if expected.canon() != hc {
            continue;
        }
        if replaces(cl, cr, &left, &right) {
            return Some(Bindings::ExtMinus { left, right });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term};

    fn f(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }
    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }
    fn m(s: &str, j: Justification) -> Option<Bindings> {
        match_axiom(&f(s), j, Calculus::ECepsExt)
    }

    #[test]
    fn crit_examples() {
        let b = m("P(c) -> P(eps x. P(x))", Justification::Crit).unwrap();
        let Bindings::Crit { body, witness, eps, .. } = b else { panic!() };
        assert_eq!(body, f("P(x)"));
        assert_eq!(witness, t("c"));
        assert_eq!(eps, t("eps x. P(x)"));
        assert!(m("P(c) -> P(eps x. Q(x))", Justification::Crit).is_none());
        assert!(m("R(c, eps x. R(x, x)) -> R(eps x. R(x, x), eps x. R(x, x))", Justification::Crit).is_none());
        assert!(m("R(c, c) -> R(eps x. R(x, x), eps y. R(y, y))", Justification::Crit).is_some());
        assert!(m("P(y) -> P(eps x. P(x))", Justification::Crit).is_some());
        // the witness may not be captured by a binder of A
        assert!(m("Q(eps y. R(y, y)) -> Q(eps z. R(z, eps x. Q(eps y. R(y, x))))", Justification::Crit).is_none());
        assert!(m("Q(eps y. R(y, c)) -> Q(eps z. R(z, eps x. Q(eps y. R(y, x))))", Justification::Crit).is_some());
    }

    #[test]
    fn eq_eps_example() {
        let b = m("c = d -> eps x. R(x,c) = eps x. R(x,d)", Justification::EqEps).unwrap();
        let Bindings::EqEps { ty, slot, t: tt, u } = b else { panic!() };
        assert!(ty.pattern.alpha_eq(&t("eps x. R(x, _x1)")));
        assert_eq!((slot, tt, u), (0, t("c"), t("d")));
        assert!(m("c = d -> eps x. R(x,c,c) = eps x. R(x,d,d)", Justification::EqEps).is_none());
        assert!(m("c = d -> eps x. R(x,c) = eps x. Q(x,d)", Justification::EqEps).is_none());
    }

    #[test]
    fn restricted_identity_axioms() {
        assert!(m("c = d -> (R(c, a) -> R(d, a))", Justification::Eq2Pred).is_some());
        assert!(m("c = d -> (R(c, c) -> R(d, d))", Justification::Eq2Pred).is_none());
        assert!(m("c = d -> (c = a -> d = a)", Justification::Eq2Pred).is_some());
        assert!(m("c = d -> f(a, c) = f(a, d)", Justification::Eq2Fn).is_some());
        assert!(m("c = d -> f(c) = g(d)", Justification::Eq2Fn).is_none());
        assert!(m("c = c", Justification::Eq1).is_some());
        assert!(m("eps x. P(x) = eps y. P(y)", Justification::Eq1).is_some());
    }

    #[test]
    fn general_identity_axiom() {
        assert!(m("c = d -> (R(c, c) <-> R(d, c))", Justification::Eq2).is_some());
        assert!(m("c = d -> (P(eps x. R(x, c)) <-> P(eps x. R(x, d)))", Justification::Eq2).is_some());
        assert!(m("c = d -> (P(c) <-> P(a))", Justification::Eq2).is_none());
    }

    #[test]
    fn quantifier_axioms() {
        let calc = Calculus::ECepsForall;
        assert!(match_axiom(&f("P(c) -> ex x. P(x)"), Justification::AxExists, calc).is_some());
        assert!(match_axiom(&f("(all x. P(x)) -> P(c)"), Justification::AxForall, calc).is_some());
        assert!(match_axiom(&f("P(c) -> ex x. P(x)"), Justification::AxExists, Calculus::ECeps).is_none());
        assert!(match_axiom(&f("R(c, d) -> ex x. R(x, x)"), Justification::AxExists, calc).is_none());
    }

    #[test]
    fn extensionality() {
        let e = "(P(eps z. ~(P(z) <-> Q(z))) <-> Q(eps z. ~(P(z) <-> Q(z)))) -> eps x. P(x) = eps y. Q(y)";
        assert!(m(e, Justification::Ext).is_some());
        let e2 = "(P(eps z. ~(P(z) <-> Q(z))) <-> Q(eps z. ~(P(z) <-> Q(z)))) -> (R(eps x. P(x)) <-> R(eps y. Q(y)))";
        assert!(m(e2, Justification::ExtMinus).is_some());
        assert!(match_axiom(&f(e), Justification::Ext, Calculus::ECeps).is_none());
    }
}

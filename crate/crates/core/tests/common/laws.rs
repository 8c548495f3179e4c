//! Laws checked on generated expressions, shared by the property tests and
//! the acceptance run.

use epsilon_core::semantics::{eval_formula, eval_term, Assignment, Chooser, ExtChoiceFunction, IntChoiceOperator, Structure};
use epsilon_core::syntax::{fresh_var, parse_formula, parse_term, Formula, Term, Var};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// `eps x. A` with its binder renamed to a variable not in `A`.
fn rename_eps(t: &Term) -> Option<Term> {
    let Term::Eps(x, body) = t else { return None };
    let w = fresh_var(&body.all_vars());
    Term::eps(w.clone(), body.substitute(x, &Term::Var(w))).ok()
}

/// Parse/print round trip and the laws of ≡.
pub fn syntax_laws(a: &Formula, t: &Term) -> Result<(), TestCaseError> {
    let printed = a.to_string();
    let back = parse_formula(&printed, None).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
    prop_assert_eq!(&back, a, "formula round trip via {}", printed);
    let tp = t.to_string();
    let tb = parse_term(&tp, None).map_err(|e| TestCaseError::fail(format!("{tp}: {e}")))?;
    prop_assert_eq!(&tb, t, "term round trip via {}", tp);

    prop_assert!(a.alpha_eq(a));
    let c = a.canon().to_formula();
    prop_assert!(c.alpha_eq(a) && a.alpha_eq(&c), "canonical representative of {}", a);
    for e in a.eps_subterms() {
        if let Some(r) = rename_eps(&e) {
            prop_assert!(r.alpha_eq(&e) && e.alpha_eq(&r));
            let renamed = a.replace_subterm(&e, &r);
            prop_assert!(renamed.alpha_eq(a), "renaming a binder in {}", a);
            prop_assert!(renamed.alpha_eq(&c), "transitivity through {}", renamed);
        }
    }
    Ok(())
}

/// Substitution: identity, vacuity, free variables and composition.
pub fn substitution_laws(a: &Formula, x: &Var, y: &Var, t: &Term, u: &Term) -> Result<(), TestCaseError> {
    prop_assert!(a.substitute(x, &Term::Var(x.clone())).alpha_eq(a));
    let sub = a.substitute(x, t);
    if !a.occurs_free(x) {
        prop_assert!(sub.alpha_eq(a));
    }
    let mut fv = a.free_vars();
    if fv.remove(x) {
        fv.extend(t.free_vars());
    }
    prop_assert_eq!(sub.free_vars(), fv);
    if x != y && !u.occurs_free(x) {
        let left = sub.substitute(y, u);
        let right = a.substitute(y, u).substitute(x, &t.substitute(y, u));
        prop_assert!(left.alpha_eq(&right), "{} vs {}", left, right);
    }
    Ok(())
}

/// `epsilon_type` reconstructs the term and preserves rank.
pub fn type_laws(e: &Term) -> Result<(), TestCaseError> {
    let (ty, args) = e.epsilon_type().map_err(|err| TestCaseError::fail(err.to_string()))?;
    prop_assert_eq!(ty.arity(), args.len());
    let back = ty.instantiate(&args);
    prop_assert!(back.alpha_eq(e), "{} rebuilt as {}", e, back);
    prop_assert_eq!(ty.rank(), e.rank().unwrap(), "rank of {}", e);
    let (ty2, _) = back.epsilon_type().unwrap();
    prop_assert_eq!(ty2.key(), ty.key());
    Ok(())
}

/// Locality, the substitution lemma, and constant intensional operators.
pub fn semantic_laws(
    a: &Formula,
    x: &Var,
    t: &Term,
    m: &Structure,
    phi: &ExtChoiceFunction,
    s: &Assignment,
) -> Result<(), TestCaseError> {
    let c = Chooser::Ext(phi);
    let v = eval_formula(m, c, s, a).unwrap();
    let other = Assignment { default: (s.default + 1) % m.size(), values: s.values.clone() };
    let mut moved = other.clone();
    for y in ["u", "v", "w"] {
        moved = moved.with(&Var::new(y), m.size() - 1);
    }
    prop_assert_eq!(eval_formula(m, c, &moved, a).unwrap(), v, "locality");
    let tv = eval_term(m, c, s, t).unwrap();
    let lhs = eval_formula(m, c, s, &a.substitute(x, t)).unwrap();
    let rhs = eval_formula(m, c, &s.with(x, tv), a).unwrap();
    prop_assert_eq!(lhs, rhs, "substitution lemma for {}[{}/{}]", a, x, t);
    let psi = IntChoiceOperator::constant(phi.clone());
    prop_assert_eq!(eval_formula(m, Chooser::Int(&psi), s, a).unwrap(), v, "constant operator");
    Ok(())
}

//! Embedding quantifier proofs into the epsilon calculus.

use super::axioms::{match_instance, match_schema, replaces};
use super::transform::mp_roles;
use super::{check_proof, substitute_proof, Calculus, Justification, Proof, ProofBuilder, ProofError};
use crate::syntax::{Formula, Term, Var};
use crate::translate::translate;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

/// From a proof of `A` from sentences `Γ` in a calculus with quantifiers, a
/// proof of the translation of `A` from the translations of `Γ` in ECeps.
pub fn embed_proof(p: &Proof) -> Result<Proof, ProofError> {
    if !p.calculus.has_quantifiers() {
        return Err(ProofError::Precondition(format!("{} is not a calculus with quantifiers", p.calculus)));
    }
    if let Some(h) = p.hypotheses.iter().find(|h| !h.is_closed()) {
        return Err(ProofError::Precondition(format!("hypothesis {h} is not a sentence")));
    }
    let report = check_proof(p);
    if !report.ok {
        return Err(ProofError::Invalid(report.failures));
    }
    let hyps: Vec<Formula> = p.hypotheses.iter().map(translate).collect();
    let mut b = ProofBuilder::new(p.sig.clone(), Calculus::ECeps, hyps);
    let mut new: Vec<usize> = Vec::with_capacity(p.lines.len());
    for (i, line) in p.lines.iter().enumerate() {
        let a = translate(&line.formula);
        let idx = match line.just {
            Justification::Hyp | Justification::Taut | Justification::Crit | Justification::Eq1 => b.line(a, line.just),
            Justification::Eq2 | Justification::Eq2Pred | Justification::Eq2Fn | Justification::EqEps => {
                identity_line(&mut b, a, line.just)
                    .ok_or_else(|| ProofError::Invalid(alloc::vec![(i, "identity axiom lost its shape".into())]))?
            }
            Justification::AxExists => b.line(a, Justification::Crit),
            Justification::AxForall => {
                // A(eps x. ~A(x)) -> A(t) from ~A(t) -> ~A(eps x. ~A(x))
                let Formula::Imp(l, r) = &a else { unreachable!("checked axiom") };
                let crit = b.line(Formula::imp(Formula::not((**r).clone()), Formula::not((**l).clone())), Justification::Crit);
                b.taut_mp(&[crit], a)
            }
            Justification::MP(k, l) => {
                let (minor, major) = mp_roles(p, k, l);
                match b.find(&a) {
                    Some(i) => i,
                    None => b.push(a, Justification::MP(new[minor], new[major])),
                }
            }
            Justification::RExists(j) | Justification::RForall(j) => {
                let y = rule_eigenvariable(p, i).expect("checked rule");
                let witness = match (&line.just, &line.formula) {
                    (Justification::RExists(_), Formula::Imp(q, _)) | (Justification::RForall(_), Formula::Imp(_, q)) => {
                        quantifier_witness(q)
                    }
                    _ => unreachable!("checked rule"),
                };
                let sub = b.extract(&b.cone(new[j]));
                let sub = substitute_proof(&sub, &y, &witness)?;
                let map = b.splice(&sub);
                let got = *map.last().expect("cone contains the premise");
                if !b.formula(got).alpha_eq(&a) {
                    return Err(ProofError::Invalid(alloc::vec![(i, "embedded rule premise does not fit".into())]));
                }
                got
            }
            Justification::Ext | Justification::ExtMinus => {
                return Err(ProofError::Precondition("extensionality axioms are not embedded".into()))
            }
        };
        new.push(idx);
    }
    Ok(b.finish_at(*new.last().expect("checked proof is nonempty")))
}

/// `eps x. A^ε(x)` for `ex x. A(x)` and `eps x. ~A^ε(x)` for `all x. A(x)`.
fn quantifier_witness(q: &Formula) -> Term {
    match q {
        Formula::Exists(x, body) => Term::Eps(x.clone(), Box::new(translate(body))),
        Formula::Forall(x, body) => Term::Eps(x.clone(), Box::new(Formula::not(translate(body)))),
        _ => unreachable!("rule conclusions carry a quantifier"),
    }
}

fn rule_eigenvariable(p: &Proof, i: usize) -> Option<Var> {
    let (q, b) = match (p.lines[i].just, &p.lines[i].formula) {
        (Justification::RExists(j), Formula::Imp(q, _)) => match &p.lines[j].formula {
            Formula::Imp(b, _) => (q, b),
            _ => return None,
        },
        (Justification::RForall(j), Formula::Imp(_, q)) => match &p.lines[j].formula {
            Formula::Imp(_, b) => (q, b),
            _ => return None,
        },
        _ => return None,
    };
    let (Formula::Exists(x, body) | Formula::Forall(x, body)) = &**q else { return None };
    match match_instance(body, x, b)? {
        Term::Var(y) => Some(y),
        _ => None,
    }
}

/// An identity axiom after translation: kept if it still has its shape,
/// otherwise derived from (=₁) and the general (=₂).
fn identity_line(b: &mut ProofBuilder, a: Formula, just: Justification) -> Option<usize> {
    if match_schema(&a, just).is_some() {
        return Some(b.line(a, just));
    }
    let Formula::Imp(h, c) = &a else { return None };
    let Formula::Eq(t, u) = &**h else { return None };
    match &**c {
        Formula::Eq(l, _) => {
            let refl = Formula::eq(l.clone(), l.clone());
            if !replaces(&refl, c, t, u) {
                return None;
            }
            let e1 = b.line(refl.clone(), Justification::Eq1);
            let e2 = b.line(Formula::imp((**h).clone(), Formula::iff(refl, (**c).clone())), Justification::Eq2);
            Some(b.taut_mp(&[e1, e2], a))
        }
        Formula::Imp(l, r) => {
            if !replaces(l, r, t, u) {
                return None;
            }
            let e2 = b.line(Formula::imp((**h).clone(), Formula::iff((**l).clone(), (**r).clone())), Justification::Eq2);
            Some(b.taut_mp(&[e2], a))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_proof, Calculus};
    use crate::syntax::{parse_formula, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }

    fn proof(calc: Calculus, lines: &[(&str, Justification)]) -> Proof {
        let mut p = Proof::new(Signature::new(), calc, Vec::new());
        for (s, j) in lines {
            p.push(f(s), *j);
        }
        let all: Vec<Formula> = p.lines.iter().map(|l| l.formula.clone()).collect();
        p.sig = Signature::infer(all.iter()).unwrap();
        p
    }

    #[test]
    fn existential_axiom_becomes_critical_formula() {
        let p = proof(Calculus::ECforall, &[("P(c) -> ex x. P(x)", Justification::AxExists)]);
        let q = embed_proof(&p).unwrap();
        assert_eq!(q.lines.len(), 1);
        assert_eq!(q.lines[0].formula, f("P(c) -> P(eps x. P(x))"));
        assert_eq!(q.lines[0].just, Justification::Crit);
        assert!(check_proof(&q).ok);
    }

    #[test]
    fn universal_axiom_goes_through_contraposition() {
        let p = proof(Calculus::ECforall, &[("(all x. P(x)) -> P(c)", Justification::AxForall)]);
        let q = embed_proof(&p).unwrap();
        assert_eq!(q.lines[0].formula, f("~P(c) -> ~P(eps x. ~P(x))"));
        assert_eq!(q.conclusion().unwrap(), &f("P(eps x. ~P(x)) -> P(c)"));
        assert!(check_proof(&q).ok);
    }

    #[test]
    fn drinker() {
        let d = "ex z. P(z) -> all y. P(y)";
        let lines = [
            (alloc::format!("(P(z) -> all y. P(y)) -> {d}"), Justification::AxExists),
            (alloc::format!("((P(z) -> all y. P(y)) -> {d}) -> (~({d}) -> P(z))"), Justification::Taut),
            (alloc::format!("~({d}) -> P(z)"), Justification::MP(0, 1)),
            (alloc::format!("~({d}) -> all y. P(y)"), Justification::RForall(2)),
            (alloc::format!("(P(w) -> all y. P(y)) -> {d}"), Justification::AxExists),
            (
                alloc::format!("(~({d}) -> all y. P(y)) -> ((P(w) -> all y. P(y)) -> ({d})) -> ({d})"),
                Justification::Taut,
            ),
            (alloc::format!("((P(w) -> all y. P(y)) -> ({d})) -> ({d})"), Justification::MP(3, 5)),
            (d.into(), Justification::MP(4, 6)),
        ];
        let lines: Vec<(&str, Justification)> = lines.iter().map(|(s, j)| (s.as_str(), *j)).collect();
        let p = proof(Calculus::ECforall, &lines);
        let r = check_proof(&p);
        assert!(r.ok, "{:?}", r.failures);
        let q = embed_proof(&p).unwrap();
        let r = check_proof(&q);
        assert!(r.ok, "{:?}", r.failures);
        assert!(q.conclusion().unwrap().alpha_eq(&translate(&f(d))));
        assert!(q.lines.iter().all(|l| !l.formula.contains_quantifier()));
    }
}

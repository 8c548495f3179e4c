//! Substitution into proofs and the deduction transformation.

use super::{eigenvariables, Justification, Proof, ProofBuilder, ProofError, ProofLine};
use crate::syntax::{fresh_var, Formula, Term, Var};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

/// `p[x/t]`: every line replaced by its instance. Eigenvariables that occur
/// free in `t` are renamed apart first.
pub fn substitute_proof(p: &Proof, x: &Var, t: &Term) -> Result<Proof, ProofError> {
    if p.hypotheses.iter().any(|h| h.occurs_free(x)) {
        return Err(ProofError::Precondition(format!("{x} is free in a hypothesis")));
    }
    let eigen = eigenvariables(p);
    if eigen.contains(x) {
        return Err(ProofError::Precondition(format!("{x} is an eigenvariable")));
    }
    let mut p = p.clone();
    let tfree = t.free_vars();
    for y in eigen.iter().filter(|y| tfree.contains(*y)) {
        let mut avoid = all_vars(&p);
        avoid.extend(tfree.iter().cloned());
        let z = Term::Var(fresh_var(&avoid));
        p = map_lines(&p, |a| a.substitute(y, &z));
    }
    Ok(map_lines(&p, |a| a.substitute(x, t)))
}

pub(crate) fn map_lines(p: &Proof, f: impl Fn(&Formula) -> Formula) -> Proof {
    Proof {
        sig: p.sig.clone(),
        calculus: p.calculus,
        hypotheses: p.hypotheses.clone(),
        lines: p.lines.iter().map(|l| ProofLine { formula: f(&l.formula), just: l.just }).collect(),
    }
}

pub(crate) fn all_vars(p: &Proof) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for a in p.lines.iter().map(|l| &l.formula).chain(&p.hypotheses) {
        out.extend(a.all_vars());
    }
    out
}

/// From a proof of `B` from `Γ ∪ {A}`, a proof of `A -> B` from `Γ`.
pub fn deduction_transform(p: &Proof, a: &Formula) -> Result<Proof, ProofError> {
    let eigen = eigenvariables(p);
    if let Some(y) = eigen.iter().find(|y| a.occurs_free(y)) {
        return Err(ProofError::Precondition(format!("{a} contains the eigenvariable {y} free")));
    }
    if p.lines.is_empty() {
        return Err(ProofError::Precondition("empty proof".into()));
    }
    p.sig.check_formula(a)?;
    let hyps: Vec<Formula> = p.hypotheses.iter().filter(|h| !h.alpha_eq(a)).cloned().collect();
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, hyps);
    // Lines outside the cone of `A` are copied; the others become `A -> A_i`.
    let mut new: Vec<Derived> = Vec::with_capacity(p.lines.len());
    for line in &p.lines {
        let ai = &line.formula;
        let target = Formula::imp(a.clone(), ai.clone());
        let d = match line.just {
            Justification::Hyp if ai.alpha_eq(a) => Derived::Under(b.taut(target)),
            Justification::MP(k, l) => {
                let (minor, major) = mp_roles(p, k, l);
                match (new[minor], new[major]) {
                    (Derived::Plain(x), Derived::Plain(y)) => Derived::Plain(b.mp(x, y)),
                    (x, y) => {
                        let Formula::Imp(_, c) = &p.lines[major].formula else { unreachable!("checked by mp_roles") };
                        let concl = Formula::imp(a.clone(), (**c).clone());
                        Derived::Under(b.taut_mp(&[x.line(), y.line()], concl))
                    }
                }
            }
            Justification::RExists(j) | Justification::RForall(j) if matches!(new[j], Derived::Plain(_)) => {
                let just = line.just.shifted(|_| new[j].line());
                Derived::Plain(match b.find(ai) {
                    Some(k) => k,
                    None => b.push(ai.clone(), just),
                })
            }
            Justification::RExists(j) => {
                // A_i = ex x. B(x) -> C from A_j = B(y) -> C
                let (Formula::Imp(ex, c), Formula::Imp(by, _)) = (ai, &p.lines[j].formula) else {
                    return Err(ProofError::Invalid(alloc::vec![(j, "malformed R∃".into())]));
                };
                let s1 = b.taut_mp(&[new[j].line()], Formula::imp((**by).clone(), Formula::imp(a.clone(), (**c).clone())));
                let r = b.push(
                    Formula::imp((**ex).clone(), Formula::imp(a.clone(), (**c).clone())),
                    Justification::RExists(s1),
                );
                Derived::Under(b.taut_mp(&[r], target))
            }
            Justification::RForall(j) => {
                // A_i = C -> all x. B(x) from A_j = C -> B(y)
                let (Formula::Imp(c, all), Formula::Imp(_, by)) = (ai, &p.lines[j].formula) else {
                    return Err(ProofError::Invalid(alloc::vec![(j, "malformed R∀".into())]));
                };
                let ac = Formula::and(a.clone(), (**c).clone());
                let s1 = b.taut_mp(&[new[j].line()], Formula::imp(ac.clone(), (**by).clone()));
                let r = b.push(Formula::imp(ac, (**all).clone()), Justification::RForall(s1));
                Derived::Under(b.taut_mp(&[r], target))
            }
            just => Derived::Plain(b.line(ai.clone(), just)),
        };
        new.push(d);
    }
    let last = match *new.last().expect("nonempty") {
        Derived::Under(i) => i,
        Derived::Plain(i) => {
            let target = Formula::imp(a.clone(), p.lines[p.lines.len() - 1].formula.clone());
            b.taut_mp(&[i], target)
        }
    };
    Ok(b.finish_at(last))
}

/// Where a line of the input ended up: proving itself, or proving it under
/// the discharged hypothesis.
#[derive(Clone, Copy)]
enum Derived {
    Plain(usize),
    Under(usize),
}

impl Derived {
    fn line(self) -> usize {
        match self {
            Derived::Plain(i) | Derived::Under(i) => i,
        }
    }
}

/// (minor, major) for an MP line referencing lines `k` and `l` in either order.
pub(crate) fn mp_roles(p: &Proof, k: usize, l: usize) -> (usize, usize) {
    match &p.lines[l].formula {
        Formula::Imp(b, _) if b.alpha_eq(&p.lines[k].formula) => (k, l),
        _ => (l, k),
    }
}

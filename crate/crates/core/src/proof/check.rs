//! The proof checker.

use super::axioms::{allowed, match_instance, match_schema, Bindings};
use super::{taut, CheckReport, Justification, Proof};
use crate::syntax::{CTerm, Formula, Term, Var};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub fn check_proof(p: &Proof) -> CheckReport {
    let mut report = CheckReport::default();
    if p.lines.is_empty() {
        report.failures.push((0, "empty proof".to_string()));
    }
    for (k, h) in p.hypotheses.iter().enumerate() {
        if let Err(e) = p.sig.check_formula(h) {
            report.failures.push((0, format!("hypothesis {}: {e}", k + 1)));
        }
    }
    let hyp_free: BTreeSet<Var> = p.hypotheses.iter().flat_map(Formula::free_vars).collect();
    let mut crit: BTreeMap<CTerm, (Term, Vec<usize>)> = BTreeMap::new();
    let mut crit_order: Vec<CTerm> = Vec::new();
    // Free variables of line i and every later line.
    let mut free_below: Vec<BTreeSet<Var>> = alloc::vec![BTreeSet::new(); p.lines.len() + 1];
    for i in (0..p.lines.len()).rev() {
        let mut s = free_below[i + 1].clone();
        s.extend(p.lines[i].formula.free_vars());
        free_below[i] = s;
    }

    for i in 0..p.lines.len() {
        match check_line(p, i, &free_below[i], &hyp_free) {
            Ok(outcome) => match outcome {
                Outcome::Plain => {}
                Outcome::Eigen(v) => {
                    if !report.eigenvariables.contains(&v) {
                        report.eigenvariables.push(v);
                    }
                }
                Outcome::Crit(e) => {
                    let key = e.canon();
                    let entry = crit.entry(key.clone()).or_insert_with(|| {
                        crit_order.push(key);
                        (e, Vec::new())
                    });
                    entry.1.push(i);
                }
            },
            Err(reason) => report.failures.push((i, reason)),
        }
    }
    report.critical_terms = crit_order.into_iter().map(|k| crit.remove(&k).expect("recorded")).collect();
    report.ok = report.failures.is_empty();
    report
}

enum Outcome {
    Plain,
    Eigen(Var),
    Crit(Term),
}

fn check_line(p: &Proof, i: usize, free_below: &BTreeSet<Var>, hyp_free: &BTreeSet<Var>) -> Result<Outcome, String> {
    let line = &p.lines[i];
    let a = &line.formula;
    p.sig.check_formula(a).map_err(|e| format!("ill-formed: {e}"))?;
    if !p.calculus.has_epsilon() && a.contains_eps() {
        return Err(format!("epsilon terms are not part of {}", p.calculus));
    }
    if !p.calculus.has_quantifiers() && a.contains_quantifier() {
        return Err(format!("quantifiers are not part of {}", p.calculus));
    }
    allowed(&line.just, p.calculus, p.sig.identity).map_err(|m| format!("{}: {m}", line.just.name()))?;
    for r in line.just.refs() {
        if r >= i {
            return Err(format!("reference to line {} is not earlier", r + 1));
        }
    }
    let prior = |j: usize| &p.lines[j].formula;
    match line.just {
        Justification::Hyp => {
            if p.hypotheses.iter().any(|h| h.alpha_eq(a)) {
                Ok(Outcome::Plain)
            } else {
                Err("not a hypothesis".to_string())
            }
        }
        Justification::Taut => match taut::is_tautology(a) {
            Ok(true) => Ok(Outcome::Plain),
            Ok(false) => Err("not a tautology".to_string()),
            Err(e) => Err(e.to_string()),
        },
        Justification::MP(j, k) => {
            if mp_ok(prior(j), prior(k), a) || mp_ok(prior(k), prior(j), a) {
                Ok(Outcome::Plain)
            } else {
                Err(format!("MP from lines {} and {} does not give this formula", j + 1, k + 1))
            }
        }
        Justification::RExists(j) => {
            let Formula::Imp(ex, c) = a else { return Err("R∃ conclusion must be an implication".to_string()) };
            let Formula::Exists(x, body) = &**ex else {
                return Err("R∃ conclusion must have an existential antecedent".to_string());
            };
            let Formula::Imp(b, c2) = prior(j) else { return Err("R∃ premise must be an implication".to_string()) };
            if !c.alpha_eq(c2) {
                return Err("R∃ premise and conclusion have different consequents".to_string());
            }
            let y = eigen(body, x, b).ok_or("R∃ premise is not an instance of the quantified formula")?;
            eigen_condition(&y, free_below, hyp_free)?;
            Ok(Outcome::Eigen(y))
        }
        Justification::RForall(j) => {
            let Formula::Imp(c, all) = a else { return Err("R∀ conclusion must be an implication".to_string()) };
            let Formula::Forall(x, body) = &**all else {
                return Err("R∀ conclusion must have a universal consequent".to_string());
            };
            let Formula::Imp(c2, b) = prior(j) else { return Err("R∀ premise must be an implication".to_string()) };
            if !c.alpha_eq(c2) {
                return Err("R∀ premise and conclusion have different antecedents".to_string());
            }
            let y = eigen(body, x, b).ok_or("R∀ premise is not an instance of the quantified formula")?;
            eigen_condition(&y, free_below, hyp_free)?;
            Ok(Outcome::Eigen(y))
        }
        just => match match_schema(a, just) {
            Some(Bindings::Crit { eps, .. }) => Ok(Outcome::Crit(eps)),
            Some(_) => Ok(Outcome::Plain),
            None if just == Justification::Taut => Err("not a tautology".to_string()),
            None => Err(format!("not an instance of {}", just.name())),
        },
    }
}

fn mp_ok(minor: &Formula, major: &Formula, concl: &Formula) -> bool {
    matches!(major, Formula::Imp(b, c) if b.alpha_eq(minor) && c.alpha_eq(concl))
}

/// The variable `y` with `instance ≡ body[x/y]`.
fn eigen(body: &Formula, x: &Var, instance: &Formula) -> Option<Var> {
    match match_instance(body, x, instance)? {
        Term::Var(y) => Some(y),
        _ => None,
    }
}

fn eigen_condition(y: &Var, free_below: &BTreeSet<Var>, hyp_free: &BTreeSet<Var>) -> Result<(), String> {
    if free_below.contains(y) {
        return Err(format!("eigenvariable {y} occurs free in this or a later line"));
    }
    if hyp_free.contains(y) {
        return Err(format!("eigenvariable {y} occurs free in a hypothesis"));
    }
    Ok(())
}

/// Eigenvariables of the rule applications in `p`, in order of use. Lines
/// whose rule application is malformed are skipped.
pub fn eigenvariables(p: &Proof) -> Vec<Var> {
    let mut out = Vec::new();
    for line in &p.lines {
        let y = match (line.just, &line.formula) {
            (Justification::RExists(j), Formula::Imp(ex, _)) => match (&**ex, p.lines.get(j).map(|l| &l.formula)) {
                (Formula::Exists(x, body), Some(Formula::Imp(b, _))) => eigen(body, x, b),
                _ => None,
            },
            (Justification::RForall(j), Formula::Imp(_, all)) => match (&**all, p.lines.get(j).map(|l| &l.formula)) {
                (Formula::Forall(x, body), Some(Formula::Imp(_, b))) => eigen(body, x, b),
                _ => None,
            },
            _ => None,
        };
        if let Some(y) = y {
            if !out.contains(&y) {
                out.push(y);
            }
        }
    }
    out
}

//! Epsilon elimination: proof metrics, removal of critical formulas (the
//! first epsilon theorem), Herbrand disjunctions and the identity case.

mod critical;
mod identity;
mod order;

pub use critical::{eliminate_all, eliminate_one, herbrand_disjunction};
pub use identity::{eliminate_special, eliminate_special_traced, normalize_identity};
pub use order::{instance_order, InstanceOrder};

use crate::proof::axioms::{match_schema, Bindings};
use crate::proof::{check_proof, Justification, Proof, ProofBuilder, ProofError};
use crate::syntax::{CTerm, Formula, Term};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalTerm {
    pub term: Term,
    pub rank: usize,
    pub degree: usize,
    /// Distinct up to renaming of bound variables, in order of first use.
    pub witnesses: Vec<Term>,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofMetrics {
    pub rank: usize,
    pub r_degree: BTreeMap<usize, usize>,
    pub r_order: BTreeMap<usize, usize>,
    pub critical: Vec<CriticalTerm>,
    /// Right-hand sides of (=_ε) instances, distinct up to renaming.
    pub special: Vec<Term>,
}

impl ProofMetrics {
    pub fn order(&self, r: usize) -> usize {
        self.r_order.get(&r).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Critical,
    Special,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Critical => "critical",
            Strategy::Special => "special",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElimStep {
    pub term: Term,
    pub strategy: Strategy,
    pub before: ProofMetrics,
    pub after: ProofMetrics,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElimTrace {
    pub steps: Vec<ElimStep>,
}

pub fn proof_metrics(p: &Proof) -> Result<ProofMetrics, ProofError> {
    let report = check_proof(p);
    if !report.ok {
        return Err(ProofError::Invalid(report.failures));
    }
    Ok(metrics_unchecked(p))
}

/// Metrics of a proof already known to check.
pub(crate) fn metrics_unchecked(p: &Proof) -> ProofMetrics {
    let mut m = ProofMetrics::default();
    let mut crit: BTreeMap<CTerm, usize> = BTreeMap::new();
    let mut special = BTreeSet::new();
    for (i, line) in p.lines.iter().enumerate() {
        match (line.just, match_schema(&line.formula, line.just)) {
            (Justification::Crit, Some(Bindings::Crit { eps, witness, .. })) => {
                let k = *crit.entry(eps.canon()).or_insert_with(|| {
                    let rank = eps.rank().unwrap_or(0);
                    let degree = eps.degree();
                    m.critical.push(CriticalTerm { term: eps, rank, degree, witnesses: Vec::new(), lines: Vec::new() });
                    m.critical.len() - 1
                });
                let c = &mut m.critical[k];
                if !c.witnesses.iter().any(|w| w.alpha_eq(&witness)) {
                    c.witnesses.push(witness);
                }
                c.lines.push(i);
            }
            (Justification::EqEps, Some(_)) => {
                if let Some((_, _, _, r)) = eq_eps_parts(&line.formula) {
                    if special.insert(r.canon()) {
                        m.special.push(r.clone());
                    }
                }
            }
            _ => {}
        }
    }
    for c in &m.critical {
        m.rank = m.rank.max(c.rank);
        let d = m.r_degree.entry(c.rank).or_insert(0);
        *d = (*d).max(c.degree);
        *m.r_order.entry(c.rank).or_insert(0) += 1;
    }
    m
}

/// `t = u -> l = r` split into its four terms.
pub(crate) fn eq_eps_parts(a: &Formula) -> Option<(&Term, &Term, &Term, &Term)> {
    let Formula::Imp(h, c) = a else { return None };
    let (Formula::Eq(t, u), Formula::Eq(l, r)) = (&**h, &**c) else { return None };
    Some((t, u, l, r))
}

/// Only the lines the conclusion depends on. Critical formulas that happen
/// to be tautologies are justified as such.
pub(crate) fn prune(p: &Proof) -> Proof {
    let Some(last) = p.lines.len().checked_sub(1) else { return p.clone() };
    let mut q = p.clone();
    for line in &mut q.lines {
        if line.just == Justification::Crit && crate::proof::is_tautology(&line.formula).unwrap_or(false) {
            line.just = Justification::Taut;
        }
    }
    let b = ProofBuilder::from(q);
    b.extract(&b.cone(last))
}

/// Copies `p` into `b` with every formula rewritten by `f`, keeping the
/// justifications. Returns the new index of every line.
pub(crate) fn copy_mapped(
    b: &mut ProofBuilder,
    p: &Proof,
    mut f: impl FnMut(&mut ProofBuilder, usize, Formula) -> Result<Option<usize>, ProofError>,
    map: impl Fn(&Formula) -> Formula,
) -> Result<Vec<usize>, ProofError> {
    let mut new: Vec<usize> = Vec::with_capacity(p.lines.len());
    for (i, line) in p.lines.iter().enumerate() {
        let a = map(&line.formula);
        if let Some(k) = f(b, i, a.clone())? {
            new.push(k);
            continue;
        }
        let just = line.just.shifted(|k| new[k]);
        let k = match just {
            Justification::MP(..) | Justification::RExists(_) | Justification::RForall(_) => match b.find(&a) {
                Some(k) => k,
                None => b.push(a, just),
            },
            _ => b.line(a, just),
        };
        new.push(k);
    }
    Ok(new)
}

/// A checked proof or the checker's complaints.
pub(crate) fn checked(p: Proof) -> Result<Proof, ProofError> {
    let r = check_proof(&p);
    if r.ok {
        Ok(p)
    } else {
        Err(ProofError::Invalid(r.failures))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::Calculus;
    use crate::syntax::{parse_formula, Signature};

    fn proof(lines: &[(&str, Justification)]) -> Proof {
        let mut p = Proof::new(Signature::new(), Calculus::ECeps, Vec::new());
        for (s, j) in lines {
            p.push(parse_formula(s, None).unwrap(), *j);
        }
        let all: Vec<Formula> = p.lines.iter().map(|l| l.formula.clone()).collect();
        p.sig = Signature::infer(all.iter()).unwrap();
        p
    }

    #[test]
    fn single_critical_formula() {
        let m = proof_metrics(&proof(&[("P(c) -> P(eps x. P(x))", Justification::Crit)])).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.order(1), 1);
        assert_eq!(m.r_degree[&1], 1);
    }

    #[test]
    fn no_critical_formulas() {
        let m = proof_metrics(&proof(&[("P(c) | ~P(c)", Justification::Taut)])).unwrap();
        assert_eq!(m.rank, 0);
        assert!(m.r_order.is_empty() && m.r_degree.is_empty());
    }

    #[test]
    fn nested_ranks() {
        let m = proof_metrics(&proof(&[
            ("P(c, eps y. Q(c, y)) -> P(eps x. P(x, eps y. Q(x, y)), eps w. Q(eps x. P(x, eps z. Q(x, z)), w))", Justification::Crit),
            ("Q(c, d) -> Q(c, eps y. Q(c, y))", Justification::Crit),
        ]))
        .unwrap();
        assert_eq!(m.rank, 2);
        assert_eq!(m.order(2), 1);
        assert_eq!(m.order(1), 1);
    }

    #[test]
    fn unchecked_proof_rejected() {
        assert!(proof_metrics(&proof(&[("P(c) -> P(d)", Justification::Crit)])).is_err());
    }
}

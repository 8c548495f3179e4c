//! Removing critical formulas one epsilon term at a time.

use super::identity::{normalize_identity, special_step};
use super::{checked, copy_mapped, metrics_unchecked, prune, CriticalTerm, ElimStep, ElimTrace, ProofMetrics, Strategy};
use crate::proof::transform::all_vars;
use crate::proof::{deduction_transform, Calculus, Justification, Proof, ProofBuilder, ProofError};
use crate::syntax::{fresh_var, CTerm, Formula, Term, Var};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

/// Upper bound on elimination steps before giving up.
const MAX_STEPS: usize = 4096;

/// One disjunct of the conclusion, with the image of the tracked epsilon
/// term under the replacements made so far.
#[derive(Clone, Debug)]
struct Disjunct {
    formula: Formula,
    witness: Option<Term>,
}

/// Removes the critical formulas of one epsilon term of maximal rank.
pub fn eliminate_one(p: &Proof, e: &Formula) -> Result<Proof, ProofError> {
    let p = checked(p.clone())?;
    preconditions(&p, e)?;
    let m = metrics_unchecked(&p);
    let c = select(&m).ok_or_else(|| ProofError::Precondition("the proof has no critical formulas".into()))?;
    let ds = alloc::vec![Disjunct { formula: e.clone(), witness: None }];
    let (q, _) = eliminate_term(&p, &m, c, &ds, false)?;
    checked(q)
}

/// A proof of `e` in EC, together with the steps taken.
pub fn eliminate_all(p: &Proof, e: &Formula) -> Result<(Proof, ElimTrace), ProofError> {
    if e.contains_eps() || e.contains_quantifier() {
        return Err(ProofError::Precondition(format!("{e} is not free of epsilon terms and quantifiers")));
    }
    let p = checked(p.clone())?;
    preconditions(&p, e)?;
    let m = metrics_unchecked(&p);
    if m.critical.is_empty() && m.special.is_empty() && !p.lines.iter().any(|l| l.formula.contains_eps()) {
        let mut q = p;
        q.calculus = Calculus::EC;
        return Ok((q, ElimTrace::default()));
    }
    let ds = alloc::vec![Disjunct { formula: e.clone(), witness: None }];
    let (q, trace, _) = run(&p, ds, false)?;
    Ok((q, trace))
}

/// Witness terms `t_j` and an EC proof of a disjunction of instances of
/// `e`, the `j`-th one with `t_j` in place of the first epsilon term of `e`.
pub fn herbrand_disjunction(p: &Proof, e: &Formula) -> Result<(Vec<Term>, Proof), ProofError> {
    let p = checked(p.clone())?;
    preconditions(&p, e)?;
    let principal = e.eps_subterms().into_iter().next();
    let ds = alloc::vec![Disjunct { formula: e.clone(), witness: principal }];
    let (q, _, ds) = run(&p, ds, true)?;
    let mut terms: Vec<Term> = Vec::new();
    for w in ds.into_iter().filter_map(|d| d.witness) {
        if !terms.iter().any(|t| t.alpha_eq(&w)) {
            terms.push(w);
        }
    }
    Ok((terms, q))
}

fn preconditions(p: &Proof, e: &Formula) -> Result<(), ProofError> {
    if p.calculus.has_quantifiers() || p.calculus.has_ext() {
        return Err(ProofError::Precondition(format!("expected a proof in ECeps, got {}", p.calculus)));
    }
    match p.conclusion() {
        Some(c) if c.alpha_eq(e) => Ok(()),
        _ => Err(ProofError::Precondition(format!("the proof does not conclude {e}"))),
    }
}

/// Critical term of maximal rank, then maximal degree, then least
/// canonical form.
fn select(m: &ProofMetrics) -> Option<&CriticalTerm> {
    m.critical.iter().filter(|c| c.rank == m.rank).min_by(|a, b| {
        b.degree.cmp(&a.degree).then_with(|| a.term.canon().cmp(&b.term.canon()))
    })
}

fn run(p: &Proof, mut ds: Vec<Disjunct>, herbrand: bool) -> Result<(Proof, ElimTrace, Vec<Disjunct>), ProofError> {
    let mut p = prune(p);
    if p.lines.iter().any(|l| l.just == Justification::Eq2) {
        p = normalize_identity(&p)?;
    }
    let mut trace = ElimTrace::default();
    for _ in 0..MAX_STEPS {
        let before = metrics_unchecked(&p);
        let concl = disjunction(&ds);
        if let Some((q, term)) = special_step(&p, &concl, before.rank.max(1))? {
            p = prune(&q);
            trace.steps.push(ElimStep { term, strategy: Strategy::Special, before, after: metrics_unchecked(&p) });
            continue;
        }
        let Some(c) = select(&before) else {
            let q = freshen(&p, &mut ds);
            return Ok((checked(q)?, trace, ds));
        };
        let (q, next) = eliminate_term(&p, &before, c, &ds, herbrand)?;
        p = prune(&checked(q)?);
        ds = next;
        let after = metrics_unchecked(&p);
        trace.steps.push(ElimStep { term: c.term.clone(), strategy: Strategy::Critical, before, after });
    }
    Err(ProofError::Precondition(format!("no result after {MAX_STEPS} elimination steps")))
}

fn disjunction(ds: &[Disjunct]) -> Formula {
    Formula::disjunction(ds.iter().map(|d| d.formula.clone()))
}

/// The elimination step for the critical term `c` of `p`, whose conclusion
/// is the disjunction of `ds`. With `herbrand`, the branch assuming no
/// witness works also replaces `e` by the first witness when that keeps
/// its critical formulas tautological, so it adds no disjunct of its own.
fn eliminate_term(
    p: &Proof,
    m: &ProofMetrics,
    c: &CriticalTerm,
    ds: &[Disjunct],
    herbrand: bool,
) -> Result<(Proof, Vec<Disjunct>), ProofError> {
    let e = &c.term;
    let Term::Eps(x, body) = e else { unreachable!("critical terms are epsilon terms") };
    if p.hypotheses.iter().any(|h| h.has_subterm(e)) {
        return Err(ProofError::Precondition(format!("{e} occurs in a hypothesis")));
    }
    if m.special.iter().any(|s| s.alpha_eq(e)) {
        return Err(ProofError::Precondition(format!("{e} is special; remove its (=_ε) instances first")));
    }
    let is_crit = |i: usize| c.lines.contains(&i);
    let instances: Vec<Formula> = c.witnesses.iter().map(|t| body.substitute(x, t)).collect();

    // π_i: p[e/t_i] from A(t_i), discharged.
    let mut branches = Vec::new();
    let first = c.witnesses.first().filter(|_| herbrand && !c.witnesses.iter().any(|w| w.has_subterm(e)));
    let mut out: Vec<Disjunct> = if first.is_some() { Vec::new() } else { ds.to_vec() };
    for (t, a) in c.witnesses.iter().zip(&instances) {
        let mut hyps = p.hypotheses.clone();
        hyps.push(a.clone());
        let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, hyps);
        let h = b.hyp(a.clone());
        let new = copy_mapped(
            &mut b,
            p,
            |b, i, f| Ok(is_crit(i).then(|| b.taut_mp(&[h], f))),
            |f| f.replace_subterm(e, t),
        )?;
        let q = b.finish_at(*new.last().expect("nonempty proof"));
        branches.push(deduction_transform(&q, a)?);
        for d in ds {
            let formula = d.formula.replace_subterm(e, t);
            if !out.iter().any(|o| o.formula.alpha_eq(&formula)) {
                out.push(Disjunct { formula, witness: d.witness.as_ref().map(|w| w.replace_subterm(e, t)) });
            }
        }
    }

    // π'': p from ¬(A(t_1) ∨ … ∨ A(t_n)), discharged.
    let none = Formula::not(Formula::disjunction(instances.iter().cloned()));
    let mut hyps = p.hypotheses.clone();
    hyps.push(none.clone());
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, hyps);
    let h = b.hyp(none.clone());
    let new = copy_mapped(
        &mut b,
        p,
        |b, i, f| Ok(is_crit(i).then(|| b.taut_mp(&[h], f))),
        |f| match first {
            Some(t) => f.replace_subterm(e, t),
            None => f.clone(),
        },
    )?;
    let q = b.finish_at(*new.last().expect("nonempty proof"));
    branches.insert(0, deduction_transform(&q, &none)?);

    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, p.hypotheses.clone());
    let ends: Vec<usize> = branches.iter().map(|q| *b.splice(q).last().expect("nonempty proof")).collect();
    let last = b.taut_mp(&ends, disjunction(&out));
    Ok((b.finish_at(last), out))
}

/// Replaces every remaining epsilon term by a variable of its own, so that
/// a proof without critical formulas and (=_ε) instances becomes one in EC.
fn freshen(p: &Proof, ds: &mut [Disjunct]) -> Proof {
    let mut s = Freshen { avoid: all_vars(p), map: BTreeMap::new() };
    for d in ds.iter() {
        s.avoid.extend(d.formula.all_vars());
    }
    let mut q = Proof::new(p.sig.clone(), Calculus::EC, p.hypotheses.iter().map(|h| s.formula(h)).collect());
    for l in &p.lines {
        q.push(s.formula(&l.formula), l.just);
    }
    for d in ds.iter_mut() {
        d.formula = s.formula(&d.formula);
        d.witness = d.witness.as_ref().map(|w| s.term(w));
    }
    q
}

struct Freshen {
    avoid: BTreeSet<Var>,
    map: BTreeMap<CTerm, Var>,
}

impl Freshen {
    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Eps(..) => {
                let key = t.canon();
                if let Some(v) = self.map.get(&key) {
                    return Term::Var(v.clone());
                }
                let v = fresh_var(&self.avoid);
                self.avoid.insert(v.clone());
                self.map.insert(key, v.clone());
                Term::Var(v)
            }
        }
    }

    fn formula(&mut self, a: &Formula) -> Formula {
        match a {
            Formula::Bot | Formula::Top => a.clone(),
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| self.term(t)).collect()),
            Formula::Eq(l, r) => Formula::Eq(self.term(l), self.term(r)),
            Formula::Not(b) => Formula::not(self.formula(b)),
            Formula::And(b, c) => Formula::and(self.formula(b), self.formula(c)),
            Formula::Or(b, c) => Formula::or(self.formula(b), self.formula(c)),
            Formula::Imp(b, c) => Formula::imp(self.formula(b), self.formula(c)),
            Formula::Iff(b, c) => Formula::iff(self.formula(b), self.formula(c)),
            // Proofs reaching this point have no quantifiers.
            Formula::Forall(..) | Formula::Exists(..) => a.clone(),
        }
    }
}

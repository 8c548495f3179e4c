//! The identity case: general (=₂) reduced to restricted instances, and
//! (=_ε) instances removed from the top rank.

use super::order::instance_cmp;
use super::{checked, copy_mapped, eq_eps_parts, metrics_unchecked, prune, ElimStep, ElimTrace, Strategy};
use crate::proof::axioms::{match_schema, Bindings};
use crate::proof::eq2::eq2_into;
use crate::proof::transform::all_vars;
use crate::proof::{deduction_transform, Justification, Proof, ProofBuilder, ProofError};
use crate::syntax::{fresh_var, Formula, Term, Var};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

const MAX_STEPS: usize = 4096;

/// Replaces every general (=₂) line by a derivation from (=₁), (=₂′),
/// (=₂″) and (=_ε).
pub fn normalize_identity(p: &Proof) -> Result<Proof, ProofError> {
    let p = checked(p.clone())?;
    if !p.lines.iter().any(|l| l.just == Justification::Eq2) {
        return Ok(p);
    }
    let mut avoid = all_vars(&p);
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, p.hypotheses.clone());
    let new = copy_mapped(
        &mut b,
        &p,
        |b, i, f| {
            if p.lines[i].just != Justification::Eq2 {
                return Ok(None);
            }
            let (Some(Bindings::Eq2 { t, u }), Formula::Imp(_, c)) = (match_schema(&f, Justification::Eq2), &f) else {
                unreachable!("checked (=₂) line")
            };
            let Formula::Iff(l, r) = &**c else { unreachable!("checked (=₂) line") };
            let x = fresh_var(&avoid);
            avoid.insert(x.clone());
            let a = abstract_formula(l, r, &t, &u, &x)
                .ok_or_else(|| ProofError::Invalid(alloc::vec![(i, "cannot locate the replaced positions".into())]))?;
            eq2_into(b, &mut avoid, &t, &u, &a, &x).map(Some)
        },
        Formula::clone,
    )?;
    checked(b.finish_at(*new.last().expect("checked proof is nonempty")))
}

/// `A` with `A[x/t] ≡ l` and `A[x/u] ≡ r`, `x` standing exactly where the
/// two differ.
fn abstract_formula(l: &Formula, r: &Formula, t: &Term, u: &Term, x: &Var) -> Option<Formula> {
    let rec = |a: &Formula, b: &Formula| abstract_formula(a, b, t, u, x).map(Box::new);
    Some(match (l, r) {
        (Formula::Bot, Formula::Bot) | (Formula::Top, Formula::Top) => l.clone(),
        (Formula::Atom(p, ls), Formula::Atom(q, rs)) if p == q && ls.len() == rs.len() => {
            Formula::Atom(p.clone(), ls.iter().zip(rs).map(|(a, b)| abstract_term(a, b, t, u, x)).collect::<Option<_>>()?)
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            Formula::Eq(abstract_term(a1, b1, t, u, x)?, abstract_term(a2, b2, t, u, x)?)
        }
        (Formula::Not(a), Formula::Not(b)) => Formula::Not(rec(a, b)?),
        (Formula::And(a1, a2), Formula::And(b1, b2)) => Formula::And(rec(a1, b1)?, rec(a2, b2)?),
        (Formula::Or(a1, a2), Formula::Or(b1, b2)) => Formula::Or(rec(a1, b1)?, rec(a2, b2)?),
        (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => Formula::Imp(rec(a1, b1)?, rec(a2, b2)?),
        (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => Formula::Iff(rec(a1, b1)?, rec(a2, b2)?),
        (Formula::Forall(y, a), Formula::Forall(z, b)) => {
            let b = same_binder(y, z, b)?;
            Formula::Forall(y.clone(), rec(a, &b)?)
        }
        (Formula::Exists(y, a), Formula::Exists(z, b)) => {
            let b = same_binder(y, z, b)?;
            Formula::Exists(y.clone(), rec(a, &b)?)
        }
        _ => return None,
    })
}

fn abstract_term(l: &Term, r: &Term, t: &Term, u: &Term, x: &Var) -> Option<Term> {
    if l.alpha_eq(r) {
        return Some(l.clone());
    }
    if l.alpha_eq(t) && r.alpha_eq(u) {
        return Some(Term::Var(x.clone()));
    }
    match (l, r) {
        (Term::App(f, ls), Term::App(g, rs)) if f == g && ls.len() == rs.len() => {
            Some(Term::App(f.clone(), ls.iter().zip(rs).map(|(a, b)| abstract_term(a, b, t, u, x)).collect::<Option<_>>()?))
        }
        (Term::Eps(y, a), Term::Eps(z, b)) => {
            let b = same_binder(y, z, b)?;
            Some(Term::Eps(y.clone(), Box::new(abstract_formula(a, &b, t, u, x)?)))
        }
        _ => None,
    }
}

/// `body` with its bound variable `z` renamed to `y`.
fn same_binder(y: &Var, z: &Var, body: &Formula) -> Option<Formula> {
    if y == z {
        Some(body.clone())
    } else if body.occurs_free(y) {
        None
    } else {
        Some(body.rename_free(z, y))
    }
}

/// Removes the (=_ε) instances whose epsilon terms have rank at least
/// `max(rk(p), 1)`.
pub fn eliminate_special(p: &Proof, e: &Formula) -> Result<Proof, ProofError> {
    eliminate_special_traced(p, e).map(|(q, _)| q)
}

pub fn eliminate_special_traced(p: &Proof, e: &Formula) -> Result<(Proof, ElimTrace), ProofError> {
    let mut p = checked(p.clone())?;
    if p.lines.iter().any(|l| l.just == Justification::Eq2) {
        return Err(ProofError::Precondition("general (=₂) instances present; normalise identity first".into()));
    }
    if !p.conclusion().is_some_and(|c| c.alpha_eq(e)) {
        return Err(ProofError::Precondition(format!("the proof does not conclude {e}")));
    }
    let threshold = metrics_unchecked(&p).rank.max(1);
    let mut trace = ElimTrace::default();
    for _ in 0..MAX_STEPS {
        let before = metrics_unchecked(&p);
        match special_step(&p, e, threshold)? {
            Some((q, term)) => {
                p = prune(&q);
                trace.steps.push(ElimStep { term, strategy: Strategy::Special, before, after: metrics_unchecked(&p) });
            }
            None => return Ok((p, trace)),
        }
    }
    Err(ProofError::Precondition(format!("special terms remain after {MAX_STEPS} steps")))
}

struct Instance {
    line: usize,
    t: Term,
    u: Term,
    left: Term,
    right: Term,
    rank: usize,
    degree: usize,
    args: Vec<Term>,
    ty: crate::syntax::EpsilonType,
}

fn instances(p: &Proof) -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, l) in p.lines.iter().enumerate() {
        if l.just != Justification::EqEps {
            continue;
        }
        let (Some(Bindings::EqEps { ty, .. }), Some((t, u, left, right))) =
            (match_schema(&l.formula, Justification::EqEps), eq_eps_parts(&l.formula))
        else {
            continue;
        };
        let Ok((_, args)) = right.epsilon_type() else { continue };
        out.push(Instance {
            line: i,
            t: t.clone(),
            u: u.clone(),
            left: left.clone(),
            right: right.clone(),
            rank: ty.rank(),
            degree: right.degree(),
            args,
            ty,
        });
    }
    out
}

/// One application of the identity Lemma to the largest special term of
/// rank at least `threshold`: `None` when there is none.
pub(crate) fn special_step(
    p: &Proof,
    concl: &Formula,
    threshold: usize,
) -> Result<Option<(Proof, Term)>, ProofError> {
    let oriented = orient(p, threshold)?;
    let p = oriented.as_ref().unwrap_or(p);
    let all = instances(p);
    let Some(chosen) = all.iter().filter(|s| s.rank >= threshold).max_by(|a, b| {
        (a.rank, a.degree)
            .cmp(&(b.rank, b.degree))
            .then_with(|| a.ty.cmp(&b.ty))
            .then_with(|| instance_cmp(&a.args, &b.args))
            .then_with(|| b.line.cmp(&a.line))
    }) else {
        return Ok(None);
    };
    if chosen.left.alpha_eq(&chosen.right) {
        // t = t -> e = e follows from e = e.
        let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, p.hypotheses.clone());
        let line = chosen.line;
        let new = copy_mapped(
            &mut b,
            p,
            |b, i, f| {
                if i != line {
                    return Ok(None);
                }
                let refl = b.line(Formula::eq(chosen.left.clone(), chosen.left.clone()), Justification::Eq1);
                Ok(Some(b.taut_mp(&[refl], f)))
            },
            Formula::clone,
        )?;
        let q = checked(b.finish_at(*new.last().expect("nonempty")))?;
        return Ok(Some((q, chosen.right.clone())));
    }
    let (e, e1) = (&chosen.right, &chosen.left);
    if concl.has_subterm(e) || p.hypotheses.iter().any(|h| h.has_subterm(e)) {
        return Err(ProofError::Precondition(format!("{e} occurs in the conclusion or a hypothesis")));
    }
    if e1.has_subterm(e) {
        return Err(ProofError::Invalid(alloc::vec![(chosen.line, format!("{e} occurs inside {e1}"))]));
    }
    let h = Formula::eq(chosen.t.clone(), chosen.u.clone());
    let instance = &p.lines[chosen.line].formula;

    // From t = u: the proof with e replaced by e′ throughout, repaired.
    let mut avoid = all_vars(p);
    avoid.extend(h.all_vars());
    let mut hyps = p.hypotheses.clone();
    hyps.push(h.clone());
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, hyps);
    let hline = b.hyp(h.clone());
    let new = copy_mapped(
        &mut b,
        p,
        |b, i, f| repair(b, &mut avoid, p, i, f, chosen, hline),
        |f| f.replace_subterm(e, e1),
    )?;
    let with_eq = deduction_transform(&checked(b.finish_at(*new.last().expect("nonempty")))?, &h)?;

    // From t ≠ u: the instance follows by a tautology.
    let neq = Formula::not(h.clone());
    let mut hyps = p.hypotheses.clone();
    hyps.push(neq.clone());
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, hyps);
    let nline = b.hyp(neq.clone());
    let new = copy_mapped(
        &mut b,
        p,
        |b, _, f| Ok(f.alpha_eq(instance).then(|| b.taut_mp(&[nline], f))),
        Formula::clone,
    )?;
    let without = deduction_transform(&b.finish_at(*new.last().expect("nonempty")), &neq)?;

    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, p.hypotheses.clone());
    let l1 = *b.splice(&with_eq).last().expect("nonempty");
    let l2 = *b.splice(&without).last().expect("nonempty");
    let last = b.taut_mp(&[l1, l2], concl.clone());
    let q = checked(b.finish_at(last))?;
    descent(p, &q, chosen)?;
    Ok(Some((q, e.clone())))
}

/// `p` with every (=_ε) instance `t = u -> l = r` of rank at least
/// `threshold` and `r ≺ l` derived from `u = t -> r = l` instead, so that
/// the ≺-larger side is always the special one. `None` if nothing changes.
fn orient(p: &Proof, threshold: usize) -> Result<Option<Proof>, ProofError> {
    let flip: Vec<Instance> = instances(p)
        .into_iter()
        .filter(|s| s.rank >= threshold && instance_cmp(&s.args, &s.args_left()) == Ordering::Less)
        .collect();
    if flip.is_empty() {
        return Ok(None);
    }
    let mut b = ProofBuilder::new(p.sig.clone(), p.calculus, p.hypotheses.clone());
    let new = copy_mapped(
        &mut b,
        p,
        |b, i, f| {
            let Some(s) = flip.iter().find(|s| s.line == i) else { return Ok(None) };
            let eq = |a: &Term, c: &Term| Formula::eq(a.clone(), c.clone());
            let (t, u, l, r) = (&s.t, &s.u, &s.left, &s.right);
            let ax = b.line(Formula::imp(eq(u, t), eq(r, l)), Justification::EqEps);
            let sym_h = b.line(Formula::imp(eq(t, u), Formula::imp(eq(t, t), eq(u, t))), Justification::Eq2Pred);
            let refl_t = b.line(eq(t, t), Justification::Eq1);
            let sym_c = b.line(Formula::imp(eq(r, l), Formula::imp(eq(r, r), eq(l, r))), Justification::Eq2Pred);
            let refl_r = b.line(eq(r, r), Justification::Eq1);
            Ok(Some(b.taut_mp(&[ax, sym_h, refl_t, sym_c, refl_r], f)))
        },
        Formula::clone,
    )?;
    Ok(Some(checked(b.finish_at(*new.last().expect("nonempty")))?))
}

/// A line of `p[e/e′]` that is no longer an axiom instance, derived from
/// `t = u` (line `hline`). `None` keeps the line as it is.
fn repair(
    b: &mut ProofBuilder,
    avoid: &mut BTreeSet<Var>,
    p: &Proof,
    i: usize,
    f: Formula,
    chosen: &Instance,
    hline: usize,
) -> Result<Option<usize>, ProofError> {
    let line = &p.lines[i];
    let broken = |msg: &str| ProofError::Invalid(alloc::vec![(i, String::from(msg))]);
    match line.just {
        Justification::Crit => {
            if match_schema(&f, Justification::Crit).is_some() {
                return Ok(None);
            }
            let Some(Bindings::Crit { eps, witness, .. }) = match_schema(&line.formula, Justification::Crit) else {
                unreachable!("checked critical formula")
            };
            if !eps.alpha_eq(&chosen.right) {
                return Err(broken("critical formula of another term broken by the replacement"));
            }
            // A(s, u) -> A(e, u) becomes A(s′, u) -> A(e′, u); go through
            // the critical formula A(s′, t) -> A(e′, t) of e′.
            let (ty, mut args) = chosen.right.epsilon_type()?;
            let Some(k) = (0..args.len()).find(|&k| !args[k].alpha_eq(&chosen.args_left()[k])) else {
                return Err(broken("no differing slot"));
            };
            let z = fresh_var(avoid);
            avoid.insert(z.clone());
            args[k] = Term::Var(z.clone());
            let Term::Eps(y, gbody) = ty.instantiate(&args) else { unreachable!("types are epsilon terms") };
            let s = witness.replace_subterm(&chosen.right, &chosen.left);
            let at_s = gbody.substitute(&y, &s);
            let at_e1 = gbody.substitute(&y, &chosen.left);
            let i1 = eq2_into(b, avoid, &chosen.t, &chosen.u, &at_s, &z)?;
            let i2 = eq2_into(b, avoid, &chosen.t, &chosen.u, &at_e1, &z)?;
            let slot = &chosen.args_left()[k];
            let crit = b.line(Formula::imp(at_s.substitute(&z, slot), at_e1.substitute(&z, slot)), Justification::Crit);
            Ok(Some(b.taut_mp(&[hline, i1, crit, i2], f)))
        }
        Justification::EqEps => {
            if match_schema(&f, Justification::EqEps).is_some() {
                return Ok(None);
            }
            let Some((t1, u1, l, r)) = eq_eps_parts(&f) else { return Err(broken("malformed (=_ε) line")) };
            let mut ctx = EqCtx {
                b,
                hline,
                h: (chosen.t.clone(), chosen.u.clone()),
                prem: Formula::eq(t1.clone(), u1.clone()),
                edge: (t1.clone(), u1.clone()),
            };
            let (l, r) = (l.clone(), r.clone());
            ctx.derive(&l, &r).map(Some).ok_or_else(|| broken("cannot re-derive (=_ε) instance"))
        }
        Justification::Hyp if !f.alpha_eq(&line.formula) => Err(broken("hypothesis changed by the replacement")),
        _ => Ok(None),
    }
}

impl Instance {
    fn args_left(&self) -> Vec<Term> {
        self.left.epsilon_type().map(|(_, a)| a).unwrap_or_default()
    }
}

/// Equations `prem -> a = c` from the hypothesis `h`, the premise `prem`,
/// and congruence.
struct EqCtx<'a> {
    b: &'a mut ProofBuilder,
    hline: usize,
    h: (Term, Term),
    prem: Formula,
    edge: (Term, Term),
}

impl EqCtx<'_> {
    fn goal(&self, a: &Term, c: &Term) -> Formula {
        Formula::imp(self.prem.clone(), Formula::eq(a.clone(), c.clone()))
    }

    fn derive(&mut self, a: &Term, c: &Term) -> Option<usize> {
        let goal = self.goal(a, c);
        if let Some(i) = self.b.find(&goal) {
            return Some(i);
        }
        if a.alpha_eq(c) {
            let refl = self.b.line(Formula::eq(a.clone(), a.clone()), Justification::Eq1);
            return Some(self.b.taut_mp(&[refl], goal));
        }
        if let Some(steps) = self.path(a, c) {
            return Some(self.chain(a, steps));
        }
        let (schema, ls, rs, build): (_, Vec<Term>, Vec<Term>, Box<dyn Fn(&[Term]) -> Term>) = match (a, c) {
            (Term::App(f, ls), Term::App(g, rs)) if f == g && ls.len() == rs.len() => {
                let f = f.clone();
                (Justification::Eq2Fn, ls.clone(), rs.clone(), Box::new(move |xs: &[Term]| Term::App(f.clone(), xs.to_vec())))
            }
            (Term::Eps(..), Term::Eps(..)) => {
                let (ta, ls) = a.epsilon_type().ok()?;
                let (tc, rs) = c.epsilon_type().ok()?;
                if ta != tc {
                    return None;
                }
                (Justification::EqEps, ls, rs, Box::new(move |xs: &[Term]| ta.instantiate(xs)))
            }
            _ => return None,
        };
        let mut cur = ls.clone();
        let mut steps = Vec::new();
        for k in 0..ls.len() {
            if ls[k].alpha_eq(&rs[k]) {
                continue;
            }
            let sub = self.derive(&ls[k], &rs[k])?;
            let mut next = cur.clone();
            next[k] = rs[k].clone();
            let (from, to) = (build(&cur), build(&next));
            let ax = self.b.line(
                Formula::imp(Formula::eq(ls[k].clone(), rs[k].clone()), Formula::eq(from.clone(), to.clone())),
                schema,
            );
            let step = self.b.taut_mp(&[sub, ax], self.goal(&from, &to));
            steps.push((step, from, to));
            cur = next;
        }
        Some(self.chain(a, steps))
    }

    /// Steps `prem -> v = w` along the known equations from `a` to `c`.
    fn path(&mut self, a: &Term, c: &Term) -> Option<Vec<(usize, Term, Term)>> {
        let edges = [(self.h.0.clone(), self.h.1.clone(), true), (self.edge.0.clone(), self.edge.1.clone(), false)];
        // Breadth-first search over at most four nodes.
        let mut frontier: Vec<(Term, Vec<(usize, bool)>)> = alloc::vec![(a.clone(), Vec::new())];
        let mut seen: Vec<Term> = alloc::vec![a.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (v, route) in frontier {
                if v.alpha_eq(c) {
                    let mut steps = Vec::new();
                    let mut at = a.clone();
                    for (k, forward) in route {
                        let (x, y, from_h) = &edges[k];
                        let (from, to) = if forward { (x, y) } else { (y, x) };
                        debug_assert!(from.alpha_eq(&at));
                        let line = self.edge_line(x, y, *from_h, forward);
                        steps.push((line, from.clone(), to.clone()));
                        at = to.clone();
                    }
                    return Some(steps);
                }
                for (k, (x, y, _)) in edges.iter().enumerate() {
                    for (from, to, forward) in [(x, y, true), (y, x, false)] {
                        if from.alpha_eq(&v) && !seen.iter().any(|s| s.alpha_eq(to)) {
                            seen.push(to.clone());
                            let mut r = route.clone();
                            r.push((k, forward));
                            next.push((to.clone(), r));
                        }
                    }
                }
            }
            frontier = next;
        }
        None
    }

    /// `prem -> x = y` (or `y = x` when not `forward`) for a known equation.
    fn edge_line(&mut self, x: &Term, y: &Term, from_h: bool, forward: bool) -> usize {
        let eq = Formula::eq(x.clone(), y.clone());
        let mut premises = Vec::new();
        if from_h {
            premises.push(self.hline);
        }
        if forward {
            return self.b.taut_mp(&premises, self.goal(x, y));
        }
        let refl = self.b.line(Formula::eq(x.clone(), x.clone()), Justification::Eq1);
        let ax = self.b.line(
            Formula::imp(eq, Formula::imp(Formula::eq(x.clone(), x.clone()), Formula::eq(y.clone(), x.clone()))),
            Justification::Eq2Pred,
        );
        premises.extend([refl, ax]);
        self.b.taut_mp(&premises, self.goal(y, x))
    }

    /// `prem -> a = w_m` from steps `prem -> w_{k-1} = w_k` with `w_0 = a`.
    fn chain(&mut self, a: &Term, steps: Vec<(usize, Term, Term)>) -> usize {
        let refl = self.b.line(Formula::eq(a.clone(), a.clone()), Justification::Eq1);
        let mut acc = self.b.taut_mp(&[refl], self.goal(a, a));
        for (line, v, w) in steps {
            let ax = self.b.line(
                Formula::imp(
                    Formula::eq(v.clone(), w.clone()),
                    Formula::imp(Formula::eq(a.clone(), v.clone()), Formula::eq(a.clone(), w.clone())),
                ),
                Justification::Eq2Pred,
            );
            acc = self.b.taut_mp(&[acc, line, ax], self.goal(a, &w));
        }
        acc
    }
}

/// The multiset of (=_ε) instances of the eliminated type, each measured
/// by its ≺-larger side, must shrink under ≺.
fn descent(before: &Proof, after: &Proof, chosen: &Instance) -> Result<(), ProofError> {
    let measure = |p: &Proof| {
        let mut seen = BTreeSet::new();
        let mut out: Vec<Vec<Term>> = instances(p)
            .into_iter()
            .filter(|s| s.ty == chosen.ty && seen.insert(p.lines[s.line].formula.canon()))
            .map(|s| {
                let left = s.args_left();
                if instance_cmp(&s.args, &left) == Ordering::Less { left } else { s.args }
            })
            .collect();
        out.sort_by(|a, b| instance_cmp(b, a));
        out
    };
    let (m0, m1) = (measure(before), measure(after));
    let cmp = m1
        .iter()
        .zip(&m0)
        .map(|(a, b)| instance_cmp(a, b))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| m1.len().cmp(&m0.len()));
    if cmp == Ordering::Less {
        Ok(())
    } else {
        Err(ProofError::Invalid(alloc::vec![(chosen.line, format!("≺-descent violated eliminating {}", chosen.right))]))
    }
}

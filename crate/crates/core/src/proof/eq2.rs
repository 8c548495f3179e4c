//! Deriving instances of the general identity schema from (=₁), the
//! restricted schemas for predicates and functions, and the epsilon identity
//! schema.

use super::{Calculus, Justification, Proof, ProofBuilder, ProofError};
use crate::syntax::{fresh_var, Formula, Signature, Term, Var};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// A proof of `t = u -> (A[x/t] <-> A[x/u])` whose identity axioms are all
/// restricted instances.
pub fn derive_eq2(sig: &Signature, t: &Term, u: &Term, a: &Formula, x: &Var) -> Result<Proof, ProofError> {
    if !sig.identity {
        return Err(ProofError::Precondition("the language has no identity".into()));
    }
    let uses_eps = a.contains_eps() || t.contains_eps() || u.contains_eps();
    let calculus = match (uses_eps, a.contains_quantifier()) {
        (false, false) => Calculus::EC,
        (true, false) => Calculus::ECeps,
        (false, true) => Calculus::ECforall,
        (true, true) => Calculus::ECepsForall,
    };
    let mut b = ProofBuilder::new(sig.clone(), calculus, Vec::new());
    let mut avoid = a.all_vars();
    avoid.extend(t.all_vars());
    avoid.extend(u.all_vars());
    avoid.insert(x.clone());
    let last = Eq2Ctx { b: &mut b, avoid: &mut avoid, t, u, x }.formula(a)?;
    Ok(b.finish_at(last))
}

/// Derives `t = u -> (A[x/t] <-> A[x/u])` inside `b`. Eigenvariables are
/// drawn fresh from `avoid`, which must cover every variable of the proof
/// being built, including lines still to come.
pub(crate) fn eq2_into(
    b: &mut ProofBuilder,
    avoid: &mut BTreeSet<Var>,
    t: &Term,
    u: &Term,
    a: &Formula,
    x: &Var,
) -> Result<usize, ProofError> {
    Eq2Ctx { b, avoid, t, u, x }.formula(a)
}

struct Eq2Ctx<'a> {
    b: &'a mut ProofBuilder,
    avoid: &'a mut BTreeSet<Var>,
    t: &'a Term,
    u: &'a Term,
    x: &'a Var,
}

impl Eq2Ctx<'_> {
    fn h(&self) -> Formula {
        Formula::eq(self.t.clone(), self.u.clone())
    }

    fn fresh(&mut self) -> Var {
        let v = fresh_var(self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    /// `H -> (A[x/t] <-> A[x/u])`.
    fn formula(&mut self, a: &Formula) -> Result<usize, ProofError> {
        let h = self.h();
        let at = a.substitute(self.x, self.t);
        let au = a.substitute(self.x, self.u);
        let goal = Formula::imp(h.clone(), Formula::iff(at.clone(), au.clone()));
        if let Some(i) = self.b.find(&goal) {
            return Ok(i);
        }
        if !a.occurs_free(self.x) || at.alpha_eq(&au) {
            return Ok(self.b.taut(goal));
        }
        match a {
            Formula::Atom(..) | Formula::Eq(..) => self.atom(a, goal),
            Formula::Bot | Formula::Top => Ok(self.b.taut(goal)),
            Formula::Not(c) => {
                let i = self.formula(c)?;
                Ok(self.b.taut_mp(&[i], goal))
            }
            Formula::And(c, d) | Formula::Or(c, d) | Formula::Imp(c, d) | Formula::Iff(c, d) => {
                let i = self.formula(c)?;
                let j = self.formula(d)?;
                Ok(self.b.taut_mp(&[i, j], goal))
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                if !self.b.calculus().has_quantifiers() {
                    return Err(ProofError::Precondition("quantified formula outside a quantifier calculus".into()));
                }
                let z = self.fresh();
                let zt = Term::Var(z.clone());
                let inner = body.substitute(y, &zt);
                let iff = self.formula(&inner)?;
                let (bt, bu) = (inner.substitute(self.x, self.t), inner.substitute(self.x, self.u));
                let universal = matches!(a, Formula::Forall(..));
                // Both premises come before either rule so that z stays out of later lines.
                let mut pending = Vec::new();
                for (from_q, to_q, from_b, to_b) in [(&at, &au, &bt, &bu), (&au, &at, &bu, &bt)] {
                    pending.push(if universal {
                        // (H & all y. B_from) -> B_to(z), then R∀
                        let ax = self.b.line(Formula::imp(from_q.clone(), from_b.clone()), Justification::AxForall);
                        let ant = Formula::and(h.clone(), from_q.clone());
                        let step = self.b.taut_mp(&[iff, ax], Formula::imp(ant.clone(), to_b.clone()));
                        (Formula::imp(ant, to_q.clone()), Justification::RForall(step))
                    } else {
                        // B_from(z) -> (H -> ex y. B_to), then R∃
                        let ax = self.b.line(Formula::imp(to_b.clone(), to_q.clone()), Justification::AxExists);
                        let cons = Formula::imp(h.clone(), to_q.clone());
                        let step = self.b.taut_mp(&[iff, ax], Formula::imp(from_b.clone(), cons.clone()));
                        (Formula::imp(from_q.clone(), cons), Justification::RExists(step))
                    });
                }
                let dirs: Vec<usize> = pending.into_iter().map(|(f, j)| self.b.push(f, j)).collect();
                Ok(self.b.taut_mp(&dirs, goal))
            }
        }
    }

    /// Atomic formulas, one argument position at a time.
    fn atom(&mut self, a: &Formula, goal: Formula) -> Result<usize, ProofError> {
        let args: Vec<Term> = match a {
            Formula::Atom(_, args) => args.clone(),
            Formula::Eq(l, r) => alloc::vec![l.clone(), r.clone()],
            _ => unreachable!("atomic formula"),
        };
        let rebuild = |args: &[Term]| match a {
            Formula::Atom(p, _) => Formula::Atom(p.clone(), args.to_vec()),
            _ => Formula::Eq(args[0].clone(), args[1].clone()),
        };
        let h = self.h();
        let from: Vec<Term> = args.iter().map(|s| s.substitute(self.x, self.t)).collect();
        let to: Vec<Term> = args.iter().map(|s| s.substitute(self.x, self.u)).collect();
        let mut current = from.clone();
        // H -> (A_from <-> A_current)
        let mut acc = self.b.taut(Formula::imp(h.clone(), Formula::iff(rebuild(&from), rebuild(&from))));
        for i in 0..args.len() {
            if from[i].alpha_eq(&to[i]) {
                continue;
            }
            let fwd = self.term(&args[i])?;
            let bwd = self.sym(fwd);
            let mut next = current.clone();
            next[i] = to[i].clone();
            let (p_cur, p_next) = (rebuild(&current), rebuild(&next));
            let ax1 = self.b.line(
                Formula::imp(Formula::eq(from[i].clone(), to[i].clone()), Formula::imp(p_cur.clone(), p_next.clone())),
                Justification::Eq2Pred,
            );
            let ax2 = self.b.line(
                Formula::imp(Formula::eq(to[i].clone(), from[i].clone()), Formula::imp(p_next.clone(), p_cur.clone())),
                Justification::Eq2Pred,
            );
            acc = self.b.taut_mp(
                &[acc, fwd, bwd, ax1, ax2],
                Formula::imp(h.clone(), Formula::iff(rebuild(&from), p_next)),
            );
            current = next;
        }
        Ok(self.b.taut_mp(&[acc], goal))
    }

    /// From line `H -> a = b`, the line `H -> b = a`.
    fn sym(&mut self, line: usize) -> usize {
        let Formula::Imp(h, e) = self.b.formula(line).clone() else { unreachable!("equation line") };
        let Formula::Eq(a, b) = *e else { unreachable!("equation line") };
        let refl = self.b.line(Formula::eq(a.clone(), a.clone()), Justification::Eq1);
        let ax = self.b.line(
            Formula::imp(Formula::eq(a.clone(), b.clone()), Formula::imp(Formula::eq(a.clone(), a.clone()), Formula::eq(b.clone(), a.clone()))),
            Justification::Eq2Pred,
        );
        self.b.taut_mp(&[line, refl, ax], Formula::imp(*h, Formula::eq(b, a)))
    }

    /// From `H -> a = b` and `H -> b = c`, the line `H -> a = c`.
    fn trans(&mut self, ab: usize, bc: usize) -> usize {
        let Formula::Imp(h, e1) = self.b.formula(ab).clone() else { unreachable!("equation line") };
        let Formula::Imp(_, e2) = self.b.formula(bc).clone() else { unreachable!("equation line") };
        let (Formula::Eq(a, b), Formula::Eq(_, c)) = (*e1, *e2) else { unreachable!("equation lines") };
        let ba = self.sym(ab);
        // b = a -> (b = c -> a = c)
        let ax = self.b.line(
            Formula::imp(Formula::eq(b.clone(), a.clone()), Formula::imp(Formula::eq(b.clone(), c.clone()), Formula::eq(a.clone(), c.clone()))),
            Justification::Eq2Pred,
        );
        self.b.taut_mp(&[ba, bc, ax], Formula::imp(*h, Formula::eq(a, c)))
    }

    /// `H -> s[x/t] = s[x/u]`.
    fn term(&mut self, s: &Term) -> Result<usize, ProofError> {
        let h = self.h();
        let st = s.substitute(self.x, self.t);
        let su = s.substitute(self.x, self.u);
        let goal = Formula::imp(h.clone(), Formula::eq(st.clone(), su.clone()));
        if let Some(i) = self.b.find(&goal) {
            return Ok(i);
        }
        if !s.occurs_free(self.x) || st.alpha_eq(&su) {
            let refl = self.b.line(Formula::eq(st.clone(), st), Justification::Eq1);
            return Ok(self.b.taut_mp(&[refl], goal));
        }
        match s {
            Term::Var(_) => Ok(self.b.taut(goal)),
            Term::App(f, args) => {
                let from: Vec<Term> = args.iter().map(|a| a.substitute(self.x, self.t)).collect();
                let to: Vec<Term> = args.iter().map(|a| a.substitute(self.x, self.u)).collect();
                let steps: Vec<(usize, Term, Term)> = self.slot_steps(args, &from, &to, |xs| Term::App(f.clone(), xs.to_vec()), Justification::Eq2Fn)?;
                Ok(self.chain(steps, goal))
            }
            Term::Eps(..) => {
                let (ty, args) = s.epsilon_type()?;
                let from: Vec<Term> = args.iter().map(|a| a.substitute(self.x, self.t)).collect();
                let to: Vec<Term> = args.iter().map(|a| a.substitute(self.x, self.u)).collect();
                let steps = self.slot_steps(&args, &from, &to, |xs| ty.instantiate(xs), Justification::EqEps)?;
                Ok(self.chain(steps, goal))
            }
        }
    }

    /// One line `H -> F(current) = F(next)` per differing slot.
    fn slot_steps(
        &mut self,
        args: &[Term],
        from: &[Term],
        to: &[Term],
        build: impl Fn(&[Term]) -> Term,
        schema: Justification,
    ) -> Result<Vec<(usize, Term, Term)>, ProofError> {
        let h = self.h();
        let mut current = from.to_vec();
        let mut steps = Vec::new();
        for i in 0..args.len() {
            if from[i].alpha_eq(&to[i]) {
                continue;
            }
            let sub = self.term(&args[i])?;
            let mut next = current.clone();
            next[i] = to[i].clone();
            let (l, r) = (build(&current), build(&next));
            let ax = self.b.line(
                Formula::imp(Formula::eq(from[i].clone(), to[i].clone()), Formula::eq(l.clone(), r.clone())),
                schema,
            );
            let step = self.b.taut_mp(&[sub, ax], Formula::imp(h.clone(), Formula::eq(l.clone(), r.clone())));
            steps.push((step, l, r));
            current = next;
        }
        Ok(steps)
    }

    fn chain(&mut self, steps: Vec<(usize, Term, Term)>, goal: Formula) -> usize {
        let mut iter = steps.into_iter();
        let (mut acc, _, _) = iter.next().expect("a differing slot exists");
        for (step, _, _) in iter {
            acc = self.trans(acc, step);
        }
        self.b.taut_mp(&[acc], goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;
    use crate::syntax::{parse_formula, parse_term};

    fn check(a: &str, t: &str, u: &str) -> Proof {
        let a = parse_formula(a, None).unwrap();
        let (t, u) = (parse_term(t, None).unwrap(), parse_term(u, None).unwrap());
        let mut sig = Signature::infer([&a, &Formula::eq(t.clone(), u.clone())]).unwrap();
        sig.identity = true;
        let x = Var::new("x");
        let p = derive_eq2(&sig, &t, &u, &a, &x).unwrap();
        let r = check_proof(&p);
        assert!(r.ok, "{:?}\n{:#?}", r.failures, p.lines);
        let goal = Formula::imp(Formula::eq(t.clone(), u.clone()), Formula::iff(a.substitute(&x, &t), a.substitute(&x, &u)));
        assert!(p.conclusion().unwrap().alpha_eq(&goal));
        assert!(p.lines.iter().all(|l| l.just != Justification::Eq2));
        p
    }

    #[test]
    fn predicate() {
        let p = check("P(x)", "c", "d");
        assert!(p.lines.iter().filter(|l| l.just == Justification::Eq2Pred).count() >= 2);
    }

    #[test]
    fn identity_predicate() {
        check("x = c", "a", "b");
    }

    #[test]
    fn no_occurrence() {
        let p = check("P(c)", "a", "b");
        assert!(p.lines.iter().all(|l| !l.just.is_identity_axiom()));
    }

    #[test]
    fn nested_terms_and_connectives() {
        check("R(f(x, g(x)), x) & ~P(x) -> P(c)", "a", "b");
    }

    #[test]
    fn epsilon_terms() {
        let p = check("P(eps y. R(y, f(x), x))", "a", "b");
        assert!(p.lines.iter().any(|l| l.just == Justification::EqEps));
    }

    #[test]
    fn quantifiers() {
        check("all y. R(x, y) | ex z. R(z, x)", "a", "f(b)");
    }
}

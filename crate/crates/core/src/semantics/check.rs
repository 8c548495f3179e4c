//! Truth notions and consequence relations, checked by brute force.

use super::enumerate::{enumerate_choice_functions, enumerate_intensional_operators, enumerate_structures, epsilon_types};
use super::eval::{Chooser, Evaluator};
use super::{Assignment, ExtChoiceFunction, IntChoiceOperator, Limits, SemanticsError, Structure};
use crate::syntax::{Formula, Signature, Var};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// Which kind of chooser ranges over "all choice functions".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceSpace {
    Extensional,
    Intensional,
}

/// An owned chooser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Choice {
    Ext(ExtChoiceFunction),
    Int(IntChoiceOperator),
}

impl Choice {
    pub fn chooser(&self) -> Chooser<'_> {
        match self {
            Choice::Ext(phi) => Chooser::Ext(phi),
            Choice::Int(psi) => Chooser::Int(psi),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TruthMode<'a> {
    /// `M, Φ, s ⊨ A`
    Local(&'a Choice, &'a Assignment),
    /// `M, Φ ⊨ A`: every assignment.
    Truth(&'a Choice),
    /// `M, s ⊨^g A`: every choice function.
    Generic(&'a Assignment),
    /// `M ⊨ A`: every choice function and assignment.
    Valid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consequence {
    Local,
    Truth,
    Generic,
    Validity,
}

impl Consequence {
    /// `l`, `t` (or `plain`), `g` or `v`.
    pub fn parse(s: &str) -> Option<Consequence> {
        match s {
            "l" => Some(Consequence::Local),
            "t" | "plain" => Some(Consequence::Truth),
            "g" => Some(Consequence::Generic),
            "v" => Some(Consequence::Validity),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Consequence::Local => "l",
            Consequence::Truth => "t",
            Consequence::Generic => "g",
            Consequence::Validity => "v",
        }
    }
}

/// Where the conclusion fails. For generic consequence, `premise_assignment`
/// is the assignment at which the premises are generically true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub structure: Structure,
    pub choice: Choice,
    pub assignment: Assignment,
    pub premise_assignment: Option<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample on any domain up to the bound.
    Holds { max_domain: usize },
    Counterexample(Box<Counterexample>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

fn vars_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Vec<Var> {
    let mut vs = BTreeSet::new();
    for f in fs {
        vs.extend(f.free_vars());
    }
    vs.into_iter().collect()
}

/// Every chooser of the given kind on a domain of size `n`. Intensional
/// operators are keyed by the epsilon types of `formulas`.
pub fn choices(
    n: usize,
    formulas: &[&Formula],
    space: ChoiceSpace,
    limits: &Limits,
) -> Result<Vec<Choice>, SemanticsError> {
    Ok(match space {
        ChoiceSpace::Extensional => enumerate_choice_functions(n, limits)?.map(Choice::Ext).collect(),
        ChoiceSpace::Intensional => {
            let types = epsilon_types(formulas.iter().copied())?;
            enumerate_intensional_operators(n, &types, limits)?.map(Choice::Int).collect()
        }
    })
}

pub fn check_truth_mode(
    m: &Structure,
    a: &Formula,
    mode: TruthMode<'_>,
    space: ChoiceSpace,
    limits: &Limits,
) -> Result<bool, SemanticsError> {
    let vars = vars_of([a]);
    let every_s = |c: &Choice| -> Result<bool, SemanticsError> {
        let mut ev = Evaluator::new(m, c.chooser());
        for s in Assignment::all(&vars, m.size()) {
            if !ev.formula(&s, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match mode {
        TruthMode::Local(c, s) => Evaluator::new(m, c.chooser()).formula(s, a),
        TruthMode::Truth(c) => every_s(c),
        TruthMode::Generic(s) => {
            for c in choices(m.size(), &[a], space, limits)? {
                if !Evaluator::new(m, c.chooser()).formula(s, a)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        TruthMode::Valid => {
            for c in choices(m.size(), &[a], space, limits)? {
                if !every_s(&c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Searches all structures with domains `1..=max_domain` over the symbols
/// of `gamma` and `a` for a counterexample to `gamma ⊨ a`.
pub fn check_consequence(
    gamma: &[Formula],
    a: &Formula,
    mode: Consequence,
    max_domain: usize,
    space: ChoiceSpace,
    limits: &Limits,
) -> Result<Verdict, SemanticsError> {
    let all: Vec<&Formula> = gamma.iter().chain([a]).collect();
    let sig = Signature::infer(all.iter().copied())?;
    let vars = vars_of(all.iter().copied());
    for n in 1..=max_domain {
        let cs = choices(n, &all, space, limits)?;
        let ss: Vec<Assignment> = Assignment::all(&vars, n).collect();
        for m in enumerate_structures(&sig, n, limits)? {
            // premises[c][s] and conclusion[c][s]
            let mut premises = Vec::with_capacity(cs.len());
            let mut conclusion = Vec::with_capacity(cs.len());
            for c in &cs {
                let mut ev = Evaluator::new(&m, c.chooser());
                let mut p = Vec::with_capacity(ss.len());
                let mut q = Vec::with_capacity(ss.len());
                for s in &ss {
                    let mut ok = true;
                    for g in gamma {
                        if !ev.formula(s, g)? {
                            ok = false;
                            break;
                        }
                    }
                    p.push(ok);
                    q.push(ev.formula(s, a)?);
                }
                premises.push(p);
                conclusion.push(q);
            }
            if let Some(cex) = search(mode, &premises, &conclusion) {
                let (ci, si, premise) = cex;
                return Ok(Verdict::Counterexample(Box::new(Counterexample {
                    structure: m,
                    choice: cs[ci].clone(),
                    assignment: ss[si].clone(),
                    premise_assignment: premise.map(|k| ss[k].clone()),
                })));
            }
        }
    }
    Ok(Verdict::Holds { max_domain })
}

/// The chooser and assignment falsifying the conclusion, plus the premise
/// assignment for generic consequence.
fn search(mode: Consequence, p: &[Vec<bool>], q: &[Vec<bool>]) -> Option<(usize, usize, Option<usize>)> {
    let ns = p.first().map_or(0, Vec::len);
    let failure = || (0..p.len()).flat_map(|c| (0..ns).map(move |s| (c, s))).find(|&(c, s)| !q[c][s]);
    match mode {
        Consequence::Local => (0..p.len())
            .flat_map(|c| (0..ns).map(move |s| (c, s)))
            .find(|&(c, s)| p[c][s] && !q[c][s])
            .map(|(c, s)| (c, s, None)),
        Consequence::Truth => (0..p.len()).find_map(|c| {
            let all = p[c].iter().all(|b| *b);
            all.then(|| (0..ns).find(|&s| !q[c][s]).map(|s| (c, s, None))).flatten()
        }),
        Consequence::Generic => {
            let s0 = (0..ns).find(|&s| p.iter().all(|row| row[s]))?;
            failure().map(|(c, s)| (c, s, Some(s0)))
        }
        Consequence::Validity => {
            if p.iter().all(|row| row.iter().all(|b| *b)) {
                failure().map(|(c, s)| (c, s, None))
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }

    fn verdict(g: &[&str], a: &str, mode: Consequence, space: ChoiceSpace) -> Verdict {
        let g: Vec<Formula> = g.iter().map(|s| f(s)).collect();
        check_consequence(&g, &f(a), mode, 2, space, &Limits::default()).unwrap()
    }

    #[test]
    fn premise_entails_itself_in_every_mode() {
        for mode in [Consequence::Local, Consequence::Truth, Consequence::Generic, Consequence::Validity] {
            assert!(verdict(&["P(eps x. Q(x))"], "P(eps x. Q(x))", mode, ChoiceSpace::Extensional).holds(), "{mode:?}");
        }
    }

    #[test]
    fn generic_consequence_concludes_validity() {
        // Generic truth of the premise at one assignment does not make the
        // same open formula valid.
        assert!(!verdict(&["P(x)"], "P(x)", Consequence::Generic, ChoiceSpace::Extensional).holds());
        assert!(verdict(&["P(x)"], "P(x)", Consequence::Truth, ChoiceSpace::Extensional).holds());
    }

    #[test]
    fn critical_formula_is_valid() {
        let a = f("P(c) -> P(eps x. P(x))");
        let sig = Signature::infer([&a]).unwrap();
        for n in 1..=3 {
            for m in enumerate_structures(&sig, n, &Limits::default()).unwrap() {
                assert!(check_truth_mode(&m, &a, TruthMode::Valid, ChoiceSpace::Extensional, &Limits::default()).unwrap());
            }
        }
    }

    #[test]
    fn epsilon_of_empty_predicate() {
        let mut m = Structure::new(2).unwrap();
        m.set_predicate("P", 1, &[]).unwrap();
        let l = Limits::default();
        let s = Assignment::new();
        let pos = f("P(eps x. P(x))");
        let neg = f("~P(eps x. P(x))");
        assert!(!check_truth_mode(&m, &pos, TruthMode::Generic(&s), ChoiceSpace::Extensional, &l).unwrap());
        assert!(check_truth_mode(&m, &neg, TruthMode::Generic(&s), ChoiceSpace::Extensional, &l).unwrap());
    }

    #[test]
    fn local_and_truth_consequence_differ_on_open_formulas() {
        // P(x) ⊨ ∀x P(x) as a truth consequence, not as a local one.
        assert!(verdict(&["P(x)"], "all y. P(y)", Consequence::Truth, ChoiceSpace::Extensional).holds());
        let v = verdict(&["P(x)"], "all y. P(y)", Consequence::Local, ChoiceSpace::Extensional);
        let Verdict::Counterexample(c) = v else { panic!("expected a counterexample") };
        assert_eq!(c.structure.size(), 2);
    }

    #[test]
    fn generic_counterexample_records_the_premise_assignment() {
        let v = verdict(&[], "P(eps x. P(x))", Consequence::Generic, ChoiceSpace::Extensional);
        let Verdict::Counterexample(c) = v else { panic!("expected a counterexample") };
        assert!(c.premise_assignment.is_some());
    }

    #[test]
    fn extensionality_fails_only_intensionally() {
        let ext = "(P(eps x. ~(P(x) <-> P(x) & P(x))) <-> P(eps x. ~(P(x) <-> P(x) & P(x))) & P(eps x. ~(P(x) <-> P(x) & P(x)))) -> eps x. P(x) = eps x. P(x) & P(x)";
        assert!(verdict(&[], ext, Consequence::Validity, ChoiceSpace::Extensional).holds());
        assert!(!verdict(&[], ext, Consequence::Validity, ChoiceSpace::Intensional).holds());
    }
}

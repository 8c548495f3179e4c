mod common;

use common::gen::{eps_term, model, small_formula, term, var};
use common::{elim_corpus, f, laws};
use epsilon_core::proof::{Justification, Proof};
use epsilon_core::semantics::{
    check_consequence, check_truth_mode, enumerate_structures, ChoiceSpace, Consequence, Limits, TruthMode,
};
use epsilon_core::syntax::{Formula, Signature};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn syntax_laws(a in small_formula(), t in term()) {
        laws::syntax_laws(&a, &t)?;
    }

    #[test]
    fn substitution_laws(a in small_formula(), x in var(), y in var(), t in term(), u in term()) {
        laws::substitution_laws(&a, &x, &y, &t, &u)?;
    }

    #[test]
    fn epsilon_types_reconstruct(e in eps_term()) {
        laws::type_laws(&e)?;
    }

    #[test]
    fn semantics_locality_and_substitution((m, phi, s) in model(), a in small_formula(), x in var(), t in term()) {
        laws::semantic_laws(&a, &x, &t, &m, &phi, &s)?;
    }
}

/// Lines of accepted proofs over at most two constants and two unary
/// predicates are valid, or follow from the hypotheses, on domains up to 2.
#[test]
fn checked_proofs_are_sound_at_desk_scale() {
    let limits = Limits::default();
    let mut checked = 0;
    for (name, p, _) in elim_corpus() {
        let sig = signature(&p);
        let small = sig.functions().all(|(_, a)| a == 0)
            && sig.functions().count() <= 2
            && sig.predicates().all(|(_, a)| a == 1)
            && sig.predicates().count() <= 2;
        if !small {
            continue;
        }
        checked += 1;
        for (i, line) in p.lines.iter().enumerate() {
            if p.hypotheses.is_empty() {
                for n in 1..=2 {
                    for m in enumerate_structures(&sig, n, &limits).unwrap() {
                        let ok = check_truth_mode(&m, &line.formula, TruthMode::Valid, ChoiceSpace::Extensional, &limits);
                        assert!(ok.unwrap(), "{name}: line {i} {}", line.formula);
                    }
                }
            } else {
                let v = check_consequence(&p.hypotheses, &line.formula, Consequence::Truth, 2, ChoiceSpace::Extensional, &limits);
                assert!(v.unwrap().holds(), "{name}: line {i}");
            }
        }
    }
    assert!(checked >= 5);
}

fn signature(p: &Proof) -> Signature {
    let all: Vec<&Formula> = p.lines.iter().map(|l| &l.formula).chain(&p.hypotheses).collect();
    Signature::infer(all.iter().copied()).unwrap()
}

/// Σ ∪ {A} ⊨ B iff Σ ⊨ A -> B on sentences.
#[test]
fn semantic_deduction_theorem() {
    let cases = [
        (vec![], "P(c)", "P(eps x. P(x))"),
        (vec!["Q(d)"], "P(c)", "P(c) & Q(d)"),
        (vec![], "P(c)", "Q(c)"),
        (vec!["all x. P(x) -> Q(x)"], "P(c)", "Q(c)"),
        (vec!["ex x. P(x)"], "Q(eps x. P(x))", "ex y. P(y) & Q(y)"),
        (vec![], "c = d", "P(c) -> P(d)"),
        (vec!["P(eps x. ~P(x))"], "Q(c)", "P(c)"),
        (vec![], "ex x. P(x) & ~Q(x)", "~Q(eps x. P(x) & ~Q(x))"),
    ];
    let limits = Limits::default();
    for (sigma, a, b) in cases {
        let sigma: Vec<Formula> = sigma.into_iter().map(f).collect();
        let (a, b) = (f(a), f(b));
        let mut with_a = sigma.clone();
        with_a.push(a.clone());
        let left = check_consequence(&with_a, &b, Consequence::Truth, 2, ChoiceSpace::Extensional, &limits).unwrap();
        let right = check_consequence(&sigma, &Formula::imp(a.clone(), b.clone()), Consequence::Truth, 2, ChoiceSpace::Extensional, &limits).unwrap();
        assert_eq!(left.holds(), right.holds(), "{a} / {b}");
    }
}

/// Hypothesis lines matter to the soundness check above.
#[test]
fn hypotheses_are_not_valid_on_their_own() {
    let p = common::proof(epsilon_core::proof::Calculus::EC, &["P(c)"], &[("P(c)", Justification::Hyp)]);
    let v = check_consequence(&[], &p.lines[0].formula, Consequence::Validity, 2, ChoiceSpace::Extensional, &Limits::default());
    assert!(!v.unwrap().holds());
}

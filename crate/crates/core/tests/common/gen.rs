//! Generators over the signature `c` (constant), `f` (unary function) and
//! `P` (unary predicate), with `=`, quantifiers and epsilon terms.

use epsilon_core::semantics::{Assignment, ExtChoiceFunction, Structure};
use epsilon_core::syntax::{Formula, Term, Var};
use proptest::collection::vec;
use proptest::prelude::*;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn var() -> impl Strategy<Value = Var> {
    (0..VARS.len()).prop_map(|i| Var::new(VARS[i]))
}

/// Epsilon-free terms.
pub fn base_term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![var().prop_map(Term::Var), Just(Term::constant("c"))];
    leaf.prop_recursive(2, 4, 1, |t| t.prop_map(|a| Term::app("f", vec![a]))).boxed()
}

/// A free variable of `a`, chosen by `i`.
fn pick(a: &Formula, i: usize) -> Option<Var> {
    let fv: Vec<Var> = a.free_vars().into_iter().collect();
    (!fv.is_empty()).then(|| fv[i % fv.len()].clone())
}

pub fn eps_of(body: impl Strategy<Value = Formula>) -> impl Strategy<Value = Term> {
    (body, any::<usize>()).prop_filter_map("no free variable to bind", |(a, i)| Term::eps(pick(&a, i)?, a).ok())
}

pub fn formula() -> BoxedStrategy<Formula> {
    formula_sized(4, 10)
}

fn formula_sized(depth: u32, size: u32) -> BoxedStrategy<Formula> {
    let atom = prop_oneof![
        base_term().prop_map(|t| Formula::atom("P", vec![t])),
        (base_term(), base_term()).prop_map(|(a, b)| Formula::eq(a, b)),
    ];
    atom.prop_recursive(depth, size, 2, |a| {
        prop_oneof![
            a.clone().prop_map(Formula::not),
            (a.clone(), a.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (a.clone(), a.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (a.clone(), a.clone()).prop_map(|(l, r)| Formula::imp(l, r)),
            (a.clone(), a.clone()).prop_map(|(l, r)| Formula::iff(l, r)),
            (a.clone(), any::<usize>(), any::<bool>()).prop_filter_map("binder", |(b, i, all)| {
                let x = pick(&b, i)?;
                if all { Formula::forall(x, b).ok() } else { Formula::exists(x, b).ok() }
            }),
            (eps_of(a.clone()), 0..3u8, base_term()).prop_map(|(e, k, t)| match k {
                0 => Formula::atom("P", vec![e]),
                1 => Formula::atom("P", vec![Term::app("f", vec![e])]),
                _ => Formula::eq(e, t),
            }),
        ]
    })
    .boxed()
}

/// Formulas of size at most 12.
pub fn small_formula() -> impl Strategy<Value = Formula> {
    formula_sized(3, 6).prop_filter("size", |a| a.size() <= 12)
}

/// Terms, with and without epsilon terms.
pub fn term() -> BoxedStrategy<Term> {
    prop_oneof![2 => base_term(), 1 => eps_of(formula()).prop_filter("size", |t| t.size() <= 12)].boxed()
}

pub fn eps_term() -> impl Strategy<Value = Term> {
    eps_of(formula())
}

/// A structure for `c`, `f`, `P` on 1 to 3 elements, a choice function and
/// an assignment to `x`, `y`, `z`.
pub fn model() -> impl Strategy<Value = (Structure, ExtChoiceFunction, Assignment)> {
    (1..=3usize)
        .prop_flat_map(|n| {
            (Just(n), 0..n, vec(0..n, n), vec(any::<bool>(), n), vec(any::<usize>(), 1 << n), vec(0..n, VARS.len()))
        })
        .prop_map(|(n, c, f, p, picks, vals)| {
            let mut m = Structure::new(n).unwrap();
            m.set_function("c", 0, vec![c]).unwrap();
            m.set_function("f", 1, f).unwrap();
            let ext: Vec<Vec<usize>> = (0..n).filter(|i| p[*i]).map(|i| vec![i]).collect();
            m.set_predicate("P", 1, &ext).unwrap();
            let table = (0..1usize << n)
                .map(|mask| {
                    let members: Vec<usize> = (0..n).filter(|i| mask == 0 || mask & (1 << i) != 0).collect();
                    members[picks[mask] % members.len()]
                })
                .collect();
            let phi = ExtChoiceFunction::new(n, table).unwrap();
            let mut s = Assignment::new();
            for (x, v) in VARS.iter().zip(vals) {
                s = s.with(&Var::new(x), v);
            }
            (m, phi, s)
        })
}

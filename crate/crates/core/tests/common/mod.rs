#![allow(dead_code)]

pub mod gen;
pub mod laws;

use epsilon_core::proof::{check_proof, Calculus, Justification, Proof};
use epsilon_core::syntax::{parse_formula, parse_term, Formula, Signature, Term};

pub fn f(s: &str) -> Formula {
    parse_formula(s, None).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn t(s: &str) -> Term {
    parse_term(s, None).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// A proof over the signature inferred from its formulas; `=` is declared
/// whenever some formula uses it.
pub fn proof(calc: Calculus, hyps: &[&str], lines: &[(&str, Justification)]) -> Proof {
    let hyps: Vec<Formula> = hyps.iter().map(|s| f(s)).collect();
    let mut p = Proof::new(Signature::new(), calc, hyps);
    for (s, j) in lines {
        p.push(f(s), *j);
    }
    let all: Vec<Formula> = p.lines.iter().map(|l| l.formula.clone()).chain(p.hypotheses.clone()).collect();
    let mut sig = Signature::infer(all.iter()).unwrap();
    sig.identity = all.iter().any(Formula::contains_identity);
    p.sig = sig;
    p
}

pub fn assert_checks(p: &Proof) {
    let r = check_proof(p);
    assert!(r.ok, "{:?}\n{}", r.failures, render(p));
}

pub fn render(p: &Proof) -> String {
    p.lines
        .iter()
        .enumerate()
        .map(|(i, l)| format!("{:>3} {}  [{:?}]\n", i, l.formula, l.just))
        .collect()
}

/// The drinker proof in ECforall.
pub fn drinker() -> Proof {
    let d = "ex z. P(z) -> all y. P(y)";
    let lines = [
        (format!("(P(z) -> all y. P(y)) -> {d}"), Justification::AxExists),
        (format!("((P(z) -> all y. P(y)) -> {d}) -> (~({d}) -> P(z))"), Justification::Taut),
        (format!("~({d}) -> P(z)"), Justification::MP(0, 1)),
        (format!("~({d}) -> all y. P(y)"), Justification::RForall(2)),
        (format!("(P(w) -> all y. P(y)) -> {d}"), Justification::AxExists),
        (format!("(~({d}) -> all y. P(y)) -> ((P(w) -> all y. P(y)) -> ({d})) -> ({d})"), Justification::Taut),
        (format!("((P(w) -> all y. P(y)) -> ({d})) -> ({d})"), Justification::MP(3, 5)),
        (d.to_string(), Justification::MP(4, 6)),
    ];
    let lines: Vec<(&str, Justification)> = lines.iter().map(|(s, j)| (s.as_str(), *j)).collect();
    proof(Calculus::ECforall, &[], &lines)
}

/// `premises` as lines (hypotheses get `Hyp`), then the tautology
/// `p1 -> … -> pk -> concl` and `k` modus ponens steps.
pub fn chain(calc: Calculus, hyps: &[&str], premises: &[(&str, Justification)], concl: &str) -> Proof {
    let mut lines: Vec<(String, Justification)> = premises.iter().map(|(s, j)| (s.to_string(), *j)).collect();
    let k = lines.len();
    let mut rest = concl.to_string();
    let mut imps = vec![rest.clone()];
    for (s, _) in premises.iter().rev() {
        rest = format!("({s}) -> ({rest})");
        imps.push(rest.clone());
    }
    imps.reverse();
    lines.push((imps[0].clone(), Justification::Taut));
    for (i, imp) in imps.iter().enumerate().skip(1) {
        let major = if i == 1 { k } else { k + i - 1 };
        lines.push((imp.clone(), Justification::MP(i - 1, major)));
    }
    let lines: Vec<(&str, Justification)> = lines.iter().map(|(s, j)| (s.as_str(), *j)).collect();
    proof(calc, hyps, &lines)
}

/// ECeps proofs with epsilon-free conclusions and one to three critical
/// epsilon terms of rank at most 2.
pub fn elim_corpus() -> Vec<(&'static str, Proof, Formula)> {
    use Justification::{Crit, Hyp};
    let c = Calculus::ECeps;
    let items: Vec<(&'static str, &[&str], Vec<(&str, Justification)>, &str)> = vec![
        ("one term", &[], vec![("P(c) -> P(eps x. P(x))", Crit)], "P(c) | ~P(c)"),
        (
            "one term, two witnesses",
            &[],
            vec![("P(c) -> P(eps x. P(x))", Crit), ("P(d) -> P(eps x. P(x))", Crit)],
            "P(c) & P(d) -> P(d)",
        ),
        (
            "two terms",
            &[],
            vec![("P(c) -> P(eps x. P(x))", Crit), ("Q(c) -> Q(eps y. Q(y))", Crit)],
            "Q(c) -> P(c) -> Q(c)",
        ),
        (
            "three terms",
            &[],
            vec![
                ("P(c) -> P(eps x. P(x))", Crit),
                ("Q(c) -> Q(eps y. Q(y))", Crit),
                ("R(d, c) -> R(eps x. R(x, c), c)", Crit),
            ],
            "R(d, c) | ~R(d, c)",
        ),
        (
            "epsilon witness",
            &[],
            vec![("P(eps y. Q(y)) -> P(eps x. P(x))", Crit), ("Q(c) -> Q(eps y. Q(y))", Crit)],
            "Q(c) -> Q(c)",
        ),
        (
            "nested degree two",
            &[],
            vec![("R(c, eps y. Q(y)) -> R(eps x. R(x, eps y. Q(y)), eps y. Q(y))", Crit), ("Q(c) -> Q(eps y. Q(y))", Crit)],
            "~Q(c) | Q(c)",
        ),
        (
            "rank two",
            &[],
            vec![
                ("P(c, eps y. Q(c, y)) -> P(eps x. P(x, eps y. Q(x, y)), eps w. Q(eps x. P(x, eps z. Q(x, z)), w))", Crit),
                ("Q(c, d) -> Q(c, eps y. Q(c, y))", Crit),
            ],
            "R(c) -> R(c)",
        ),
        (
            "rank two, three terms",
            &[],
            vec![
                ("P(c, eps y. Q(c, y)) -> P(eps x. P(x, eps y. Q(x, y)), eps w. Q(eps x. P(x, eps z. Q(x, z)), w))", Crit),
                ("Q(c, d) -> Q(c, eps y. Q(c, y))", Crit),
                ("Q(d, c) -> Q(d, eps y. Q(d, y))", Crit),
            ],
            "Q(c, d) -> Q(c, d) | Q(d, c)",
        ),
        (
            "hypothesis",
            &["P(c)"],
            vec![("P(c)", Hyp), ("P(c) -> P(eps x. P(x))", Crit)],
            "P(c) | Q(c)",
        ),
        (
            "hypotheses and two terms",
            &["P(c)", "~Q(d)"],
            vec![("P(c)", Hyp), ("~Q(d)", Hyp), ("P(c) -> P(eps x. P(x))", Crit), ("Q(d) -> Q(eps x. Q(x))", Crit)],
            "P(c) & ~Q(d)",
        ),
        (
            "function symbols",
            &[],
            vec![
                ("P(f(c)) -> P(eps x. P(x))", Crit),
                ("P(g(eps x. P(x))) -> P(eps x. P(x))", Crit),
            ],
            "P(f(c)) -> P(f(c))",
        ),
    ];
    items
        .into_iter()
        .map(|(name, hyps, premises, concl)| (name, chain(c, hyps, &premises, concl), f(concl)))
        .collect()
}

/// Proofs using (=_ε) at rank 1 or 2.
pub fn identity_corpus() -> Vec<(&'static str, Proof, Formula)> {
    use Justification::{Crit, EqEps, Eq2, Hyp};
    let c = Calculus::ECeps;
    let items: Vec<(&'static str, &[&str], Vec<(&str, Justification)>, &str)> = vec![
        (
            "one instance",
            &[],
            vec![("R(a, d) -> R(eps x. R(x, d), d)", Crit), ("c = d -> eps x. R(x, c) = eps x. R(x, d)", EqEps)],
            "R(a, d) -> R(a, d)",
        ),
        (
            "two instances of one type",
            &[],
            vec![
                ("c = d -> eps x. R(x, c) = eps x. R(x, d)", EqEps),
                ("d = a -> eps x. R(x, d) = eps x. R(x, a)", EqEps),
                ("R(b, a) -> R(eps x. R(x, a), a)", Crit),
            ],
            "R(b, a) | ~R(b, a)",
        ),
        (
            "general axiom",
            &[],
            vec![("c = d -> (P(eps x. R(x, c)) <-> P(eps x. R(x, d)))", Eq2), ("R(b, c) -> R(eps x. R(x, c), c)", Crit)],
            "P(c) | ~P(c)",
        ),
        (
            "hypothesis",
            &["c = d"],
            vec![
                ("c = d", Hyp),
                ("c = d -> eps x. R(x, c) = eps x. R(x, d)", EqEps),
                ("R(b, c) -> R(eps x. R(x, c), c)", Crit),
            ],
            "c = d | R(b, c)",
        ),
        (
            "rank two",
            &[],
            vec![
                ("c = d -> eps x. P(x, eps y. Q(x, y), c) = eps x. P(x, eps y. Q(x, y), d)", EqEps),
                ("P(a, eps y. Q(a, y), d) -> P(eps x. P(x, eps y. Q(x, y), d), eps w. Q(eps x. P(x, eps z. Q(x, z), d), w), d)", Crit),
                ("Q(a, b) -> Q(a, eps y. Q(a, y))", Crit),
            ],
            "Q(a, b) -> Q(a, b)",
        ),
        (
            "two types",
            &[],
            vec![
                ("c = d -> eps x. R(x, c) = eps x. R(x, d)", EqEps),
                ("c = d -> eps x. S(c, x) = eps x. S(d, x)", EqEps),
                ("S(d, a) -> S(d, eps x. S(d, x))", Crit),
                ("R(a, c) -> R(eps x. R(x, c), c)", Crit),
            ],
            "S(d, a) | ~S(d, a)",
        ),
    ];
    items
        .into_iter()
        .map(|(name, hyps, premises, concl)| (name, chain(c, hyps, &premises, concl), f(concl)))
        .collect()
}

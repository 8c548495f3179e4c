//! Exhaustive enumeration of choice functions, intensional operators and
//! structures, in a fixed order.

use super::{ExtChoiceFunction, IntChoiceOperator, SemanticsError, Structure, Table};
use crate::syntax::{EpsilonType, Formula, Signature, Term};
use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// Bounds on the enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest domain for which choice functions are enumerated.
    pub choice_domain: usize,
    /// Upper bound on keys × choice functions for intensional operators.
    pub operator_budget: usize,
    /// Upper bound on the number of structures of one domain size.
    pub structures: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { choice_domain: 3, operator_budget: 1 << 12, structures: 1 << 16 }
    }
}

/// Mixed-radix counter, last digit fastest. Radix 0 anywhere means no
/// tuples at all; no digits means exactly one empty tuple.
struct Odometer {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Odometer {
    fn new(radices: Vec<usize>) -> Odometer {
        let next = (!radices.contains(&0)).then(|| alloc::vec![0; radices.len()]);
        Odometer { radices, next }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut n = cur.clone();
        for i in (0..n.len()).rev() {
            n[i] += 1;
            if n[i] < self.radices[i] {
                self.next = Some(n);
                break;
            }
            n[i] = 0;
        }
        Some(cur)
    }
}

/// `n · ∏_{∅≠X⊆M} |X|`, saturating.
pub fn count_choice_functions(n: usize) -> usize {
    (0..1usize << n).fold(1usize, |acc, mask| {
        let k = if mask == 0 { n } else { mask.count_ones() as usize };
        acc.saturating_mul(k)
    })
}

/// Every choice function on a domain of size `n`.
pub fn enumerate_choice_functions(
    n: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = ExtChoiceFunction>, SemanticsError> {
    if n == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    if n > limits.choice_domain {
        return Err(SemanticsError::BoundExceeded { what: "choice-function domain", limit: limits.choice_domain, needed: n });
    }
    let options: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| (0..n).filter(|m| mask == 0 || mask & (1 << m) != 0).collect())
        .collect();
    let radices = options.iter().map(Vec::len).collect();
    Ok(Odometer::new(radices).map(move |digits| {
        ExtChoiceFunction::from_table_unchecked(digits.iter().zip(&options).map(|(d, o)| o[*d]).collect())
    }))
}

/// Distinct epsilon types of every epsilon term node, including those
/// whose free variables are bound further out: evaluation meets them all.
pub fn epsilon_types<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<Vec<EpsilonType>, SemanticsError> {
    let mut nodes = Vec::new();
    for f in formulas {
        eps_nodes_formula(f, &mut nodes);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in nodes {
        let (ty, _) = t.epsilon_type()?;
        if seen.insert(ty.key()) {
            out.push(ty);
        }
    }
    Ok(out)
}

fn eps_nodes_term<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Var(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| eps_nodes_term(a, out)),
        Term::Eps(_, body) => {
            out.push(t);
            eps_nodes_formula(body, out);
        }
    }
}

fn eps_nodes_formula<'a>(a: &'a Formula, out: &mut Vec<&'a Term>) {
    match a {
        Formula::Atom(_, args) => args.iter().for_each(|t| eps_nodes_term(t, out)),
        Formula::Eq(l, r) => {
            eps_nodes_term(l, out);
            eps_nodes_term(r, out);
        }
        Formula::Bot | Formula::Top => {}
        Formula::Not(b) | Formula::Forall(_, b) | Formula::Exists(_, b) => eps_nodes_formula(b, out),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) | Formula::Iff(b, c) => {
            eps_nodes_formula(b, out);
            eps_nodes_formula(c, out);
        }
    }
}

/// Every assignment of choice functions to the keys `(type, slot values)`
/// of the given types over a domain of size `n`. Keys outside that set
/// use the least choice function.
pub fn enumerate_intensional_operators(
    n: usize,
    types: &[EpsilonType],
    limits: &Limits,
) -> Result<impl Iterator<Item = IntChoiceOperator>, SemanticsError> {
    let fns: Vec<ExtChoiceFunction> = enumerate_choice_functions(n, limits)?.collect();
    let mut keys = Vec::new();
    let mut seen = BTreeSet::new();
    for ty in types {
        let key = ty.key();
        if !seen.insert(key.clone()) {
            continue;
        }
        let arity = u32::try_from(ty.arity()).map_err(|_| too_many(limits, usize::MAX))?;
        let cells = n.checked_pow(arity).ok_or_else(|| too_many(limits, usize::MAX))?;
        for i in 0..cells {
            keys.push((key.clone(), super::tuple(n, ty.arity(), i)));
        }
    }
    let needed = keys.len().saturating_mul(fns.len());
    if needed > limits.operator_budget {
        return Err(too_many(limits, needed));
    }
    let default = ExtChoiceFunction::least(n);
    Ok(Odometer::new(alloc::vec![fns.len(); keys.len()]).map(move |digits| IntChoiceOperator {
        default: default.clone(),
        entries: keys.iter().cloned().zip(digits.iter().map(|d| fns[*d].clone())).collect::<BTreeMap<_, _>>(),
    }))
}

fn too_many(limits: &Limits, needed: usize) -> SemanticsError {
    SemanticsError::BoundExceeded { what: "intensional operator", limit: limits.operator_budget, needed }
}

/// Every structure of size `n` interpreting the symbols of `sig`.
pub fn enumerate_structures(
    sig: &Signature,
    n: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = Structure>, SemanticsError> {
    let base = Structure::new(n)?;
    let functions: Vec<_> = sig.functions().map(|(f, a)| (f.clone(), a)).collect();
    let predicates: Vec<_> = sig.predicates().map(|(p, a)| (p.clone(), a)).collect();
    let over = |needed| SemanticsError::BoundExceeded { what: "structure", limit: limits.structures, needed };
    let mut slots = Vec::new();
    let mut radices = Vec::new();
    let mut total: usize = 1;
    let arities = functions.iter().map(|(_, a)| (*a, n)).chain(predicates.iter().map(|(_, a)| (*a, 2)));
    for (arity, radix) in arities {
        let c = u32::try_from(arity).ok().and_then(|a| n.checked_pow(a)).ok_or_else(|| over(usize::MAX))?;
        for _ in 0..c {
            total = total.checked_mul(radix).filter(|t| *t <= limits.structures).ok_or_else(|| over(usize::MAX))?;
            radices.push(radix);
        }
        slots.push(c);
    }
    Ok(Odometer::new(radices).map(move |digits| {
        let mut m = base.clone();
        let mut at = 0;
        for ((f, a), c) in functions.iter().zip(&slots) {
            m.set_function_table(f, Table { arity: *a, values: digits[at..at + c].to_vec() });
            at += c;
        }
        for ((p, a), c) in predicates.iter().zip(&slots[functions.len()..]) {
            m.set_predicate_table(p, Table { arity: *a, values: digits[at..at + c].iter().map(|d| *d == 1).collect() });
            at += c;
        }
        m
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn counts_match_the_product_formula() {
        for n in 1..=3 {
            let got = enumerate_choice_functions(n, &Limits::default()).unwrap().count();
            assert_eq!(got, count_choice_functions(n));
        }
    }

    #[test]
    fn enumeration_is_bounded() {
        assert!(matches!(
            enumerate_choice_functions(4, &Limits::default()),
            Err(SemanticsError::BoundExceeded { .. })
        ));
        assert!(enumerate_choice_functions(0, &Limits::default()).is_err());
    }

    #[test]
    fn operators_over_zero_ary_types() {
        let a = parse_formula("P(eps x. P(x)) & Q(eps x. Q(x))", None).unwrap();
        let types = epsilon_types([&a]).unwrap();
        assert_eq!(types.len(), 2);
        let l = Limits::default();
        assert_eq!(enumerate_intensional_operators(2, &types[..1], &l).unwrap().count(), 4);
        assert_eq!(enumerate_intensional_operators(2, &types, &l).unwrap().count(), 16);
        assert_eq!(enumerate_intensional_operators(2, &[], &l).unwrap().count(), 1);
    }

    #[test]
    fn operator_budget_is_enforced() {
        let a = parse_formula("R(eps x. R(x, c), c)", None).unwrap();
        let types = epsilon_types([&a]).unwrap();
        let tight = Limits { operator_budget: 10, ..Limits::default() };
        // One unary type over 3 elements: 3 keys × 72 functions.
        assert!(enumerate_intensional_operators(3, &types, &tight).is_err());
    }

    #[test]
    fn structure_counts() {
        let sig = Signature::new().with_function("c", 0).with_function("f", 1).with_predicate("P", 1).with_predicate("R", 2);
        // 2 · 2² · 2² · 2⁴
        assert_eq!(enumerate_structures(&sig, 2, &Limits::default()).unwrap().count(), 2 * 4 * 4 * 16);
        assert_eq!(enumerate_structures(&Signature::new(), 3, &Limits::default()).unwrap().count(), 1);
    }

    #[test]
    fn types_include_nested_occurrences() {
        let a = parse_formula("P(eps x. Q(x, eps y. R(x, y)))", None).unwrap();
        assert_eq!(epsilon_types([&a]).unwrap().len(), 2);
    }
}

//! The order ≺ on instances of one epsilon type.

use crate::syntax::{EpsilonType, SyntaxError, Term};
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Base order on slot terms: by degree, then by canonical form.
pub fn base_cmp(a: &Term, b: &Term) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.canon().cmp(&b.canon()))
}

/// Instances of the same type: first by the largest slot degree, then
/// lexicographically on the slots under [`base_cmp`].
pub fn instance_cmp(a: &[Term], b: &[Term]) -> Ordering {
    let max = |xs: &[Term]| xs.iter().map(Term::degree).max().unwrap_or(0);
    max(a).cmp(&max(b)).then_with(|| {
        a.iter().zip(b).map(|(x, y)| base_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOrder {
    pub ty: EpsilonType,
    /// `T_i`: the terms seen in slot `i`, ascending.
    pub slots: Vec<Vec<Term>>,
    /// `T*`: every instance with slot `i` drawn from `T_i`, ascending.
    pub instances: Vec<Term>,
}

impl InstanceOrder {
    /// Compares two instances of the type.
    pub fn cmp(&self, a: &Term, b: &Term) -> Result<Ordering, SyntaxError> {
        let (ta, xa) = a.epsilon_type()?;
        let (tb, xb) = b.epsilon_type()?;
        if ta != self.ty || tb != self.ty {
            return Err(SyntaxError::NotEpsilonTerm);
        }
        Ok(instance_cmp(&xa, &xb))
    }

    pub fn less(&self, a: &Term, b: &Term) -> Result<bool, SyntaxError> {
        Ok(self.cmp(a, b)? == Ordering::Less)
    }
}

/// The order on `T*` determined by `terms`, which must share one type.
/// Returns `None` for an empty list or mixed types.
pub fn instance_order(terms: &[Term]) -> Option<InstanceOrder> {
    let mut ty = None;
    let mut slots: Vec<Vec<Term>> = Vec::new();
    for t in terms {
        let (p, args) = t.epsilon_type().ok()?;
        match &ty {
            None => {
                slots = alloc::vec![Vec::new(); p.arity()];
                ty = Some(p);
            }
            Some(q) if *q != p => return None,
            Some(_) => {}
        }
        for (i, a) in args.into_iter().enumerate() {
            if !slots[i].iter().any(|s| s.alpha_eq(&a)) {
                slots[i].push(a);
            }
        }
    }
    let ty = ty?;
    for s in &mut slots {
        s.sort_by(base_cmp);
    }
    let mut combos: Vec<Vec<Term>> = alloc::vec![Vec::new()];
    for s in &slots {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                s.iter().map(move |t| {
                    let mut c = c.clone();
                    c.push(t.clone());
                    c
                })
            })
            .collect();
    }
    combos.sort_by(|a, b| instance_cmp(a, b));
    let instances = combos.iter().map(|c| ty.instantiate(c)).collect();
    Some(InstanceOrder { ty, slots, instances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }

    #[test]
    fn base_order_breaks_degree_ties_canonically() {
        assert_eq!(base_cmp(&t("c"), &t("f(c)")), Ordering::Less);
        assert_eq!(base_cmp(&t("f(c)"), &t("eps y. Q(y)")), Ordering::Less);
    }

    #[test]
    fn clause_one_compares_max_slot_degree() {
        let o = instance_order(&[t("eps x. P(x, c)"), t("eps x. P(x, eps y. Q(y))")]).unwrap();
        assert!(o.less(&t("eps x. P(x, c)"), &t("eps x. P(x, eps y. Q(y))")).unwrap());
    }

    #[test]
    fn clause_two_is_lexicographic() {
        let o = instance_order(&[t("eps x. P(x, c, d)"), t("eps x. P(x, c, e)")]).unwrap();
        assert!(o.less(&t("eps x. P(x, c, d)"), &t("eps x. P(x, c, e)")).unwrap());
        assert_eq!(o.instances.len(), 2);
        assert_eq!(o.slots[1], alloc::vec![t("d"), t("e")]);
    }

    #[test]
    fn strict_total_order_on_instances() {
        let o = instance_order(&[t("eps x. R(x, a, b)"), t("eps x. R(x, f(a), a)"), t("eps x. R(x, b, f(b))")]).unwrap();
        assert_eq!(o.instances.len(), 9);
        for (i, a) in o.instances.iter().enumerate() {
            for (j, b) in o.instances.iter().enumerate() {
                assert_eq!(o.cmp(a, b).unwrap(), i.cmp(&j));
            }
        }
    }

    #[test]
    fn mixed_types_rejected() {
        assert!(instance_order(&[t("eps x. P(x)"), t("eps x. Q(x)")]).is_none());
    }
}

//! Capture-avoiding substitution.
//!
//! Results always satisfy the binder condition: a binder of the host
//! expression is renamed when it would capture a free variable of an inserted
//! term, and binders inside an inserted term are renamed when they clash with
//! binders enclosing the insertion point.

use super::{Formula, Term, Var};
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

/// Smallest `_v<n>` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Var>) -> Var {
    (0usize..)
        .map(|n| Var::new(&format!("_v{n}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply")
}

pub(crate) struct Ctx {
    pub(crate) avoid: BTreeSet<Var>,
}

impl Ctx {
    pub(crate) fn new(avoid: BTreeSet<Var>) -> Ctx {
        Ctx { avoid }
    }

    pub(crate) fn fresh(&mut self) -> Var {
        let v = fresh_var(&self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    /// Prepares `t` for insertion below the binders in `enclosing`.
    pub(crate) fn insert(&mut self, t: &Term, enclosing: &[Var]) -> Term {
        if enclosing.iter().any(|y| t.binds(y)) {
            rename_bound_term(t, enclosing, self)
        } else {
            t.clone()
        }
    }
}

fn rename_bound_term(t: &Term, clash: &[Var], ctx: &mut Ctx) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_bound_term(a, clash, ctx)).collect()),
        Term::Eps(y, body) => {
            let body = rename_bound_formula(body, clash, ctx);
            if clash.contains(y) {
                let z = ctx.fresh();
                Term::Eps(z.clone(), Box::new(body.rename_free(y, &z)))
            } else {
                Term::Eps(y.clone(), Box::new(body))
            }
        }
    }
}

fn rename_bound_formula(a: &Formula, clash: &[Var], ctx: &mut Ctx) -> Formula {
    let mut rec = |b: &Formula| Box::new(rename_bound_formula(b, clash, ctx));
    match a {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| rename_bound_term(t, clash, ctx)).collect()),
        Formula::Eq(l, r) => Formula::Eq(rename_bound_term(l, clash, ctx), rename_bound_term(r, clash, ctx)),
        Formula::Bot | Formula::Top => a.clone(),
        Formula::Not(b) => Formula::Not(rec(b)),
        Formula::And(b, c) => Formula::And(rec(b), rec(c)),
        Formula::Or(b, c) => Formula::Or(rec(b), rec(c)),
        Formula::Imp(b, c) => Formula::Imp(rec(b), rec(c)),
        Formula::Iff(b, c) => Formula::Iff(rec(b), rec(c)),
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            let body = rename_bound_formula(body, clash, ctx);
            let (y, body) = if clash.contains(y) {
                let z = ctx.fresh();
                let b = body.rename_free(y, &z);
                (z, b)
            } else {
                (y.clone(), body)
            };
            rebind(a, y, body)
        }
    }
}

fn rebind(like: &Formula, x: Var, body: Formula) -> Formula {
    match like {
        Formula::Forall(..) => Formula::Forall(x, Box::new(body)),
        Formula::Exists(..) => Formula::Exists(x, Box::new(body)),
        _ => unreachable!("rebind on a non-quantifier"),
    }
}

type Map = BTreeMap<Var, Term>;

fn map_vars(map: &Map) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for (k, v) in map {
        out.insert(k.clone());
        v.collect_all_vars(&mut out);
    }
    out
}

/// Restricts the map to keys free in `body` (minus `bound`).
fn restrict_term(map: &Map, bound: &Var, body: &Formula) -> Map {
    map.iter()
        .filter(|(k, _)| *k != bound && body.occurs_free(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn subst_term(t: &Term, map: &Map, enclosing: &mut Vec<Var>, ctx: &mut Ctx) -> Term {
    match t {
        Term::Var(v) => match map.get(v) {
            Some(s) => ctx.insert(s, enclosing),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, map, enclosing, ctx)).collect()),
        Term::Eps(y, body) => {
            let (y, body) = subst_binder(y, body, map, enclosing, ctx);
            Term::Eps(y, Box::new(body))
        }
    }
}

fn subst_binder(y: &Var, body: &Formula, map: &Map, enclosing: &mut Vec<Var>, ctx: &mut Ctx) -> (Var, Formula) {
    let inner = restrict_term(map, y, body);
    if inner.is_empty() {
        return (y.clone(), body.clone());
    }
    let captures = inner.values().any(|s| s.occurs_free(y));
    let (y, body) = if captures {
        let z = ctx.fresh();
        let b = body.rename_free(y, &z);
        (z, b)
    } else {
        (y.clone(), body.clone())
    };
    enclosing.push(y.clone());
    let out = subst_formula(&body, &inner, enclosing, ctx);
    enclosing.pop();
    (y, out)
}

fn subst_formula(a: &Formula, map: &Map, enclosing: &mut Vec<Var>, ctx: &mut Ctx) -> Formula {
    macro_rules! rec {
        ($b:expr) => {
            Box::new(subst_formula($b, map, enclosing, ctx))
        };
    }
    match a {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| subst_term(t, map, enclosing, ctx)).collect()),
        Formula::Eq(l, r) => Formula::Eq(subst_term(l, map, enclosing, ctx), subst_term(r, map, enclosing, ctx)),
        Formula::Bot | Formula::Top => a.clone(),
        Formula::Not(b) => Formula::Not(rec!(b)),
        Formula::And(b, c) => {
            let b = rec!(b);
            Formula::And(b, rec!(c))
        }
        Formula::Or(b, c) => {
            let b = rec!(b);
            Formula::Or(b, rec!(c))
        }
        Formula::Imp(b, c) => {
            let b = rec!(b);
            Formula::Imp(b, rec!(c))
        }
        Formula::Iff(b, c) => {
            let b = rec!(b);
            Formula::Iff(b, rec!(c))
        }
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            let (y, body) = subst_binder(y, body, map, enclosing, ctx);
            rebind(a, y, body)
        }
    }
}

impl Term {
    /// `self[x/t]`.
    pub fn substitute(&self, x: &Var, t: &Term) -> Term {
        let mut map = Map::new();
        map.insert(x.clone(), t.clone());
        self.substitute_many(&map)
    }

    /// Simultaneous substitution of every key by its term.
    pub fn substitute_many(&self, map: &BTreeMap<Var, Term>) -> Term {
        let map: Map = map.iter().filter(|(k, _)| self.occurs_free(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        if map.is_empty() {
            return self.clone();
        }
        let mut avoid = self.all_vars();
        avoid.extend(map_vars(&map));
        subst_term(self, &map, &mut Vec::new(), &mut Ctx::new(avoid))
    }

    /// Renames free occurrences of `x` to `y`, which must be fresh for the term.
    pub(crate) fn rename_free(&self, x: &Var, y: &Var) -> Term {
        match self {
            Term::Var(v) if v == x => Term::Var(y.clone()),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename_free(x, y)).collect()),
            Term::Eps(z, _) if z == x => self.clone(),
            Term::Eps(z, body) => Term::Eps(z.clone(), Box::new(body.rename_free(x, y))),
        }
    }
}

impl Formula {
    /// `self[x/t]`.
    pub fn substitute(&self, x: &Var, t: &Term) -> Formula {
        let mut map = Map::new();
        map.insert(x.clone(), t.clone());
        self.substitute_many(&map)
    }

    pub fn substitute_many(&self, map: &BTreeMap<Var, Term>) -> Formula {
        let map: Map = map.iter().filter(|(k, _)| self.occurs_free(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        if map.is_empty() {
            return self.clone();
        }
        let mut avoid = self.all_vars();
        avoid.extend(map_vars(&map));
        subst_formula(self, &map, &mut Vec::new(), &mut Ctx::new(avoid))
    }

    pub(crate) fn rename_free(&self, x: &Var, y: &Var) -> Formula {
        let rec = |b: &Formula| Box::new(b.rename_free(x, y));
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| t.rename_free(x, y)).collect()),
            Formula::Eq(l, r) => Formula::Eq(l.rename_free(x, y), r.rename_free(x, y)),
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Not(b) => Formula::Not(rec(b)),
            Formula::And(b, c) => Formula::And(rec(b), rec(c)),
            Formula::Or(b, c) => Formula::Or(rec(b), rec(c)),
            Formula::Imp(b, c) => Formula::Imp(rec(b), rec(c)),
            Formula::Iff(b, c) => Formula::Iff(rec(b), rec(c)),
            Formula::Forall(z, _) | Formula::Exists(z, _) if z == x => self.clone(),
            Formula::Forall(z, body) => Formula::Forall(z.clone(), rec(body)),
            Formula::Exists(z, body) => Formula::Exists(z.clone(), rec(body)),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_term, Var};

    fn f(s: &str) -> crate::syntax::Formula {
        parse_formula(s, None).unwrap()
    }
    fn t(s: &str) -> crate::syntax::Term {
        parse_term(s, None).unwrap()
    }

    #[test]
    fn plain_substitution() {
        let out = f("P(x) -> Q(x)").substitute(&Var::new("x"), &t("c"));
        assert_eq!(out, f("P(c) -> Q(c)"));
    }

    #[test]
    fn capture_is_avoided() {
        let out = t("eps y. R(x,y)").substitute(&Var::new("x"), &t("f(y)"));
        assert!(out.alpha_eq(&t("eps z. R(f(y), z)")));
        assert!(out.check_binders().is_ok());
    }

    #[test]
    fn bound_occurrences_untouched() {
        let a = f("all x. P(x)");
        assert_eq!(a.substitute(&Var::new("x"), &t("c")), a);
    }

    #[test]
    fn inserted_binders_are_kept_distinct_from_enclosing_ones() {
        // εy R(x,y) with x := εy Q(y): the inserted ε must not rebind y.
        let out = t("eps y. R(x,y)").substitute(&Var::new("x"), &t("eps y. Q(y)"));
        assert!(out.check_binders().is_ok());
        assert!(out.alpha_eq(&t("eps y. R(eps z. Q(z), y)")));
    }

    #[test]
    fn simultaneous_substitution() {
        let mut map = alloc::collections::BTreeMap::new();
        map.insert(Var::new("x"), t("y"));
        map.insert(Var::new("y"), t("x"));
        assert_eq!(f("R(x,y)").substitute_many(&map), f("R(y,x)"));
    }
}

//! Finite structures with extensional and intensional choice semantics.
//!
//! Domain elements are `0..n`. A subset of the domain is a bitmask, and a
//! choice function is a table indexed by bitmask.

mod check;
mod enumerate;
mod eval;

pub use check::{check_consequence, check_truth_mode, choices, Choice, ChoiceSpace, Consequence, Counterexample, TruthMode, Verdict};
pub use enumerate::{
    count_choice_functions, enumerate_choice_functions, enumerate_intensional_operators, enumerate_structures,
    epsilon_types, Limits,
};
pub use eval::{eval_formula, eval_term, Chooser, Evaluator};

use crate::syntax::{Sym, Var};
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticsError {
    EmptyDomain,
    /// Domains are limited to what fits in a subset bitmask.
    DomainTooLarge(usize),
    Uninterpreted(String),
    ArityMismatch { name: String, expected: usize, found: usize },
    BadTable(String),
    NotChoiceFunction(String),
    BoundExceeded { what: &'static str, limit: usize, needed: usize },
    Syntax(crate::syntax::SyntaxError),
}

impl fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsError::EmptyDomain => write!(f, "the domain must be nonempty"),
            SemanticsError::DomainTooLarge(n) => write!(f, "domain of size {n} is too large"),
            SemanticsError::Uninterpreted(s) => write!(f, "symbol `{s}` is not interpreted"),
            SemanticsError::ArityMismatch { name, expected, found } => {
                write!(f, "`{name}` has arity {expected} in the structure but is used with {found} arguments")
            }
            SemanticsError::BadTable(s) => write!(f, "bad table: {s}"),
            SemanticsError::NotChoiceFunction(s) => write!(f, "not a choice function: {s}"),
            SemanticsError::BoundExceeded { what, limit, needed } => {
                write!(f, "{what} bound exceeded: {needed} > {limit}")
            }
            SemanticsError::Syntax(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SemanticsError {}

impl From<crate::syntax::SyntaxError> for SemanticsError {
    fn from(e: crate::syntax::SyntaxError) -> Self {
        SemanticsError::Syntax(e)
    }
}

/// Largest domain a structure may have.
pub const MAX_DOMAIN: usize = 16;

/// A total table over `domain^arity`, indexed with the first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table<T> {
    pub arity: usize,
    pub values: Vec<T>,
}

impl<T: Copy> Table<T> {
    fn get(&self, n: usize, args: &[usize]) -> T {
        self.values[index(n, args)]
    }
}

pub(crate) fn index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, a| acc * n + a)
}

/// The argument tuple stored at position `i` of a table of the given arity.
pub fn tuple(n: usize, arity: usize, mut i: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; arity];
    for k in (0..arity).rev() {
        out[k] = i % n;
        i /= n;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    n: usize,
    functions: BTreeMap<Sym, Table<usize>>,
    predicates: BTreeMap<Sym, Table<bool>>,
}

impl Structure {
    pub fn new(n: usize) -> Result<Structure, SemanticsError> {
        if n == 0 {
            return Err(SemanticsError::EmptyDomain);
        }
        if n > MAX_DOMAIN {
            return Err(SemanticsError::DomainTooLarge(n));
        }
        Ok(Structure { n, functions: BTreeMap::new(), predicates: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Interprets `name` by `values`, listed in table order (see [`tuple`]).
    pub fn set_function(&mut self, name: &str, arity: usize, values: Vec<usize>) -> Result<(), SemanticsError> {
        if values.len() != self.cells(arity)? {
            return Err(SemanticsError::BadTable(alloc::format!("`{name}` needs {} entries", self.cells(arity)?)));
        }
        if let Some(v) = values.iter().find(|v| **v >= self.n) {
            return Err(SemanticsError::BadTable(alloc::format!("`{name}` takes value {v} outside the domain")));
        }
        self.functions.insert(Sym::new(name), Table { arity, values });
        Ok(())
    }

    /// Interprets `name` as the set of the given tuples.
    pub fn set_predicate(&mut self, name: &str, arity: usize, tuples: &[Vec<usize>]) -> Result<(), SemanticsError> {
        let mut values = alloc::vec![false; self.cells(arity)?];
        for t in tuples {
            if t.len() != arity || t.iter().any(|m| *m >= self.n) {
                return Err(SemanticsError::BadTable(alloc::format!("`{name}` has a bad tuple {t:?}")));
            }
            values[index(self.n, t)] = true;
        }
        self.predicates.insert(Sym::new(name), Table { arity, values });
        Ok(())
    }

    pub(crate) fn set_function_table(&mut self, name: &Sym, table: Table<usize>) {
        self.functions.insert(name.clone(), table);
    }

    pub(crate) fn set_predicate_table(&mut self, name: &Sym, table: Table<bool>) {
        self.predicates.insert(name.clone(), table);
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Sym, &Table<usize>)> {
        self.functions.iter()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, &Table<bool>)> {
        self.predicates.iter()
    }

    /// The tuples in the extension of a predicate, in table order.
    pub fn extension(&self, name: &str) -> Option<Vec<Vec<usize>>> {
        let t = self.predicates.get(name)?;
        Some((0..t.values.len()).filter(|i| t.values[*i]).map(|i| tuple(self.n, t.arity, i)).collect())
    }

    fn cells(&self, arity: usize) -> Result<usize, SemanticsError> {
        u32::try_from(arity)
            .ok()
            .and_then(|a| self.n.checked_pow(a))
            .ok_or(SemanticsError::BoundExceeded { what: "table size", limit: usize::MAX, needed: usize::MAX })
    }

    pub(crate) fn apply(&self, f: &Sym, args: &[usize]) -> Result<usize, SemanticsError> {
        let t = self.functions.get(f).ok_or_else(|| SemanticsError::Uninterpreted(f.name().to_string()))?;
        check_arity(f, t.arity, args.len())?;
        Ok(t.get(self.n, args))
    }

    pub(crate) fn holds(&self, p: &Sym, args: &[usize]) -> Result<bool, SemanticsError> {
        let t = self.predicates.get(p).ok_or_else(|| SemanticsError::Uninterpreted(p.name().to_string()))?;
        check_arity(p, t.arity, args.len())?;
        Ok(t.get(self.n, args))
    }
}

fn check_arity(s: &Sym, expected: usize, found: usize) -> Result<(), SemanticsError> {
    if expected == found {
        Ok(())
    } else {
        Err(SemanticsError::ArityMismatch { name: s.name().to_string(), expected, found })
    }
}

/// A total map from subsets of the domain to elements, picking a member of
/// every nonempty subset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtChoiceFunction {
    table: Vec<usize>,
}

impl ExtChoiceFunction {
    /// `table[mask]` is the choice from the subset `mask`; the table has
    /// `2^n` entries.
    pub fn new(n: usize, table: Vec<usize>) -> Result<ExtChoiceFunction, SemanticsError> {
        if n == 0 {
            return Err(SemanticsError::EmptyDomain);
        }
        if n > MAX_DOMAIN {
            return Err(SemanticsError::DomainTooLarge(n));
        }
        if table.len() != 1 << n {
            return Err(SemanticsError::NotChoiceFunction(alloc::format!("expected {} entries", 1usize << n)));
        }
        for (mask, &m) in table.iter().enumerate() {
            if m >= n {
                return Err(SemanticsError::NotChoiceFunction(alloc::format!("{m} is outside the domain")));
            }
            if mask != 0 && mask & (1 << m) == 0 {
                return Err(SemanticsError::NotChoiceFunction(alloc::format!("{m} is not in subset {mask:#b}")));
            }
        }
        Ok(ExtChoiceFunction { table })
    }

    /// Picks the least element of every nonempty subset and `0` from the
    /// empty set.
    pub fn least(n: usize) -> ExtChoiceFunction {
        let table = (0..1usize << n).map(|m| if m == 0 { 0 } else { m.trailing_zeros() as usize }).collect();
        ExtChoiceFunction { table }
    }

    pub(crate) fn from_table_unchecked(table: Vec<usize>) -> ExtChoiceFunction {
        ExtChoiceFunction { table }
    }

    pub fn domain_size(&self) -> usize {
        self.table.len().trailing_zeros() as usize
    }

    pub fn choose(&self, mask: usize) -> usize {
        self.table[mask]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// Choice functions indexed by epsilon type and slot values. Keys without an
/// entry use the default function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChoiceOperator {
    pub default: ExtChoiceFunction,
    pub entries: BTreeMap<(String, Vec<usize>), ExtChoiceFunction>,
}

impl IntChoiceOperator {
    /// The same choice function for every key.
    pub fn constant(phi: ExtChoiceFunction) -> IntChoiceOperator {
        IntChoiceOperator { default: phi, entries: BTreeMap::new() }
    }

    pub fn get(&self, ty: &str, args: &[usize]) -> &ExtChoiceFunction {
        self.entries.get(&(ty.to_string(), args.to_vec())).unwrap_or(&self.default)
    }
}

/// A total assignment: listed variables get their element, every other
/// variable gets the default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub default: usize,
    pub values: BTreeMap<Var, usize>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, x: &Var) -> usize {
        self.values.get(x).copied().unwrap_or(self.default)
    }

    /// `s[x/m]`.
    pub fn with(&self, x: &Var, m: usize) -> Assignment {
        let mut s = self.clone();
        s.values.insert(x.clone(), m);
        s
    }

    /// All assignments of elements below `n` to `vars`, in lexicographic
    /// order.
    pub fn all(vars: &[Var], n: usize) -> impl Iterator<Item = Assignment> + '_ {
        let total = u32::try_from(vars.len()).ok().and_then(|k| n.checked_pow(k)).unwrap_or(usize::MAX);
        (0..total).map(move |i| Assignment {
            default: 0,
            values: vars.iter().cloned().zip(tuple(n, vars.len(), i)).collect(),
        })
    }
}

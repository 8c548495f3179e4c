//! Tautology checking by truth tables over abstracted atoms.
//!
//! Atoms, identities and quantified formulas are treated as propositional
//! variables, identified up to renaming of bound variables.

use crate::syntax::{CFormula, Formula};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_ATOM_LIMIT: usize = 20;

static ATOM_LIMIT: AtomicUsize = AtomicUsize::new(DEFAULT_ATOM_LIMIT);

/// Sets the process-wide atom limit used by [`is_tautology`].
pub fn set_atom_limit(limit: usize) {
    ATOM_LIMIT.store(limit, Ordering::Relaxed);
}

pub fn atom_limit() -> usize {
    ATOM_LIMIT.load(Ordering::Relaxed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TautError {
    AtomLimitExceeded { atoms: usize, limit: usize },
}

impl fmt::Display for TautError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TautError::AtomLimitExceeded { atoms, limit } => {
                write!(f, "tautology check needs {atoms} atoms, limit is {limit}")
            }
        }
    }
}

impl core::error::Error for TautError {}

enum Node {
    Const(bool),
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Iff(usize, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    atoms: usize,
}

fn compile(a: &Formula, nodes: &mut Vec<Node>, atoms: &mut BTreeMap<CFormula, usize>) -> usize {
    let node = match a {
        Formula::Bot => Node::Const(false),
        Formula::Top => Node::Const(true),
        Formula::Not(b) => Node::Not(compile(b, nodes, atoms)),
        Formula::And(b, c) => Node::And(compile(b, nodes, atoms), compile(c, nodes, atoms)),
        Formula::Or(b, c) => Node::Or(compile(b, nodes, atoms), compile(c, nodes, atoms)),
        Formula::Imp(b, c) => Node::Imp(compile(b, nodes, atoms), compile(c, nodes, atoms)),
        Formula::Iff(b, c) => Node::Iff(compile(b, nodes, atoms), compile(c, nodes, atoms)),
        _ => {
            let n = atoms.len();
            Node::Atom(*atoms.entry(a.canon()).or_insert(n))
        }
    };
    nodes.push(node);
    nodes.len() - 1
}

impl Compiled {
    // Nodes are in post-order, so one forward pass evaluates everything.
    fn eval(&self, bits: u64, scratch: &mut [bool]) -> bool {
        for (i, n) in self.nodes.iter().enumerate() {
            scratch[i] = match *n {
                Node::Const(b) => b,
                Node::Atom(k) => bits >> k & 1 == 1,
                Node::Not(a) => !scratch[a],
                Node::And(a, b) => scratch[a] && scratch[b],
                Node::Or(a, b) => scratch[a] || scratch[b],
                Node::Imp(a, b) => !scratch[a] || scratch[b],
                Node::Iff(a, b) => scratch[a] == scratch[b],
            };
        }
        scratch[self.nodes.len() - 1]
    }
}

/// Number of distinct abstracted atoms in `a`.
pub fn atom_count(a: &Formula) -> usize {
    let mut atoms = BTreeMap::new();
    compile(a, &mut Vec::new(), &mut atoms);
    atoms.len()
}

/// Checks `a` against the process-wide atom limit.
pub fn is_tautology(a: &Formula) -> Result<bool, TautError> {
    is_tautology_with_limit(a, atom_limit())
}

pub fn is_tautology_with_limit(a: &Formula, limit: usize) -> Result<bool, TautError> {
    let mut nodes = Vec::new();
    let mut atoms = BTreeMap::new();
    compile(a, &mut nodes, &mut atoms);
    let k = atoms.len();
    if k > limit || k > 40 {
        return Err(TautError::AtomLimitExceeded { atoms: k, limit });
    }
    let c = Compiled { nodes, atoms: k };
    let mut scratch = alloc::vec![false; c.nodes.len()];
    Ok((0..1u64 << c.atoms).all(|bits| c.eval(bits, &mut scratch)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn taut(s: &str) -> bool {
        is_tautology(&parse_formula(s, None).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(taut("P(c) -> P(c)"));
        assert!(taut("P(eps x. P(x)) | ~P(eps y. P(y))"));
        assert!(!taut("P(c) -> P(d)"));
        assert!(taut("(all x. P(x)) -> all y. P(y)"));
        assert!(taut("_|_ -> Q"));
        assert!(!taut("T -> _|_"));
        assert!(taut("((P -> Q) -> P) -> P"));
    }

    #[test]
    fn limit() {
        let a = parse_formula("P1 | P2 | P3 | ~P1", None).unwrap();
        assert_eq!(atom_count(&a), 3);
        assert!(matches!(is_tautology_with_limit(&a, 2), Err(TautError::AtomLimitExceeded { atoms: 3, limit: 2 })));
        assert_eq!(is_tautology_with_limit(&a, 3), Ok(true));
    }
}

//! Hilbert-style proofs in the five calculi, the checker, and the proof
//! transformations (substitution, deduction, epsilon embedding, derived
//! identity axioms).

pub(crate) mod axioms;
mod builder;
mod check;
mod embed;
pub(crate) mod eq2;
pub mod taut;
pub(crate) mod transform;

pub use axioms::{match_axiom, Bindings};
pub use builder::ProofBuilder;
pub use check::{check_proof, eigenvariables};
pub use embed::embed_proof;
pub use eq2::derive_eq2;
pub use taut::{is_tautology, TautError};
pub use transform::{deduction_transform, substitute_proof};

use crate::syntax::{Formula, Signature, SyntaxError, Term, Var};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Calculus {
    EC,
    ECeps,
    ECepsExt,
    ECforall,
    ECepsForall,
}

impl Calculus {
    pub const ALL: [Calculus; 5] =
        [Calculus::EC, Calculus::ECeps, Calculus::ECepsExt, Calculus::ECforall, Calculus::ECepsForall];

    pub fn has_epsilon(self) -> bool {
        matches!(self, Calculus::ECeps | Calculus::ECepsExt | Calculus::ECepsForall)
    }

    pub fn has_quantifiers(self) -> bool {
        matches!(self, Calculus::ECforall | Calculus::ECepsForall)
    }

    pub fn has_ext(self) -> bool {
        self == Calculus::ECepsExt
    }

    pub fn name(self) -> &'static str {
        match self {
            Calculus::EC => "EC",
            Calculus::ECeps => "ECeps",
            Calculus::ECepsExt => "ECepsExt",
            Calculus::ECforall => "ECforall",
            Calculus::ECepsForall => "ECepsForall",
        }
    }

    pub fn from_name(s: &str) -> Option<Calculus> {
        Calculus::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a line is justified. Line references are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Hyp,
    Taut,
    Eq1,
    Eq2,
    Eq2Pred,
    Eq2Fn,
    EqEps,
    Crit,
    Ext,
    ExtMinus,
    AxExists,
    AxForall,
    /// Minor premise `B` and major premise `B -> C`, in either order.
    MP(usize, usize),
    RExists(usize),
    RForall(usize),
}

impl Justification {
    pub fn name(&self) -> &'static str {
        match self {
            Justification::Hyp => "Hyp",
            Justification::Taut => "Taut",
            Justification::Eq1 => "Eq1",
            Justification::Eq2 => "Eq2",
            Justification::Eq2Pred => "Eq2Pred",
            Justification::Eq2Fn => "Eq2Fn",
            Justification::EqEps => "EqEps",
            Justification::Crit => "Crit",
            Justification::Ext => "Ext",
            Justification::ExtMinus => "ExtMinus",
            Justification::AxExists => "AxExists",
            Justification::AxForall => "AxForall",
            Justification::MP(..) => "MP",
            Justification::RExists(_) => "RExists",
            Justification::RForall(_) => "RForall",
        }
    }

    pub fn refs(&self) -> Vec<usize> {
        match *self {
            Justification::MP(i, j) => alloc::vec![i, j],
            Justification::RExists(i) | Justification::RForall(i) => alloc::vec![i],
            _ => Vec::new(),
        }
    }

    /// Builds a justification from a rule name and 0-based references.
    pub fn from_parts(name: &str, refs: &[usize]) -> Option<Justification> {
        let j = match (name, refs) {
            ("MP", [i, j]) => Justification::MP(*i, *j),
            ("RExists", [i]) => Justification::RExists(*i),
            ("RForall", [i]) => Justification::RForall(*i),
            (_, [_, ..]) => return None,
            ("Hyp", []) => Justification::Hyp,
            ("Taut", []) => Justification::Taut,
            ("Eq1", []) => Justification::Eq1,
            ("Eq2", []) => Justification::Eq2,
            ("Eq2Pred", []) => Justification::Eq2Pred,
            ("Eq2Fn", []) => Justification::Eq2Fn,
            ("EqEps", []) => Justification::EqEps,
            ("Crit", []) => Justification::Crit,
            ("Ext", []) => Justification::Ext,
            ("ExtMinus", []) => Justification::ExtMinus,
            ("AxExists", []) => Justification::AxExists,
            ("AxForall", []) => Justification::AxForall,
            _ => return None,
        };
        Some(j)
    }

    pub fn is_axiom(&self) -> bool {
        !matches!(
            self,
            Justification::Hyp | Justification::MP(..) | Justification::RExists(_) | Justification::RForall(_)
        )
    }

    pub fn is_identity_axiom(&self) -> bool {
        matches!(
            self,
            Justification::Eq1 | Justification::Eq2 | Justification::Eq2Pred | Justification::Eq2Fn | Justification::EqEps
        )
    }

    pub(crate) fn shifted(self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::MP(i, j) => Justification::MP(f(i), f(j)),
            Justification::RExists(i) => Justification::RExists(f(i)),
            Justification::RForall(i) => Justification::RForall(f(i)),
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub sig: Signature,
    pub calculus: Calculus,
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(sig: Signature, calculus: Calculus, hypotheses: Vec<Formula>) -> Proof {
        Proof { sig, calculus, hypotheses, lines: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(ProofLine { formula, just });
        self.lines.len() - 1
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub ok: bool,
    /// Line index (0-based) and reason.
    pub failures: Vec<(usize, String)>,
    pub eigenvariables: Vec<Var>,
    /// Critical epsilon terms with the lines of their critical formulas.
    pub critical_terms: Vec<(Term, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofError {
    Precondition(String),
    /// The input or an intermediate proof does not check.
    Invalid(Vec<(usize, String)>),
    Syntax(SyntaxError),
    Taut(TautError),
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofError::Precondition(m) => write!(f, "precondition violated: {m}"),
            ProofError::Invalid(fails) => {
                write!(f, "proof does not check")?;
                for (i, m) in fails.iter().take(3) {
                    write!(f, "; line {}: {m}", i + 1)?;
                }
                Ok(())
            }
            ProofError::Syntax(e) => write!(f, "{e}"),
            ProofError::Taut(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ProofError {}

impl From<SyntaxError> for ProofError {
    fn from(e: SyntaxError) -> Self {
        ProofError::Syntax(e)
    }
}

impl From<TautError> for ProofError {
    fn from(e: TautError) -> Self {
        ProofError::Taut(e)
    }
}

//! Incremental proof construction with reuse of already derived formulas.

use super::{Calculus, Justification, Proof, ProofLine};
use crate::syntax::{CFormula, Formula, Signature};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub struct ProofBuilder {
    proof: Proof,
    index: BTreeMap<CFormula, usize>,
}

impl ProofBuilder {
    pub fn new(sig: Signature, calculus: Calculus, hypotheses: Vec<Formula>) -> ProofBuilder {
        ProofBuilder { proof: Proof::new(sig, calculus, hypotheses), index: BTreeMap::new() }
    }

    pub fn calculus(&self) -> Calculus {
        self.proof.calculus
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.lines[i].formula
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.lines.is_empty()
    }

    /// An existing line proving a formula equivalent to `a`.
    pub fn find(&self, a: &Formula) -> Option<usize> {
        self.index.get(&a.canon()).copied()
    }

    /// Appends a line unconditionally.
    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        let i = self.proof.push(formula, just);
        self.index.entry(self.proof.lines[i].formula.canon()).or_insert(i);
        i
    }

    /// Reuses an earlier line for `formula` when there is one. Only for
    /// justifications without references.
    pub fn line(&mut self, formula: Formula, just: Justification) -> usize {
        match self.find(&formula) {
            Some(i) => i,
            None => self.push(formula, just),
        }
    }

    pub fn hyp(&mut self, a: Formula) -> usize {
        self.line(a, Justification::Hyp)
    }

    pub fn taut(&mut self, a: Formula) -> usize {
        self.line(a, Justification::Taut)
    }

    /// Modus ponens; the conclusion is read off the major premise.
    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let Formula::Imp(_, c) = self.formula(major) else {
            panic!("major premise of MP is not an implication")
        };
        let c = (**c).clone();
        match self.find(&c) {
            Some(i) => i,
            None => self.push(c, Justification::MP(minor, major)),
        }
    }

    /// Derives `conclusion` from the premise lines with one tautology
    /// `P1 -> ... -> Pk -> C` and `k` applications of MP.
    pub fn taut_mp(&mut self, premises: &[usize], conclusion: Formula) -> usize {
        if let Some(i) = self.find(&conclusion) {
            return i;
        }
        let chain = Formula::imp_chain(premises.iter().map(|&i| self.formula(i).clone()), conclusion);
        let mut major = self.taut(chain);
        for &p in premises {
            major = self.mp(p, major);
        }
        major
    }

    /// Copies the lines of `other` (same signature and calculus assumed),
    /// returning where each of its lines ended up.
    pub fn splice(&mut self, other: &Proof) -> Vec<usize> {
        let mut map = Vec::with_capacity(other.lines.len());
        for ProofLine { formula, just } in &other.lines {
            let j = just.shifted(|k| map[k]);
            let i = match just {
                Justification::MP(..) | Justification::RExists(_) | Justification::RForall(_) => {
                    match self.find(formula) {
                        Some(i) => i,
                        None => self.push(formula.clone(), j),
                    }
                }
                _ => self.line(formula.clone(), j),
            };
            map.push(i);
        }
        map
    }

    /// Line indices that line `i` depends on, including `i`, ascending.
    pub fn cone(&self, i: usize) -> Vec<usize> {
        let mut seen = alloc::vec![false; i + 1];
        let mut stack = alloc::vec![i];
        while let Some(k) = stack.pop() {
            if !seen[k] {
                seen[k] = true;
                stack.extend(self.proof.lines[k].just.refs());
            }
        }
        (0..=i).filter(|&k| seen[k]).collect()
    }

    /// The lines in `indices` (closed under references) as a proof of their own.
    pub fn extract(&self, indices: &[usize]) -> Proof {
        let mut pos = BTreeMap::new();
        let mut out = Proof::new(self.proof.sig.clone(), self.proof.calculus, self.proof.hypotheses.clone());
        for &k in indices {
            let l = &self.proof.lines[k];
            pos.insert(k, out.push(l.formula.clone(), l.just.shifted(|r| pos[&r])));
        }
        out
    }

    pub fn finish(self) -> Proof {
        self.proof
    }

    /// Finishes so that line `last` is the conclusion, repeating it at the
    /// end when later lines exist.
    pub fn finish_at(mut self, last: usize) -> Proof {
        if last + 1 != self.proof.lines.len() {
            let f = self.proof.lines[last].formula.clone();
            let t = self.proof.push(Formula::imp(f.clone(), f.clone()), Justification::Taut);
            self.proof.push(f, Justification::MP(last, t));
        }
        self.proof
    }
}

impl From<Proof> for ProofBuilder {
    fn from(proof: Proof) -> ProofBuilder {
        let mut index = BTreeMap::new();
        for (i, l) in proof.lines.iter().enumerate() {
            index.entry(l.formula.canon()).or_insert(i);
        }
        ProofBuilder { proof, index }
    }
}

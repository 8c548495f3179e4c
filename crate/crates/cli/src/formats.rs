//! JSON file formats for signatures, proofs, check reports and traces.

use anyhow::{anyhow, bail, Context, Result};
use epsilon_core::elim::{CriticalTerm, ElimStep, ElimTrace, ProofMetrics};
use epsilon_core::proof::{CheckReport, Calculus, Justification, Proof};
use epsilon_core::syntax::{parse_formula, Formula, Signature};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureFile {
    #[serde(default)]
    pub functions: Vec<SymbolDecl>,
    #[serde(default)]
    pub predicates: Vec<SymbolDecl>,
    #[serde(default)]
    pub identity: bool,
}

impl SignatureFile {
    pub fn from_signature(sig: &Signature) -> SignatureFile {
        let decl = |(s, a): (&epsilon_core::syntax::Sym, usize)| SymbolDecl { name: s.name().to_string(), arity: a };
        SignatureFile {
            functions: sig.functions().map(decl).collect(),
            predicates: sig.predicates().map(decl).collect(),
            identity: sig.identity,
        }
    }

    pub fn to_signature(&self) -> Result<Signature> {
        let mut sig = Signature::new().with_identity(self.identity);
        for f in &self.functions {
            sig.declare_function(&f.name, f.arity)?;
        }
        for p in &self.predicates {
            sig.declare_predicate(&p.name, p.arity)?;
        }
        Ok(sig)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFile {
    pub formula: String,
    pub rule: String,
    #[serde(default)]
    pub refs: Vec<usize>,
}

/// Line references are 1-based. Without a signature, one is inferred from
/// the formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofFile {
    #[serde(default)]
    pub signature: Option<SignatureFile>,
    pub calculus: String,
    #[serde(default)]
    pub hypotheses: Vec<String>,
    pub lines: Vec<LineFile>,
}

impl ProofFile {
    pub fn from_proof(p: &Proof) -> ProofFile {
        ProofFile {
            signature: Some(SignatureFile::from_signature(&p.sig)),
            calculus: p.calculus.name().to_string(),
            hypotheses: p.hypotheses.iter().map(ToString::to_string).collect(),
            lines: p
                .lines
                .iter()
                .map(|l| LineFile {
                    formula: l.formula.to_string(),
                    rule: l.just.name().to_string(),
                    refs: l.just.refs().iter().map(|r| r + 1).collect(),
                })
                .collect(),
        }
    }

    pub fn to_proof(&self) -> Result<Proof> {
        let calculus = Calculus::from_name(&self.calculus).ok_or_else(|| anyhow!("unknown calculus `{}`", self.calculus))?;
        let sig = self.signature.as_ref().map(SignatureFile::to_signature).transpose()?;
        let parse = |s: &str| parse_formula(s, sig.as_ref()).with_context(|| format!("in `{s}`"));
        let hypotheses = self.hypotheses.iter().map(|h| parse(h)).collect::<Result<Vec<_>>>()?;
        let mut p = Proof::new(sig.clone().unwrap_or_default(), calculus, hypotheses);
        for (i, l) in self.lines.iter().enumerate() {
            let refs = l
                .refs
                .iter()
                .map(|r| r.checked_sub(1).ok_or_else(|| anyhow!("line {}: references are 1-based", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            let just = Justification::from_parts(&l.rule, &refs)
                .ok_or_else(|| anyhow!("line {}: bad rule `{}` with {} references", i + 1, l.rule, refs.len()))?;
            p.push(parse(&l.formula).with_context(|| format!("line {}", i + 1))?, just);
        }
        if sig.is_none() {
            let all: Vec<&Formula> = p.lines.iter().map(|l| &l.formula).chain(&p.hypotheses).collect();
            let mut inferred = Signature::infer(all.iter().copied())?;
            inferred.identity = all.iter().any(|f| f.contains_identity());
            p.sig = inferred;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalLines {
    pub term: String,
    pub lines: Vec<usize>,
}

/// A check report; line numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub ok: bool,
    pub failures: Vec<Failure>,
    pub eigenvariables: Vec<String>,
    pub critical_terms: Vec<CriticalLines>,
}

impl ReportFile {
    pub fn from_report(r: &CheckReport) -> ReportFile {
        ReportFile {
            ok: r.ok,
            failures: r.failures.iter().map(|(i, m)| Failure { line: i + 1, message: m.clone() }).collect(),
            eigenvariables: r.eigenvariables.iter().map(|v| v.name().to_string()).collect(),
            critical_terms: r
                .critical_terms
                .iter()
                .map(|(t, ls)| CriticalLines { term: t.to_string(), lines: ls.iter().map(|i| i + 1).collect() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalFile {
    pub term: String,
    pub rank: usize,
    pub degree: usize,
    pub witnesses: Vec<String>,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub rank: usize,
    pub r_degree: BTreeMap<usize, usize>,
    pub r_order: BTreeMap<usize, usize>,
    pub critical: Vec<CriticalFile>,
    pub special: Vec<String>,
}

impl MetricsFile {
    pub fn from_metrics(m: &ProofMetrics) -> MetricsFile {
        let crit = |c: &CriticalTerm| CriticalFile {
            term: c.term.to_string(),
            rank: c.rank,
            degree: c.degree,
            witnesses: c.witnesses.iter().map(ToString::to_string).collect(),
            lines: c.lines.iter().map(|i| i + 1).collect(),
        };
        MetricsFile {
            rank: m.rank,
            r_degree: m.r_degree.clone(),
            r_order: m.r_order.clone(),
            critical: m.critical.iter().map(crit).collect(),
            special: m.special.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.r_order.get(&self.rank).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFile {
    pub term: String,
    pub strategy: String,
    pub before: MetricsFile,
    pub after: MetricsFile,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub steps: Vec<StepFile>,
}

impl TraceFile {
    pub fn from_trace(t: &ElimTrace) -> TraceFile {
        let step = |s: &ElimStep| StepFile {
            term: s.term.to_string(),
            strategy: s.strategy.name().to_string(),
            before: MetricsFile::from_metrics(&s.before),
            after: MetricsFile::from_metrics(&s.after),
        };
        TraceFile { steps: t.steps.iter().map(step).collect() }
    }

    pub fn extend(&mut self, t: &ElimTrace) {
        self.steps.extend(TraceFile::from_trace(t).steps);
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_proof(path: &std::path::Path) -> Result<Proof> {
    let f: ProofFile = read_json(path)?;
    f.to_proof().with_context(|| format!("in {}", path.display()))
}

pub fn ensure_nonempty(p: &Proof) -> Result<()> {
    if p.lines.is_empty() {
        bail!("the proof has no lines");
    }
    Ok(())
}

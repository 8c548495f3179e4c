//! Model files: a finite structure with a chooser, optionally an assignment.
//!
//! Function tables list values in argument order, first argument most
//! significant. Choice tables map a subset bitmask (decimal) to an element;
//! missing subsets take the least element. Intensional entries are keyed by
//! epsilon type, then by comma-separated slot values.

use anyhow::{anyhow, bail, Result};
use epsilon_core::semantics::{Assignment, Choice, Counterexample, ExtChoiceFunction, IntChoiceOperator, Structure};
use epsilon_core::syntax::{Signature, Var};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type ChoiceTable = BTreeMap<String, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub domain: usize,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub predicates: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensional: Option<BTreeMap<String, BTreeMap<String, ChoiceTable>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, usize>>,
    /// Generic consequence: where the premises hold for every chooser.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise_assignment: Option<BTreeMap<String, usize>>,
}

fn table_of(phi: &ExtChoiceFunction) -> ChoiceTable {
    phi.table().iter().enumerate().map(|(mask, m)| (mask.to_string(), *m)).collect()
}

fn function_of(n: usize, t: &ChoiceTable) -> Result<ExtChoiceFunction> {
    let mut table = ExtChoiceFunction::least(n).table().to_vec();
    for (k, v) in t {
        let mask: usize = k.parse().map_err(|_| anyhow!("bad subset bitmask `{k}`"))?;
        *table.get_mut(mask).ok_or_else(|| anyhow!("subset bitmask {mask} is out of range"))? = *v;
    }
    Ok(ExtChoiceFunction::new(n, table)?)
}

fn values_of(s: &Assignment) -> BTreeMap<String, usize> {
    s.values.iter().map(|(x, m)| (x.name().to_string(), *m)).collect()
}

pub fn assignment_of(values: &BTreeMap<String, usize>) -> Assignment {
    Assignment { default: 0, values: values.iter().map(|(x, m)| (Var::new(x), *m)).collect() }
}

fn args_key(args: &[usize]) -> String {
    args.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn parse_args_key(k: &str) -> Result<Vec<usize>> {
    if k.is_empty() {
        return Ok(Vec::new());
    }
    k.split(',').map(|a| a.trim().parse().map_err(|_| anyhow!("bad slot values `{k}`"))).collect()
}

impl ModelFile {
    pub fn new(m: &Structure, choice: Option<&Choice>) -> ModelFile {
        let mut out = ModelFile {
            domain: m.size(),
            functions: m.functions().map(|(f, t)| (f.name().to_string(), t.values.clone())).collect(),
            predicates: m.predicates().map(|(p, _)| (p.name().to_string(), m.extension(p.name()).unwrap_or_default())).collect(),
            choice: None,
            intensional: None,
            assignment: None,
            premise_assignment: None,
        };
        match choice {
            Some(Choice::Ext(phi)) => out.choice = Some(table_of(phi)),
            Some(Choice::Int(psi)) => {
                let mut by_type: BTreeMap<String, BTreeMap<String, ChoiceTable>> = BTreeMap::new();
                for ((ty, args), phi) in &psi.entries {
                    by_type.entry(ty.clone()).or_default().insert(args_key(args), table_of(phi));
                }
                out.choice = Some(table_of(&psi.default));
                out.intensional = Some(by_type);
            }
            None => {}
        }
        out
    }

    pub fn from_counterexample(c: &Counterexample) -> ModelFile {
        let mut out = ModelFile::new(&c.structure, Some(&c.choice));
        out.assignment = Some(values_of(&c.assignment));
        out.premise_assignment = c.premise_assignment.as_ref().map(values_of);
        out
    }

    /// The structure, taking function arities from `sig` where the table
    /// length alone is ambiguous.
    pub fn structure(&self, sig: &Signature) -> Result<Structure> {
        let n = self.domain;
        let mut m = Structure::new(n)?;
        for (f, values) in &self.functions {
            let arity = match sig.function_arity(f) {
                Some(a) => a,
                None => arity_of(n, values.len()).ok_or_else(|| anyhow!("`{f}` has {} entries", values.len()))?,
            };
            m.set_function(f, arity, values.clone())?;
        }
        for (p, tuples) in &self.predicates {
            let arity = match (sig.predicate_arity(p), tuples.first()) {
                (Some(a), _) => a,
                (None, Some(t)) => t.len(),
                (None, None) => 0,
            };
            m.set_predicate(p, arity, tuples)?;
        }
        Ok(m)
    }

    /// The chooser: intensional if that table is present, else the
    /// extensional one, else the least choice function.
    pub fn chooser(&self) -> Result<Choice> {
        let n = self.domain;
        let default = match &self.choice {
            Some(t) => function_of(n, t)?,
            None => ExtChoiceFunction::least(n),
        };
        let Some(int) = &self.intensional else { return Ok(Choice::Ext(default)) };
        let mut psi = IntChoiceOperator::constant(default);
        for (ty, entries) in int {
            for (args, t) in entries {
                let args = parse_args_key(args)?;
                if args.iter().any(|a| *a >= n) {
                    bail!("slot values {args:?} are outside the domain");
                }
                psi.entries.insert((ty.clone(), args), function_of(n, t)?);
            }
        }
        Ok(Choice::Int(psi))
    }
}

fn arity_of(n: usize, len: usize) -> Option<usize> {
    (0..=8).find(|k| n.checked_pow(*k as u32) == Some(len))
}

//! Command-line front end for the epsilon calculus workbench.

pub mod formats;
pub mod model;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use epsilon_core::elim::{self, ElimTrace};
use epsilon_core::proof::{self, check_proof, Calculus, Proof, ProofError};
use epsilon_core::semantics::{self, ChoiceSpace, Consequence, Evaluator, Limits, Verdict};
use epsilon_core::syntax::{parse_formula, parse_term, Formula, Signature, Term, Var};
use epsilon_core::translate::epsilon_translate;
use formats::{read_json, read_proof, ProofFile, ReportFile, TraceFile};
use model::ModelFile;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "epsilon", version, about = "Epsilon calculus workbench")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Parse and print a formula (or a term with --term).
    Parse {
        expr: String,
        #[arg(long)]
        term: bool,
    },
    /// Epsilon translation of a formula.
    Translate { formula: String },
    /// Epsilon type, degree and rank of an epsilon term.
    Typeof { term: String },
    /// Check a proof file.
    Check { proof: PathBuf },
    /// Discharge a hypothesis.
    Deduce {
        proof: PathBuf,
        #[arg(long)]
        discharge: String,
    },
    /// Substitute a term for a free variable throughout a proof.
    Subst {
        proof: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long)]
        term: String,
    },
    /// Embed a quantifier proof into the epsilon calculus.
    Embed { proof: PathBuf },
    /// Eliminate critical formulas, giving a proof in EC.
    Eliminate {
        proof: PathBuf,
        #[arg(long)]
        with_identity: bool,
    },
    /// Herbrand disjunction of an existential conclusion.
    Herbrand { proof: PathBuf },
    /// Evaluate a formula (or a term with --term) in a model.
    Eval {
        expr: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        term: bool,
        /// `x=m`, repeatable; other variables get 0.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Search for a counterexample to `gamma ⊨ formula`.
    Consequence {
        formula: String,
        #[arg(long, default_value = "v")]
        mode: String,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        /// A premise, repeatable.
        #[arg(long)]
        gamma: Vec<String>,
        /// Range over intensional choice operators.
        #[arg(long)]
        intensional: bool,
    },
}

/// What a verb produced. `ok == false` is a negative verdict.
pub struct Output {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output { ok: true, text, json }
    }
}

/// Runs one invocation and returns the exit code: 0 success, 1 negative
/// verdict, 2 usage or input error.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    if let Err(e) = apply_atom_limit() {
        let _ = writeln!(err, "error: {e:#}");
        return 2;
    }
    match execute(&cli.verb) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serialisable") + "\n",
            };
            let _ = out.write_all(body.as_bytes());
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// A proof that fails to check is a negative verdict; anything else is bad
/// input.
fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<ProofError>() {
        Some(ProofError::Invalid(_)) => 1,
        _ => 2,
    }
}

fn apply_atom_limit() -> Result<()> {
    if let Ok(v) = std::env::var("EPSILON_MAX_ATOMS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow!("EPSILON_MAX_ATOMS must be a number, got `{v}`"))?;
        proof::taut::set_atom_limit(n);
    }
    Ok(())
}

fn formula(s: &str, sig: Option<&Signature>) -> Result<Formula> {
    parse_formula(s, sig).with_context(|| format!("cannot parse formula `{s}`"))
}

fn term(s: &str, sig: Option<&Signature>) -> Result<Term> {
    parse_term(s, sig).with_context(|| format!("cannot parse term `{s}`"))
}

pub fn execute(verb: &Verb) -> Result<Output> {
    match verb {
        Verb::Parse { expr, term: as_term } => {
            let (kind, text) = if *as_term {
                ("term", term(expr, None)?.to_string())
            } else {
                ("formula", formula(expr, None)?.to_string())
            };
            Ok(Output::ok(format!("{text}\n"), json!({ "kind": kind, "text": text })))
        }
        Verb::Translate { formula: src } => {
            let a = formula(src, None)?;
            let (b, trace) = epsilon_translate(&a);
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| json!({ "source": s.source.to_string(), "witness": s.witness.to_string(), "result": s.result.to_string() }))
                .collect();
            Ok(Output::ok(format!("{b}\n"), json!({ "formula": a.to_string(), "translation": b.to_string(), "steps": steps })))
        }
        Verb::Typeof { term: src } => typeof_report(&term(src, None)?),
        Verb::Check { proof } => {
            let p = read_proof(proof)?;
            let r = ReportFile::from_report(&check_proof(&p));
            let mut text = String::new();
            if r.ok {
                writeln!(text, "ok: {} lines in {}", p.lines.len(), p.calculus)?;
            } else {
                for f in &r.failures {
                    writeln!(text, "line {}: {}", f.line, f.message)?;
                }
            }
            for c in &r.critical_terms {
                writeln!(text, "critical {} at lines {:?}", c.term, c.lines)?;
            }
            Ok(Output { ok: r.ok, text, json: serde_json::to_value(&r)? })
        }
        Verb::Deduce { proof, discharge } => {
            let p = read_proof(proof)?;
            let a = formula(discharge, Some(&p.sig))?;
            proof_output(&proof::deduction_transform(&p, &a)?)
        }
        Verb::Subst { proof, var, term: t } => {
            let p = read_proof(proof)?;
            let t = term(t, Some(&p.sig))?;
            proof_output(&proof::substitute_proof(&p, &Var::new(var), &t)?)
        }
        Verb::Embed { proof } => proof_output(&proof::embed_proof(&read_proof(proof)?)?),
        Verb::Eliminate { proof, with_identity } => eliminate(&read_proof(proof)?, *with_identity),
        Verb::Herbrand { proof } => herbrand(&read_proof(proof)?),
        Verb::Eval { expr, model, term: as_term, assign } => eval(expr, model, *as_term, assign),
        Verb::Consequence { formula: src, mode, max_domain, gamma, intensional } => {
            let mode = Consequence::parse(mode).ok_or_else(|| anyhow!("mode must be one of l, t, g, v; got `{mode}`"))?;
            let a = formula(src, None)?;
            let gamma = gamma.iter().map(|g| formula(g, None)).collect::<Result<Vec<_>>>()?;
            let space = if *intensional { ChoiceSpace::Intensional } else { ChoiceSpace::Extensional };
            let v = semantics::check_consequence(&gamma, &a, mode, *max_domain, space, &Limits::default())?;
            Ok(match v {
                Verdict::Holds { max_domain } => Output::ok(
                    format!("holds on all domains up to size {max_domain}\n"),
                    json!({ "holds": true, "mode": mode.name(), "max_domain": max_domain }),
                ),
                Verdict::Counterexample(c) => {
                    let m = ModelFile::from_counterexample(&c);
                    Output {
                        ok: false,
                        text: format!("counterexample on a domain of size {}\n{}\n", m.domain, serde_json::to_string_pretty(&m)?),
                        json: json!({ "holds": false, "mode": mode.name(), "counterexample": m }),
                    }
                }
            })
        }
    }
}

fn typeof_report(t: &Term) -> Result<Output> {
    let (ty, args) = t.epsilon_type()?;
    let rank = t.rank()?;
    let degree = t.degree();
    let args: Vec<String> = args.iter().map(ToString::to_string).collect();
    let text = format!("type: {}\nslots: [{}]\ndegree: {degree}\nrank: {rank}\n", ty.key(), args.join(", "));
    Ok(Output::ok(text, json!({ "type": ty.key(), "arity": ty.arity(), "args": args, "degree": degree, "rank": rank })))
}

pub fn render_proof(p: &Proof) -> String {
    let mut s = format!("{}", p.calculus);
    if !p.hypotheses.is_empty() {
        let hs: Vec<String> = p.hypotheses.iter().map(ToString::to_string).collect();
        write!(s, " from {}", hs.join("; ")).expect("string");
    }
    s.push('\n');
    for (i, l) in p.lines.iter().enumerate() {
        let refs: Vec<String> = l.just.refs().iter().map(|r| (r + 1).to_string()).collect();
        let rule = if refs.is_empty() { l.just.name().to_string() } else { format!("{} {}", l.just.name(), refs.join(",")) };
        writeln!(s, "{:>4}. {}  [{rule}]", i + 1, l.formula).expect("string");
    }
    s
}

fn proof_output(p: &Proof) -> Result<Output> {
    Ok(Output::ok(render_proof(p), serde_json::to_value(ProofFile::from_proof(p))?))
}

fn render_trace(t: &TraceFile) -> String {
    let mut s = String::new();
    for (i, st) in t.steps.iter().enumerate() {
        writeln!(
            s,
            "step {}: {} {}  (rank, order) ({}, {}) -> ({}, {})",
            i + 1,
            st.strategy,
            st.term,
            st.before.rank,
            st.before.order(),
            st.after.rank,
            st.after.order()
        )
        .expect("string");
    }
    s
}

fn conclusion(p: &Proof) -> Result<Formula> {
    p.conclusion().cloned().ok_or_else(|| anyhow!("the proof has no lines"))
}

fn eliminate(p: &Proof, with_identity: bool) -> Result<Output> {
    let e = conclusion(p)?;
    let mut trace = TraceFile::default();
    let mut p = p.clone();
    if with_identity {
        p = elim::normalize_identity(&p)?;
        let (q, t) = elim::eliminate_special_traced(&p, &e)?;
        trace.extend(&t);
        p = q;
    } else if p.lines.iter().any(|l| l.just == proof::Justification::Eq2) {
        bail!("general (=2) instances present; use --with-identity");
    }
    let (q, t): (Proof, ElimTrace) = elim::eliminate_all(&p, &e)?;
    trace.extend(&t);
    let text = format!("{}{}", render_trace(&trace), render_proof(&q));
    Ok(Output::ok(text, json!({ "proof": ProofFile::from_proof(&q), "trace": trace })))
}

/// Quantifier proofs are embedded first and the goal translated.
fn herbrand(p: &Proof) -> Result<Output> {
    let mut goal = conclusion(p)?;
    let mut p = p.clone();
    if p.calculus.has_quantifiers() {
        p = proof::embed_proof(&p)?;
        goal = epsilon_core::translate::translate(&goal);
    }
    if p.calculus == Calculus::EC {
        p.calculus = Calculus::ECeps;
    }
    let (terms, q) = elim::herbrand_disjunction(&p, &goal)?;
    let terms: Vec<String> = terms.iter().map(ToString::to_string).collect();
    let disjunction = q.conclusion().map(ToString::to_string).unwrap_or_default();
    let text = format!("witnesses: [{}]\ndisjunction: {disjunction}\n{}", terms.join(", "), render_proof(&q));
    Ok(Output::ok(
        text,
        json!({ "witnesses": terms, "disjunction": disjunction, "proof": ProofFile::from_proof(&q) }),
    ))
}

fn eval(expr: &str, model: &std::path::Path, as_term: bool, assign: &[String]) -> Result<Output> {
    let mf: ModelFile = read_json(model)?;
    let mut values = mf.assignment.clone().unwrap_or_default();
    for a in assign {
        let (x, m) = a.split_once('=').ok_or_else(|| anyhow!("--assign expects x=m, got `{a}`"))?;
        let m: usize = m.trim().parse().map_err(|_| anyhow!("bad element in `{a}`"))?;
        if m >= mf.domain {
            bail!("{m} is outside the domain");
        }
        values.insert(x.trim().to_string(), m);
    }
    let s = model::assignment_of(&values);
    let choice = mf.chooser()?;
    if as_term {
        let t = term(expr, None)?;
        let probe = Formula::eq(t.clone(), t.clone());
        let m = mf.structure(&Signature::infer([&probe])?)?;
        let v = Evaluator::new(&m, choice.chooser()).term(&s, &t)?;
        Ok(Output::ok(format!("{v}\n"), json!({ "term": t.to_string(), "value": v })))
    } else {
        let a = formula(expr, None)?;
        let m = mf.structure(&Signature::infer([&a])?)?;
        let v = Evaluator::new(&m, choice.chooser()).formula(&s, &a)?;
        Ok(Output { ok: v, text: format!("{v}\n"), json: json!({ "formula": a.to_string(), "value": v }) })
    }
}


//! Printing with minimal parentheses; output parses back to an equivalent
//! expression.

use super::{Formula, Term};
use core::fmt::{self, Write};

// Binding strength: binders 0, <-> 1, -> 2, | 3, & 4, unary and atoms 5.
fn prec(a: &Formula) -> u8 {
    match a {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Imp(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

fn write_term<W: Write>(w: &mut W, t: &Term, operand: bool) -> fmt::Result {
    match t {
        Term::Var(v) => write!(w, "{v}"),
        Term::App(f, args) => {
            write!(w, "{f}")?;
            if !args.is_empty() {
                w.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        w.write_str(", ")?;
                    }
                    write_term(w, a, false)?;
                }
                w.write_char(')')?;
            }
            Ok(())
        }
        Term::Eps(x, body) => {
            if operand {
                w.write_char('(')?;
            }
            write!(w, "eps {x}. ")?;
            write_formula(w, body, 0)?;
            if operand {
                w.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_formula<W: Write>(w: &mut W, a: &Formula, min: u8) -> fmt::Result {
    let p = prec(a);
    let paren = p < min;
    if paren {
        w.write_char('(')?;
    }
    match a {
        Formula::Atom(p, args) => {
            write!(w, "{p}")?;
            if !args.is_empty() {
                w.write_char('(')?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        w.write_str(", ")?;
                    }
                    write_term(w, t, false)?;
                }
                w.write_char(')')?;
            }
        }
        Formula::Eq(l, r) => {
            write_term(w, l, true)?;
            w.write_str(" = ")?;
            write_term(w, r, true)?;
        }
        Formula::Bot => w.write_str("_|_")?,
        Formula::Top => w.write_str("T")?,
        Formula::Not(b) => {
            w.write_char('~')?;
            write_formula(w, b, 5)?;
        }
        Formula::And(b, c) => binary(w, b, " & ", c, 4, 5)?,
        Formula::Or(b, c) => binary(w, b, " | ", c, 3, 4)?,
        Formula::Imp(b, c) => binary(w, b, " -> ", c, 3, 2)?,
        Formula::Iff(b, c) => binary(w, b, " <-> ", c, 2, 1)?,
        Formula::Forall(x, body) => {
            write!(w, "all {x}. ")?;
            write_formula(w, body, 0)?;
        }
        Formula::Exists(x, body) => {
            write!(w, "ex {x}. ")?;
            write_formula(w, body, 0)?;
        }
    }
    if paren {
        w.write_char(')')?;
    }
    Ok(())
}

fn binary<W: Write>(w: &mut W, b: &Formula, op: &str, c: &Formula, lmin: u8, rmin: u8) -> fmt::Result {
    // A binder on the left would swallow the operator, so it always gets parentheses.
    write_formula(w, b, lmin.max(1))?;
    w.write_str(op)?;
    // On the right a binder may extend to the end only when nothing follows;
    // the enclosing call parenthesises us otherwise, so a bare binder is safe.
    write_formula(w, c, if prec(c) == 0 { 0 } else { rmin })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, false)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, false)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

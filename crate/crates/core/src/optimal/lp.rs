//! CPLEX LP-format export.

use std::fmt::Write as _;
use std::io;

use num_traits::{Signed, Zero};

use super::model::{IlpModel, Relation, Var};
use crate::discovery::{format_decimal, format_ratio, Rational};

/// Fractional digits used for coefficients without a finite decimal expansion.
const REPEATING_DIGITS: usize = 18;

/// Decimal rendering: exact when the expansion terminates, otherwise rounded
/// to [`REPEATING_DIGITS`] fractional digits.
fn lp_number(r: &Rational) -> String {
    let mut d = *r.denom();
    let mut digits = 0usize;
    while d % 2 == 0 || d % 5 == 0 {
        if d % 2 == 0 {
            d /= 2;
        }
        if d % 5 == 0 {
            d /= 5;
        }
        digits += 1;
    }
    let text = if d == 1 { format_decimal(r, digits) } else { format_decimal(r, REPEATING_DIGITS) };
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

fn write_terms(out: &mut String, model: &IlpModel, terms: &[(Var, Rational)]) {
    let mut first = true;
    for (v, c) in terms {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        if first {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag != Rational::from_integer(1) {
            let _ = write!(out, "{} ", lp_number(&mag));
        }
        out.push_str(&model.var_name(*v));
        first = false;
    }
    if first {
        out.push('0');
    }
}

/// Renders the model as LP text with sections `Minimize`, `Subject To`,
/// `Bounds` (makespan models only), `Binary` and `End`.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ model: {}", model.name);
    let _ = writeln!(out, "\\ t_max: {}", model.t_max);
    if !model.has_makespan() {
        let _ = writeln!(out, "\\ objective scale per weight unit: {}", format_ratio(&model.scale));
    }
    out.push_str("Minimize\n obj: ");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}: ", c.name);
        write_terms(&mut out, model, &c.terms);
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", lp_number(&c.rhs));
    }
    if model.has_makespan() {
        out.push_str("Bounds\n z >= 0\n");
    }
    out.push_str("Binary\n");
    for v in model.y_vars().into_iter().chain(model.h_vars()) {
        let _ = writeln!(out, " {}", model.var_name(v));
    }
    out.push_str("End\n");
    out
}

/// Writes [`export_lp`] output to `dest`.
pub fn write_lp<W: io::Write>(model: &IlpModel, mut dest: W) -> io::Result<()> {
    dest.write_all(export_lp(model).as_bytes())?;
    dest.flush()
}

//! CPLEX-LP-format serialization of a model.
//!
//! Output is deterministic: variables in creation order (sorted by kind, then
//! indices), constraints in emission order, long expressions wrapped at a
//! fixed term count.

use std::fmt::Write as _;

use crate::milp::model::MilpModel;

const TERMS_PER_LINE: usize = 8;

fn write_expression(out: &mut String, terms: &[(usize, f64)], model: &MilpModel) {
    let mut on_line = 0;
    for (pos, &(var, coeff)) in terms.iter().enumerate() {
        if coeff == 0.0 {
            continue;
        }
        let name = model.variables[var].kind.name();
        if pos == 0 {
            if coeff < 0.0 {
                let _ = write!(out, "- {} {name}", format_coeff(-coeff));
            } else {
                let _ = write!(out, "{} {name}", format_coeff(coeff));
            }
        } else {
            let sign = if coeff < 0.0 { '-' } else { '+' };
            let _ = write!(out, " {sign} {} {name}", format_coeff(coeff.abs()));
        }
        on_line += 1;
        if on_line == TERMS_PER_LINE && pos + 1 < terms.len() {
            out.push_str("\n   ");
            on_line = 0;
        }
    }
}

fn format_coeff(c: f64) -> String {
    // f64 Display is shortest-roundtrip, stable across runs
    format!("{c}")
}

/// Serialize a model to LP-format text.
pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name);
    out.push_str("Minimize\n obj: ");
    let objective: Vec<(usize, f64)> = model
        .objective
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0.0)
        .map(|(v, &c)| (v, c))
        .collect();
    write_expression(&mut out, &objective, model);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}: ", c.label);
        write_expression(&mut out, &c.terms, model);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), format_coeff(c.rhs));
    }
    let bounded: Vec<usize> = (0..model.num_variables())
        .filter(|&v| model.variables[v].upper.is_some())
        .collect();
    if !bounded.is_empty() {
        out.push_str("Bounds\n");
        for v in bounded {
            let _ = writeln!(
                out,
                " 0 <= {} <= {}",
                model.variables[v].kind.name(),
                format_coeff(model.variables[v].upper.expect("bounded"))
            );
        }
    }
    if model.num_variables() > 0 {
        out.push_str("Generals\n");
        for v in &model.variables {
            let _ = writeln!(out, " {}", v.kind.name());
        }
    }
    out.push_str("End\n");
    out
}

//! Text, LaTeX and CSV renderings of the exact types. JSON goes through
//! serde and is written compactly with a trailing newline.

use std::io::Write;

use num_traits::{One, Signed, Zero};
use refined_core::exact::{Exp, LaurentPoly, NPoly, Rat, Series};
use serde::Serialize;

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Text,
    Latex,
}

fn coeff_str(c: &Rat, style: Style) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        match style {
            Style::Text => format!("{}/{}", c.numer(), c.denom()),
            Style::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
        }
    }
}

fn exp_str(e: &Exp) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn monomial(var: &str, e: &Exp, style: Style) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        var.to_string()
    } else {
        match style {
            Style::Latex => format!("{var}^{{{}}}", exp_str(e)),
            Style::Text if e.is_integer() => format!("{var}^{}", exp_str(e)),
            Style::Text => format!("{var}^({})", exp_str(e)),
        }
    }
}

/// Joins `(coefficient, monomial)` pairs, already in display order, into
/// `a + b - c`. Unit coefficients in front of a monomial are dropped.
fn join_terms<'a>(terms: impl IntoIterator<Item = (&'a Rat, String)>, style: Style) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if mono.is_empty() {
            out.push_str(&coeff_str(&a, style));
        } else if a.is_one() {
            out.push_str(&mono);
        } else if a.is_integer() || style == Style::Latex {
            out.push_str(&coeff_str(&a, style));
            out.push_str(&mono);
        } else {
            out.push_str(&coeff_str(&a, style));
            out.push(' ');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Descending exponents with `q^{-k}` for negative powers.
pub fn laurent_latex(p: &LaurentPoly) -> String {
    join_terms(p.terms().rev().map(|(e, c)| (c, monomial("q", e, Style::Latex))), Style::Latex)
}

/// Ascending powers of `var`, for polynomials that live in `x` rather than `q`.
pub fn poly_text(p: &LaurentPoly, var: &str) -> String {
    join_terms(p.terms().map(|(e, c)| (c, monomial(var, e, Style::Text))), Style::Text)
}

pub fn npoly_text(p: &NPoly) -> String {
    npoly(p, Style::Text)
}

pub fn npoly_latex(p: &NPoly) -> String {
    npoly(p, Style::Latex)
}

fn npoly(p: &NPoly, style: Style) -> String {
    let terms = p.coeffs().iter().enumerate().rev();
    join_terms(terms.map(|(k, c)| (c, monomial("n", &Exp::from_integer(k as i64), style))), style)
}

pub fn series_text(s: &Series, var: &str) -> String {
    series(s, var, Style::Text)
}

pub fn series_latex(s: &Series, var: &str) -> String {
    series(s, var, Style::Latex)
}

fn series(s: &Series, var: &str, style: Style) -> String {
    let terms = s.coeffs().iter().enumerate();
    let body = join_terms(terms.map(|(k, c)| (c, monomial(var, &Exp::from_integer(k as i64), style))), style);
    let tail = format!("O({})", monomial(var, &Exp::from_integer(s.order() as i64 + 1), style));
    if body == "0" {
        tail
    } else {
        format!("{body} + {tail}")
    }
}

pub fn json_line<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes `header` and `rows` as CSV into a string.
pub fn csv_table<I, R>(header: &[&str], rows: I) -> CliResult<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of ascii fields"))
}

pub fn rat_fields(c: &Rat) -> [String; 2] {
    [c.numer().to_string(), c.denom().to_string()]
}

pub fn laurent_csv(p: &LaurentPoly) -> CliResult<String> {
    csv_table(
        &["exp", "num", "den"],
        p.terms().map(|(e, c)| {
            let [n, d] = rat_fields(c);
            [exp_str(e), n, d]
        }),
    )
}

pub fn series_csv(s: &Series, index: &str) -> CliResult<String> {
    csv_table(
        &[index, "num", "den"],
        s.coeffs().iter().enumerate().map(|(k, c)| {
            let [n, d] = rat_fields(c);
            [k.to_string(), n, d]
        }),
    )
}

pub fn write_out(out: &mut dyn Write, s: &str) -> CliResult<()> {
    out.write_all(s.as_bytes())?;
    Ok(())
}

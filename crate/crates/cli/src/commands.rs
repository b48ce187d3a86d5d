use refined_core::exact::{ArInvariant, LaurentPoly, Series};
use refined_core::genus_series::genus_gf;
use refined_core::invariants::{bg_class, bg_star, Method, Polarization};
use serde::Serialize;

use crate::args::{ArArgs, BgArgs, Format, GmArgs, GmMethod, SeriesArgs, SourceArg, VerifyArgs};
use crate::cache::{Cache, Key};
use crate::error::{CliError, CliResult, EXIT_FAILED};
use crate::render::{self, csv_table, json_line, rat_fields};
use crate::verify::{self, ar_closed_cached, ar_interpolated_cached, gm_cached, Ctx, Status};

/// Rendered output and the exit status that goes with it.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn bg(a: &BgArgs, format: Format, cache: &Cache) -> CliResult<Output> {
    let method: Method = a.method.into();
    let (b, r) = match (a.n, a.det, a.divisibility) {
        (Some(n), None, None) => (Polarization::primitive(n)?, None),
        (None, Some(det), Some(r)) => (Polarization::from_det(det, r)?, Some(r)),
        _ => return Err(CliError::Usage("give either --n or both --det and --divisibility".into())),
    };
    let mut key =
        Key::new(if a.star { "bgstar" } else { "bg" }, method.as_str()).with('g', a.genus).with('n', b.det());
    if let Some(r) = r {
        key = key.with('r', r);
    }
    let key = key.with('i', 2 * b.det());
    let p: LaurentPoly = cache.get_or_compute(&key, || {
        if a.star {
            bg_star(a.genus, &b, method)
        } else {
            bg_class(a.genus, &b, method)
        }
    })?;
    let text = match format {
        Format::Text => format!("{p}\n"),
        Format::Json => json_line(&p)?,
        Format::Latex => format!("{}\n", render::laurent_latex(&p)),
        Format::Csv => render::laurent_csv(&p)?,
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct CheckedAr<'a> {
    invariant: &'a ArInvariant,
    interpolated: &'a ArInvariant,
    agrees: bool,
}

pub fn ar(a: &ArArgs, format: Format, cache: &Cache) -> CliResult<Output> {
    let (g, imax) = (a.genus, a.xmax);
    let closed = ar_closed_cached(cache, g, imax)?;
    let interp = if a.check { Some(ar_interpolated_cached(cache, g, imax)?) } else { None };
    let bad: Vec<usize> = match &interp {
        Some(q) => (0..=imax).filter(|&i| closed.codegree(i) != q.codegree(i)).collect(),
        None => Vec::new(),
    };
    let label = |i: usize| format!("Q_{{{g},{i}}}(n)");
    let mut text = String::new();
    match format {
        Format::Text | Format::Latex => {
            for (i, q) in closed.by_codegree().iter().enumerate() {
                let body =
                    if format == Format::Text { render::npoly_text(q) } else { render::npoly_latex(q) };
                text.push_str(&format!("{} = {body}\n", label(i)));
            }
            if interp.is_some() {
                let mark = if format == Format::Latex { "% " } else { "" };
                if bad.is_empty() {
                    text.push_str(&format!("{mark}interpolation agrees at codegrees 0..={imax}\n"));
                } else {
                    text.push_str(&format!("{mark}interpolation differs at codegrees {bad:?}\n"));
                }
            }
        }
        Format::Json => {
            text = match &interp {
                None => json_line(&closed)?,
                Some(q) => {
                    json_line(&CheckedAr { invariant: &closed, interpolated: q, agrees: bad.is_empty() })?
                }
            };
        }
        Format::Csv => {
            let mut rows = Vec::new();
            let mut push = |source: &str, inv: &ArInvariant| {
                for (i, q) in inv.by_codegree().iter().enumerate() {
                    for (k, c) in q.coeffs().iter().enumerate() {
                        let [num, den] = rat_fields(c);
                        rows.push([source.to_string(), i.to_string(), k.to_string(), num, den]);
                    }
                }
            };
            push("closed", &closed);
            if let Some(q) = &interp {
                push("interpolated", q);
            }
            text = csv_table(&["source", "i", "k", "num", "den"], rows)?;
        }
    }
    let code = if bad.is_empty() { 0 } else { EXIT_FAILED };
    Ok(Output { text, code })
}

#[derive(Serialize)]
struct BothGm<'a> {
    direct: &'a Series,
    closed: &'a Series,
    equal: bool,
}

pub fn gm(a: &GmArgs, format: Format, cache: &Cache) -> CliResult<Output> {
    let (m, order) = (a.m, a.order);
    let one = |direct| gm_cached(cache, m, order, direct);
    let series = |s: &Series| match format {
        Format::Latex => render::series_latex(s, "x"),
        _ => render::series_text(s, "x"),
    };
    if a.method != GmMethod::Both {
        let s = one(a.method == GmMethod::Direct)?;
        let text = match format {
            Format::Text | Format::Latex => format!("{} = {}\n", gm_label(m, format), series(&s)),
            Format::Json => json_line(&s)?,
            Format::Csv => render::series_csv(&s, "a")?,
        };
        return Ok(Output::ok(text));
    }
    let (direct, closed) = (one(true)?, one(false)?);
    let label = gm_label(m, format);
    let equal = direct == closed;
    let text = match format {
        Format::Text | Format::Latex => {
            let verdict = if equal { "agree" } else { "differ" };
            let mark = if format == Format::Latex { "% " } else { "" };
            format!(
                "{label} = {} (direct)\n{label} = {} (Eisenstein)\n{mark}direct and Eisenstein forms {verdict} through x^{order}\n",
                series(&direct),
                series(&closed)
            )
        }
        Format::Json => json_line(&BothGm { direct: &direct, closed: &closed, equal })?,
        Format::Csv => csv_table(
            &["a", "direct_num", "direct_den", "closed_num", "closed_den"],
            direct.coeffs().iter().zip(closed.coeffs()).enumerate().map(|(k, (d, c))| {
                let ([dn, dd], [cn, cd]) = (rat_fields(d), rat_fields(c));
                [k.to_string(), dn, dd, cn, cd]
            }),
        )?,
    };
    Ok(Output { text, code: if equal { 0 } else { EXIT_FAILED } })
}

fn gm_label(m: u32, format: Format) -> String {
    if format == Format::Latex {
        format!("G_{{{m}}}(x)")
    } else {
        format!("G_{m}(x)")
    }
}

pub fn series_in_genus(a: &SeriesArgs, format: Format, cache: &Cache) -> CliResult<Output> {
    let method = match a.source {
        SourceArg::Closed => "closed",
        SourceArg::General => "general",
    };
    let key = Key::new("genus-series", method).with('n', a.n).with('i', a.codegree).with('u', a.umax);
    let s: Series = cache.get_or_compute(&key, || genus_gf(a.codegree, a.n, a.umax, a.source.into()))?;
    let text = match format {
        Format::Text => format!("{}\n", render::series_text(&s, "u")),
        Format::Latex => format!("{}\n", render::series_latex(&s, "u")),
        Format::Json => json_line(&s)?,
        Format::Csv => render::series_csv(&s, "g")?,
    };
    Ok(Output::ok(text))
}

pub fn verify(a: &VerifyArgs, format: Format, cache: &Cache, seed: u64) -> CliResult<Output> {
    let ctx = Ctx { cache, seed, max_genus: a.max_genus, max_trunc: a.max_trunc };
    let report = verify::run(a.suite, &ctx);
    let status = |s: Status| match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Info => "INFO",
    };
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            for c in &report.checks {
                t.push_str(&format!("[{}] {}: {} ({})\n", status(c.status), c.id, c.identity, c.detail));
            }
            let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
            t.push_str(&format!("{} checks, {failed} failed\n", report.checks.len()));
            t
        }
        Format::Json => json_line(&report)?,
        Format::Csv => csv_table(
            &["id", "suite", "status", "identity", "detail"],
            report.checks.iter().map(|c| {
                [c.id.as_str(), c.suite.as_str(), status(c.status), c.identity.as_str(), c.detail.as_str()]
            }),
        )?,
        Format::Latex => {
            let esc =
                |s: &str| s.replace('_', "\\_").replace('^', "\\^{}").replace('{', "\\{").replace('}', "\\}");
            let mut t = String::from("\\begin{tabular}{lll}\n");
            for c in &report.checks {
                t.push_str(&format!(
                    "\\texttt{{{}}} & {} & {} \\\\\n",
                    esc(&c.id),
                    esc(&c.identity),
                    status(c.status)
                ));
            }
            t.push_str("\\end{tabular}\n");
            t
        }
    };
    Ok(Output { text, code: if report.passed { 0 } else { EXIT_FAILED } })
}

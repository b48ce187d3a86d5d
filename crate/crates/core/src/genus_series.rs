//! Fixed-codegree coefficients of `AR*_g` as functions of the genus, and
//! their generating series in `u`.
//!
//! For codegrees 0, 1 and 2 a closed binomial formula is available
//! ([`Variant::Binomial`]); [`Variant::General`] evaluates the Hilbert/Eisenstein
//! machinery of [`crate::asymptotics`] instead. The two agree for codegrees
//! 0 and 1. For codegree 2 they differ (the binomial formula omits the
//! `x^2` coefficient of `bar(P_4)` and has the wrong sign on the pair term),
//! so [`arbitrate_codegree_two`] compares both against interpolated values
//! and reports the difference rather than trusting either.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{ar_star_closed, q_poly_interpolated};
use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::{NPoly, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Closed binomial formula in `n` and `g`.
    Binomial,
    /// Codegree `i` of [`ar_star_closed`].
    General,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Binomial => "binomial",
            Variant::General => "general",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Closed rational-function expressions in `u`, expanded.
    Closed,
    /// Coefficients assembled genus by genus from the general machinery.
    General,
}

fn check_codegree(i: u32) -> Result<()> {
    if i > 2 {
        Err(Error::UnsupportedCodegree(i))
    } else {
        Ok(())
    }
}

/// `C(n - c, k)` times `n`.
fn n_binom(c: i64, k: i64) -> NPoly {
    &NPoly::n() * &NPoly::binomial_shifted(c, k)
}

/// The codegree `i` coefficient of `AR*_g` as a polynomial in `n`.
pub fn codegree_npoly(i: u32, g: u32, variant: Variant) -> Result<NPoly> {
    check_codegree(i)?;
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let g = g as i64;
    Ok(match variant {
        Variant::General => ar_star_closed(g as u32, i as usize)?.by_codegree()[i as usize].clone(),
        Variant::Binomial => match i {
            0 => NPoly::binomial_shifted(0, g - 1),
            1 => n_binom(3, g - 4).scale(&rat::int(-2)),
            _ => {
                let mut acc = n_binom(2, g - 3);
                acc = &acc - &n_binom(3, g - 3).scale(&rat::int(6));
                acc = &acc + &n_binom(4, g - 3).scale(&rat::int(3));
                acc = &acc - &n_binom(5, g - 6).scale(&rat::int(8));
                let tail = &NPoly::n_plus(-5) * &n_binom(6, g - 7);
                &acc - &tail.scale(&rat::int(2))
            }
        },
    })
}

/// Evaluates [`codegree_npoly`] at `n`, with `C(m, k) = 0` for `k < 0`.
pub fn codegree_closed(i: u32, g: u32, n: i64, variant: Variant) -> Result<Rat> {
    Ok(codegree_npoly(i, g, variant)?.eval_int(n))
}

/// `(1 + u)^e` for any integer `e`, truncated at `u^order`.
pub fn one_plus_u_pow(e: i64, order: usize) -> Series {
    Series::new(order, (0..=order as i64).map(|k| rat::big(rat::binomial(e, k))).collect())
}

fn u_pow(k: usize, order: usize) -> Series {
    let mut c = vec![Rat::from_integer(0.into()); order + 1];
    if k <= order {
        c[k] = rat::int(1);
    }
    Series::new(order, c)
}

/// Generating series `sum_{g >= 2} <AR*_g>_i u^g` truncated at `u^umax`.
pub fn genus_gf(i: u32, n: i64, umax: usize, source: Source) -> Result<Series> {
    check_codegree(i)?;
    match source {
        Source::General => {
            let mut coeffs = vec![rat::int(0); umax + 1];
            for (g, c) in coeffs.iter_mut().enumerate().skip(2) {
                *c = codegree_closed(i, g as u32, n, Variant::General)?;
            }
            Ok(Series::new(umax, coeffs))
        }
        Source::Closed => {
            let nn = rat::int(n);
            Ok(match i {
                // u (1+u)^n - u
                0 => &(&u_pow(1, umax) * &one_plus_u_pow(n, umax)) - &u_pow(1, umax),
                // -2n u^4 (1+u)^(n-3)
                1 => (&u_pow(4, umax) * &one_plus_u_pow(n - 3, umax)).scale(&(nn * rat::int(-2))),
                // u (1+u)^n [-2n^2 u^6 + n (3u^6 - 10u^5 - 9u^4 - 8u^3 - 2u^2)] / (1+u)^6
                _ => {
                    let n2 = &nn * &nn;
                    let mut bracket = vec![rat::int(0); 7];
                    bracket[2] = &nn * rat::int(-2);
                    bracket[3] = &nn * rat::int(-8);
                    bracket[4] = &nn * rat::int(-9);
                    bracket[5] = &nn * rat::int(-10);
                    bracket[6] = &nn * rat::int(3) - n2 * rat::int(2);
                    let bracket = Series::new(umax, bracket);
                    &(&u_pow(1, umax) * &one_plus_u_pow(n - 6, umax)) * &bracket
                }
            })
        }
    }
}

/// Result of checking both codegree-2 formulas against interpolation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codegree2Arbitration {
    pub genus: u32,
    pub binomial: NPoly,
    pub general: NPoly,
    pub interpolated: NPoly,
    /// `general - binomial`.
    pub discrepancy: NPoly,
    pub binomial_matches: bool,
    pub general_matches: bool,
}

impl Codegree2Arbitration {
    /// Variants that agree with the interpolated polynomial.
    pub fn validated(&self) -> Vec<Variant> {
        let mut v = Vec::new();
        if self.binomial_matches {
            v.push(Variant::Binomial);
        }
        if self.general_matches {
            v.push(Variant::General);
        }
        v
    }
}

pub fn arbitrate_codegree_two(g: u32) -> Result<Codegree2Arbitration> {
    let binomial = codegree_npoly(2, g, Variant::Binomial)?;
    let general = codegree_npoly(2, g, Variant::General)?;
    let interpolated = q_poly_interpolated(g, 2)?;
    Ok(Codegree2Arbitration {
        genus: g,
        discrepancy: &general - &binomial,
        binomial_matches: binomial == interpolated,
        general_matches: general == interpolated,
        binomial,
        general,
        interpolated,
    })
}

/// One row of a regression table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub g: u32,
    pub n: i64,
    pub i: u32,
    pub variant: Variant,
    pub num: String,
    pub den: String,
}

/// Coefficients for every combination of genus, `n` and variant.
pub fn coefficient_table(
    i: u32,
    genera: impl IntoIterator<Item = u32>,
    ns: &[i64],
    variants: &[Variant],
) -> Result<Vec<CoefficientRow>> {
    let mut rows = Vec::new();
    for g in genera {
        for &variant in variants {
            let p = codegree_npoly(i, g, variant)?;
            for &n in ns {
                let v = p.eval_int(n);
                rows.push(CoefficientRow {
                    g,
                    n,
                    i,
                    variant,
                    num: v.numer().to_string(),
                    den: v.denom().to_string(),
                });
            }
        }
    }
    Ok(rows)
}

//! The asymptotic refined invariant `AR*_g(n, x)`.
//!
//! Two independent routes are provided:
//!
//! * [`q_poly_interpolated`] samples the exact codegree coefficients of
//!   `bar(BG*_{g,n})` at large `n` and interpolates a polynomial in `n`;
//! * [`ar_star_closed`] expands the Hilbert polynomial
//!   `C(n - 1 - a_1 - ... - a_s, g - 2 - s)` in the `a_j` and replaces every
//!   monomial `a_1^{m_1} ... a_s^{m_s}` by `G_{m_1} ... G_{m_s}`.
//!
//! For `n > 2 (g - 1) i` the codegree `i` coefficient of `bar(BG*_{g,n})` is
//! already equal to `Q_{g,i}(n)`, which is what makes sampling exact.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::{ArInvariant, NPoly, Series};
use crate::invariants::{bg_class, bg_primitive, composition_power_table, Method, Polarization};
use crate::par;
use crate::quasimodular::{g_m_closed, g_m_direct};

/// How many times the sampling window is moved (doubling `n0`) before
/// giving up.
pub const MAX_STABILIZATION_ATTEMPTS: u32 = 4;

/// One monomial `coeff(n) * a_1^{m_1} ... a_s^{m_s}` of an expanded
/// Hilbert polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiIndexTerm {
    pub s: usize,
    pub exponents: Vec<u32>,
    pub coeff: NPoly,
}

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        Err(Error::GenusTooSmall(g))
    } else {
        Ok(())
    }
}

/// First `n` of the sampling window for `Q_{g,i}`.
pub fn stabilization_threshold(g: u32, i: usize) -> i64 {
    2 * (g as i64 - 1) * i as i64 + g as i64
}

/// `bar(BG*_{g,n})` modulo `x^(imax + 1)`:
/// `n / (g - 1)` times the `t^n` coefficient of `(sum_a bar(P_a) t^a)^(g-1)`.
pub fn bg_bar_star_series(g: u32, n: i64, imax: usize) -> Result<Series> {
    Ok(bar_star_window(g, n, n, imax)?.pop().expect("one sample"))
}

/// `bar(BG*_{g,n})` for every `n` in `lo..=hi`, sharing one convolution.
pub fn bar_star_window(g: u32, lo: i64, hi: i64, imax: usize) -> Result<Vec<Series>> {
    check_genus(g)?;
    if lo <= 0 {
        return Err(Error::NonPositive { what: "n", value: lo });
    }
    let table = composition_power_table(g as usize - 1, hi as usize, imax);
    Ok((lo..=hi).map(|n| table[n as usize].scale(&Rat::new(n.into(), (g as i64 - 1).into()))).collect())
}

/// Interpolates `Q_{g,i}(n)` from exact samples at
/// `n0, ..., n0 + g` with `n0` = [`stabilization_threshold`]. The degree
/// bound is `g - 1` (the degree of `C(n, g - 1)`); the extra point is a
/// verification point. A failed verification doubles `n0`.
pub fn q_poly_interpolated(g: u32, i: usize) -> Result<NPoly> {
    check_genus(g)?;
    let mut n0 = stabilization_threshold(g, i);
    for _ in 0..MAX_STABILIZATION_ATTEMPTS {
        let samples = bar_star_window(g, n0, n0 + g as i64, i)?;
        match interpolate_codegree(g, i, n0, &samples) {
            Err(Error::NotPolynomial { .. }) => n0 *= 2,
            other => return other,
        }
    }
    Err(Error::StabilizationExhausted { genus: g, codegree: i as u32, attempts: MAX_STABILIZATION_ATTEMPTS })
}

/// All `Q_{g,i}` for `i <= imax` from a single convolution table; each
/// codegree uses its own sampling window.
pub fn q_polys_interpolated(g: u32, imax: usize) -> Result<Vec<NPoly>> {
    check_genus(g)?;
    let top = stabilization_threshold(g, imax) + g as i64;
    let samples = bar_star_window(g, 1, top, imax)?;
    let out = par::map_range(0, imax + 1, |i| {
        let n0 = stabilization_threshold(g, i);
        let window = &samples[(n0 - 1) as usize..(n0 + g as i64) as usize];
        match interpolate_codegree(g, i, n0, window) {
            Err(Error::NotPolynomial { .. }) => q_poly_interpolated(g, i),
            other => other,
        }
    });
    out.into_iter().collect()
}

fn interpolate_codegree(g: u32, i: usize, n0: i64, samples: &[Series]) -> Result<NPoly> {
    let points: Vec<(i64, Rat)> = samples
        .iter()
        .enumerate()
        .map(|(k, s)| (n0 + k as i64, s.coeff(i).cloned().unwrap_or_else(Rat::zero)))
        .collect();
    NPoly::interpolate(&points, g as usize - 1)
}

type MultiPoly = BTreeMap<Vec<u32>, NPoly>;

fn multi_mul(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_default();
            *slot = &*slot + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `C(n - 1 - a_1 - ... - a_s, m)` as a polynomial in `a_1..a_s` with
/// coefficients in `n`, keyed by exponent vector. Includes every monomial.
pub fn hilbert_polynomial_in_parts(m: u32, s: usize) -> BTreeMap<Vec<u32>, NPoly> {
    // linear form L = (n - 1) - a_1 - ... - a_s
    let mut linear = MultiPoly::new();
    linear.insert(vec![0; s], NPoly::n_plus(-1));
    for j in 0..s {
        let mut e = vec![0; s];
        e[j] = 1;
        linear.insert(e, NPoly::from_ints(&[-1]));
    }
    let h = NPoly::hilbert(m);
    let mut power = MultiPoly::new();
    power.insert(vec![0; s], NPoly::one());
    let mut out = MultiPoly::new();
    for (k, hk) in h.coeffs().iter().enumerate() {
        if k > 0 {
            power = multi_mul(&power, &linear);
        }
        if hk.is_zero() {
            continue;
        }
        for (e, c) in &power {
            let slot = out.entry(e.clone()).or_default();
            *slot = &*slot + &c.scale(hk);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Monomials of `C(n - 1 - a_1 - ... - a_s, m)` in which every `a_j` occurs;
/// all others are killed by `G_0 = 0`.
pub fn hilbert_expand(m: u32, s: usize) -> Vec<MultiIndexTerm> {
    hilbert_polynomial_in_parts(m, s)
        .into_iter()
        .filter(|(e, _)| e.iter().all(|&x| x >= 1))
        .map(|(exponents, coeff)| MultiIndexTerm { s, exponents, coeff })
        .collect()
}

/// Closed form of `AR*_g` through `x^imax`.
pub fn ar_star_closed(g: u32, imax: usize) -> Result<ArInvariant> {
    ar_star_closed_impl(g, imax, false)
}

/// Same computation without pruning: every `s` in `1..=g-2`, every monomial
/// including those with a zero exponent, and `G_0` taken from its
/// definition. Agrees with [`ar_star_closed`] because `G_0 = 0`.
pub fn ar_star_closed_unpruned(g: u32, imax: usize) -> Result<ArInvariant> {
    ar_star_closed_impl(g, imax, true)
}

fn ar_star_closed_impl(g: u32, imax: usize, unpruned: bool) -> Result<ArInvariant> {
    check_genus(g)?;
    let mut q: Vec<NPoly> = vec![NPoly::zero(); imax + 1];
    q[0] = NPoly::hilbert(g - 1);

    let s_max = if unpruned {
        g as usize - 2
    } else {
        // all exponents >= 1 forces s <= (g-2)/2; a product of s forms
        // vanishing at 0 is O(x^s)
        ((g as usize - 2) / 2).min(imax)
    };
    let max_m = g.saturating_sub(3);
    let forms: Vec<Series> = (0..=max_m)
        .map(|m| if m == 0 && unpruned { g_m_direct(0, imax).series } else { g_m_closed(m, imax).series })
        .collect();
    let prefactor = NPoly::n().scale(&Rat::new(1.into(), (g as i64 - 1).into()));

    for s in 1..=s_max {
        let weight = rat::big(rat::binomial(g as i64 - 1, s as i64));
        let m = g - 2 - s as u32;
        let terms: Vec<(Vec<u32>, NPoly)> = if unpruned {
            hilbert_polynomial_in_parts(m, s).into_iter().collect()
        } else {
            hilbert_expand(m, s).into_iter().map(|t| (t.exponents, t.coeff)).collect()
        };
        for (exponents, coeff) in terms {
            let mut prod = Series::one(imax);
            for &e in &exponents {
                prod = &prod * &forms[e as usize];
            }
            let base = &prefactor * &coeff.scale(&weight);
            for (i, c) in prod.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    q[i] = &q[i] + &base.scale(c);
                }
            }
        }
    }
    Ok(ArInvariant::new(g, q))
}

/// The non-star invariant `AR_g = g (g - 1) / n * AR*_g`.
pub fn ar_from_star(star: &ArInvariant) -> ArInvariant {
    let g = star.genus() as i64;
    let factor = rat::int(g * (g - 1));
    let by_codegree = star
        .by_codegree()
        .iter()
        .map(|p| {
            assert!(p.coeff(0).is_zero(), "AR*_g is divisible by n");
            NPoly::new(p.coeffs().iter().skip(1).map(|c| c * &factor).collect())
        })
        .collect();
    ArInvariant::new(star.genus(), by_codegree)
}

/// Outcome of comparing the low codegrees of a non-primitive class with
/// the primitive class of the same determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StabilizationReport {
    /// `imax` is not below `det / 2`; nothing was compared.
    ThresholdNotMet {
        det: u64,
        imax: usize,
    },
    Agree {
        det: u64,
        imax: usize,
    },
    Disagree {
        det: u64,
        first_index: usize,
        class_value: String,
        primitive_value: String,
    },
}

impl StabilizationReport {
    pub fn agrees(&self) -> bool {
        matches!(self, StabilizationReport::Agree { .. })
    }
}

/// Checks that codegrees `0..=imax` of `BG_{g,B}` are those of
/// `BG_{g,det B}`, which holds once every cover term `k >= 2` sits at
/// codegree at least `det / 2`.
pub fn stabilization_check(g: u32, b: &Polarization, imax: usize) -> Result<StabilizationReport> {
    check_genus(g)?;
    let det = b.det();
    if 2 * imax as u64 >= det {
        return Ok(StabilizationReport::ThresholdNotMet { det, imax });
    }
    let class = bg_class(g, b, Method::Convolution)?;
    let prim = bg_primitive(g, det as i64, Method::Convolution)?;
    for i in 0..=imax {
        let (c, p) = (class.codegree(i as u64)?, prim.codegree(i as u64)?);
        if c != p {
            return Ok(StabilizationReport::Disagree {
                det,
                first_index: i,
                class_value: c.to_string(),
                primitive_value: p.to_string(),
            });
        }
    }
    Ok(StabilizationReport::Agree { det, imax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, int};
    use crate::quasimodular::eisenstein;

    #[test]
    fn finite_n_examples() {
        assert_eq!(bg_bar_star_series(2, 7, 2).unwrap(), Series::from_ints(2, &[7]));
        assert_eq!(bg_bar_star_series(3, 12, 1).unwrap(), Series::from_ints(1, &[66]));
        assert_eq!(bg_bar_star_series(4, 13, 1).unwrap(), Series::from_ints(1, &[286, -26]));
    }

    #[test]
    fn constant_codegree_is_binomial_for_every_n() {
        for g in 2..=6u32 {
            let window = bar_star_window(g, g as i64 - 1, 20, 0).unwrap();
            for (k, s) in window.iter().enumerate() {
                let n = g as i64 - 1 + k as i64;
                assert_eq!(s.coeff(0).unwrap(), &rat::big(rat::binomial(n, g as i64 - 1)));
            }
        }
    }

    #[test]
    fn interpolated_first_values() {
        assert_eq!(q_poly_interpolated(2, 0).unwrap(), NPoly::n());
        assert_eq!(q_poly_interpolated(4, 1).unwrap(), NPoly::from_ints(&[0, -2]));
        let h3 = q_poly_interpolated(4, 0).unwrap();
        assert_eq!(h3, NPoly::new(vec![int(0), frac(1, 3), frac(-1, 2), frac(1, 6)]));
        assert_eq!(h3, NPoly::hilbert(3));
    }

    #[test]
    fn batch_interpolation_matches_single() {
        let batch = q_polys_interpolated(5, 3).unwrap();
        for (i, q) in batch.iter().enumerate() {
            assert_eq!(q, &q_poly_interpolated(5, i).unwrap());
        }
    }

    #[test]
    fn hilbert_examples() {
        let t = hilbert_expand(2, 1);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].exponents, vec![1]);
        assert_eq!(t[0].coeff, NPoly::new(vec![frac(3, 2), int(-1)]));
        assert_eq!(t[1].exponents, vec![2]);
        assert_eq!(t[1].coeff, NPoly::constant(frac(1, 2)));

        let t = hilbert_expand(2, 2);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].exponents, vec![1, 1]);
        assert_eq!(t[0].coeff, NPoly::one());

        assert!(hilbert_expand(0, 1).is_empty());
    }

    #[test]
    fn hilbert_expansion_evaluates_correctly() {
        let full = hilbert_polynomial_in_parts(3, 2);
        for n in 0..12i64 {
            for a1 in 0..4i64 {
                for a2 in 0..4i64 {
                    let mut v = Rat::zero();
                    for (e, c) in &full {
                        let mono =
                            num_traits::pow(int(a1), e[0] as usize) * num_traits::pow(int(a2), e[1] as usize);
                        v += c.eval_int(n) * mono;
                    }
                    assert_eq!(v, rat::big(rat::binomial(n - 1 - a1 - a2, 3)));
                }
            }
        }
    }

    #[test]
    fn closed_genus_four() {
        let ar = ar_star_closed(4, 8).unwrap();
        let e2 = eisenstein(2, 8).unwrap().series;
        assert_eq!(ar.codegree(0).unwrap(), &NPoly::hilbert(3));
        for i in 1..=8 {
            let expect = NPoly::n().scale(&(e2.coeff(i).unwrap() * int(-2)));
            assert_eq!(ar.codegree(i).unwrap(), &expect);
        }
    }

    #[test]
    fn closed_matches_interpolation_small() {
        for g in 2..=5 {
            let ar = ar_star_closed(g, 3).unwrap();
            let q = q_polys_interpolated(g, 3).unwrap();
            assert_eq!(ar.by_codegree(), &q[..], "g = {g}");
        }
    }

    #[test]
    fn zero_exponent_terms_change_nothing() {
        for g in 2..=7 {
            assert_eq!(ar_star_closed(g, 4).unwrap(), ar_star_closed_unpruned(g, 4).unwrap());
        }
    }

    #[test]
    fn closed_matches_finite_n() {
        let (g, imax) = (5, 3);
        let ar = ar_star_closed(g, imax).unwrap();
        let lo = 2 * (g as i64 - 1) * imax as i64 + 1;
        for n in lo..lo + 4 {
            assert_eq!(ar.eval_at(&int(n)), bg_bar_star_series(g, n, imax).unwrap());
        }
    }

    #[test]
    fn non_star_scaling() {
        let ar = ar_from_star(&ar_star_closed(4, 2).unwrap());
        // AR_4 = 12/n * (C(n,3) - 2n E2) = 2 (n-1)(n-2) - 24 E2
        assert_eq!(ar.codegree(0).unwrap(), &NPoly::from_ints(&[4, -6, 2]));
        assert_eq!(ar.codegree(1).unwrap(), &NPoly::from_ints(&[-24]));
    }

    #[test]
    fn stabilization_examples() {
        let b = Polarization::primitive(9).unwrap();
        assert!(stabilization_check(3, &b, 3).unwrap().agrees());
        let b = Polarization::new(2, 5).unwrap();
        assert_eq!(stabilization_check(2, &b, 4).unwrap(), StabilizationReport::Agree { det: 20, imax: 4 });
        assert_eq!(
            stabilization_check(2, &b, 10).unwrap(),
            StabilizationReport::ThresholdNotMet { det: 20, imax: 10 }
        );
        // at codegree det/2 the k = 2 cover term shows up
        let b = Polarization::new(2, 1).unwrap();
        match stabilization_check(2, &Polarization::new(2, 1).unwrap(), 1).unwrap() {
            StabilizationReport::Agree { .. } => {}
            other => panic!("{other:?}"),
        }
        let class = bg_class(2, &b, Method::Oracle).unwrap();
        let prim = bg_primitive(2, 4, Method::Oracle).unwrap();
        assert_ne!(class.codegree(2).unwrap(), prim.codegree(2).unwrap());
    }
}

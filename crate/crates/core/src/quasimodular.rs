//! Eisenstein series with vanishing constant term, the derivation
//! `D = x d/dx`, and the family `G_m(x) = sum_a a^m (bar(P_a)(x) - 1)`
//! computed both from its definition and as an explicit polynomial in
//! Eisenstein derivatives.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::sigma_of;
use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::Series;
use crate::invariants::p_bar_series;

/// A truncated quasi-modular form. The weight is bookkeeping only and is
/// absent for the inhomogeneous `G_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMForm {
    pub series: Series,
    pub weight: Option<u32>,
}

/// `E_{2j}(x) = sum_{a >= 1} sigma_{2j-1}(a) x^a` modulo `x^(order + 1)`.
pub fn eisenstein(two_j: u32, order: usize) -> Result<QMForm> {
    if two_j < 2 || two_j % 2 == 1 {
        return Err(Error::BadEisensteinIndex(two_j));
    }
    let mut coeffs = vec![Rat::zero(); order + 1];
    for (a, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = rat::big(sigma_of(two_j - 1, a as u64));
    }
    Ok(QMForm { series: Series::new(order, coeffs), weight: Some(two_j) })
}

/// `D = x d/dx`: multiplies the `x^a` coefficient by `a`.
pub fn d_op(s: &Series) -> Series {
    Series::new(s.order(), s.coeffs().iter().enumerate().map(|(a, c)| c * rat::int(a as i64)).collect())
}

pub fn d_pow(s: &Series, k: u32) -> Series {
    (0..k).fold(s.clone(), |acc, _| d_op(&acc))
}

/// `G_m` from its definition. Terms with `a > 2 * order` are `O(x^(order+1))`,
/// so summing through `a = 2 * order` is exact.
pub fn g_m_direct(m: u32, order: usize) -> QMForm {
    g_m_direct_bounded(m, order, 2 * order as u64)
}

/// Same sum with an explicit upper bound on `a`.
pub fn g_m_direct_bounded(m: u32, order: usize, bound: u64) -> QMForm {
    let one = Series::one(order);
    let mut acc = Series::zero(order);
    for a in 1..=bound {
        let term = &p_bar_series(a, order) - &one;
        if term.is_zero() {
            continue;
        }
        let w = rat::big(BigInt::from(a).pow(m));
        acc.add_assign_ref(&term.scale(&w));
    }
    QMForm { series: acc, weight: None }
}

/// `G_m = 2 sum_{1 <= j, 2j <= m+1} C(m+1, 2j) D^(m+1-2j) E_{2j}`.
pub fn g_m_closed(m: u32, order: usize) -> QMForm {
    let mut acc = Series::zero(order);
    for j in 1..=(m + 1) / 2 {
        let e = eisenstein(2 * j, order).expect("even index").series;
        let c = rat::big(rat::binomial(m as i64 + 1, 2 * j as i64) * 2);
        acc.add_assign_ref(&d_pow(&e, m + 1 - 2 * j).scale(&c));
    }
    QMForm { series: acc, weight: None }
}

/// The Eisenstein-derivative decomposition used by [`g_m_closed`], as
/// `(coefficient, derivative power, Eisenstein index)` triples.
pub fn g_m_decomposition(m: u32) -> Vec<(BigInt, u32, u32)> {
    (1..=(m + 1) / 2).map(|j| (rat::binomial(m as i64 + 1, 2 * j as i64) * 2, m + 1 - 2 * j, 2 * j)).collect()
}

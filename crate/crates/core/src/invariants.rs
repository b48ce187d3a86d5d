//! Refined invariants of abelian surfaces: the building blocks `P_a`, the
//! refined vertex multiplicity, primitive-class invariants by composition
//! enumeration or convolution, the multiple cover formula, and the
//! fixed-linear-system normalization.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, divisors_of};
use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::{Exp, LaurentPoly, Series};
use crate::par;

/// Polarization class up to equivalence: divisibility `r` and the
/// determinant `m` of the primitive class, so `det B = r^2 m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polarization {
    r: u64,
    m: u64,
}

impl Polarization {
    pub fn new(r: i64, m: i64) -> Result<Self> {
        if r <= 0 {
            return Err(Error::NonPositive { what: "divisibility", value: r });
        }
        if m <= 0 {
            return Err(Error::NonPositive { what: "primitive determinant", value: m });
        }
        Ok(Self { r: r as u64, m: m as u64 })
    }

    /// The primitive class `diag(1, n)`.
    pub fn primitive(n: i64) -> Result<Self> {
        Self::new(1, n)
    }

    /// From the determinant and the divisibility; `r^2` must divide `det`.
    pub fn from_det(det: i64, r: i64) -> Result<Self> {
        if det <= 0 {
            return Err(Error::NonPositiveDeterminant(det));
        }
        if r <= 0 {
            return Err(Error::NonPositive { what: "divisibility", value: r });
        }
        let (d, r) = (det as u64, r as u64);
        if d % (r * r) != 0 {
            return Err(Error::IncompatibleDivisibility { det: d, r });
        }
        Ok(Self { r, m: d / (r * r) })
    }

    /// From an explicit integer matrix with positive determinant.
    pub fn from_matrix(b: [[i64; 2]; 2]) -> Result<Self> {
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det <= 0 {
            return Err(Error::NonPositiveDeterminant(det));
        }
        let r = b.iter().flatten().fold(0u64, |acc, &v| arith::gcd(acc, v.unsigned_abs()));
        Self::from_det(det, r as i64)
    }

    pub fn divisibility(&self) -> u64 {
        self.r
    }

    pub fn primitive_det(&self) -> u64 {
        self.m
    }

    pub fn det(&self) -> u64 {
        self.r * self.r * self.m
    }

    pub fn self_intersection(&self) -> u64 {
        2 * self.det()
    }

    pub fn is_primitive(&self) -> bool {
        self.r == 1
    }
}

/// Genus, gcd of the edge weights, and Mikhalkin multiplicities of the
/// `2g - 2` trivalent vertices of a tropical curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexData {
    genus: u32,
    gcd: u64,
    mults: Vec<u64>,
}

impl VertexData {
    pub fn new(genus: u32, gcd: u64, mults: Vec<u64>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        if gcd == 0 {
            return Err(Error::NonPositive { what: "gcd", value: 0 });
        }
        let expected = 2 * genus as usize - 2;
        if mults.len() != expected {
            return Err(Error::VertexCount { genus, expected, got: mults.len() });
        }
        if mults.contains(&0) {
            return Err(Error::NonPositive { what: "vertex multiplicity", value: 0 });
        }
        Ok(Self { genus, gcd, mults })
    }
}

/// How primitive-class invariants are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Explicit enumeration of compositions, multiplied out in `q`.
    Oracle,
    /// Power of the generating function in `t`, computed in bar coordinates.
    Convolution,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Convolution => "convolution",
        }
    }
}

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        Err(Error::GenusTooSmall(g))
    } else {
        Ok(())
    }
}

/// `P_a(q) = sum_{k | a} (a/k) (q^k - 2 + q^-k)`.
pub fn p_laurent(a: i64) -> Result<LaurentPoly> {
    if a <= 0 {
        return Err(Error::NonPositive { what: "a", value: a });
    }
    Ok(p_laurent_of(a as u64))
}

fn p_laurent_of(a: u64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for k in divisors_of(a) {
        let w = (a / k) as i64;
        let k = k as i64;
        p = &p + &LaurentPoly::from_int_terms([(k, w), (0, -2 * w), (-k, w)]);
    }
    p
}

/// `bar(P_a)(x) = sum_{k | a} (a/k) x^(a-k) (1 - 2x^k + x^(2k))`, truncated
/// at `x^order`. Built directly from the divisor sum, not from `p_laurent`.
pub fn p_bar_series(a: u64, order: usize) -> Series {
    let mut coeffs = vec![Rat::zero(); order + 1];
    for k in divisors_of(a) {
        let w = rat::int((a / k) as i64);
        let base = (a - k) as usize;
        for (shift, sign) in [(0usize, 1i64), (k as usize, -2), (2 * k as usize, 1)] {
            if let Some(c) = coeffs.get_mut(base + shift) {
                *c += &w * rat::int(sign);
            }
        }
    }
    Series::new(order, coeffs)
}

/// `M = sum_{k | delta} phi(k) k^(2g-2) prod_V (q^(m_V/2k) - q^(-m_V/2k))`.
///
/// The half-integral intermediates are kept exactly; a result that still has
/// fractional exponents is returned as [`Error::NonIntegralExponents`].
pub fn refined_multiplicity(v: &VertexData) -> Result<LaurentPoly> {
    let mut total = LaurentPoly::zero();
    for k in divisors_of(v.gcd) {
        let mut prod = LaurentPoly::one();
        for &mv in &v.mults {
            let e = Exp::new(mv as i64, 2 * k as i64);
            let factor = &LaurentPoly::monomial(Rat::one(), e) - &LaurentPoly::monomial(Rat::one(), -e);
            prod = &prod * &factor;
        }
        let weight = BigInt::from(arith::phi_of(k)) * BigInt::from(k).pow(2 * v.genus - 2);
        total = &total + &prod.scale(&rat::big(weight));
    }
    if !total.has_integral_exponents() {
        return Err(Error::NonIntegralExponents(Box::new(total)));
    }
    Ok(total)
}

/// Iterator over compositions of `total` into `parts` positive integers, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u64>>,
    total: u64,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        let current = if parts == 0 {
            (total == 0).then(Vec::new)
        } else if total < parts as u64 {
            None
        } else {
            let mut v = vec![1; parts];
            v[parts - 1] = total - parts as u64 + 1;
            Some(v)
        };
        Self { current, total }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let v = self.current.as_mut().unwrap();
        let p = v.len();
        // Lexicographic successor: bump the rightmost non-final position
        // whose suffix still has room to give up one unit.
        let mut suffix = 0;
        let mut bumped = false;
        for j in (0..p.saturating_sub(1)).rev() {
            suffix += v[j + 1];
            if suffix > (p - 1 - j) as u64 {
                v[j] += 1;
                for slot in &mut v[j + 1..p - 1] {
                    *slot = 1;
                }
                let used: u64 = v[..p - 1].iter().sum();
                v[p - 1] = self.total - used;
                bumped = true;
                break;
            }
        }
        if !bumped {
            self.current = None;
        }
        Some(out)
    }
}

/// `BG_{g,n}(q) = g sum_{a_1 + ... + a_{g-1} = n} P_{a_1} ... P_{a_{g-1}}`.
///
/// Returns the zero polynomial when `n < g - 1` (no compositions).
pub fn bg_primitive(g: u32, n: i64, method: Method) -> Result<LaurentPoly> {
    check_genus(g)?;
    if n <= 0 {
        return Err(Error::NonPositive { what: "n", value: n });
    }
    let n = n as u64;
    let parts = g as usize - 1;
    if n < parts as u64 {
        return Ok(LaurentPoly::zero());
    }
    let sum = match method {
        Method::Oracle => composition_sum_oracle(n, parts),
        Method::Convolution => {
            let order = 2 * n as usize;
            let table = composition_power_table(parts, n as usize, order);
            LaurentPoly::from_bar(&table[n as usize], n as i64)
        }
    };
    Ok(sum.scale(&rat::int(g as i64)))
}

fn composition_sum_oracle(n: u64, parts: usize) -> LaurentPoly {
    let ps: Vec<LaurentPoly> =
        (0..=n).map(|a| if a == 0 { LaurentPoly::zero() } else { p_laurent_of(a) }).collect();
    if parts == 1 {
        return ps[n as usize].clone();
    }
    // split on the first part; partial sums are combined in index order
    let max_first = n - parts as u64 + 1;
    let partials = par::map_range(1, max_first as usize + 1, |a1| {
        let mut acc = LaurentPoly::zero();
        for rest in Compositions::new(n - a1 as u64, parts - 1) {
            let mut prod = ps[a1].clone();
            for a in rest {
                prod = &prod * &ps[a as usize];
            }
            acc = &acc + &prod;
        }
        acc
    });
    partials.iter().fold(LaurentPoly::zero(), |acc, p| &acc + p)
}

/// Coefficients of `t^0 .. t^tmax` in `(sum_{a >= 1} bar(P_a) t^a)^parts`,
/// each a series truncated at `x^order`.
///
/// Entry `s` is `sum over compositions of s into `parts` parts` of the
/// product of the `bar(P_a)`, so one table serves every `n <= tmax`.
pub fn composition_power_table(parts: usize, tmax: usize, order: usize) -> Vec<Series> {
    let mut base = vec![Series::zero(order); tmax + 1];
    for (a, slot) in base.iter_mut().enumerate().skip(1) {
        *slot = p_bar_series(a as u64, order);
    }
    let mut acc: Option<Vec<Series>> = None;
    let mut e = parts;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => t_mul(&a, &base, order),
            });
        }
        e >>= 1;
        if e > 0 {
            base = t_mul(&base, &base, order);
        }
    }
    acc.unwrap_or_else(|| {
        let mut one = vec![Series::zero(order); tmax + 1];
        one[0] = Series::one(order);
        one
    })
}

fn t_mul(a: &[Series], b: &[Series], order: usize) -> Vec<Series> {
    let tmax = a.len() - 1;
    let a_lo = a.iter().position(|s| !s.is_zero()).unwrap_or(tmax + 1);
    let b_lo = b.iter().position(|s| !s.is_zero()).unwrap_or(tmax + 1);
    par::map_range(0, tmax + 1, |s| {
        let mut acc = Series::zero(order);
        if s < a_lo + b_lo {
            return acc;
        }
        for u in a_lo..=s - b_lo {
            acc.add_assign_ref(&(&a[u] * &b[s - u]));
        }
        acc
    })
}

/// `bar(BG_{g,n})` modulo `x^(order + 1)` by truncated convolution.
pub fn bg_primitive_bar(g: u32, n: i64, order: usize) -> Result<Series> {
    check_genus(g)?;
    if n <= 0 {
        return Err(Error::NonPositive { what: "n", value: n });
    }
    let table = composition_power_table(g as usize - 1, n as usize, order);
    Ok(table[n as usize].scale(&rat::int(g as i64)))
}

/// Multiple cover formula:
/// `BG_{g,B}(q) = sum_{k | r} k^(2g-1) BG_{g, D/k^2}(q^k)`.
pub fn bg_class(g: u32, b: &Polarization, method: Method) -> Result<LaurentPoly> {
    check_genus(g)?;
    let d = b.det();
    let mut total = LaurentPoly::zero();
    for k in divisors_of(b.r) {
        let prim = bg_primitive(g, (d / (k * k)) as i64, method)?;
        let w = BigInt::from(k).pow(2 * g - 1);
        total = &total + &prim.substitute_power(k).scale(&rat::big(w));
    }
    Ok(total)
}

/// Fixed-linear-system invariant `BG*_{g,B} = det(B) / (g (g-1)) BG_{g,B}`.
pub fn bg_star(g: u32, b: &Polarization, method: Method) -> Result<LaurentPoly> {
    let bg = bg_class(g, b, method)?;
    Ok(bg.scale(&star_factor(g, b.det())))
}

pub(crate) fn star_factor(g: u32, det: u64) -> Rat {
    Rat::new(BigInt::from(det), BigInt::from(g as u64 * (g as u64 - 1)))
}

/// Order of vanishing at `q = 1`, read off as the multiplicity of the root
/// `x = 1` of the bar transform. `None` for the zero polynomial.
pub fn vanishing_order_at_one(p: &LaurentPoly) -> Option<usize> {
    let bar = p.bar_transform().ok()?;
    let d = bar.degree()?.to_integer() as usize;
    let mut c: Vec<Rat> = (0..=d as i64).map(|e| bar.coeff_int(e)).collect();
    let mut order = 0;
    loop {
        let at_one: Rat = c.iter().sum();
        if !at_one.is_zero() || c.len() == 1 {
            return Some(order);
        }
        // synthetic division by (x - 1), highest degree first
        let mut quot = vec![Rat::zero(); c.len() - 1];
        let mut carry = Rat::zero();
        for j in (1..c.len()).rev() {
            carry += &c[j];
            quot[j - 1] = carry.clone();
        }
        c = quot;
        order += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms.iter().copied())
    }

    #[test]
    fn compositions_enumerate_all() {
        let all: Vec<_> = Compositions::new(4, 2).collect();
        assert_eq!(all, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(Compositions::new(5, 3).count(), 6);
        assert_eq!(Compositions::new(14, 4).count(), 286);
        assert_eq!(Compositions::new(2, 3).count(), 0);
        assert_eq!(Compositions::new(3, 1).collect::<Vec<_>>(), vec![vec![3]]);
        for c in Compositions::new(9, 4) {
            assert_eq!(c.iter().sum::<u64>(), 9);
            assert!(c.iter().all(|&a| a >= 1));
        }
        let seen: std::collections::BTreeSet<_> = Compositions::new(10, 4).collect();
        assert_eq!(seen.len(), 84);
    }

    #[test]
    fn p_a_examples() {
        assert_eq!(p_laurent(1).unwrap(), lp(&[(1, 1), (0, -2), (-1, 1)]));
        assert_eq!(p_laurent(2).unwrap(), lp(&[(2, 1), (1, 2), (0, -6), (-1, 2), (-2, 1)]));
        let bar3 = p_laurent(3).unwrap().bar_transform().unwrap();
        assert_eq!(bar3, lp(&[(0, 1), (2, 3), (3, -8), (4, 3), (6, 1)]));
        assert!(p_laurent(0).is_err());
    }

    #[test]
    fn p_a_structure() {
        for a in 1..=40 {
            let p = p_laurent(a).unwrap();
            assert!(p.is_symmetric());
            assert!(p.has_integral_coefficients());
            assert_eq!(p.degree(), Some(Exp::from_integer(a)));
            assert_eq!(p.eval(&int(1)).unwrap(), int(0));
            let order = 2 * a as usize;
            assert_eq!(p.bar_series(order).unwrap(), p_bar_series(a as u64, order));
        }
    }

    #[test]
    fn bar_p_minus_one_vanishes_below_half() {
        // bar(P_a) - 1 = O(x^(a/2)), the tail bound used by every truncation
        for a in 1..=60u64 {
            let s = &p_bar_series(a, 2 * a as usize) - &Series::one(2 * a as usize);
            let v = s.valuation().unwrap();
            assert!(2 * v >= a as usize, "a = {a}, valuation {v}");
        }
    }

    #[test]
    fn multiplicity_examples() {
        let v = VertexData::new(2, 1, vec![1, 1]).unwrap();
        assert_eq!(refined_multiplicity(&v).unwrap(), lp(&[(1, 1), (0, -2), (-1, 1)]));

        let v = VertexData::new(2, 2, vec![2, 2]).unwrap();
        assert_eq!(refined_multiplicity(&v).unwrap(), lp(&[(2, 1), (1, 4), (0, -10), (-1, 4), (-2, 1)]));

        let v = VertexData::new(2, 1, vec![1, 2]).unwrap();
        match refined_multiplicity(&v) {
            Err(Error::NonIntegralExponents(p)) => {
                let h = |n| Exp::new(n, 2);
                assert_eq!(p.coeff(h(3)), int(1));
                assert_eq!(p.coeff(h(1)), int(-1));
                assert_eq!(p.coeff(h(-1)), int(-1));
                assert_eq!(p.coeff(h(-3)), int(1));
                assert_eq!(p.len(), 4);
            }
            other => panic!("expected non-integral exponents, got {other:?}"),
        }
    }

    #[test]
    fn multiplicity_with_trivial_gcd_is_the_plain_product() {
        let v = VertexData::new(3, 1, vec![2, 4, 2, 6]).unwrap();
        let mut expect = LaurentPoly::one();
        for m in [2i64, 4, 2, 6] {
            expect = &expect * &lp(&[(m / 2, 1), (-m / 2, -1)]);
        }
        assert_eq!(refined_multiplicity(&v).unwrap(), expect);
    }

    #[test]
    fn vertex_data_validation() {
        assert!(matches!(VertexData::new(3, 1, vec![1, 1]), Err(Error::VertexCount { .. })));
        assert!(VertexData::new(1, 1, vec![]).is_err());
        assert!(VertexData::new(2, 0, vec![1, 1]).is_err());
    }

    #[test]
    fn bg_small_examples() {
        for n in 1..=8 {
            let expect = p_laurent(n).unwrap().scale(&int(2));
            for m in [Method::Oracle, Method::Convolution] {
                assert_eq!(bg_primitive(2, n, m).unwrap(), expect);
            }
        }
        let p1 = p_laurent(1).unwrap();
        let p2 = p_laurent(2).unwrap();
        assert_eq!(
            bg_primitive(3, 2, Method::Oracle).unwrap(),
            lp(&[(2, 3), (1, -12), (0, 18), (-1, -12), (-2, 3)])
        );
        assert_eq!(bg_primitive(3, 3, Method::Convolution).unwrap(), (&p1 * &p2).scale(&int(6)));
        assert!(bg_primitive(4, 2, Method::Oracle).unwrap().is_zero());
        assert!(bg_primitive(4, 2, Method::Convolution).unwrap().is_zero());
        assert_eq!(bg_primitive(1, 3, Method::Oracle), Err(Error::GenusTooSmall(1)));
    }

    #[test]
    fn methods_agree_small_range() {
        for g in 2..=4 {
            for n in (g as i64 - 1)..=9 {
                let a = bg_primitive(g, n, Method::Oracle).unwrap();
                let b = bg_primitive(g, n, Method::Convolution).unwrap();
                assert_eq!(a, b, "g = {g}, n = {n}");
                assert!(a.is_symmetric());
                assert!(a.has_integral_coefficients());
                assert_eq!(a.degree(), Some(Exp::from_integer(n)));
                assert!(vanishing_order_at_one(&a).unwrap() >= 2 * (g as usize - 1));
            }
        }
    }

    #[test]
    fn multiple_cover_example() {
        let b = Polarization::from_det(4, 2).unwrap();
        let expect = &p_laurent(4).unwrap().scale(&int(2))
            + &p_laurent(1).unwrap().substitute_power(2).scale(&int(16));
        assert_eq!(bg_class(2, &b, Method::Oracle).unwrap(), expect);
        assert_eq!(bg_class(2, &b, Method::Convolution).unwrap(), expect);
        assert_eq!(expect.degree(), Some(Exp::from_integer(4)));
    }

    #[test]
    fn primitive_class_reduces_to_bg_primitive() {
        let b = Polarization::primitive(6).unwrap();
        assert_eq!(
            bg_class(3, &b, Method::Convolution).unwrap(),
            bg_primitive(3, 6, Method::Convolution).unwrap()
        );
    }

    #[test]
    fn star_examples() {
        let p1 = p_laurent(1).unwrap();
        let b = Polarization::primitive(2).unwrap();
        assert_eq!(bg_star(3, &b, Method::Oracle).unwrap(), &p1 * &p1);
        let b = Polarization::primitive(1).unwrap();
        assert_eq!(bg_star(2, &b, Method::Oracle).unwrap(), p1);
        for n in 1..=12i64 {
            let b = Polarization::primitive(n).unwrap();
            let bar = bg_star(2, &b, Method::Convolution).unwrap().bar_transform().unwrap();
            let expect = p_laurent(n).unwrap().bar_transform().unwrap().scale(&int(n));
            assert_eq!(bar, expect);
        }
    }

    #[test]
    fn polarization_constructors() {
        let b = Polarization::from_matrix([[2, 0], [0, 10]]).unwrap();
        assert_eq!((b.divisibility(), b.primitive_det(), b.det()), (2, 5, 20));
        assert_eq!(b.self_intersection(), 40);
        let b = Polarization::from_matrix([[1, 2], [3, 7]]).unwrap();
        assert_eq!((b.divisibility(), b.det()), (1, 1));
        assert!(Polarization::from_matrix([[0, 1], [1, 0]]).is_err());
        assert!(Polarization::from_det(6, 2).is_err());
        assert!(Polarization::new(0, 3).is_err());
    }

    #[test]
    fn vanishing_order() {
        let p1 = p_laurent(1).unwrap();
        assert_eq!(vanishing_order_at_one(&p1), Some(2));
        assert_eq!(vanishing_order_at_one(&p1.pow(3)), Some(6));
        assert_eq!(vanishing_order_at_one(&LaurentPoly::one()), Some(0));
        assert_eq!(vanishing_order_at_one(&LaurentPoly::zero()), None);
    }
}

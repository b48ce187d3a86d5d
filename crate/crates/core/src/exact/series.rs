use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{self, Rat};
use crate::error::{Error, Result};
use crate::par;

/// Products of at least this order are convolved coefficient-by-coefficient
/// on the thread pool.
const PAR_MUL_ORDER: usize = 48;

/// Power series in `x` known exactly through `x^order`.
///
/// Coefficients past the order are unknown, not zero: combining two series
/// truncates to the smaller order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesWire", into = "SeriesWire")]
pub struct Series {
    coeffs: Vec<Rat>,
}

impl Series {
    /// Takes the first `order + 1` entries of `coeffs`, padding with zeros.
    pub fn new(order: usize, mut coeffs: Vec<Rat>) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        Self { coeffs }
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        Self::new(order, coeffs.iter().map(|&c| rat::int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![Rat::one()])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, or `None` beyond the known order.
    pub fn coeff(&self, i: usize) -> Option<&Rat> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn add_assign_ref(&mut self, rhs: &Series) {
        self.coeffs.truncate(rhs.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }

    /// `self^e` by repeated squaring. `s^0` is `1` at the same order.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

fn conv_coeff(a: &[Rat], b: &[Rat], k: usize) -> Rat {
    let mut acc = Rat::zero();
    for j in 0..=k {
        if a[j].is_zero() || b[k - j].is_zero() {
            continue;
        }
        acc += &a[j] * &b[k - j];
    }
    acc
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;

    fn mul(self, rhs: &'a Series) -> Series {
        let order = self.order().min(rhs.order());
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let coeffs = if order >= PAR_MUL_ORDER {
            par::map_range(0, order + 1, |k| conv_coeff(a, b, k))
        } else {
            (0..=order).map(|k| conv_coeff(a, b, k)).collect()
        };
        Series { coeffs }
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;

    fn add(self, rhs: &'a Series) -> Series {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;

    fn sub(self, rhs: &'a Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if i == 0 || !a.is_one() {
                f.write_str(&rat::fmt_rat(&a))?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct SeriesWire {
    order: usize,
    coeffs: Vec<[String; 2]>,
}

impl From<Series> for SeriesWire {
    fn from(s: Series) -> Self {
        SeriesWire { order: s.order(), coeffs: s.coeffs.iter().map(rat::to_pair).collect() }
    }
}

impl TryFrom<SeriesWire> for Series {
    type Error = Error;

    fn try_from(w: SeriesWire) -> Result<Self> {
        if w.coeffs.len() != w.order + 1 {
            return Err(Error::Decode(format!(
                "series of order {} needs {} coefficients, got {}",
                w.order,
                w.order + 1,
                w.coeffs.len()
            )));
        }
        let coeffs = w.coeffs.iter().map(|[n, d]| rat::from_pair(n, d)).collect::<Result<Vec<_>>>()?;
        Ok(Series { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_of_bar_p1() {
        let s = Series::from_ints(4, &[1, -2, 1]);
        assert_eq!(&s * &s, Series::from_ints(4, &[1, -4, 6, -4, 1]));
        assert_eq!(s.pow(2), Series::from_ints(4, &[1, -4, 6, -4, 1]));
    }

    #[test]
    fn trivial_powers() {
        let s = Series::from_ints(5, &[3, 1, 4, 1, 5]);
        assert_eq!(s.pow(0), Series::one(5));
        assert_eq!(s.pow(1), s);
    }

    #[test]
    fn mixing_orders_truncates() {
        let a = Series::from_ints(5, &[1, 1, 1, 1, 1, 1]);
        let b = Series::from_ints(2, &[1, 1, 1]);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a - &b).order(), 2);
        assert_eq!((&a * &b).coeff(3), None);
    }

    #[test]
    fn display() {
        let s = Series::from_ints(3, &[0, 1, -3]);
        assert_eq!(s.to_string(), "x - 3x^2 + O(x^4)");
        assert_eq!(Series::zero(1).to_string(), "0 + O(x^2)");
    }

    #[test]
    fn wire_rejects_bad_length() {
        let bad = r#"{"order":2,"coeffs":[["1","1"]]}"#;
        assert!(serde_json::from_str::<Series>(bad).is_err());
        let ok = r#"{"order":1,"coeffs":[["1","1"],["-1","3"]]}"#;
        let s: Series = serde_json::from_str(ok).unwrap();
        assert_eq!(s.coeff(1), Some(&rat::frac(-1, 3)));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = Series> {
        prop::collection::vec((-20i64..=20, 1i64..=4), order + 1)
            .prop_map(move |v| Series::new(order, v.into_iter().map(|(n, d)| rat::frac(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn pow_matches_repeated_mul(s in arb_series(7), e in 0u64..=8) {
            let mut naive = Series::one(7);
            for _ in 0..e {
                naive = &naive * &s;
            }
            prop_assert_eq!(s.pow(e), naive);
        }

        #[test]
        fn large_order_mul_is_commutative(a in arb_series(60), b in arb_series(60)) {
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn json_round_trip(s in arb_series(5)) {
            let text = serde_json::to_string(&s).unwrap();
            prop_assert_eq!(serde_json::from_str::<Series>(&text).unwrap(), s);
        }
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{self, Rat};
use crate::error::{Error, Result};

/// Polynomial in the formal symbol `n` with rational coefficients.
/// `coeffs[k]` is the coefficient of `n^k`; trailing zeros are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<[String; 2]>", into = "Vec<[String; 2]>")]
pub struct NPoly {
    coeffs: Vec<Rat>,
}

impl NPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat::int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The symbol `n` itself.
    pub fn n() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `n + c`.
    pub fn n_plus(c: i64) -> Self {
        Self::from_ints(&[c, 1])
    }

    /// Hilbert polynomial `C(n, m) = n (n - 1) ... (n - m + 1) / m!`.
    pub fn hilbert(m: u32) -> Self {
        Self::binomial_shifted(0, m as i64)
    }

    /// `C(n - c, k)` as a polynomial in `n`; zero when `k < 0`.
    pub fn binomial_shifted(c: i64, k: i64) -> Self {
        if k < 0 {
            return Self::zero();
        }
        let mut acc = Self::one();
        for j in 0..k {
            acc = &acc * &Self::n_plus(-c - j);
        }
        acc.scale(&Rat::new(1.into(), factorial(k as u64)))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, n: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_int(&self, n: i64) -> Rat {
        self.eval(&rat::int(n))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Newton interpolation through the first `degree_bound + 1` points,
    /// checked exactly against every remaining point.
    pub fn interpolate(points: &[(i64, Rat)], degree_bound: usize) -> Result<Self> {
        let needed = degree_bound + 2;
        if points.len() < needed {
            return Err(Error::TooFewPoints { needed, degree_bound, got: points.len() });
        }
        let mut seen = std::collections::BTreeSet::new();
        for (n, _) in points {
            if !seen.insert(*n) {
                return Err(Error::DuplicateAbscissa(*n));
            }
        }
        let (fit, check) = points.split_at(degree_bound + 1);
        let xs: Vec<Rat> = fit.iter().map(|(n, _)| rat::int(*n)).collect();
        // divided differences, in place
        let mut dd: Vec<Rat> = fit.iter().map(|(_, v)| v.clone()).collect();
        for level in 1..dd.len() {
            for j in (level..dd.len()).rev() {
                dd[j] = (&dd[j] - &dd[j - 1]) / (&xs[j] - &xs[j - level]);
            }
        }
        // expand the Newton form by Horner's rule
        let mut poly = Self::zero();
        for j in (0..dd.len()).rev() {
            poly = &poly * &Self::new(vec![-xs[j].clone(), Rat::one()]);
            poly = &poly + &Self::constant(dd[j].clone());
        }
        for (n, v) in check {
            if &poly.eval_int(*n) != v {
                return Err(Error::NotPolynomial { degree_bound, at: *n });
            }
        }
        Ok(poly)
    }
}

fn factorial(k: u64) -> num_bigint::BigInt {
    (1..=k).fold(num_bigint::BigInt::one(), |acc, j| acc * j)
}

impl<'a> Add<&'a NPoly> for &'a NPoly {
    type Output = NPoly;

    fn add(self, rhs: &'a NPoly) -> NPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        NPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a NPoly> for &'a NPoly {
    type Output = NPoly;

    fn sub(self, rhs: &'a NPoly) -> NPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        NPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a NPoly> for &'a NPoly {
    type Output = NPoly;

    fn mul(self, rhs: &'a NPoly) -> NPoly {
        if self.is_zero() || rhs.is_zero() {
            return NPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        NPoly::new(out)
    }
}

impl Neg for &NPoly {
    type Output = NPoly;

    fn neg(self) -> NPoly {
        NPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for NPoly {
    /// Descending powers: `1/6 n^3 - 1/2 n^2 + 1/3 n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
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
            if k == 0 || !a.is_one() {
                f.write_str(&rat::fmt_rat(&a))?;
                if k > 0 {
                    f.write_str(" ")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{k}")?,
            }
        }
        Ok(())
    }
}

impl From<NPoly> for Vec<[String; 2]> {
    fn from(p: NPoly) -> Self {
        p.coeffs.iter().map(rat::to_pair).collect()
    }
}

impl TryFrom<Vec<[String; 2]>> for NPoly {
    type Error = Error;

    fn try_from(v: Vec<[String; 2]>) -> Result<Self> {
        let coeffs = v.iter().map(|[n, d]| rat::from_pair(n, d)).collect::<Result<Vec<_>>>()?;
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::Decode("polynomial has a zero leading coefficient".into()));
        }
        Ok(NPoly { coeffs })
    }
}

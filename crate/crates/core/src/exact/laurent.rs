use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{self, Rat};
use super::series::Series;
use crate::error::{Error, Result};

/// Exponent of `q`. Integral for every invariant; half-integral values only
/// show up inside refined multiplicity products.
pub type Exp = Rational64;

/// Finite Laurent polynomial in `q` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "wire::LaurentWire", into = "wire::LaurentWire")]
pub struct LaurentPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Exp::zero())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(Rat::one(), Exp::one())
    }

    pub fn monomial(c: Rat, e: Exp) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs with integer
    /// exponents; repeated exponents are summed.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(Exp::from_integer(e), rat::int(c));
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<Exp> {
        self.terms.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<Exp> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, e: Exp) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff_int(&self, e: i64) -> Rat {
        self.coeff(Exp::from_integer(e))
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_integer())
    }

    pub fn has_integral_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `coeff(e) == coeff(-e)` for every exponent.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-*e) == Some(c))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// Substitutes `q -> q^k`.
    pub fn substitute_power(&self, k: u64) -> Self {
        let k = Exp::from_integer(k as i64);
        Self { terms: self.terms.iter().map(|(e, c)| (*e * k, c.clone())).collect() }
    }

    /// Codegree `i` coefficient: the coefficient of `q^(deg - i)`.
    pub fn codegree(&self, i: u64) -> Result<Rat> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.coeff(d - Exp::from_integer(i as i64)))
    }

    /// `x^d P(1/x)` with `d = deg P`: the coefficient of `x^i` is the
    /// codegree `i` coefficient. The result only has non-negative exponents
    /// and is returned as a polynomial in the same representation.
    pub fn bar_transform(&self) -> Result<LaurentPoly> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if !self.has_integral_exponents() {
            return Err(Error::FractionalExponent);
        }
        Ok(Self { terms: self.terms.iter().map(|(e, c)| (d - *e, c.clone())).collect() })
    }

    /// Bar transform as a truncated series in `x` of the given order.
    pub fn bar_series(&self, order: usize) -> Result<Series> {
        self.bar_transform()?.to_series(order)
    }

    /// Reads a polynomial with non-negative integral exponents as a series
    /// truncated at `x^order`.
    pub fn to_series(&self, order: usize) -> Result<Series> {
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (e, c) in &self.terms {
            if !e.is_integer() || e.is_negative() {
                return Err(Error::FractionalExponent);
            }
            let i = e.to_integer() as usize;
            if i <= order {
                coeffs[i] = c.clone();
            }
        }
        Ok(Series::new(order, coeffs))
    }

    /// Inverse of the bar transform for a Laurent polynomial of known
    /// degree `d`: the `x^i` coefficient of `bar` becomes that of `q^(d - i)`.
    /// The series must be known through `x^(2d)` or further.
    pub fn from_bar(bar: &Series, d: i64) -> Self {
        let mut p = Self::zero();
        for (i, c) in bar.coeffs().iter().enumerate() {
            p.add_term(Exp::from_integer(d - i as i64), c.clone());
        }
        p
    }

    /// Exact evaluation at a non-zero rational point.
    pub fn eval(&self, q0: &Rat) -> Result<Rat> {
        if q0.is_zero() {
            return Err(Error::ZeroEvaluationPoint);
        }
        if !self.has_integral_exponents() {
            return Err(Error::FractionalExponent);
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            acc += c * num_traits::pow::Pow::pow(q0, e.to_integer() as i32);
        }
        Ok(acc)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `2q - 4 + 2q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() {
                format!("q^{}", e.to_integer())
            } else {
                format!("q^({}/{})", e.numer(), e.denom())
            };
            if var.is_empty() || !a.is_one() {
                f.write_str(&rat::fmt_rat(&a))?;
            }
            f.write_str(&var)?;
        }
        Ok(())
    }
}

pub(crate) mod wire {
    use serde::{Deserialize, Serialize};

    use super::*;

    /// Integral exponents are plain JSON integers; fractional ones are
    /// written as `"p/q"` strings.
    #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum ExpWire {
        Int(i64),
        Frac(String),
    }

    impl From<Exp> for ExpWire {
        fn from(e: Exp) -> Self {
            if e.is_integer() {
                ExpWire::Int(e.to_integer())
            } else {
                ExpWire::Frac(format!("{}/{}", e.numer(), e.denom()))
            }
        }
    }

    impl TryFrom<ExpWire> for Exp {
        type Error = Error;

        fn try_from(w: ExpWire) -> Result<Exp> {
            match w {
                ExpWire::Int(v) => Ok(Exp::from_integer(v)),
                ExpWire::Frac(s) => {
                    let (n, d) =
                        s.split_once('/').ok_or_else(|| Error::Decode(format!("bad exponent {s:?}")))?;
                    let n: i64 = n.parse().map_err(|_| Error::Decode(s.clone()))?;
                    let d: i64 = d.parse().map_err(|_| Error::Decode(s.clone()))?;
                    if d <= 0 {
                        return Err(Error::Decode(s));
                    }
                    Ok(Exp::new(n, d))
                }
            }
        }
    }

    #[derive(Clone, Debug, Serialize, Deserialize)]
    pub struct TermWire {
        pub exp: ExpWire,
        pub num: String,
        pub den: String,
    }

    #[derive(Clone, Debug, Serialize, Deserialize)]
    pub struct LaurentWire {
        pub degree: Option<ExpWire>,
        pub terms: Vec<TermWire>,
        pub symmetric: bool,
    }

    impl From<LaurentPoly> for LaurentWire {
        fn from(p: LaurentPoly) -> Self {
            LaurentWire {
                degree: p.degree().map(ExpWire::from),
                symmetric: p.is_symmetric(),
                terms: p
                    .terms
                    .iter()
                    .map(|(e, c)| {
                        let [num, den] = rat::to_pair(c);
                        TermWire { exp: (*e).into(), num, den }
                    })
                    .collect(),
            }
        }
    }

    impl TryFrom<LaurentWire> for LaurentPoly {
        type Error = Error;

        fn try_from(w: LaurentWire) -> Result<Self> {
            let mut p = LaurentPoly::zero();
            let mut last: Option<Exp> = None;
            for t in w.terms {
                let e = Exp::try_from(t.exp)?;
                if last.is_some_and(|l| l >= e) {
                    return Err(Error::Decode("terms must be strictly ascending".into()));
                }
                last = Some(e);
                let c = rat::from_pair(&t.num, &t.den)?;
                if c.is_zero() {
                    return Err(Error::Decode("zero coefficient stored".into()));
                }
                p.terms.insert(e, c);
            }
            let degree = w.degree.map(Exp::try_from).transpose()?;
            if degree != p.degree() {
                return Err(Error::Decode("degree does not match terms".into()));
            }
            if w.symmetric != p.is_symmetric() {
                return Err(Error::Decode("symmetric flag does not match terms".into()));
            }
            Ok(p)
        }
    }
}

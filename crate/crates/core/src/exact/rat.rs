use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient. Always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(v: BigInt) -> Rat {
    Rat::from_integer(v)
}

/// Binomial coefficient `C(n, k)` with an arbitrary integer upper index,
/// `n (n - 1) ... (n - k + 1) / k!`, and `C(n, k) = 0` for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
        acc /= BigInt::from(j + 1);
    }
    acc
}

pub(crate) fn to_pair(r: &Rat) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub(crate) fn from_pair(num: &str, den: &str) -> Result<Rat> {
    let n: BigInt = num.parse().map_err(|_| Error::Decode(format!("bad numerator {num:?}")))?;
    let d: BigInt = den.parse().map_err(|_| Error::Decode(format!("bad denominator {den:?}")))?;
    if d <= BigInt::zero() {
        return Err(Error::Decode(format!("denominator must be positive, got {den}")));
    }
    let r = Rat::new(n.clone(), d.clone());
    // canonical encodings are already reduced
    if r.numer() != &n || r.denom() != &d {
        return Err(Error::Decode(format!("{num}/{den} is not in lowest terms")));
    }
    Ok(r)
}

/// Plain-text rendering used by the `Display` impls: `3`, `-1/6`.
pub(crate) fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

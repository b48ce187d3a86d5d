//! Exact arithmetic: rationals, Laurent polynomials in `q`, truncated power
//! series in `x`, and polynomials in the formal symbol `n`.

mod ar;
mod laurent;
mod npoly;
pub mod rat;
mod series;

pub use ar::ArInvariant;
pub use laurent::{Exp, LaurentPoly};
pub use npoly::NPoly;
pub use rat::Rat;
pub use series::Series;

//! Exact computation of tropical refined invariants of abelian surfaces,
//! their stabilized codegree coefficients, and the quasi-modular forms that
//! describe them.

pub mod arith;
pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod genus_series;
pub mod invariants;
mod par;
pub mod quasimodular;

pub use error::{Error, Result};
pub use par::is_parallel;

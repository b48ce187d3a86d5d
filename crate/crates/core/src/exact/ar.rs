use serde::{Deserialize, Serialize};

use super::npoly::NPoly;
use super::rat::Rat;
use super::series::Series;
use crate::error::{Error, Result};

/// Asymptotic refined invariant `AR*_g(n, x) = sum_i Q_{g,i}(n) x^i`,
/// stored codegree-major up to `x^imax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArWire", into = "ArWire")]
pub struct ArInvariant {
    genus: u32,
    by_codegree: Vec<NPoly>,
}

impl ArInvariant {
    pub fn new(genus: u32, by_codegree: Vec<NPoly>) -> Self {
        assert!(!by_codegree.is_empty(), "need at least the codegree 0 term");
        Self { genus, by_codegree }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn imax(&self) -> usize {
        self.by_codegree.len() - 1
    }

    pub fn by_codegree(&self) -> &[NPoly] {
        &self.by_codegree
    }

    /// `Q_{g,i}`.
    pub fn codegree(&self, i: usize) -> Option<&NPoly> {
        self.by_codegree.get(i)
    }

    /// Specializes `n` and returns the truncated series in `x`.
    pub fn eval_at(&self, n: &Rat) -> Series {
        Series::new(self.imax(), self.by_codegree.iter().map(|q| q.eval(n)).collect())
    }

    /// Coefficient of `n^k` as a series in `x`. Apart from the binomial
    /// contribution at `x^0` these are quasi-modular.
    pub fn n_coefficient(&self, k: usize) -> Series {
        Series::new(self.imax(), self.by_codegree.iter().map(|q| q.coeff(k)).collect())
    }

    pub fn max_n_degree(&self) -> Option<usize> {
        self.by_codegree.iter().filter_map(NPoly::degree).max()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CodegreeWire {
    i: usize,
    npoly: NPoly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ArWire {
    genus: u32,
    imax: usize,
    codegree: Vec<CodegreeWire>,
}

impl From<ArInvariant> for ArWire {
    fn from(a: ArInvariant) -> Self {
        ArWire {
            genus: a.genus,
            imax: a.imax(),
            codegree: a
                .by_codegree
                .into_iter()
                .enumerate()
                .map(|(i, npoly)| CodegreeWire { i, npoly })
                .collect(),
        }
    }
}

impl TryFrom<ArWire> for ArInvariant {
    type Error = Error;

    fn try_from(w: ArWire) -> Result<Self> {
        if w.codegree.len() != w.imax + 1 {
            return Err(Error::Decode("codegree list does not match imax".into()));
        }
        let mut by_codegree = Vec::with_capacity(w.codegree.len());
        for (k, c) in w.codegree.into_iter().enumerate() {
            if c.i != k {
                return Err(Error::Decode(format!("expected codegree {k}, found {}", c.i)));
            }
            by_codegree.push(c.npoly);
        }
        Ok(ArInvariant { genus: w.genus, by_codegree })
    }
}

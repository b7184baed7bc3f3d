//! Monomials, monomial ideals, sparse polynomials and Artinian quotients.

pub mod ideal;
pub mod monomial;
pub mod poly;
pub mod quotient;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME};

pub use ideal::{power_product, MonomialIdeal};
pub use monomial::{Monomial, MAX_VARS};
pub use poly::Polynomial;
pub use quotient::ArtinQuotient;

/// The ambient polynomial ring `GF(p)[x_1..x_d]` and the seed from which all
/// random choices derive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub field: PrimeField,
    pub vars: Vec<String>,
    pub seed: u64,
}

impl RingSpec {
    pub fn new(p: u32, vars: Vec<String>, seed: u64) -> Result<Self> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::BadDimension {
                got: vars.len(),
                max: MAX_VARS,
            });
        }
        Ok(Self {
            field: PrimeField::new(p)?,
            vars,
            seed,
        })
    }

    /// `d` variables named `x, y, z, ...` (or `x1..xd` beyond three).
    pub fn standard(d: usize, seed: u64) -> Result<Self> {
        let vars = if d <= 3 {
            ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=d).map(|i| format!("x{i}")).collect()
        };
        Self::new(DEFAULT_PRIME, vars, seed)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vars.len()
    }
}

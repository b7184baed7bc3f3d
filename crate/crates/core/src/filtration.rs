//! The bifiltration `F_(n1,n2) = I1^n1 I2^n2` and a precomputed table of its
//! Artinian quotients.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{try_par_map, Parallelism};
use crate::ring::{ArtinQuotient, MonomialIdeal};

/// Two m-primary monomial ideals in the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    i1: MonomialIdeal,
    i2: MonomialIdeal,
}

impl Filtration {
    pub fn new(i1: MonomialIdeal, i2: MonomialIdeal) -> Result<Self> {
        if i1.nvars() != i2.nvars() {
            return Err(Error::ArityMismatch {
                got: i2.nvars(),
                expected: i1.nvars(),
            });
        }
        i1.check_m_primary()?;
        i2.check_m_primary()?;
        Ok(Self { i1, i2 })
    }

    #[inline]
    pub fn i1(&self) -> &MonomialIdeal {
        &self.i1
    }

    #[inline]
    pub fn i2(&self) -> &MonomialIdeal {
        &self.i2
    }

    /// The ideal in slot 1 or 2.
    pub fn slot(&self, s: usize) -> &MonomialIdeal {
        if s == 1 {
            &self.i1
        } else {
            &self.i2
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.i1.nvars()
    }

    /// `I1^max(n1,0) I2^max(n2,0)`.
    pub fn ideal(&self, n1: i64, n2: i64) -> MonomialIdeal {
        crate::ring::power_product(&self.i1, n1, &self.i2, n2)
    }

    pub fn quotient(&self, n1: i64, n2: i64) -> ArtinQuotient {
        ArtinQuotient::new(&self.ideal(n1, n2)).expect("products of m-primary ideals are m-primary")
    }
}

/// Quotients `R/F_(a,b)` for `0 <= a <= n1max`, `0 <= b <= n2max`, built once
/// and shared read-only. Lookups clip negative indices to zero; indices past
/// the table are computed on demand without being stored.
#[derive(Debug)]
pub struct QuotientCache {
    filt: Filtration,
    n1max: i64,
    n2max: i64,
    table: HashMap<(i64, i64), Arc<ArtinQuotient>>,
}

impl QuotientCache {
    pub fn build(filt: &Filtration, n1max: i64, n2max: i64, mode: Parallelism) -> Result<Self> {
        let n1max = n1max.max(0);
        let n2max = n2max.max(0);
        let p1 = powers(filt.i1(), n1max);
        let p2 = powers(filt.i2(), n2max);
        let keys: Vec<(i64, i64)> = (0..=n1max)
            .flat_map(|a| (0..=n2max).map(move |b| (a, b)))
            .collect();
        let quotients = try_par_map(mode, &keys, |&(a, b)| {
            ArtinQuotient::new(&p1[a as usize].mul(&p2[b as usize])).map(Arc::new)
        })?;
        Ok(Self {
            filt: filt.clone(),
            n1max,
            n2max,
            table: keys.into_iter().zip(quotients).collect(),
        })
    }

    #[inline]
    pub fn filtration(&self) -> &Filtration {
        &self.filt
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.n1max, self.n2max)
    }

    pub fn get(&self, n1: i64, n2: i64) -> Arc<ArtinQuotient> {
        let key = (n1.max(0), n2.max(0));
        match self.table.get(&key) {
            Some(q) => Arc::clone(q),
            None => Arc::new(self.filt.quotient(key.0, key.1)),
        }
    }

    /// `ℓ(R/F_(n1,n2))`.
    pub fn length(&self, n1: i64, n2: i64) -> usize {
        self.get(n1, n2).len()
    }
}

/// `[I^0, I^1, ..., I^n]`.
pub fn powers(ideal: &MonomialIdeal, n: i64) -> Vec<MonomialIdeal> {
    let mut out = vec![MonomialIdeal::unit(ideal.nvars())];
    for k in 1..=n.max(0) as usize {
        let next = out[k - 1].mul(ideal);
        out.push(next);
    }
    out
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BigradedComplex;
use crate::error::Result;
use crate::exec::{try_par_map, Parallelism};
use crate::field::PrimeField;
use crate::filtration::QuotientCache;
use crate::sequence::{SequenceSpec, Window};

/// `h_i(n1,n2)` over a window of bidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub k1: usize,
    pub k2: usize,
    pub window: Window,
    /// `(n1, n2) -> [h_0, ..., h_{k1+k2}]`.
    #[serde(with = "crate::util::bidegree_map")]
    pub rows: BTreeMap<(i64, i64), Vec<usize>>,
}

impl HomologyTable {
    /// Builds and reduces one complex per bidegree of the window.
    pub fn scan(
        field: &PrimeField,
        cache: &QuotientCache,
        seq: &SequenceSpec,
        window: Window,
        mode: Parallelism,
    ) -> Result<Self> {
        Self::scan_points(field, cache, seq, window, &window.points(), mode)
    }

    /// As [`HomologyTable::scan`] but only at the given bidegrees.
    pub fn scan_points(
        field: &PrimeField,
        cache: &QuotientCache,
        seq: &SequenceSpec,
        window: Window,
        points: &[(i64, i64)],
        mode: Parallelism,
    ) -> Result<Self> {
        let hs = try_par_map(mode, points, |&(n1, n2)| {
            BigradedComplex::build(field, cache, seq, n1, n2).map(|c| c.homology_dims(field))
        })?;
        Ok(Self {
            k1: seq.k1,
            k2: seq.k2,
            window,
            rows: points.iter().copied().zip(hs).collect(),
        })
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.k1 + self.k2
    }

    /// `h_i(n1,n2)`; zero outside `0..=k1+k2`, `None` outside the window.
    pub fn h(&self, i: i64, n1: i64, n2: i64) -> Option<usize> {
        let row = self.rows.get(&(n1, n2))?;
        if i < 0 || i as usize >= row.len() {
            return Some(0);
        }
        Some(row[i as usize])
    }

    /// `Σ_i (-1)^i h_i(n1,n2)`.
    pub fn euler(&self, n1: i64, n2: i64) -> Option<i64> {
        let row = self.rows.get(&(n1, n2))?;
        Some(
            row.iter()
                .enumerate()
                .map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) })
                .sum(),
        )
    }

    /// `Σ_{j >= i} (-1)^j h_j(n1,n2)`.
    pub fn signed_tail(&self, from: usize, n1: i64, n2: i64) -> Option<i64> {
        let row = self.rows.get(&(n1, n2))?;
        Some(
            row.iter()
                .enumerate()
                .skip(from)
                .map(|(j, &v)| if j % 2 == 0 { v as i64 } else { -(v as i64) })
                .sum(),
        )
    }

    /// JSON-lines rows `{"i","n1","n2","h"}`, ordered by bidegree then `i`.
    pub fn json_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&(n1, n2), row) in &self.rows {
            for (i, &h) in row.iter().enumerate() {
                out.push(serde_json::json!({"i": i, "n1": n1, "n2": n2, "h": h}).to_string());
            }
        }
        out
    }
}

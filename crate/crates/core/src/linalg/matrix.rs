use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::field::PrimeField;

/// A sparse row vector: `(column, value)` pairs, sorted by column, no zeros.
pub type SparseRow = Vec<(u32, u32)>;

/// Sparse matrix over GF(p), stored by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfpMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl GfpMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self {
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Builds from rows that may contain repeats or zeros; entries are
    /// combined and validated against `ncols`.
    pub fn from_rows(field: &PrimeField, ncols: usize, rows: Vec<SparseRow>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| normalize_row(field, ncols, r))
            .collect();
        Self { ncols, rows }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            ncols: n,
            rows: (0..n).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    pub fn from_dense(field: &PrimeField, dense: &[Vec<u32>], ncols: usize) -> Self {
        let rows = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v % field.order() != 0)
                    .map(|(j, &v)| (j as u32, v % field.order()))
                    .collect()
            })
            .collect();
        Self { ncols, rows }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[(u32, u32)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.ncols];
                for &(j, v) in r {
                    d[j as usize] = v;
                }
                d
            })
            .collect()
    }

    /// Row-vector product `self * other`: row `s` of the result is
    /// `sum_k self[s][k] * other[k]`.
    pub fn mul(&self, field: &PrimeField, other: &GfpMatrix) -> GfpMatrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch in product");
        let mut acc = vec![0u32; other.ncols];
        let mut touched: Vec<u32> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                for &(k, a) in r {
                    for &(j, b) in other.row(k as usize) {
                        let slot = &mut acc[j as usize];
                        if *slot == 0 {
                            touched.push(j);
                        }
                        *slot = field.add(*slot, field.mul(a, b));
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let out: SparseRow = touched
                    .iter()
                    .filter_map(|&j| {
                        let v = std::mem::take(&mut acc[j as usize]);
                        (v != 0).then_some((j, v))
                    })
                    .collect();
                touched.clear();
                out
            })
            .collect();
        GfpMatrix {
            ncols: other.ncols,
            rows,
        }
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        let mut ech = Echelon::new(*field, self.ncols);
        for r in &self.rows {
            ech.insert(r);
        }
        ech.rank()
    }
}

fn normalize_row(field: &PrimeField, ncols: usize, mut r: SparseRow) -> SparseRow {
    r.sort_unstable_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(r.len());
    for (j, v) in r {
        assert!((j as usize) < ncols, "column {j} out of bounds ({ncols})");
        let v = v % field.order();
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 = field.add(last.1, v),
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// `(rank, nullity)` with `rank + nullity = ncols`.
pub fn rank_profile(m: &GfpMatrix, field: &PrimeField) -> (usize, usize) {
    let r = m.rank(field);
    (r, m.ncols() - r)
}

const NO_PIVOT: u32 = u32::MAX;

/// Incremental row echelon form over GF(p).
///
/// Stored rows are monic at their leading column and have distinct leading
/// columns, but are not reduced against later pivots. A dense scratch
/// accumulator plus a min-heap of touched columns keeps reduction cost
/// proportional to the fill-in rather than to `ncols`.
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseRow>,
    acc: Vec<u32>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            pivot_row: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
            acc: vec![0; ncols],
            queued: vec![false; ncols],
            heap: BinaryHeap::new(),
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: &[(u32, u32)]) -> bool {
        if self.is_full() {
            return false;
        }
        match self.reduce(row) {
            Some(r) => {
                self.pivot_row[r[0].0 as usize] = self.rows.len() as u32;
                self.rows.push(r);
                true
            }
            None => false,
        }
    }

    /// Whether `row` already lies in the span.
    pub fn contains(&mut self, row: &[(u32, u32)]) -> bool {
        self.is_full() || self.reduce(row).is_none()
    }

    fn reduce(&mut self, row: &[(u32, u32)]) -> Option<SparseRow> {
        let f = self.field;
        for &(j, v) in row {
            let v = v % f.order();
            if v == 0 {
                continue;
            }
            let j = j as usize;
            self.acc[j] = f.add(self.acc[j], v);
            if !self.queued[j] {
                self.queued[j] = true;
                self.heap.push(Reverse(j as u32));
            }
        }
        while let Some(Reverse(c)) = self.heap.pop() {
            let c = c as usize;
            self.queued[c] = false;
            let a = self.acc[c];
            if a == 0 {
                continue;
            }
            let pr = self.pivot_row[c];
            if pr == NO_PIVOT {
                // New leading column: collect what is left, scaled to be monic.
                let inv = f.inv(a);
                self.acc[c] = 0;
                let mut out: SparseRow = vec![(c as u32, 1)];
                while let Some(Reverse(j)) = self.heap.pop() {
                    let ju = j as usize;
                    self.queued[ju] = false;
                    let v = std::mem::take(&mut self.acc[ju]);
                    if v != 0 {
                        out.push((j, f.mul(v, inv)));
                    }
                }
                return Some(out);
            }
            let factor = f.neg(a);
            let prow = &self.rows[pr as usize];
            self.acc[c] = 0;
            for &(j, v) in &prow[1..] {
                let ju = j as usize;
                self.acc[ju] = f.add(self.acc[ju], f.mul(factor, v));
                if !self.queued[ju] {
                    self.queued[ju] = true;
                    self.heap.push(Reverse(j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn zero_and_identity() {
        assert_eq!(rank_profile(&GfpMatrix::zero(3, 4), &f()), (0, 4));
        assert_eq!(rank_profile(&GfpMatrix::identity(5), &f()), (5, 0));
    }

    #[test]
    fn dependent_rows() {
        let field = f();
        let m = GfpMatrix::from_dense(
            &field,
            &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]],
            3,
        );
        assert_eq!(rank_profile(&m, &field), (2, 1));
    }

    #[test]
    fn product_and_from_rows() {
        let field = f();
        let a = GfpMatrix::from_rows(&field, 2, vec![vec![(1, 1), (0, 2), (1, 3)]]);
        assert_eq!(a.row(0), &[(0, 2), (1, 4)]);
        let b = GfpMatrix::from_dense(&field, &[vec![1, 0, 1], vec![0, 1, 32002]], 3);
        let c = a.mul(&field, &b);
        assert_eq!(c.to_dense(), vec![vec![2, 4, field.sub(2, 4)]]);
    }

    #[test]
    fn contains_does_not_insert() {
        let mut e = Echelon::new(f(), 3);
        assert!(e.insert(&[(0, 1), (1, 1)]));
        assert!(e.contains(&[(0, 5), (1, 5)]));
        assert!(!e.contains(&[(2, 1)]));
        assert_eq!(e.rank(), 1);
        assert!(e.insert(&[(1, 1)]));
        assert!(e.contains(&[(0, 1)]));
    }
}

//! The bigraded complex `C(x_1, x_2, F, (n1,n2))`, its homology, and the
//! fiber-cone Koszul complexes.
//!
//! Summands are indexed by subsets `A` of the ordered elements
//! `x_11..x_1k1, x_21..x_2k2`; the summand for `A` is
//! `R/F_(n1 - |A∩X1|, n2 - |A∩X2|)`. The component of the differential that
//! removes `t` from `A` is multiplication by `x_t` with sign
//! `(-1)^#{s ∈ A : s > t}`. This is the iterated mapping cone
//! `d = [d_target, x; 0, -d_source]` with the cone over the last element
//! taken outermost.

pub mod identify;
pub mod koszul;
pub mod table;
pub mod vanishing;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::filtration::QuotientCache;
use crate::linalg::{GfpMatrix, SparseRow};
use crate::ring::{ArtinQuotient, Polynomial};
use crate::sequence::SequenceSpec;

pub use table::HomologyTable;

#[derive(Clone, Debug)]
pub struct Summand {
    /// Bit `t` set when element `t` belongs to the subset.
    pub mask: u32,
    /// Number of elements of `I2` in the subset.
    pub j: usize,
    /// Filtration index of the module.
    pub index: (i64, i64),
    pub module: Arc<ArtinQuotient>,
    /// Position of the first basis vector inside the degree's direct sum.
    pub offset: usize,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.module.len()
    }
}

/// Row `r` of `differentials[i - 1]` is the image under `d_i` of the `r`-th
/// basis vector of `C_i`, in coordinates of `C_{i-1}`.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub k1: usize,
    pub k2: usize,
    pub n1: i64,
    pub n2: i64,
    pub degrees: Vec<Vec<Summand>>,
    pub differentials: Vec<GfpMatrix>,
}

/// Subsets of `0..k` with `i` elements, ordered by the number of elements
/// `>= k1` and then lexicographically.
pub fn ordered_subsets(k1: usize, k2: usize, i: usize) -> Vec<u32> {
    let k = k1 + k2;
    let x2: u32 = ((1u32 << k) - 1) & !((1u32 << k1) - 1);
    let mut masks: Vec<u32> = (0u32..(1 << k)).filter(|m| m.count_ones() as usize == i).collect();
    masks.sort_by_key(|&m| {
        let elems: Vec<u32> = (0..k as u32).filter(|t| m >> t & 1 == 1).collect();
        ((m & x2).count_ones(), elems)
    });
    masks
}

/// `(-1)^#{s ∈ mask : s > t}` as a field element.
pub fn cone_sign(field: &PrimeField, mask: u32, t: usize) -> u32 {
    let above = (mask >> (t + 1)).count_ones();
    if above % 2 == 0 {
        1
    } else {
        field.neg(1)
    }
}

impl BigradedComplex {
    pub fn build(
        field: &PrimeField,
        cache: &QuotientCache,
        seq: &SequenceSpec,
        n1: i64,
        n2: i64,
    ) -> Result<Self> {
        Self::build_from(field, cache, seq.k1, seq.k2, &seq.elements, n1, n2)
    }

    pub fn build_from(
        field: &PrimeField,
        cache: &QuotientCache,
        k1: usize,
        k2: usize,
        elements: &[Polynomial],
        n1: i64,
        n2: i64,
    ) -> Result<Self> {
        let k = k1 + k2;
        if k == 0 {
            return Err(Error::Precondition("the complex needs k1 + k2 >= 1".into()));
        }
        assert_eq!(elements.len(), k);
        let x1mask: u32 = (1u32 << k1) - 1;
        let mut degrees = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut offset = 0;
            let mut summands = Vec::new();
            for mask in ordered_subsets(k1, k2, i) {
                let i1 = (mask & x1mask).count_ones() as i64;
                let j = (mask & !x1mask).count_ones() as usize;
                let index = (n1 - i1, n2 - j as i64);
                let module = cache.get(index.0, index.1);
                let s = Summand {
                    mask,
                    j,
                    index,
                    module,
                    offset,
                };
                offset += s.dim();
                summands.push(s);
            }
            degrees.push(summands);
        }
        let mut differentials = Vec::with_capacity(k);
        for i in 1..=k {
            differentials.push(differential(field, &degrees[i], &degrees[i - 1], elements));
        }
        let c = Self {
            k1,
            k2,
            n1,
            n2,
            degrees,
            differentials,
        };
        c.check_square_zero(field)?;
        Ok(c)
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.k1 + self.k2
    }

    pub fn dim(&self, i: usize) -> usize {
        self.degrees
            .get(i)
            .map_or(0, |s| s.iter().map(Summand::dim).sum())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.length()).map(|i| self.dim(i)).collect()
    }

    /// `d_i`, for `1 <= i <= k1 + k2`.
    pub fn d(&self, i: usize) -> &GfpMatrix {
        &self.differentials[i - 1]
    }

    pub fn check_square_zero(&self, field: &PrimeField) -> Result<()> {
        for i in 2..=self.length() {
            if !self.d(i).mul(field, self.d(i - 1)).is_zero() {
                return Err(Error::SignError(i - 1, i));
            }
        }
        Ok(())
    }

    /// `h_0, ..., h_{k1+k2}`.
    pub fn homology_dims(&self, field: &PrimeField) -> Vec<usize> {
        let k = self.length();
        let mut ranks = vec![0usize; k + 2];
        for i in 1..=k {
            ranks[i] = self.d(i).rank(field);
        }
        (0..=k)
            .map(|i| self.dim(i) - ranks[i] - ranks[i + 1])
            .collect()
    }

    pub fn summand(&self, i: usize, mask: u32) -> Option<&Summand> {
        self.degrees.get(i)?.iter().find(|s| s.mask == mask)
    }

    /// The component of `d_i` from summand `src` to summand `tgt`, as rows
    /// indexed by the basis of `src` with columns local to `tgt`.
    pub fn block(&self, i: usize, src: u32, tgt: u32) -> Vec<SparseRow> {
        let s = self.summand(i, src).expect("source summand");
        let t = self.summand(i - 1, tgt).expect("target summand");
        let lo = t.offset as u32;
        let hi = (t.offset + t.dim()) as u32;
        (s.offset..s.offset + s.dim())
            .map(|r| {
                self.d(i)
                    .row(r)
                    .iter()
                    .filter(|(c, _)| *c >= lo && *c < hi)
                    .map(|&(c, v)| (c - lo, v))
                    .collect()
            })
            .collect()
    }
}

fn differential(
    field: &PrimeField,
    source: &[Summand],
    target: &[Summand],
    elements: &[Polynomial],
) -> GfpMatrix {
    let ncols: usize = target.iter().map(Summand::dim).sum();
    let max_mask = source
        .iter()
        .chain(target)
        .map(|s| s.mask)
        .max()
        .unwrap_or(0) as usize;
    let mut where_tgt = vec![usize::MAX; max_mask + 1];
    for (pos, s) in target.iter().enumerate() {
        where_tgt[s.mask as usize] = pos;
    }
    let mut rows = Vec::new();
    for s in source {
        let removable: Vec<usize> = (0..32).filter(|t| s.mask >> t & 1 == 1).collect();
        for u in s.module.basis() {
            let mut row: SparseRow = Vec::new();
            for &t in &removable {
                let tgt = &target[where_tgt[(s.mask & !(1 << t)) as usize]];
                let sign = cone_sign(field, s.mask, t);
                row.extend(
                    tgt.module
                        .reduce_product(u, &elements[t])
                        .into_iter()
                        .map(|(c, v)| (c + tgt.offset as u32, field.mul(v, sign))),
                );
            }
            rows.push(row);
        }
    }
    GfpMatrix::from_rows(field, ncols, rows)
}

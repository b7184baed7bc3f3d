//! Koszul complexes on graded pieces of `G(I2)` and the fiber cone, the short
//! exact sequences tying them to the bigraded complex, and grade probes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{cone_sign, ordered_subsets, BigradedComplex};
use crate::error::{Error, Result};
use crate::exec::{try_par_map, Parallelism};
use crate::field::PrimeField;
use crate::filtration::QuotientCache;
use crate::linalg::{GfpMatrix, SparseRow};
use crate::ring::{ArtinQuotient, Polynomial};
use crate::verdict::Verdict;

/// Which graded ring the pieces come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradedRing {
    /// `G(I2)`, pieces `I2^m / I2^(m+1)`.
    Associated,
    /// `F_I1(I2)`, pieces `I2^m / I1 I2^m`.
    Fiber,
}

/// What sits in negative degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativeDegrees {
    /// The honest graded ring: nothing.
    Zero,
    /// The kernel of `R/I1 I2^m -> R/I2^m` with the power clipped at zero,
    /// i.e. `R/I1`. Only meaningful for the fiber cone.
    Kernel,
}

/// One graded piece `J/Q` with `J ⊇ Q` monomial, as a subset of the standard
/// monomials of `R/Q`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub quotient: Arc<ArtinQuotient>,
    /// Index in `quotient` to index in the piece, `u32::MAX` when outside `J`.
    local: Vec<u32>,
    dim: usize,
}

const OUTSIDE: u32 = u32::MAX;

impl Piece {
    pub fn new(cache: &QuotientCache, ring: GradedRing, neg: NegativeDegrees, m: i64) -> Self {
        let empty = m < 0 && (neg == NegativeDegrees::Zero || ring == GradedRing::Associated);
        let quotient = match ring {
            GradedRing::Associated => cache.get(0, m + 1),
            GradedRing::Fiber => cache.get(1, m),
        };
        let j = cache.filtration().i2().pow(m.max(0));
        let mut dim = 0;
        let local = quotient
            .basis()
            .iter()
            .map(|b| {
                if !empty && j.contains(b) {
                    dim += 1;
                    dim as u32 - 1
                } else {
                    OUTSIDE
                }
            })
            .collect();
        Self {
            quotient,
            local,
            dim,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Positions (in `quotient`) of the piece's basis, in order.
    pub fn basis_positions(&self) -> Vec<usize> {
        self.local
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != OUTSIDE)
            .map(|(q, _)| q)
            .collect()
    }

    /// Piece index of the quotient's basis monomial `q`.
    #[inline]
    pub fn local(&self, q: usize) -> Option<u32> {
        let l = self.local[q];
        (l != OUTSIDE).then_some(l)
    }
}

/// The degree-`n` strand of the Koszul complex of `x_1..x_k` (elements of
/// `I2`) on a graded ring: `K_j = ⊕_{|A| = j} P_{n-j}`.
#[derive(Clone, Debug)]
pub struct GradedKoszul {
    pub ring: GradedRing,
    pub negative: NegativeDegrees,
    pub n: i64,
    pub k: usize,
    pub dims: Vec<usize>,
    /// Row `r` of `differentials[j - 1]` is `d_j` of the `r`-th basis vector.
    pub differentials: Vec<GfpMatrix>,
}

/// The fiber-cone strand `K(x°, F_I1(I2))(n)` with zero negative pieces.
pub fn build_fiber_koszul(
    field: &PrimeField,
    cache: &QuotientCache,
    elements: &[Polynomial],
    n: i64,
) -> Result<GradedKoszul> {
    GradedKoszul::build(
        field,
        cache,
        GradedRing::Fiber,
        NegativeDegrees::Zero,
        elements,
        n,
    )
}

impl GradedKoszul {
    pub fn build(
        field: &PrimeField,
        cache: &QuotientCache,
        ring: GradedRing,
        negative: NegativeDegrees,
        elements: &[Polynomial],
        n: i64,
    ) -> Result<Self> {
        let k = elements.len();
        let pieces: Vec<Piece> = (0..=k)
            .map(|j| Piece::new(cache, ring, negative, n - j as i64))
            .collect();
        let subsets: Vec<Vec<u32>> = (0..=k).map(|j| ordered_subsets(0, k, j)).collect();
        let dims: Vec<usize> = (0..=k).map(|j| subsets[j].len() * pieces[j].dim()).collect();
        let mut differentials = Vec::with_capacity(k);
        for j in 1..=k {
            let src = &pieces[j];
            let tgt = &pieces[j - 1];
            let tdim = tgt.dim() as u32;
            let tpos = |mask: u32| subsets[j - 1].iter().position(|&m| m == mask).unwrap() as u32;
            let mut rows = Vec::with_capacity(dims[j]);
            for &mask in &subsets[j] {
                for q in src.basis_positions() {
                    let u = &src.quotient.basis()[q];
                    let mut row: SparseRow = Vec::new();
                    for t in (0..k).filter(|t| mask >> t & 1 == 1) {
                        let block = tpos(mask & !(1 << t)) * tdim;
                        let sign = cone_sign(field, mask, t);
                        for (c, v) in tgt.quotient.reduce_product(u, &elements[t]) {
                            let l = tgt.local(c as usize).ok_or_else(|| {
                                Error::Precondition(
                                    "Koszul element is not in I2: product left the graded piece"
                                        .into(),
                                )
                            })?;
                            row.push((block + l, field.mul(v, sign)));
                        }
                    }
                    rows.push(row);
                }
            }
            differentials.push(GfpMatrix::from_rows(field, dims[j - 1], rows));
        }
        let out = Self {
            ring,
            negative,
            n,
            k,
            dims,
            differentials,
        };
        for j in 2..=k {
            if !out.d(j).mul(field, out.d(j - 1)).is_zero() {
                return Err(Error::SignError(j - 1, j));
            }
        }
        Ok(out)
    }

    pub fn d(&self, j: usize) -> &GfpMatrix {
        &self.differentials[j - 1]
    }

    pub fn homology_dims(&self, field: &PrimeField) -> Vec<usize> {
        let mut ranks = vec![0usize; self.k + 2];
        for j in 1..=self.k {
            ranks[j] = self.d(j).rank(field);
        }
        (0..=self.k)
            .map(|j| self.dims[j] - ranks[j] - ranks[j + 1])
            .collect()
    }
}

/// Dimensions of one homological degree of a short exact sequence
/// `0 -> sub -> middle -> quotient -> 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesDegree {
    pub i: usize,
    pub sub: usize,
    pub middle: usize,
    pub quotient: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesCheck {
    pub sequence: String,
    pub at: Vec<i64>,
    pub degrees: Vec<SesDegree>,
    /// Map-level comparisons performed beyond dimension counts.
    pub blocks_checked: usize,
    pub mismatches: Vec<String>,
    pub verdict: Verdict,
}

impl SesCheck {
    fn finish(mut self) -> Self {
        for d in &self.degrees {
            if d.sub + d.quotient != d.middle {
                self.mismatches.push(format!(
                    "degree {}: {} + {} != {}",
                    d.i, d.sub, d.quotient, d.middle
                ));
            }
        }
        self.verdict = if self.mismatches.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }
}

fn negate(field: &PrimeField, rows: Vec<SparseRow>) -> Vec<SparseRow> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, field.neg(v))).collect())
        .collect()
}

/// `0 -> C(x1, x2', (n1,n2)) -> C(x1, x2, (n1,n2)) -> C(x1, x2', (n1,n2-1))[-1] -> 0`
/// where `x2'` drops the last element of `I2`. Checks dimensions and that the
/// blocks of the middle differential are the sub differential and minus the
/// quotient differential.
pub fn ses_check_cone(
    field: &PrimeField,
    cache: &QuotientCache,
    k1: usize,
    k2: usize,
    elements: &[Polynomial],
    n1: i64,
    n2: i64,
) -> Result<SesCheck> {
    if k2 == 0 {
        return Err(Error::Precondition(
            "the cone sequence splits off an element of I2".into(),
        ));
    }
    let k = k1 + k2;
    let last = 1u32 << (k - 1);
    let mid = BigradedComplex::build_from(field, cache, k1, k2, elements, n1, n2)?;
    let smaller = (k > 1).then(|| -> Result<_> {
        let e = &elements[..k - 1];
        Ok((
            BigradedComplex::build_from(field, cache, k1, k2 - 1, e, n1, n2)?,
            BigradedComplex::build_from(field, cache, k1, k2 - 1, e, n1, n2 - 1)?,
        ))
    });
    let smaller = smaller.transpose()?;
    let sub_dim = |i: usize| match &smaller {
        Some((s, _)) => s.dim(i),
        None if i == 0 => cache.length(n1, n2),
        None => 0,
    };
    let quo_dim = |i: usize| match (&smaller, i) {
        (_, 0) => 0,
        (Some((_, q)), _) => q.dim(i - 1),
        (None, 1) => cache.length(n1, n2 - 1),
        (None, _) => 0,
    };
    let mut check = SesCheck {
        sequence: "cone".into(),
        at: vec![n1, n2],
        degrees: (0..=k)
            .map(|i| SesDegree {
                i,
                sub: sub_dim(i),
                middle: mid.dim(i),
                quotient: quo_dim(i),
            })
            .collect(),
        blocks_checked: 0,
        mismatches: Vec::new(),
        verdict: Verdict::Pass,
    };
    if let Some((sub, quo)) = &smaller {
        for i in 1..=k {
            for s in &mid.degrees[i] {
                for t in &mid.degrees[i - 1] {
                    if s.mask & t.mask != t.mask {
                        continue;
                    }
                    let got = mid.block(i, s.mask, t.mask);
                    let want = match (s.mask & last != 0, t.mask & last != 0) {
                        (false, false) => sub.block(i, s.mask, t.mask),
                        (true, true) => {
                            negate(field, quo.block(i - 1, s.mask & !last, t.mask & !last))
                        }
                        // Connecting map: multiplication by the last element.
                        (true, false) => continue,
                        (false, true) => vec![Vec::new(); s.dim()],
                    };
                    check.blocks_checked += 1;
                    if got != want {
                        check.mismatches.push(format!(
                            "degree {i}: block {:b} -> {:b} differs",
                            s.mask, t.mask
                        ));
                    }
                }
            }
        }
    }
    Ok(check.finish())
}

/// `0 -> K(n) -> C(x2, (1,n)) -> C(x2, (0,n)) -> 0` for elements of `I2`,
/// with `K` in the kernel convention. Checks dimensions, that the middle
/// differential preserves `K` and restricts to the Koszul differential, and
/// that the projection is a chain map.
pub fn ses_check_fiber(
    field: &PrimeField,
    cache: &QuotientCache,
    elements: &[Polynomial],
    n: i64,
) -> Result<SesCheck> {
    let k = elements.len();
    let c1 = BigradedComplex::build_from(field, cache, 0, k, elements, 1, n)?;
    let c0 = BigradedComplex::build_from(field, cache, 0, k, elements, 0, n)?;
    let kz = GradedKoszul::build(
        field,
        cache,
        GradedRing::Fiber,
        NegativeDegrees::Kernel,
        elements,
        n,
    )?;
    let mut check = SesCheck {
        sequence: "fiber".into(),
        at: vec![n],
        degrees: (0..=k)
            .map(|i| SesDegree {
                i,
                sub: kz.dims[i],
                middle: c1.dim(i),
                quotient: c0.dim(i),
            })
            .collect(),
        blocks_checked: 0,
        mismatches: Vec::new(),
        verdict: Verdict::Pass,
    };
    if check.degrees.iter().any(|d| d.sub + d.quotient != d.middle) {
        return Ok(check.finish());
    }

    // Per degree: middle index -> kernel index, middle index -> quotient index.
    let mut to_k: Vec<Vec<Option<u32>>> = Vec::new();
    let mut to_q: Vec<Vec<Option<u32>>> = Vec::new();
    for i in 0..=k {
        let piece = Piece::new(cache, GradedRing::Fiber, NegativeDegrees::Kernel, n - i as i64);
        let mut tk = vec![None; c1.dim(i)];
        let mut tq = vec![None; c1.dim(i)];
        for (pos, s) in c1.degrees[i].iter().enumerate() {
            let s0 = &c0.degrees[i][pos];
            debug_assert_eq!(s.mask, s0.mask);
            for (q, m) in s.module.basis().iter().enumerate() {
                let g = s.offset + q;
                if let Some(l) = piece.local(q) {
                    tk[g] = Some((pos * piece.dim()) as u32 + l);
                }
                if let Some(r) = s0.module.index_of(m) {
                    tq[g] = Some((s0.offset + r) as u32);
                }
                if tk[g].is_some() == tq[g].is_some() {
                    check.mismatches.push(format!(
                        "degree {i}: basis vector {g} is not split by the sequence"
                    ));
                }
            }
        }
        to_k.push(tk);
        to_q.push(tq);
    }
    let remap = |row: &[(u32, u32)], map: &[Option<u32>]| -> (SparseRow, bool) {
        let mut out: SparseRow = Vec::new();
        let mut outside = false;
        for &(c, v) in row {
            match map[c as usize] {
                Some(t) => out.push((t, v)),
                None => outside = true,
            }
        }
        out.sort_unstable();
        (out, outside)
    };
    for i in 1..=k {
        for g in 0..c1.dim(i) {
            let row = c1.d(i).row(g);
            if let Some(kr) = to_k[i][g] {
                let (restricted, outside) = remap(row, &to_k[i - 1]);
                if outside {
                    check
                        .mismatches
                        .push(format!("degree {i}: d leaves the kernel at {g}"));
                } else if restricted != kz.d(i).row(kr as usize) {
                    check
                        .mismatches
                        .push(format!("degree {i}: restriction differs at {g}"));
                }
            }
            let (projected, _) = remap(row, &to_q[i - 1]);
            let image: SparseRow = match to_q[i][g] {
                Some(r) => c0.d(i).row(r as usize).to_vec(),
                None => Vec::new(),
            };
            if projected != image {
                check
                    .mismatches
                    .push(format!("degree {i}: projection does not commute at {g}"));
            }
            check.blocks_checked += 1;
        }
    }
    Ok(check.finish())
}

/// Windowed grade probe: Koszul homology of `x_1..x_k` on the strands
/// `n = 0..=nmax` of a graded ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeProbe {
    pub ring: GradedRing,
    pub k: usize,
    pub nmax: i64,
    /// `[h_0..h_k]` of each strand.
    pub strands: Vec<Vec<usize>>,
    /// `k - max{j : H_j != 0 in some strand}`: "grade >= g up to degree nmax".
    pub grade: usize,
}

pub fn grade_probe(
    field: &PrimeField,
    cache: &QuotientCache,
    ring: GradedRing,
    elements: &[Polynomial],
    nmax: i64,
    mode: Parallelism,
) -> Result<GradeProbe> {
    let k = elements.len();
    let ns: Vec<i64> = (0..=nmax).collect();
    let strands = try_par_map(mode, &ns, |&n| {
        GradedKoszul::build(field, cache, ring, NegativeDegrees::Zero, elements, n)
            .map(|c| c.homology_dims(field))
    })?;
    let top = strands
        .iter()
        .flat_map(|h| h.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, _)| j))
        .max();
    Ok(GradeProbe {
        ring,
        k,
        nmax,
        strands,
        grade: top.map_or(k, |j| k - j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Filtration;
    use crate::ring::{MonomialIdeal, RingSpec};
    use crate::sequence::SequenceSpec;

    fn e1() -> (RingSpec, QuotientCache) {
        let ring = RingSpec::standard(2, 1).unwrap();
        let i1 = MonomialIdeal::maximal(2);
        let i2 = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let f = Filtration::new(i1, i2).unwrap();
        let c = QuotientCache::build(&f, 6, 6, Parallelism::Sequential).unwrap();
        (ring, c)
    }

    #[test]
    fn fiber_pieces_count_generators() {
        let (_, cache) = e1();
        for m in 0..5 {
            let p = Piece::new(&cache, GradedRing::Fiber, NegativeDegrees::Zero, m);
            assert_eq!(p.dim(), m as usize + 1);
        }
        let neg = Piece::new(&cache, GradedRing::Fiber, NegativeDegrees::Kernel, -1);
        assert_eq!(neg.dim(), 1);
        let neg = Piece::new(&cache, GradedRing::Fiber, NegativeDegrees::Zero, -1);
        assert_eq!(neg.dim(), 0);
    }

    #[test]
    fn fiber_koszul_dims() {
        let (ring, cache) = e1();
        let seq = SequenceSpec::generate(&ring, cache.filtration(), 0, 1, 1).unwrap();
        let kz = build_fiber_koszul(&ring.field, &cache, &seq.elements, 2).unwrap();
        assert_eq!(kz.dims, vec![3, 2]);
    }

    #[test]
    fn sequences_split_on_e1() {
        let (ring, cache) = e1();
        let seq = SequenceSpec::generate(&ring, cache.filtration(), 1, 1, 1).unwrap();
        for n in 0..=4 {
            let c = ses_check_cone(&ring.field, &cache, 1, 1, &seq.elements, 2, n).unwrap();
            assert_eq!(c.verdict, Verdict::Pass, "{:?}", c.mismatches);
            let f = ses_check_fiber(&ring.field, &cache, seq.second(), n).unwrap();
            assert_eq!(f.verdict, Verdict::Pass, "{:?}", f.mismatches);
        }
    }

    #[test]
    fn one_element_grade_on_e1() {
        let (ring, cache) = e1();
        let seq = SequenceSpec::generate(&ring, cache.filtration(), 0, 1, 1).unwrap();
        for r in [GradedRing::Associated, GradedRing::Fiber] {
            let g = grade_probe(&ring.field, &cache, r, &seq.elements, 4, Parallelism::Sequential)
                .unwrap();
            assert_eq!(g.grade, 1);
        }
    }
}

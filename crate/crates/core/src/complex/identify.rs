//! Closed forms for `H_0`, `H_1` and the top homology of the complex,
//! computed independently of the complex matrices.

use serde::{Deserialize, Serialize};

use super::table::HomologyTable;
use crate::error::Result;
use crate::exec::{try_par_map, Parallelism};
use crate::filtration::Filtration;
use crate::linalg::length::{
    colon_length, length_modulo_monomial, length_of_quotient, stable_quotient_length,
    times_ideal, LengthOptions,
};
use crate::ring::{Polynomial, RingSpec};
use crate::sequence::SequenceSpec;
use crate::verdict::{Comparison, Verdict};

/// Generators of `x_1 F_(n1-1,n2) + x_2 F_(n1,n2-1)`: each element times the
/// filtration lowered in its own slot.
pub fn mixed_denominator(
    filt: &Filtration,
    seq: &SequenceSpec,
    n1: i64,
    n2: i64,
) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for (t, x) in seq.elements.iter().enumerate() {
        let lower = if seq.slot(t) == 1 {
            filt.ideal(n1 - 1, n2)
        } else {
            filt.ideal(n1, n2 - 1)
        };
        out.extend(times_ideal(x, &lower));
    }
    out
}

/// `ℓ(F_(n1,n2) / (x_1 F_(n1-1,n2) + x_2 F_(n1,n2-1)))` as
/// `ℓ(R/N) − ℓ(R/F)`; needs `k1 + k2 = d` so that `N` is m-primary.
pub fn denominator_colength(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    n1: i64,
    n2: i64,
    opts: LengthOptions,
) -> Result<usize> {
    let n = mixed_denominator(filt, seq, n1, n2);
    let ln = length_of_quotient(&ring.field, ring.dim(), &n, opts)?.length;
    let lf = filt.quotient(n1, n2).len();
    Ok(ln - lf)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationReport {
    pub k1: usize,
    pub k2: usize,
    pub rows: Vec<Comparison>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub const H1_DENOMINATOR_NOTE: &str = "H_1 denominator uses x_2 I1^n1 I2^(n2-1), not x_2 I1^n1 I2^n2";

/// Compares each homology length in `table` at `points` with its closed form.
pub fn verify_identifications(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    table: &HomologyTable,
    points: &[(i64, i64)],
    mode: Parallelism,
) -> Result<IdentificationReport> {
    let opts = LengthOptions::for_dim(ring.dim());
    let per_point = try_par_map(mode, points, |&(n1, n2)| {
        identify_at(ring, filt, seq, table, n1, n2, opts)
    })?;
    let rows: Vec<Comparison> = per_point.into_iter().flatten().collect();
    let verdict = Verdict::all(rows.iter().map(|r| r.verdict));
    Ok(IdentificationReport {
        k1: seq.k1,
        k2: seq.k2,
        rows,
        verdict,
        notes: vec![H1_DENOMINATOR_NOTE.to_string()],
    })
}

fn identify_at(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    table: &HomologyTable,
    n1: i64,
    n2: i64,
    opts: LengthOptions,
) -> Result<Vec<Comparison>> {
    let h = |i: i64| table.h(i, n1, n2).unwrap_or(0) as i64;
    let cf = closed_forms(ring, filt, seq, n1, n2, opts)?;
    let mut out = vec![Comparison::new("h0", vec![n1, n2], h(0), cf.h0)];
    if let Some(h1) = cf.h1 {
        let row = Comparison::new("h1", vec![n1, n2], h(1), h1);
        out.push(if cf.h1_heuristic {
            row.heuristic("ℓ((x)/N) from truncation stability")
        } else {
            row
        });
    }
    out.push(Comparison::new("top", vec![n1, n2], h(seq.len() as i64), cf.top));
    Ok(out)
}

/// Closed forms for `ℓ(H_0)`, `ℓ(H_1)` (when `n_s >= 1` for every occupied
/// slot) and `ℓ(H_{k1+k2})`, computed without the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub h0: i64,
    pub h1: Option<i64>,
    /// `ℓ(H_1)` relied on truncation stability (`k1 + k2 < d`).
    pub h1_heuristic: bool,
    pub top: i64,
}

pub fn closed_forms(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    n1: i64,
    n2: i64,
    opts: LengthOptions,
) -> Result<ClosedForms> {
    let field = &ring.field;
    let k = seq.len();
    let f = filt.ideal(n1, n2);
    let lf = filt.quotient(n1, n2).len() as i64;
    let lfx = length_modulo_monomial(field, &f, &seq.elements).length as i64;

    let mut h1 = None;
    let mut h1_heuristic = false;
    if (seq.k1 == 0 || n1 >= 1) && (seq.k2 == 0 || n2 >= 1) {
        let denom = mixed_denominator(filt, seq, n1, n2);
        if k == ring.dim() {
            // ℓ((x)∩F / N) = ℓ(R/N) − ℓ(R/((x)∩F)), by inclusion–exclusion.
            let ln = length_of_quotient(field, ring.dim(), &denom, opts)?.length as i64;
            let lx = length_of_quotient(field, ring.dim(), &seq.elements, opts)?.length as i64;
            h1 = Some(ln - (lx + lf - lfx));
        } else {
            // ℓ((x)/N) − ℓ((x)/((x)∩F)), the first by stable truncation.
            let (lxn, _) =
                stable_quotient_length(field, ring.dim(), &seq.elements, &denom, opts.cap)?;
            h1 = Some(lxn as i64 - (lf - lfx));
            h1_heuristic = true;
        }
    }

    let (c1, c2) = (n1 - seq.k1 as i64, n2 - seq.k2 as i64);
    let base = filt.ideal(c1, c2);
    let pairs: Vec<_> = seq
        .elements
        .iter()
        .enumerate()
        .map(|(t, x)| {
            let tgt = if seq.slot(t) == 1 {
                filt.ideal(c1 + 1, c2)
            } else {
                filt.ideal(c1, c2 + 1)
            };
            (x.clone(), tgt)
        })
        .collect();
    let (top, _) = colon_length(field, &base, &pairs)?;
    Ok(ClosedForms {
        h0: lfx,
        h1,
        h1_heuristic,
        top: top as i64,
    })
}

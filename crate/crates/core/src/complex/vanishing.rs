//! Windowed vanishing patterns and rigidity of the homology.

use serde::{Deserialize, Serialize};

use super::table::HomologyTable;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::field::PrimeField;
use crate::filtration::QuotientCache;
use crate::sequence::{SequenceSpec, Window};
use crate::verdict::{Comparison, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Large `n1`, every `n2` in the window.
    First,
    /// Large `n2`, every `n1` in the window.
    Second,
    /// Both large.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub k1: usize,
    pub k2: usize,
    /// `h_i` is expected to vanish for `i >= from_degree`.
    pub from_degree: usize,
    pub direction: Direction,
    pub window: Window,
    /// Smallest index from which every relevant `h_i` in the window is zero.
    pub threshold: Option<i64>,
    pub verdict: Verdict,
}

/// Which homology degrees should vanish, and in which direction, for the
/// shape `(k1, k2)`.
pub fn expected_pattern(k1: usize, k2: usize) -> (usize, Direction) {
    match (k1, k2) {
        (0, _) => (1, Direction::Second),
        (_, 0) => (1, Direction::First),
        (1, _) => (2, Direction::Second),
        (_, 1) => (2, Direction::First),
        _ => (1, Direction::Both),
    }
}

/// Finds the vanishing threshold within the window. Confirmed (pass) when the
/// outermost row already vanishes; inconclusive otherwise, since a finite
/// window cannot refute an eventual statement.
pub fn scan_vanishing(table: &HomologyTable) -> VanishingReport {
    let (from, direction) = expected_pattern(table.k1, table.k2);
    let w = table.window;
    let quiet = |n1: i64, n2: i64| {
        (from..=table.length()).all(|i| table.h(i as i64, n1, n2).unwrap_or(0) == 0)
    };
    let top = match direction {
        Direction::First => w.n1max,
        Direction::Second => w.n2max,
        Direction::Both => w.n1max.min(w.n2max),
    };
    let holds_from = |t: i64| -> bool {
        table.rows.keys().all(|&(n1, n2)| {
            let beyond = match direction {
                Direction::First => n1 >= t,
                Direction::Second => n2 >= t,
                Direction::Both => n1 >= t && n2 >= t,
            };
            !beyond || quiet(n1, n2)
        })
    };
    let threshold = if w.is_empty() {
        None
    } else {
        (0..=top).find(|&t| holds_from(t))
    };
    let verdict = if w.is_empty() {
        Verdict::Pass
    } else if threshold.is_some() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    VanishingReport {
        k1: table.k1,
        k2: table.k2,
        from_degree: from,
        direction,
        window: w,
        threshold,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSum {
    pub from: usize,
    pub value: i64,
    /// Every `h_j`, `j >= from`, vanishes at the last `n2` of the window.
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub k1: usize,
    pub k2: usize,
    pub n2max: i64,
    /// `h_*(1, n2)` for the sequence with the last `a` elements of `I2`
    /// dropped, `a = 0, 1, ...`.
    pub tables: Vec<HomologyTable>,
    pub propagation: Vec<Comparison>,
    pub tails: Vec<TailSum>,
    pub characterization: Vec<Comparison>,
    pub vacuous: bool,
    pub verdict: Verdict,
}

/// Rigidity checks at `n1 = 1` over `0 <= n2 <= n2max`, for `k1` in `{0, 1}`.
pub fn rigidity_scan(
    field: &PrimeField,
    cache: &QuotientCache,
    seq: &SequenceSpec,
    n2max: i64,
    mode: Parallelism,
) -> Result<RigidityReport> {
    if seq.k1 > 1 {
        return Err(Error::Precondition(
            "rigidity is stated for at most one element of I1".into(),
        ));
    }
    let k1 = seq.k1;
    let k2 = seq.k2;
    let window = Window::new(1, n2max);
    let pts: Vec<(i64, i64)> = (0..=n2max).map(|n2| (1, n2)).collect();
    let max_drop = if k1 == 1 { k2 } else { k2.saturating_sub(1) };
    let mut tables = Vec::new();
    for a in 0..=max_drop {
        let sub = seq.truncate(k1, k2 - a);
        tables.push(HomologyTable::scan_points(field, cache, &sub, window, &pts, mode)?);
    }
    let main = &tables[0];
    let k = k1 + k2;
    let first_n2 = if k1 == 1 { 1 } else { 0 };
    let total = |t: &HomologyTable, j: usize| -> i64 {
        (0..=n2max)
            .map(|n2| t.h(j as i64, 1, n2).unwrap_or(0) as i64)
            .sum()
    };

    // With k1 = 0 the statements need k2 >= 2 ("nothing to prove" for one
    // element).
    let vacuous = k1 == 0 && k2 < 2;
    let mut propagation = Vec::new();
    let mut tails = Vec::new();
    let mut characterization = Vec::new();
    if !vacuous {
        for i in 1..=k {
            if total(main, i) == 0 {
                let above: i64 = (i + 1..=k)
                    .map(|j| {
                        (first_n2..=n2max)
                            .map(|n2| main.h(j as i64, 1, n2).unwrap_or(0) as i64)
                            .sum::<i64>()
                    })
                    .sum();
                propagation.push(Comparison::new(
                    format!("h_j(1,n2) = 0 for j > {i}"),
                    vec![i as i64],
                    above,
                    0,
                ));
            }
        }
        for i in 1..=k {
            let value: i64 = (i..=k)
                .map(|j| {
                    let s = if (j - i) % 2 == 0 { 1 } else { -1 };
                    s * total(main, j)
                })
                .sum();
            let closed = (i..=k).all(|j| main.h(j as i64, 1, n2max).unwrap_or(0) == 0);
            tails.push(TailSum {
                from: i,
                value,
                closed,
            });
            if closed {
                let all_vanish = tables.iter().all(|t| (i..=k).all(|j| total(t, j) == 0));
                characterization.push(
                    Comparison::new(
                        format!("tail sum from {i} is zero iff truncations vanish"),
                        vec![i as i64],
                        (value == 0) as i64,
                        all_vanish as i64,
                    )
                    .with_note(format!("tail sum {value}")),
                );
            }
        }
    }
    let mut verdict = Verdict::all(
        propagation
            .iter()
            .chain(&characterization)
            .map(|c| c.verdict),
    );
    if tails.iter().any(|t| t.closed && t.value < 0) {
        verdict = Verdict::Fail;
    }
    if verdict == Verdict::Pass {
        verdict = Verdict::HeuristicPass;
    }
    Ok(RigidityReport {
        k1,
        k2,
        n2max,
        tables,
        propagation,
        tails,
        characterization,
        vacuous,
        verdict,
    })
}

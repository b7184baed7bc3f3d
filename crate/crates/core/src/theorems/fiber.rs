//! Checkers on the fiber cone `⊕ I2^n / I1 I2^n`: its Hilbert coefficients,
//! the limit lengths and the strand `h_j(1, n)` of the mixed complex.

use std::collections::BTreeMap;

use super::{sign, CheckReport, Lab};
use crate::complex::koszul::{GradedRing, NegativeDegrees, Piece};
use crate::error::Result;
use crate::hilbert::{delta1, difference_identities, small_binomial, LVariant};
use crate::verdict::{Comparison, Relation, Verdict};

const SECOND_VARIANT_NOTE: &str = "the second variant uses d elements of I2 with the last one \
     moved to the first slot, so x_{2d} and x_{2,d-1} name the same element";
const BOUNDARY_NOTE: &str = "the sums over n >= 1 carry the correction c * Σ_n b(n), \
     b(n) = Σ_{s > n} (-1)^s C(d-1, s), from H(F, n) = 0 against ℓ(R/I1) in negative degrees";

fn choose(n: i64, r: i64) -> i64 {
    if n < 0 || r < 0 || r > n {
        0
    } else {
        small_binomial(n as usize, r as usize)
    }
}

/// Everything the coefficient formulas need, read off one window.
#[derive(Clone, Debug)]
pub struct FiberData {
    pub d: usize,
    pub nmax: i64,
    /// `ℓ(R/I1)`.
    pub c: i64,
    pub f: Vec<i64>,
    pub fit_from: i64,
    pub l: i64,
    /// `ℓ_n` for `n = 1..=nmax`.
    pub ell: BTreeMap<i64, i64>,
    /// `T_n = Σ_{j>=2} (-1)^j h_j(1, n)` for `n = 0..=nmax`.
    pub t: BTreeMap<i64, i64>,
    /// `Σ_{j>=2} h_j(1, n)`.
    pub h_ge2: BTreeMap<i64, i64>,
    /// `ℓ_n = L` and `h_{>=2}(1, n) = 0` at the last two `n` of the window,
    /// so that windowed sums are taken to be complete.
    pub tail_closed: bool,
}

impl FiberData {
    pub fn load(lab: &Lab) -> Result<Self> {
        let series = lab.fiber()?;
        let lim = lab.limit(LVariant::Mixed, lab.ring().seed)?;
        let strand = lab.strand_table(LVariant::Mixed)?;
        let nmax = lab.cfg.fiber_nmax;
        let ell: BTreeMap<i64, i64> = lim.values.iter().copied().collect();
        let mut t = BTreeMap::new();
        let mut h_ge2 = BTreeMap::new();
        for n in 0..=nmax {
            t.insert(n, strand.signed_tail(2, 1, n).unwrap_or(0));
            let s: i64 = (2..=strand.length())
                .map(|j| strand.h(j as i64, 1, n).unwrap_or(0) as i64)
                .sum();
            h_ge2.insert(n, s);
        }
        let tail_closed = (nmax - 1..=nmax)
            .all(|n| n >= 1 && ell.get(&n) == Some(&lim.stable) && h_ge2[&n] == 0);
        Ok(Self {
            d: lab.d(),
            nmax,
            c: lab.colength_i1(),
            f: series.coeffs.clone(),
            fit_from: series.fit_from,
            l: lim.stable,
            ell,
            t,
            h_ge2,
            tail_closed,
        })
    }

    /// `b(n) = Σ_{s=n+1}^{d-1} (-1)^s C(d-1, s)`.
    pub fn b(&self, n: i64) -> i64 {
        let m = self.d - 1;
        ((n + 1).max(0) as usize..=m)
            .map(|s| sign(s) * small_binomial(m, s))
            .sum()
    }

    /// `ℓ_n - L`.
    pub fn excess(&self, n: i64) -> i64 {
        self.ell.get(&n).copied().unwrap_or(self.l) - self.l
    }

    pub fn tail(&self, n: i64) -> i64 {
        self.t.get(&n).copied().unwrap_or(0)
    }

    /// `c · [d >= 3]`, which equals `c · Σ_{n>=1} b(n)`.
    pub fn correction(&self) -> i64 {
        if self.d >= 3 {
            self.c
        } else {
            0
        }
    }

    fn window_row(&self, row: Comparison) -> Comparison {
        if self.tail_closed {
            row.heuristic(format!("sums over n truncated at {} with a closed tail", self.nmax))
        } else {
            let mut row = row.with_note("tail not closed within the window");
            row.verdict = Verdict::Inconclusive;
            row
        }
    }
}

pub fn check_fiber_series(lab: &Lab) -> Result<CheckReport> {
    let s = lab.fiber()?;
    let mut rep = CheckReport::new("fiber-series", lab.instance());
    for n in 0..=s.nmax {
        let direct = Piece::new(&lab.cache, GradedRing::Fiber, NegativeDegrees::Zero, n).dim();
        rep.rows.push(Comparison::new(
            "length difference vs monomial count",
            vec![n],
            s.values[n as usize],
            direct as i64,
        ));
    }
    rep.rows.extend(s.lemma.iter().cloned());
    rep.note(format!(
        "f = {:?}; polynomial agrees with H(F, n) for {} <= n <= {}",
        s.coeffs, s.fit_from, s.nmax
    ));
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_difference_identities(lab: &Lab) -> Result<CheckReport> {
    let s = lab.fiber()?;
    let d = lab.d();
    let mut rep = CheckReport::new("difference-identities", lab.instance());
    for j in 1..d {
        for i in 1..=j {
            rep.rows
                .extend(difference_identities(|n| s.defect(n), s.fit_from, i, j)?);
        }
    }
    rep.note("applied to P(F, n) - H(F, n) with H(F, n) = 0 for n < 0");
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_fiber_fundamental(lab: &Lab) -> Result<CheckReport> {
    lab.need_fiber_dim()?;
    let d = lab.d();
    let e = lab.mixed()?;
    let nmax = lab.cfg.fiber_nmax;
    let mut rep = CheckReport::new("fiber-fundamental", lab.instance());
    let hc = |n: i64| lab.fiber_difference(n);
    let mut variants = vec![(LVariant::Mixed, e[d - 1])];
    if lab.filt().i1().contains_ideal(lab.filt().i2()) {
        variants.push((LVariant::Second, e[d]));
        rep.note(SECOND_VARIANT_NOTE);
    } else {
        rep.note("second variant skipped: I2 is not contained in I1");
    }
    for (v, mult) in variants {
        let lim = lab.limit(v, lab.ring().seed)?;
        let strand = lab.strand_table(v)?;
        let label = match v {
            LVariant::Mixed => "first variant",
            LVariant::Second => "second variant",
        };
        for n in 1..=nmax {
            let ln = lim.at(n).expect("limit computed on the fiber window");
            let tail = strand.signed_tail(2, 1, n).unwrap_or(0);
            rep.rows.push(Comparison::new(
                label,
                vec![n],
                delta1(hc, d - 1, n),
                mult - ln + tail,
            ));
        }
        if v == LVariant::Mixed {
            let seq = lab.variant_sequence(v)?;
            rep.notes.extend(lab.sequence_notes(&seq));
        }
    }
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_f0(lab: &Lab) -> Result<CheckReport> {
    let d = lab.d();
    let s = lab.fiber()?;
    let e = lab.mixed()?;
    let mut rep = CheckReport::new("f0", lab.instance());
    let mut floor = Verdict::Pass;
    let mut variants = vec![(LVariant::Mixed, e[d - 1], "f0 = e_{d-1} - L")];
    if lab.filt().i1().contains_ideal(lab.filt().i2()) {
        variants.push((LVariant::Second, e[d], "f0 = e(I2) - L'"));
        rep.note(SECOND_VARIANT_NOTE);
    } else {
        rep.note("second identity skipped: I2 is not contained in I1");
    }
    for (v, mult, label) in variants {
        let mut seen = Vec::new();
        for (k, seed) in lab.seeds().into_iter().enumerate() {
            match lab.limit(v, seed) {
                Ok(lim) => {
                    seen.push(lim.stable);
                    rep.rows.push(
                        Comparison::new(label, vec![k as i64], s.coeffs[0], mult - lim.stable)
                            .with_note(format!("seed {seed}, limit {} from n = {}", lim.stable, lim.stable_from)),
                    );
                }
                Err(err) => {
                    floor = Verdict::Inconclusive;
                    rep.note(format!("seed {seed}: {err}"));
                }
            }
        }
        seen.dedup();
        if seen.len() > 1 {
            rep.note(format!("{label}: the limit varies with the seed: {seen:?}"));
        }
    }
    Ok(rep.finish(floor))
}

pub fn check_fiber_huneke(lab: &Lab) -> Result<CheckReport> {
    let fd = FiberData::load(lab)?;
    let s = lab.fiber()?;
    let mut rep = CheckReport::new("fiber-huneke", lab.instance());
    let defect = |n: i64| s.poly(n) - lab.fiber_difference(n);
    for n in 1..=fd.nmax {
        rep.rows.push(Comparison::new(
            "fiber-huneke",
            vec![n],
            delta1(defect, fd.d - 1, n),
            fd.excess(n) - fd.tail(n),
        ));
    }
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_coefficient_formulas(lab: &Lab) -> Result<CheckReport> {
    let fd = FiberData::load(lab)?;
    let s = lab.fiber()?;
    let d = fd.d;
    let mut rep = CheckReport::new("coefficient-formulas", lab.instance());

    // Exact: the defect P - H vanishes from fit_from on.
    let dd = |n: i64| delta1(|m| s.defect(m), d - 1, n);
    let top = fd.fit_from + d as i64;
    for i in 1..d {
        let ii = i as i64;
        let lhs: i64 = (ii - 1..=top).map(|n| choose(n, ii - 1) * dd(n)).sum();
        rep.rows
            .push(Comparison::new("coefficient as weighted sum", vec![ii], fd.f[i], lhs));
        let partial: i64 = (0..=i).map(|j| sign(j) * fd.f[j]).sum();
        let rhs: i64 = (ii..=top).map(|n| choose(n - 1, ii - 1) * dd(n)).sum();
        rep.rows.push(Comparison::new(
            "alternating sum as weighted sum",
            vec![ii],
            sign(i) * partial + sign(i + 1) * fd.c,
            rhs,
        ));
    }

    // Windowed: ℓ_n - L - T_n for n >= 1.
    let nmax = fd.nmax;
    let excess_sum: i64 = (1..=nmax).map(|n| fd.excess(n)).sum();
    let tail_sum: i64 = (1..=nmax).map(|n| fd.tail(n)).sum();
    let f1_rhs = fd.f[0] - fd.c + excess_sum - tail_sum + fd.correction();
    rep.rows.push(fd.window_row(Comparison::new("f1 formula", vec![1], fd.f[1], f1_rhs)));
    rep.note(format!(
        "f1 terms: f0 = {}, ℓ(R/I1) = {}, Σ(ℓ_n - L) = {excess_sum}, Σ T_n = {tail_sum}, correction = {}",
        fd.f[0],
        fd.c,
        fd.correction()
    ));
    for i in 2..d {
        let ii = i as i64;
        let rhs: i64 = (ii - 1..=nmax)
            .map(|n| choose(n, ii - 1) * (fd.excess(n) - fd.tail(n) + fd.c * fd.b(n)))
            .sum();
        rep.rows
            .push(fd.window_row(Comparison::new("fi formula", vec![ii], fd.f[i], rhs)));
    }
    for i in 1..d {
        let ii = i as i64;
        let partial: i64 = (0..=i).map(|j| sign(j) * fd.f[j]).sum();
        let rhs: i64 = (ii..=nmax)
            .map(|n| choose(n - 1, ii - 1) * (fd.excess(n) - fd.tail(n) + fd.c * fd.b(n)))
            .sum();
        rep.rows.push(fd.window_row(Comparison::new(
            "alternating formula",
            vec![ii],
            sign(i) * partial + sign(i + 1) * fd.c,
            rhs,
        )));
    }
    if d >= 3 {
        rep.note(BOUNDARY_NOTE);
    }
    rep.note("the alternating formula at i = 1 is the f1 formula rearranged");
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_f1_bound(lab: &Lab) -> Result<CheckReport> {
    let fd = FiberData::load(lab)?;
    let d = fd.d;
    let nmax = fd.nmax;
    let mut rep = CheckReport::new("f1-bound", lab.instance());
    let excess_sum: i64 = (1..=nmax).map(|n| fd.excess(n)).sum();
    let bound = fd.f[0] - fd.c + excess_sum + fd.correction();
    rep.rows.push(fd.window_row(Comparison::with_relation(
        "f1 bound",
        vec![1],
        fd.f[1],
        bound,
        Relation::Le,
    )));
    if d >= 3 {
        rep.note(BOUNDARY_NOTE);
    }
    if fd.f[1] != bound {
        rep.note("strict inequality: the equality consequences are not applicable");
        return Ok(rep.finish(Verdict::Pass));
    }
    rep.note("equality: checking the consequences");
    for j in 2..d {
        let jj = j as i64;
        let rhs: i64 = (jj - 1..=nmax)
            .map(|n| choose(n, jj - 1) * (fd.excess(n) + fd.c * fd.b(n)))
            .sum();
        rep.rows
            .push(fd.window_row(Comparison::new("equality coefficient", vec![jj], fd.f[j], rhs)));
    }
    for i in 1..d {
        let ii = i as i64;
        let partial: i64 = (0..=i).map(|j| sign(j) * fd.f[j]).sum();
        let rhs: i64 = (ii..=nmax)
            .map(|n| choose(n - 1, ii - 1) * (fd.excess(n) + fd.c * fd.b(n)))
            .sum();
        rep.rows.push(fd.window_row(Comparison::new(
            "equality alternating sum",
            vec![ii],
            sign(i) * (partial - fd.c),
            rhs,
        )));
    }
    for n in 1..=nmax {
        rep.rows.push(Comparison::new(
            "higher homology vanishes",
            vec![n],
            fd.h_ge2[&n],
            0,
        ));
    }
    rep.note("the alternating consequence carries the sign (-1)^i on its left side");
    Ok(rep.finish(Verdict::Pass))
}

//! Windowed depth transfer between `G(I2)` and the fiber cone.
//!
//! Both the minimum `i` and the grades are read off a finite window, so every
//! confirmed implication is a heuristic pass. A failed conclusion is only
//! reported as a failure when the window shows no sign of moving the inputs.

use super::fiber::FiberData;
use super::{CheckReport, Lab};
use crate::complex::koszul::{grade_probe, GradeProbe, GradedRing};
use crate::error::Result;
use crate::hilbert::LVariant;
use crate::verdict::{Comparison, Relation, Verdict};

/// Whether the highest nonvanishing Koszul degree is already reached before
/// the last two strands.
fn grade_settled(p: &GradeProbe) -> bool {
    let top = |h: &Vec<usize>| h.iter().rposition(|&v| v != 0);
    let overall = p.strands.iter().filter_map(top).max();
    let n = p.strands.len();
    if n < 3 {
        return false;
    }
    let early = p.strands[..n - 2].iter().filter_map(top).max();
    overall == early
}

pub fn check_depth_transfer(lab: &Lab) -> Result<CheckReport> {
    lab.need_fiber_dim()?;
    let d = lab.d();
    let nmax = lab.cfg.fiber_nmax;
    let seq = lab.variant_sequence(LVariant::Mixed)?;
    let strand = lab.strand_table(LVariant::Mixed)?;
    let field = &lab.ring().field;
    let g_probe = grade_probe(field, &lab.cache, GradedRing::Associated, seq.second(), nmax, lab.mode())?;
    let f_probe = grade_probe(field, &lab.cache, GradedRing::Fiber, seq.second(), nmax, lab.mode())?;
    let g = g_probe.grade as i64;
    let gamma = f_probe.grade as i64;
    let mut rep = CheckReport::new("depth-transfer", lab.instance());

    let nonzero = |deg: usize| (1..=nmax).any(|n| strand.h(deg as i64, 1, n).unwrap_or(0) != 0);
    let Some(i) = (0..=d).find(|&j| nonzero(d - j)) else {
        rep.note(format!("H_* (1, n) vanishes for 1 <= n <= {nmax}: no minimum within the window"));
        return Ok(rep.finish(Verdict::Inconclusive));
    };
    let i = i as i64;
    // Higher degrees stay zero at the end of the window.
    let i_settled = (0..i as usize).all(|j| {
        (nmax - 1..=nmax).all(|n| strand.h((d - j) as i64, 1, n).unwrap_or(0) == 0)
    });
    let settled = i_settled && grade_settled(&g_probe) && grade_settled(&f_probe);
    rep.note(format!(
        "within n <= {nmax}: i = {i}, grade on G(I2) >= {g}, grade on the fiber cone >= {gamma}"
    ));
    rep.note(format!(
        "G(I2) strands {:?}; fiber cone strands {:?}",
        g_probe.strands, f_probe.strands
    ));

    let implication = |label: &str, lhs: i64, bound: i64| -> Comparison {
        let row = Comparison::with_relation(label, vec![i, g], lhs, bound, Relation::Ge);
        if row.verdict == Verdict::Pass {
            row.heuristic(format!("inputs read off n <= {nmax}"))
        } else if settled {
            row.with_note("window inputs look settled")
        } else {
            let mut row = row.with_note("conclusion fails but the window inputs may still move");
            row.verdict = Verdict::Inconclusive;
            row
        }
    };

    if g <= i - 1 {
        rep.rows.push(implication("low grade transfers", gamma, g));
    } else {
        rep.rows.push(implication("grade bounded by the minimum: fiber cone", gamma, i));
        rep.rows.push(implication("grade bounded by the minimum: G(I2)", g, i));
    }
    if i >= d as i64 - 1 && g >= d as i64 - 1 {
        rep.rows
            .push(implication("maximal minimum transfers", gamma, d as i64 - 1));
    }
    match FiberData::load(lab) {
        Ok(fd) => {
            let bound = fd.f[0] - fd.c + (1..=nmax).map(|n| fd.excess(n)).sum::<i64>() + fd.correction();
            if fd.f[1] == bound && g >= d as i64 - 1 {
                rep.rows
                    .push(implication("coefficient equality transfers", gamma, d as i64 - 1));
            }
        }
        Err(e) => rep.note(format!("coefficient equality not evaluated: {e}")),
    }
    rep.note(
        "the maximal-grade implication reads its minimum as at least d - 1, as the \
         equality case needs",
    );
    Ok(rep.finish(Verdict::HeuristicPass))
}

//! Checkers on the complexes themselves and on the bivariate Hilbert function.

use super::{CheckReport, Lab};
use crate::complex::identify::{closed_forms, denominator_colength, verify_identifications};
use crate::complex::koszul::{ses_check_cone, ses_check_fiber};
use crate::complex::vanishing::{rigidity_scan, scan_vanishing};
use crate::error::{Error, Result};
use crate::exec::try_par_map;
use crate::hilbert::{delta2, fit::cross_check_mixed, sop_multiplicities, HilbertTable};
use crate::linalg::LengthOptions;
use crate::verdict::{Comparison, Relation, Verdict};

const WINDOW_NOTE: &str = "eventual statement confirmed within the window only";

pub fn check_superficial(lab: &Lab) -> Result<CheckReport> {
    let seq = lab.sequence(lab.cfg.k1, lab.cfg.k2)?;
    let mut rep = CheckReport::new("superficial", lab.instance());
    rep.rows.push(Comparison::new(
        "system of parameters certified",
        vec![],
        seq.is_certified() as i64,
        1,
    ));
    if let Some(sup) = &seq.superficial {
        for e in &sup.elements {
            let mut row = Comparison::new(
                "superficial within window",
                vec![e.index as i64, e.slot as i64],
                e.pass as i64,
                1,
            )
            .heuristic(WINDOW_NOTE);
            row.note = Some(match e.holds_from {
                Some(t) => format!("holds from own index {t}; {} failures below", e.failures.len()),
                None => "no index of the window passes".into(),
            });
            rep.rows.push(row);
        }
    }
    if !seq.rejected_seeds.is_empty() {
        rep.note(format!("rejected seeds: {:?}", seq.rejected_seeds));
    }
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_euler(lab: &Lab) -> Result<CheckReport> {
    let (k1, k2) = (lab.cfg.k1, lab.cfg.k2);
    let table = lab.table(k1, k2)?;
    let h = HilbertTable::compute(&lab.cache, lab.cfg.window, lab.mode());
    let mut rep = CheckReport::new("euler", lab.instance());
    for (&(n1, n2), _) in &table.rows {
        let lhs = table.euler(n1, n2).expect("point of the table");
        rep.rows
            .push(Comparison::new("euler", vec![n1, n2], lhs, h.delta(k1, k2, n1, n2)?));
    }
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_identifications(lab: &Lab) -> Result<CheckReport> {
    let (k1, k2) = (lab.cfg.k1, lab.cfg.k2);
    let seq = lab.sequence(k1, k2)?;
    let table = lab.table(k1, k2)?;
    let pts = lab.cfg.window.points();
    let r = verify_identifications(lab.ring(), lab.filt(), &seq, &table, &pts, lab.mode())?;
    let mut rep = CheckReport::new("identifications", lab.instance());
    rep.rows = r.rows;
    rep.notes = r.notes;
    rep.notes.extend(lab.sequence_notes(&seq));
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_vanishing(lab: &Lab) -> Result<CheckReport> {
    let table = lab.table(lab.cfg.k1, lab.cfg.k2)?;
    let v = scan_vanishing(&table);
    let mut rep = CheckReport::new("vanishing", lab.instance());
    rep.note(format!(
        "h_i = 0 for i >= {} expected in direction {:?}",
        v.from_degree, v.direction
    ));
    match v.threshold {
        Some(t) => {
            rep.note(format!("threshold {t} within the window"));
            for (&(n1, n2), row) in &table.rows {
                let beyond = match v.direction {
                    crate::complex::vanishing::Direction::First => n1 >= t,
                    crate::complex::vanishing::Direction::Second => n2 >= t,
                    crate::complex::vanishing::Direction::Both => n1 >= t && n2 >= t,
                };
                if beyond {
                    let tail: i64 = row.iter().skip(v.from_degree).map(|&x| x as i64).sum();
                    rep.rows.push(Comparison::new("vanishing", vec![n1, n2], tail, 0));
                }
            }
        }
        None => rep.note("no threshold within the window"),
    }
    Ok(rep.finish(v.verdict.and(Verdict::HeuristicPass)))
}

pub fn check_rigidity(lab: &Lab) -> Result<CheckReport> {
    let (k1, k2) = (lab.cfg.k1, lab.cfg.k2);
    let seq = if k1 <= 1 {
        lab.sequence(k1, k2)?
    } else {
        lab.sequence(1, lab.d() - 1)?
    };
    let n2max = lab.cfg.window.n2max.max(lab.cfg.fiber_nmax);
    let r = rigidity_scan(&lab.ring().field, &lab.cache, &seq, n2max, lab.mode())?;
    let mut rep = CheckReport::new("rigidity", lab.instance());
    if r.vacuous {
        rep.note("one element of I2 and none of I1: nothing to check");
        rep.verdict = Verdict::Pass;
        return Ok(rep);
    }
    rep.note(format!("shape ({}, {}), n1 = 1, n2 <= {n2max}", r.k1, r.k2));
    rep.rows.extend(r.propagation.iter().cloned());
    for t in &r.tails {
        let row = Comparison::with_relation(
            "alternating tail sum",
            vec![t.from as i64],
            t.value,
            0,
            Relation::Ge,
        );
        rep.rows.push(if t.closed {
            row
        } else {
            row.heuristic("tail still open at the end of the window")
        });
    }
    rep.rows.extend(r.characterization.iter().cloned());
    Ok(rep.finish(r.verdict))
}

pub fn check_ses(lab: &Lab) -> Result<CheckReport> {
    let d = lab.d();
    let field = &lab.ring().field;
    let w = lab.cfg.window;
    let mut rep = CheckReport::new("ses", lab.instance());
    let full = lab.sequence(0, d)?;
    let mut shapes: Vec<(usize, usize, std::sync::Arc<_>)> =
        (1..=d).map(|b| (0, b, full.clone())).collect();
    if d >= 2 {
        let mixed = lab.sequence(1, d - 1)?;
        shapes.extend((1..d).map(|b| (1, b, mixed.clone())));
    }
    let mut blocks = 0;
    for (a, b, seq) in &shapes {
        let el = &seq.elements[..a + b];
        let pts = w.points();
        let checks = try_par_map(lab.mode(), &pts, |&(n1, n2)| {
            ses_check_cone(field, &lab.cache, *a, *b, el, n1, n2)
        })?;
        for c in checks {
            blocks += c.blocks_checked;
            let mut at = c.at.clone();
            at.extend([*a as i64, *b as i64]);
            let mut row = Comparison::new("cone sequence", at, c.mismatches.len() as i64, 0);
            if let Some(m) = c.mismatches.first() {
                row = row.with_note(m.clone());
            }
            rep.rows.push(row);
        }
    }
    let ns: Vec<i64> = (0..=w.n2max).collect();
    for k in 1..=d {
        let el = &full.elements[..k];
        let checks = try_par_map(lab.mode(), &ns, |&n| ses_check_fiber(field, &lab.cache, el, n))?;
        for c in checks {
            blocks += c.blocks_checked;
            let mut at = c.at.clone();
            at.push(k as i64);
            let mut row = Comparison::new("fiber sequence", at, c.mismatches.len() as i64, 0);
            if let Some(m) = c.mismatches.first() {
                row = row.with_note(m.clone());
            }
            rep.rows.push(row);
        }
    }
    rep.note(format!("{blocks} differential blocks compared"));
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_fundamental_lemma(lab: &Lab) -> Result<CheckReport> {
    let (k1, k2) = (lab.cfg.k1, lab.cfg.k2);
    let seq = lab.sequence(k1, k2)?;
    let table = lab.table(k1, k2)?;
    let h = HilbertTable::compute(&lab.cache, lab.cfg.window, lab.mode());
    let opts = LengthOptions::for_dim(lab.d());
    let pts: Vec<(i64, i64)> = table.rows.keys().copied().collect();
    let forms = try_par_map(lab.mode(), &pts, |&(n1, n2)| {
        closed_forms(lab.ring(), lab.filt(), &seq, n1, n2, opts)
    })?;
    let mut rep = CheckReport::new("fundamental-lemma", lab.instance());
    for (&(n1, n2), cf) in pts.iter().zip(forms) {
        let Some(h1) = cf.h1 else { continue };
        let tail = table.signed_tail(2, n1, n2).expect("point of the table");
        let row = Comparison::new(
            "fundamental-lemma",
            vec![n1, n2],
            h.delta(k1, k2, n1, n2)?,
            cf.h0 - h1 + tail,
        );
        rep.rows.push(if cf.h1_heuristic {
            row.heuristic("first homology length from truncation stability")
        } else {
            row
        });
    }
    rep.notes.extend(lab.sequence_notes(&seq));
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_mixed_multiplicities(lab: &Lab) -> Result<CheckReport> {
    let e = lab.mixed()?;
    let fit = lab.hilbert()?;
    let seeds = lab.seeds();
    let opts = LengthOptions::for_dim(lab.d());
    let sop = sop_multiplicities(lab.ring(), lab.filt(), &seeds, opts)?;
    let mut rep = CheckReport::new("mixed-multiplicities", lab.instance());
    for (s, row) in sop.iter().enumerate() {
        for (i, &l) in row.iter().enumerate() {
            rep.rows.push(
                Comparison::new("fitted vs system of parameters", vec![i as i64, s as i64], e[i], l as i64)
                    .with_note(format!("seed {}", seeds[s])),
            );
        }
    }
    let fitted: Vec<_> = e.iter().map(|&v| v.into()).collect();
    if let Err(err) = cross_check_mixed(&fitted, &sop, &seeds) {
        rep.note(err.to_string());
    }
    rep.note(format!(
        "fit validated on [{}, {}]^2{}",
        fit.1.fit_from,
        fit.1.validated_to,
        if fit.1.extended { " after enlarging the window" } else { "" }
    ));
    Ok(rep.finish(Verdict::Pass))
}

pub fn check_difference_function(lab: &Lab) -> Result<CheckReport> {
    let d = lab.d();
    let fit = lab.hilbert()?;
    let p = &fit.1;
    let opts = LengthOptions::for_dim(d);
    let w = lab.cfg.window;
    let pts: Vec<(i64, i64)> = (1..=w.n1max)
        .flat_map(|a| (1..=w.n2max).map(move |b| (a, b)))
        .collect();
    let defect = |a: i64, b: i64| -> Result<i64> {
        let pv = p
            .value_i64(a, b)
            .ok_or_else(|| Error::FitUnstable(format!("P({a},{b}) is not an integer")))?;
        Ok(pv - lab.cache.length(a, b) as i64)
    };
    let mut rep = CheckReport::new("difference-function", lab.instance());
    for k in 0..=d {
        let seq = lab.sequence(k, d - k)?;
        let table = lab.table(k, d - k)?;
        let rhs = try_par_map(lab.mode(), &pts, |&(n1, n2)| {
            denominator_colength(lab.ring(), lab.filt(), &seq, n1, n2, opts)
        })?;
        for (&(n1, n2), den) in pts.iter().zip(rhs) {
            let tail = table.signed_tail(2, n1, n2).expect("point of the table");
            rep.rows.push(Comparison::new(
                "difference-function",
                vec![n1, n2, k as i64],
                delta2(defect, k, d - k, n1, n2)?,
                den as i64 - tail,
            ));
        }
        rep.notes.extend(lab.sequence_notes(&seq));
    }
    Ok(rep.finish(Verdict::Pass))
}

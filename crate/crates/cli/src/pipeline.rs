//! Named computations over a scenario, routed through the result cache.

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use fclab_core::exec::Parallelism;
use fclab_core::hilbert::{mixed_multiplicities, HilbertTable, LVariant};
use fclab_core::theorems::{run_check, CheckReport, Lab};

use crate::cache::{Entry, ResultCache};
use crate::report::RunReport;
use crate::scenario::Scenario;

pub struct Pipeline {
    pub scenario: Scenario,
    canonical: String,
    mode: Parallelism,
    cache: Option<ResultCache>,
    lab: Option<Lab>,
    pub hits: usize,
    pub misses: usize,
}

impl Pipeline {
    pub fn new(scenario: Scenario, mode: Parallelism, cache: Option<ResultCache>) -> Self {
        Self {
            canonical: scenario.canonical(),
            scenario,
            mode,
            cache,
            lab: None,
            hits: 0,
            misses: 0,
        }
    }

    pub fn lab(&mut self) -> Result<&Lab> {
        if self.lab.is_none() {
            self.lab = Some(Lab::new(self.scenario.lab_config(self.mode)?)?);
        }
        Ok(self.lab.as_ref().expect("just built"))
    }

    /// The payload of a computation, from the cache when possible.
    pub fn get(&mut self, computation: &str) -> Result<Value> {
        let Some(cache) = self.cache.clone() else {
            self.misses += 1;
            return compute(self.lab()?, computation);
        };
        let canonical = self.canonical.clone();
        let (v, hit) = cache.get_or_compute(&canonical, computation, json!({}), || {
            compute(self.lab()?, computation)
        })?;
        if hit {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        Ok(v)
    }

    pub fn check(&mut self, id: &str) -> Result<CheckReport> {
        let v = self.get(&format!("check/{id}"))?;
        Ok(serde_json::from_value(v)?)
    }

    /// Runs every check of the scenario.
    pub fn run(&mut self) -> Result<RunReport> {
        let ids = self.scenario.checks();
        let mut reports = Vec::with_capacity(ids.len());
        for id in &ids {
            log::info!("check {id}");
            reports.push(self.check(id)?);
        }
        Ok(RunReport::new(&self.scenario, reports))
    }
}

/// Computation ids: `check/<id>`, `seq/<k1>,<k2>`, `hilbert/table`,
/// `hilbert/fit`, `complex/homology/<k1>,<k2>`, `fiber/series`,
/// `fiber/coefficients`.
pub fn compute(lab: &Lab, computation: &str) -> Result<Value> {
    let shape = |s: &str| -> Result<(usize, usize)> {
        let (a, b) = s.split_once(',').context("shape must be k1,k2")?;
        Ok((a.parse()?, b.parse()?))
    };
    let v = if let Some(id) = computation.strip_prefix("check/") {
        serde_json::to_value(run_check(lab, id)?)?
    } else if let Some(s) = computation.strip_prefix("seq/") {
        let (k1, k2) = shape(s)?;
        serde_json::to_value(&*lab.sequence(k1, k2)?)?
    } else if let Some(s) = computation.strip_prefix("complex/homology/") {
        let (k1, k2) = shape(s)?;
        serde_json::to_value(&*lab.table(k1, k2)?)?
    } else {
        match computation {
            "hilbert/table" => serde_json::to_value(HilbertTable::compute(
                &lab.cache,
                lab.cfg.window,
                lab.mode(),
            ))?,
            "hilbert/fit" => {
                let h = lab.hilbert()?;
                let e: Vec<String> = mixed_multiplicities(&h.1)?
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                json!({ "polynomial": h.1, "mixed_multiplicities": e })
            }
            "fiber/series" => serde_json::to_value(&*lab.fiber()?)?,
            "fiber/coefficients" => {
                let s = lab.fiber()?;
                let mixed = lab.limit(LVariant::Mixed, lab.ring().seed)?;
                let second = if lab.filt().i1().contains_ideal(lab.filt().i2()) {
                    Some(lab.limit(LVariant::Second, lab.ring().seed)?.stable)
                } else {
                    None
                };
                json!({
                    "f": s.coeffs,
                    "fit_from": s.fit_from,
                    "colength_i1": lab.colength_i1(),
                    "limit": mixed.stable,
                    "limit_second": second,
                })
            }
            other => bail!("unknown computation `{other}`"),
        }
    };
    Ok(v)
}

/// Recomputes a cache entry from the scenario stored in it.
pub fn recompute(entry: &Entry, mode: Parallelism) -> Result<Value> {
    let scenario = Scenario::parse(&entry.scenario)?;
    let lab = Lab::new(scenario.lab_config(mode)?)?;
    compute(&lab, &entry.computation)
}

//! One checker per statement. Every checker computes its two sides through
//! separate routes (staircase counts and fits on one side, complexes and
//! colon lengths on the other) and returns a [`CheckReport`].

mod depth;
mod fiber;
mod lab;
mod structural;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sequence::Window;
use crate::verdict::{Comparison, Verdict};

pub use depth::check_depth_transfer;
pub use fiber::{
    check_coefficient_formulas, check_difference_identities, check_f0, check_f1_bound,
    check_fiber_fundamental, check_fiber_huneke, check_fiber_series, FiberData,
};
pub use lab::{Lab, LabConfig};
pub use structural::{
    check_difference_function, check_euler, check_fundamental_lemma, check_identifications,
    check_mixed_multiplicities, check_rigidity, check_ses, check_superficial, check_vanishing,
};

/// Every checker id, in report order.
pub const CHECK_IDS: &[&str] = &[
    "superficial",
    "euler",
    "identifications",
    "vanishing",
    "rigidity",
    "ses",
    "fundamental-lemma",
    "mixed-multiplicities",
    "difference-function",
    "fiber-series",
    "fiber-fundamental",
    "f0",
    "fiber-huneke",
    "difference-identities",
    "coefficient-formulas",
    "f1-bound",
    "depth-transfer",
];

pub fn is_check_id(id: &str) -> bool {
    CHECK_IDS.contains(&id)
}

/// What a report was computed on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub p: u32,
    pub vars: Vec<String>,
    pub i1: String,
    pub i2: String,
    pub k1: usize,
    pub k2: usize,
    /// Sequence elements in the order of the complex.
    pub sequence: Vec<String>,
    pub seed: u64,
    pub window: Window,
    pub fiber_nmax: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub instance: Instance,
    pub rows: Vec<Comparison>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(id: &str, instance: Instance) -> Self {
        Self {
            id: id.to_string(),
            instance,
            rows: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Verdict from the rows, capped below by `floor`. A report with no rows
    /// is inconclusive.
    pub fn finish(mut self, floor: Verdict) -> Self {
        self.verdict = if self.rows.is_empty() {
            Verdict::Inconclusive.and(floor)
        } else {
            Verdict::all(self.rows.iter().map(|r| r.verdict)).and(floor)
        };
        self
    }

    /// A report for a checker that could not run.
    pub fn from_error(id: &str, instance: Instance, err: &Error) -> Self {
        let verdict = match err {
            Error::CrossCheckFailed { .. } | Error::SignError(..) | Error::CacheCorrupt { .. } => {
                Verdict::Fail
            }
            _ => Verdict::Inconclusive,
        };
        Self {
            id: id.to_string(),
            instance,
            rows: Vec::new(),
            verdict,
            notes: vec![err.to_string()],
        }
    }
}

/// Runs one checker by id. Computational errors become a report; only an
/// unknown id is an error.
pub fn run_check(lab: &Lab, id: &str) -> crate::Result<CheckReport> {
    let res = match id {
        "superficial" => check_superficial(lab),
        "euler" => check_euler(lab),
        "identifications" => check_identifications(lab),
        "vanishing" => check_vanishing(lab),
        "rigidity" => check_rigidity(lab),
        "ses" => check_ses(lab),
        "fundamental-lemma" => check_fundamental_lemma(lab),
        "mixed-multiplicities" => check_mixed_multiplicities(lab),
        "difference-function" => check_difference_function(lab),
        "fiber-series" => check_fiber_series(lab),
        "fiber-fundamental" => check_fiber_fundamental(lab),
        "f0" => check_f0(lab),
        "fiber-huneke" => check_fiber_huneke(lab),
        "difference-identities" => check_difference_identities(lab),
        "coefficient-formulas" => check_coefficient_formulas(lab),
        "f1-bound" => check_f1_bound(lab),
        "depth-transfer" => check_depth_transfer(lab),
        other => {
            return Err(Error::Scenario(format!("unknown check `{other}`")));
        }
    };
    Ok(res.unwrap_or_else(|e| CheckReport::from_error(id, lab.instance(), &e)))
}

/// `(-1)^i` as an integer.
pub(crate) fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

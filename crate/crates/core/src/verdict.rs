//! Verdicts and per-point comparisons shared by all checkers.

use serde::{Deserialize, Serialize};

/// Ordered from best to worst; combining keeps the worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Passed, but some input was only established by truncation stability or
    /// within a finite window.
    HeuristicPass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        items.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::HeuristicPass)
    }

    /// Process exit code: 0 for (heuristic) pass, 2 for failure, 3 for
    /// inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::HeuristicPass => 0,
            Verdict::Fail => 2,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::HeuristicPass => "heuristic-pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// One checked instance of an identity or inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    /// The index values (bidegree, `n`, coefficient index, ...) at which the
    /// comparison was made.
    pub at: Vec<i64>,
    pub lhs: i64,
    pub rhs: i64,
    pub relation: Relation,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Comparison {
    pub fn new(label: impl Into<String>, at: Vec<i64>, lhs: i64, rhs: i64) -> Self {
        Self::with_relation(label, at, lhs, rhs, Relation::Eq)
    }

    pub fn with_relation(
        label: impl Into<String>,
        at: Vec<i64>,
        lhs: i64,
        rhs: i64,
        relation: Relation,
    ) -> Self {
        let verdict = if relation.holds(lhs, rhs) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            label: label.into(),
            at,
            lhs,
            rhs,
            relation,
            verdict,
            note: None,
        }
    }

    /// Downgrades a pass to a heuristic pass.
    pub fn heuristic(mut self, why: impl Into<String>) -> Self {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::HeuristicPass;
        }
        self.note = Some(why.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_wins() {
        assert_eq!(Verdict::Pass.and(Verdict::HeuristicPass), Verdict::HeuristicPass);
        assert_eq!(Verdict::Inconclusive.and(Verdict::Fail), Verdict::Fail);
        assert_eq!(Verdict::all([]), Verdict::Pass);
        assert_eq!(Verdict::Inconclusive.exit_code(), 3);
    }

    #[test]
    fn comparison_relations() {
        assert_eq!(Comparison::new("x", vec![], 2, 2).verdict, Verdict::Pass);
        assert_eq!(
            Comparison::with_relation("x", vec![], 3, 2, Relation::Le).verdict,
            Verdict::Fail
        );
        assert_eq!(
            Comparison::new("x", vec![], 1, 1).heuristic("stable").verdict,
            Verdict::HeuristicPass
        );
    }
}

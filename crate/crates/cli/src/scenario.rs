//! Scenario files: the ring, the two ideals, the sequence shape, the windows
//! and the checks to run.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use fclab_core::exec::Parallelism;
use fclab_core::field::DEFAULT_PRIME;
use fclab_core::filtration::Filtration;
use fclab_core::ring::{MonomialIdeal, RingSpec};
use fclab_core::sequence::Window;
use fclab_core::theorems::{is_check_id, LabConfig, CHECK_IDS};

pub const DEFAULT_WINDOW: [i64; 2] = [4, 4];
pub const DEFAULT_FIBER_NMAX: i64 = 6;
pub const DEFAULT_SEEDS: usize = 3;

/// A scenario as written by the user. Optional fields take defaults in
/// [`Scenario::resolved`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_prime")]
    pub p: u32,
    pub vars: Vec<String>,
    #[serde(rename = "I1")]
    pub i1: Vec<Vec<u32>>,
    #[serde(rename = "I2")]
    pub i2: Vec<Vec<u32>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<usize>,
    /// `[n1max, n2max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_nmax: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
}

fn default_prime() -> u32 {
    DEFAULT_PRIME
}

fn default_seed() -> u64 {
    1
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading scenario {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in scenario {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Every optional field filled in; the check list is kept in canonical
    /// order.
    pub fn resolved(&self) -> Scenario {
        let d = self.dim();
        let k1 = self.k1.unwrap_or(1.min(d));
        let mut checks: Vec<String> = match &self.checks {
            Some(c) => c.clone(),
            None => CHECK_IDS.iter().map(|s| s.to_string()).collect(),
        };
        checks.sort_by_key(|c| CHECK_IDS.iter().position(|id| id == c));
        checks.dedup();
        Scenario {
            k1: Some(k1),
            k2: Some(self.k2.unwrap_or(d.saturating_sub(k1))),
            window: Some(self.window.unwrap_or(DEFAULT_WINDOW)),
            fiber_nmax: Some(self.fiber_nmax.unwrap_or(DEFAULT_FIBER_NMAX)),
            seeds: Some(self.seeds.unwrap_or(DEFAULT_SEEDS)),
            checks: Some(checks),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            bail!("`vars` must name at least one variable");
        }
        let r = self.resolved();
        let (k1, k2) = (r.k1.unwrap(), r.k2.unwrap());
        if k1 + k2 == 0 || k1 + k2 > d {
            bail!("precondition: need 1 <= k1 + k2 <= d, got k1 = {k1}, k2 = {k2}, d = {d}");
        }
        let [a, b] = r.window.unwrap();
        if a < 0 || b < 0 {
            bail!("window bounds must be nonnegative");
        }
        if r.fiber_nmax.unwrap() < 3 {
            bail!("fiber_nmax must be at least 3");
        }
        if r.seeds.unwrap() == 0 {
            bail!("seeds must be at least 1");
        }
        for c in r.checks.as_deref().unwrap_or_default() {
            if !is_check_id(c) {
                bail!("unknown check `{c}`; known: {}", CHECK_IDS.join(", "));
            }
        }
        self.ring()?;
        self.filtration()?;
        Ok(())
    }

    pub fn ring(&self) -> Result<RingSpec> {
        Ok(RingSpec::new(self.p, self.vars.clone(), self.seed)?)
    }

    pub fn filtration(&self) -> Result<Filtration> {
        let d = self.dim();
        let i1 = MonomialIdeal::from_exponents(d, &self.i1).context("I1")?;
        let i2 = MonomialIdeal::from_exponents(d, &self.i2).context("I2")?;
        Ok(Filtration::new(i1, i2)?)
    }

    pub fn checks(&self) -> Vec<String> {
        self.resolved().checks.unwrap()
    }

    pub fn lab_config(&self, mode: Parallelism) -> Result<LabConfig> {
        let r = self.resolved();
        let [a, b] = r.window.unwrap();
        Ok(LabConfig {
            ring: self.ring()?,
            filt: self.filtration()?,
            k1: r.k1.unwrap(),
            k2: r.k2.unwrap(),
            window: Window::new(a, b),
            fiber_nmax: r.fiber_nmax.unwrap(),
            seeds: r.seeds.unwrap(),
            mode,
        })
    }

    /// Compact JSON of the resolved scenario; the input to cache keys and
    /// the copy embedded in reports.
    pub fn canonical(&self) -> String {
        serde_json::to_string(&self.resolved()).expect("scenario serializes")
    }
}

/// Parses `"4,4"`, `"4x4"` or a single `"4"`.
pub fn parse_window(s: &str) -> Result<[i64; 2]> {
    let parts: Vec<&str> = s.split([',', 'x']).map(str::trim).collect();
    let nums = parts
        .iter()
        .map(|p| p.parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad window `{s}`"))?;
    match nums[..] {
        [n] => Ok([n, n]),
        [a, b] => Ok([a, b]),
        _ => bail!("bad window `{s}`: expected N or N1,N2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: &str = r#"{"p":32003,"vars":["x","y"],"I1":[[1,0],[0,1]],"I2":[[2,0],[0,2]],"seed":1}"#;

    #[test]
    fn parses_and_defaults() {
        let s = Scenario::parse(E1).unwrap();
        let r = s.resolved();
        assert_eq!((r.k1, r.k2), (Some(1), Some(1)));
        assert_eq!(r.window, Some(DEFAULT_WINDOW));
        assert_eq!(r.checks.unwrap().len(), CHECK_IDS.len());
    }

    #[test]
    fn round_trip() {
        let s = Scenario::parse(E1).unwrap();
        let back = Scenario::parse(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
        let r = s.resolved();
        let back = Scenario::parse(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(r, back);
        assert_eq!(back.canonical(), s.canonical());
    }

    #[test]
    fn rejects_bad_input() {
        let too_long = E1.replace(r#""seed":1"#, r#""seed":1,"k1":2,"k2":1"#);
        assert!(Scenario::parse(&too_long).unwrap_err().to_string().contains("precondition"));
        let bad_check = E1.replace(r#""seed":1"#, r#""seed":1,"checks":["nope"]"#);
        assert!(Scenario::parse(&bad_check).is_err());
        let not_primary = E1.replace(r#"[[2,0],[0,2]]"#, r#"[[2,0]]"#);
        assert!(Scenario::parse(&not_primary).is_err());
        assert!(Scenario::parse(r#"{"vars":["x"]}"#).is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("4,5").unwrap(), [4, 5]);
        assert_eq!(parse_window("3x2").unwrap(), [3, 2]);
        assert_eq!(parse_window("6").unwrap(), [6, 6]);
        assert!(parse_window("a,b").is_err());
    }
}

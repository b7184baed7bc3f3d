use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use log::debug;

use super::Instance;
use crate::complex::HomologyTable;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::filtration::{Filtration, QuotientCache};
use crate::hilbert::{
    compute_l, fiber_series, fit_hilbert, limit_sequence, mixed_multiplicities,
    BivariatePolynomial, FiberSeries, HilbertTable, LVariant, LimitLength,
};
use crate::ring::RingSpec;
use crate::sequence::{derive_seed, generate_verified, SequenceSpec, Window};

/// Attempts made by [`generate_verified`] before giving up on a shape.
pub const RESEED_ATTEMPTS: usize = 5;

#[derive(Clone, Debug)]
pub struct LabConfig {
    pub ring: RingSpec,
    pub filt: Filtration,
    pub k1: usize,
    pub k2: usize,
    pub window: Window,
    pub fiber_nmax: i64,
    /// Number of seeds for quantities recomputed to expose seed dependence.
    pub seeds: usize,
    pub mode: Parallelism,
}

type Memo<K, T> = Mutex<BTreeMap<K, Arc<T>>>;

/// Shared, read-mostly state for the checkers: the quotient cache plus
/// memoized sequences, tables, fits and limit lengths. Only successful
/// computations are memoized.
pub struct Lab {
    pub cfg: LabConfig,
    pub cache: QuotientCache,
    seqs: Memo<(usize, usize), SequenceSpec>,
    tables: Memo<(usize, usize), HomologyTable>,
    strands: Memo<LVariant, HomologyTable>,
    second: Memo<(), SequenceSpec>,
    limits: Memo<(LVariant, u64), LimitLength>,
    hilbert: Memo<(), (HilbertTable, BivariatePolynomial)>,
    fiber: Memo<(), FiberSeries>,
}

fn memo<K: Ord + Clone, T>(
    map: &Memo<K, T>,
    key: K,
    f: impl FnOnce() -> Result<T>,
) -> Result<Arc<T>> {
    if let Some(v) = map.lock().expect("memo lock").get(&key) {
        return Ok(Arc::clone(v));
    }
    let v = Arc::new(f()?);
    let mut m = map.lock().expect("memo lock");
    Ok(Arc::clone(m.entry(key).or_insert(v)))
}

impl Lab {
    pub fn new(cfg: LabConfig) -> Result<Self> {
        let d = cfg.ring.dim();
        if cfg.filt.nvars() != d {
            return Err(Error::ArityMismatch {
                expected: d,
                got: cfg.filt.nvars(),
            });
        }
        let k = cfg.k1 + cfg.k2;
        if k == 0 || k > d {
            return Err(Error::Precondition(format!(
                "need 1 <= k1 + k2 <= d, got k1 + k2 = {k} with d = {d}"
            )));
        }
        let n1 = cfg.window.n1max.max(1) + 1;
        let n2 = cfg.window.n2max.max(cfg.fiber_nmax) + 1;
        let cache = QuotientCache::build(&cfg.filt, n1, n2, cfg.mode)?;
        Ok(Self {
            cfg,
            cache,
            seqs: Mutex::default(),
            tables: Mutex::default(),
            strands: Mutex::default(),
            second: Mutex::default(),
            limits: Mutex::default(),
            hilbert: Mutex::default(),
            fiber: Mutex::default(),
        })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.cfg.ring.dim()
    }

    #[inline]
    pub fn ring(&self) -> &RingSpec {
        &self.cfg.ring
    }

    #[inline]
    pub fn filt(&self) -> &Filtration {
        &self.cfg.filt
    }

    #[inline]
    pub fn mode(&self) -> Parallelism {
        self.cfg.mode
    }

    pub fn instance(&self) -> Instance {
        let ring = &self.cfg.ring;
        let sequence = self
            .sequence(self.cfg.k1, self.cfg.k2)
            .map(|s| {
                s.elements
                    .iter()
                    .map(|x| x.display(&ring.field, &ring.vars).to_string())
                    .collect()
            })
            .unwrap_or_default();
        Instance {
            p: ring.field.order(),
            vars: ring.vars.clone(),
            i1: self.cfg.filt.i1().display(&ring.vars).to_string(),
            i2: self.cfg.filt.i2().display(&ring.vars).to_string(),
            k1: self.cfg.k1,
            k2: self.cfg.k2,
            sequence,
            seed: ring.seed,
            window: self.cfg.window,
            fiber_nmax: self.cfg.fiber_nmax,
        }
    }

    /// Seeds used for recomputations; the first is the scenario seed.
    pub fn seeds(&self) -> Vec<u64> {
        let base = self.cfg.ring.seed;
        (0..self.cfg.seeds.max(1) as u64)
            .map(|s| if s == 0 { base } else { derive_seed(base, 1000 + s) })
            .collect()
    }

    /// The certified, superficiality-checked sequence of shape `(k1, k2)`.
    pub fn sequence(&self, k1: usize, k2: usize) -> Result<Arc<SequenceSpec>> {
        memo(&self.seqs, (k1, k2), || {
            debug!("generating sequence of shape ({k1}, {k2})");
            generate_verified(
                &self.cfg.ring,
                &self.cfg.filt,
                k1,
                k2,
                self.cfg.window,
                RESEED_ATTEMPTS,
                self.cfg.mode,
            )
        })
    }

    /// `h_i(n1,n2)` over the scenario window for the shape `(k1, k2)`.
    pub fn table(&self, k1: usize, k2: usize) -> Result<Arc<HomologyTable>> {
        memo(&self.tables, (k1, k2), || {
            let seq = self.sequence(k1, k2)?;
            HomologyTable::scan(
                &self.cfg.ring.field,
                &self.cache,
                &seq,
                self.cfg.window,
                self.cfg.mode,
            )
        })
    }

    /// The sequence behind a limit-length variant.
    pub fn variant_sequence(&self, variant: LVariant) -> Result<Arc<SequenceSpec>> {
        match variant {
            LVariant::Mixed => {
                self.need_fiber_dim()?;
                self.sequence(1, self.d() - 1)
            }
            LVariant::Second => memo(&self.second, (), || {
                limit_sequence(&self.cfg.ring, &self.cfg.filt, variant, self.cfg.ring.seed)
            }),
        }
    }

    /// `h_i(1, n)` for `n = 0..=fiber_nmax` on the variant's sequence.
    pub fn strand_table(&self, variant: LVariant) -> Result<Arc<HomologyTable>> {
        memo(&self.strands, variant, || {
            let seq = self.variant_sequence(variant)?;
            let nmax = self.cfg.fiber_nmax;
            let pts: Vec<(i64, i64)> = (0..=nmax).map(|n| (1, n)).collect();
            HomologyTable::scan_points(
                &self.cfg.ring.field,
                &self.cache,
                &seq,
                Window::new(1, nmax),
                &pts,
                self.cfg.mode,
            )
        })
    }

    /// Limit length of a variant for one seed. The scenario seed uses the
    /// same sequence as the complexes.
    pub fn limit(&self, variant: LVariant, seed: u64) -> Result<Arc<LimitLength>> {
        memo(&self.limits, (variant, seed), || {
            let seq = if seed == self.cfg.ring.seed {
                (*self.variant_sequence(variant)?).clone()
            } else {
                limit_sequence(&self.cfg.ring, &self.cfg.filt, variant, seed)?
            };
            compute_l(
                &self.cfg.ring,
                &self.cfg.filt,
                &seq,
                variant,
                self.cfg.fiber_nmax,
                self.cfg.mode,
            )
        })
    }

    /// Square window used for the bivariate fit.
    pub fn fit_window(&self) -> Window {
        let w = self.cfg.window;
        let n = w.n1max.max(w.n2max).max(self.d() as i64 + 4);
        Window::new(n, n)
    }

    pub fn hilbert(&self) -> Result<Arc<(HilbertTable, BivariatePolynomial)>> {
        memo(&self.hilbert, (), || {
            fit_hilbert(&self.cfg.filt, self.d(), self.fit_window(), self.cfg.mode)
        })
    }

    /// `e_0, ..., e_d` from the fit.
    pub fn mixed(&self) -> Result<Vec<i64>> {
        let h = self.hilbert()?;
        mixed_multiplicities(&h.1)?
            .into_iter()
            .map(|e| {
                i64::try_from(e)
                    .map_err(|_| Error::FitUnstable("mixed multiplicity exceeds i64".into()))
            })
            .collect()
    }

    pub fn fiber(&self) -> Result<Arc<FiberSeries>> {
        self.need_fiber_dim()?;
        memo(&self.fiber, (), || {
            fiber_series(&self.cache, self.d(), self.cfg.fiber_nmax)
        })
    }

    /// `ℓ(R/I1)`.
    pub fn colength_i1(&self) -> i64 {
        self.cache.length(1, 0) as i64
    }

    /// `H_F(1,n) − H_F(0,n)`: the fiber function, equal to `ℓ(R/I1)` for
    /// `n < 0`.
    pub fn fiber_difference(&self, n: i64) -> i64 {
        self.cache.length(1, n) as i64 - self.cache.length(0, n) as i64
    }

    pub(crate) fn need_fiber_dim(&self) -> Result<()> {
        if self.d() < 2 {
            return Err(Error::Precondition(
                "fiber-cone statements need d >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Notes on sequences that did not pass certification or the
    /// superficiality check.
    pub fn sequence_notes(&self, seq: &SequenceSpec) -> Vec<String> {
        let mut out = Vec::new();
        if !seq.is_certified() {
            out.push(format!(
                "sequence of shape ({}, {}) is not a certified partial system of parameters",
                seq.k1, seq.k2
            ));
        }
        if !seq.is_superficial() {
            out.push(format!(
                "sequence of shape ({}, {}) failed the superficiality check within the window",
                seq.k1, seq.k2
            ));
        }
        out
    }
}

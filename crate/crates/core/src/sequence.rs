//! Seeded generic sequences `x_11..x_1k1 ∈ I1`, `x_21..x_2k2 ∈ I2` and their
//! verification (superficiality over a window, system-of-parameters
//! certification).

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{par_map, Parallelism};
use crate::filtration::Filtration;
use crate::linalg::length::{length_of_quotient, length_modulo_monomial, LengthOptions};
use crate::ring::{MonomialIdeal, Polynomial, RingSpec};

/// A random GF(p)-combination (nonzero coefficients) of the minimal
/// generators of `ideal`.
pub fn generic_element(ring: &RingSpec, ideal: &MonomialIdeal, rng: &mut ChaCha8Rng) -> Polynomial {
    let p = ring.field.order();
    let terms: Vec<_> = ideal
        .gens()
        .iter()
        .map(|m| (*m, rng.gen_range(1..p)))
        .collect();
    Polynomial::from_terms(&ring.field, ring.dim(), terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SopCertificate {
    pub certified: bool,
    /// `ℓ(R/(x))` for the full system of parameters, when certified.
    pub length: Option<usize>,
    /// Elements appended to reach `d` elements (empty for full sequences).
    pub extension: Vec<Polynomial>,
    pub diagnostics: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub k1: usize,
    pub k2: usize,
    /// `k1` elements of `I1` followed by `k2` elements of `I2`.
    pub elements: Vec<Polynomial>,
    pub seed: u64,
    pub sop: Option<SopCertificate>,
    pub superficial: Option<SuperficialReport>,
    /// Seeds tried before this one was accepted.
    pub rejected_seeds: Vec<u64>,
}

impl SequenceSpec {
    /// Deterministic in `seed`; rejects `k1 + k2 > d`.
    pub fn generate(
        ring: &RingSpec,
        filt: &Filtration,
        k1: usize,
        k2: usize,
        seed: u64,
    ) -> Result<Self> {
        if k1 + k2 > ring.dim() {
            return Err(Error::Precondition(format!(
                "k1 + k2 = {} exceeds the dimension {}",
                k1 + k2,
                ring.dim()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut elements = Vec::with_capacity(k1 + k2);
        for _ in 0..k1 {
            elements.push(generic_element(ring, filt.i1(), &mut rng));
        }
        for _ in 0..k2 {
            elements.push(generic_element(ring, filt.i2(), &mut rng));
        }
        Ok(Self::from_elements(k1, k2, elements, seed))
    }

    /// Wraps explicitly chosen elements (e.g. non-generic probes).
    pub fn from_elements(k1: usize, k2: usize, elements: Vec<Polynomial>, seed: u64) -> Self {
        assert_eq!(elements.len(), k1 + k2, "element count must equal k1 + k2");
        Self {
            k1,
            k2,
            elements,
            seed,
            sop: None,
            superficial: None,
            rejected_seeds: Vec::new(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn first(&self) -> &[Polynomial] {
        &self.elements[..self.k1]
    }

    pub fn second(&self) -> &[Polynomial] {
        &self.elements[self.k1..]
    }

    /// Slot (1 or 2) of element `t`.
    pub fn slot(&self, t: usize) -> usize {
        if t < self.k1 {
            1
        } else {
            2
        }
    }

    /// The subsequence keeping the first `a` elements of `I1` and the first
    /// `b` elements of `I2`.
    pub fn truncate(&self, a: usize, b: usize) -> SequenceSpec {
        assert!(a <= self.k1 && b <= self.k2);
        let mut elements = self.elements[..a].to_vec();
        elements.extend_from_slice(&self.elements[self.k1..self.k1 + b]);
        SequenceSpec::from_elements(a, b, elements, self.seed)
    }

    /// Certifies regularity. A full-length sequence is certified by finite
    /// colength; a shorter one by a generic extension (elements of `I2`) to a
    /// full system of parameters.
    pub fn certify_sop(&mut self, ring: &RingSpec, filt: &Filtration, opts: LengthOptions) -> bool {
        let d = ring.dim();
        let mut all = self.elements.clone();
        let mut extension = Vec::new();
        if all.len() < d {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_0f_e87e);
            while all.len() < d {
                let g = generic_element(ring, filt.i2(), &mut rng);
                extension.push(g.clone());
                all.push(g);
            }
        }
        let cert = match certify_full(ring, &all, opts) {
            Ok(len) => SopCertificate {
                certified: true,
                length: Some(len),
                extension,
                diagnostics: None,
            },
            Err(e) => SopCertificate {
                certified: false,
                length: None,
                extension,
                diagnostics: Some(e.to_string()),
            },
        };
        let ok = cert.certified;
        self.sop = Some(cert);
        ok
    }

    pub fn is_certified(&self) -> bool {
        self.sop.as_ref().is_some_and(|c| c.certified)
    }

    pub fn is_superficial(&self) -> bool {
        self.superficial.as_ref().is_some_and(|r| r.pass)
    }
}

/// `ℓ(R/(elements))` for `d` elements; errors if not of finite length.
pub fn certify_full(ring: &RingSpec, elements: &[Polynomial], opts: LengthOptions) -> Result<usize> {
    if elements.len() != ring.dim() {
        return Err(Error::Precondition(format!(
            "a system of parameters needs {} elements, got {}",
            ring.dim(),
            elements.len()
        )));
    }
    Ok(length_of_quotient(&ring.field, ring.dim(), elements, opts)?.length)
}

/// Rectangle `[0..=n1max] x [0..=n2max]`; empty when either bound is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub n1max: i64,
    pub n2max: i64,
}

impl Window {
    pub fn new(n1max: i64, n2max: i64) -> Self {
        Self { n1max, n2max }
    }

    pub fn is_empty(&self) -> bool {
        self.n1max < 0 || self.n2max < 0
    }

    pub fn points(&self) -> Vec<(i64, i64)> {
        if self.is_empty() {
            return Vec::new();
        }
        (0..=self.n1max)
            .flat_map(|a| (0..=self.n2max).map(move |b| (a, b)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectPoint {
    pub n1: i64,
    pub n2: i64,
    pub defect: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCheck {
    pub index: usize,
    pub slot: usize,
    pub checked: usize,
    pub failures: Vec<DefectPoint>,
    /// Smallest `t` such that every checked bidegree with own-slot index
    /// `>= t` passes.
    pub holds_from: Option<i64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperficialReport {
    pub window: Window,
    pub elements: Vec<ElementCheck>,
    pub pass: bool,
}

/// Superficiality defect of `x` modulo `prev` at `(n1,n2)`:
/// `ℓ((F + P : x) / (F' + P))`, computed as
/// `ℓ(R/(F'+P)) − ℓ(R/(F+P)) + ℓ(R/(F+P+(x)))`, where `F'` lowers the
/// index of the element's own slot by one.
pub fn superficial_defect(
    ring: &RingSpec,
    filt: &Filtration,
    prev: &[Polynomial],
    x: &Polynomial,
    slot: usize,
    n1: i64,
    n2: i64,
) -> usize {
    let f = filt.ideal(n1, n2);
    let lower = if slot == 1 {
        filt.ideal(n1 - 1, n2)
    } else {
        filt.ideal(n1, n2 - 1)
    };
    let field = &ring.field;
    let a = length_modulo_monomial(field, &lower, prev).length;
    let b = length_modulo_monomial(field, &f, prev).length;
    let mut with_x = prev.to_vec();
    with_x.push(x.clone());
    let c = length_modulo_monomial(field, &f, &with_x).length;
    (a + c)
        .checked_sub(b)
        .expect("length of a colon quotient is nonnegative")
}

/// Checks every element, modulo the earlier ones, over the window. An element
/// passes when the identity holds from some own-slot index on, with at least
/// two index rows of evidence.
pub fn verify_superficial(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    window: Window,
    mode: Parallelism,
) -> SuperficialReport {
    let pts = window.points();
    let mut elements = Vec::new();
    for (t, x) in seq.elements.iter().enumerate() {
        let slot = seq.slot(t);
        let prev = &seq.elements[..t];
        let own = |p: &(i64, i64)| if slot == 1 { p.0 } else { p.1 };
        let todo: Vec<(i64, i64)> = pts.iter().copied().filter(|p| own(p) >= 1).collect();
        let defects = par_map(mode, &todo, |&(n1, n2)| {
            superficial_defect(ring, filt, prev, x, slot, n1, n2)
        });
        let failures: Vec<DefectPoint> = todo
            .iter()
            .zip(&defects)
            .filter(|(_, &d)| d != 0)
            .map(|(&(n1, n2), &defect)| DefectPoint { n1, n2, defect })
            .collect();
        let top = if slot == 1 { window.n1max } else { window.n2max };
        let holds_from = if todo.is_empty() {
            None
        } else {
            let last_bad = failures
                .iter()
                .map(|f| if slot == 1 { f.n1 } else { f.n2 })
                .max();
            let t0 = last_bad.map_or(1, |b| b + 1);
            (t0 <= top).then_some(t0)
        };
        let pass = todo.is_empty() || holds_from.is_some_and(|t0| top - t0 >= 1);
        debug!(
            "element {t} (slot {slot}): {} failures, holds from {:?}",
            failures.len(),
            holds_from
        );
        elements.push(ElementCheck {
            index: t,
            slot,
            checked: todo.len(),
            failures,
            holds_from,
            pass,
        });
    }
    let pass = elements.iter().all(|e| e.pass);
    SuperficialReport {
        window,
        elements,
        pass,
    }
}

/// Generates, certifies and verifies a sequence, reseeding on failure up to
/// `attempts` times. The last attempt is returned even if it failed; the
/// caller inspects the flags.
pub fn generate_verified(
    ring: &RingSpec,
    filt: &Filtration,
    k1: usize,
    k2: usize,
    window: Window,
    attempts: usize,
    mode: Parallelism,
) -> Result<SequenceSpec> {
    let opts = LengthOptions::for_dim(ring.dim());
    let mut rejected = Vec::new();
    let mut last = None;
    for a in 0..attempts.max(1) {
        let seed = derive_seed(ring.seed, a as u64);
        let mut seq = SequenceSpec::generate(ring, filt, k1, k2, seed)?;
        let sop_ok = seq.certify_sop(ring, filt, opts);
        let report = verify_superficial(ring, filt, &seq, window, mode);
        let sup_ok = report.pass;
        seq.superficial = Some(report);
        seq.rejected_seeds = rejected.clone();
        if sop_ok && sup_ok {
            if a > 0 {
                info!("sequence accepted after {a} reseeds (seed {seed})");
            }
            return Ok(seq);
        }
        info!("seed {seed} rejected: sop certified {sop_ok}, superficial {sup_ok}");
        rejected.push(seed);
        last = Some(seq);
    }
    Ok(last.expect("at least one attempt"))
}

/// Seed for the `attempt`-th try; attempt 0 uses the base seed itself.
pub fn derive_seed(base: u64, attempt: u64) -> u64 {
    base.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn e1() -> (RingSpec, Filtration) {
        let ring = RingSpec::standard(2, 1).unwrap();
        let i1 = MonomialIdeal::maximal(2);
        let i2 = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        (ring, Filtration::new(i1, i2).unwrap())
    }

    #[test]
    fn generation_is_deterministic() {
        let (ring, filt) = e1();
        let a = SequenceSpec::generate(&ring, &filt, 1, 1, 7).unwrap();
        let b = SequenceSpec::generate(&ring, &filt, 1, 1, 7).unwrap();
        assert_eq!(a, b);
        let c = SequenceSpec::generate(&ring, &filt, 1, 1, 8).unwrap();
        assert_ne!(a, c);
        assert_eq!(a.elements[0].terms().len(), 2);
        assert!(a.elements[0].terms().iter().all(|(_, c)| *c != 0));
    }

    #[test]
    fn too_long_rejected() {
        let (ring, filt) = e1();
        assert!(matches!(
            SequenceSpec::generate(&ring, &filt, 2, 1, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sop_of_linear_and_quadric() {
        let (ring, filt) = e1();
        let mut s = SequenceSpec::generate(&ring, &filt, 1, 1, 1).unwrap();
        assert!(s.certify_sop(&ring, &filt, LengthOptions::for_dim(2)));
        assert_eq!(s.sop.as_ref().unwrap().length, Some(2));
    }

    #[test]
    fn multiples_of_x_are_not_sop() {
        let (ring, filt) = e1();
        let f = &ring.field;
        let x = Monomial::var(2, 0);
        let xy = Monomial::new(&[1, 1]).unwrap();
        let a = Polynomial::monomial(x);
        let b = Polynomial::from_terms(f, 2, [(x, 1), (xy, 1)]);
        let mut s = SequenceSpec::from_elements(1, 1, vec![a, b], 0);
        assert!(!s.certify_sop(&ring, &filt, LengthOptions::for_dim(2)));
    }

    #[test]
    fn empty_window_is_vacuous() {
        let (ring, filt) = e1();
        let s = SequenceSpec::generate(&ring, &filt, 1, 1, 1).unwrap();
        let r = verify_superficial(&ring, &filt, &s, Window::new(-1, -1), Parallelism::Sequential);
        assert!(r.pass);
    }
}

//! The limit lengths `L = lim ℓ(I1 I2^n / (x I2^n + x_{2,d-1} I1 I2^(n-1)))`,
//! with `x` either an element of `I1` or a `d`-th element of `I2`.

use serde::{Deserialize, Serialize};

use crate::complex::identify::mixed_denominator;
use crate::error::{Error, Result};
use crate::exec::{try_par_map, Parallelism};
use crate::filtration::Filtration;
use crate::linalg::{length_of_quotient, LengthOptions};
use crate::ring::RingSpec;
use crate::sequence::SequenceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LVariant {
    /// `x_1 ∈ I1` with `d-1` elements of `I2`.
    Mixed,
    /// `d` elements of `I2`, the last one in the place of `x_1`.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitLength {
    pub variant: LVariant,
    pub seed: u64,
    /// `(n, ℓ_n)` for `n = 1..=nmax`.
    pub values: Vec<(i64, i64)>,
    pub stable: i64,
    /// First `n` from which the values are constant to the end of the window.
    pub stable_from: i64,
}

impl LimitLength {
    pub fn at(&self, n: i64) -> Option<i64> {
        self.values.iter().find(|(m, _)| *m == n).map(|&(_, v)| v)
    }
}

/// The sequence used for a variant, arranged with `k1 = 1` so that the
/// denominator is `x_1 F_(0,n) + x_2 F_(1,n-1)`.
pub fn limit_sequence(
    ring: &RingSpec,
    filt: &Filtration,
    variant: LVariant,
    seed: u64,
) -> Result<SequenceSpec> {
    let d = ring.dim();
    if d < 2 {
        return Err(Error::Precondition("limit lengths need d >= 2".into()));
    }
    match variant {
        LVariant::Mixed => SequenceSpec::generate(ring, filt, 1, d - 1, seed),
        LVariant::Second => {
            if !filt.i1().contains_ideal(filt.i2()) {
                return Err(Error::Precondition(
                    "the second limit length needs I2 ⊆ I1 so that the denominator lies in I1 I2^n"
                        .into(),
                ));
            }
            let s = SequenceSpec::generate(ring, filt, 0, d, seed)?;
            let mut el = vec![s.elements[d - 1].clone()];
            el.extend_from_slice(&s.elements[..d - 1]);
            Ok(SequenceSpec::from_elements(1, d - 1, el, seed))
        }
    }
}

/// `ℓ_n = ℓ(R/D_n) - ℓ(R/I1 I2^n)` for `n = 1..=nmax`; stable when the last
/// three values agree.
pub fn compute_l(
    ring: &RingSpec,
    filt: &Filtration,
    seq: &SequenceSpec,
    variant: LVariant,
    nmax: i64,
    mode: Parallelism,
) -> Result<LimitLength> {
    if seq.k1 != 1 || seq.len() != ring.dim() {
        return Err(Error::Precondition(
            "limit lengths need one element in the first slot and d - 1 in the second".into(),
        ));
    }
    let opts = LengthOptions::for_dim(ring.dim());
    let ns: Vec<i64> = (1..=nmax).collect();
    let ls = try_par_map(mode, &ns, |&n| {
        let gens = mixed_denominator(filt, seq, 1, n);
        let ld = length_of_quotient(&ring.field, ring.dim(), &gens, opts)?.length as i64;
        Ok::<_, Error>(ld - filt.quotient(1, n).len() as i64)
    })?;
    let values: Vec<(i64, i64)> = ns.into_iter().zip(ls).collect();
    let k = values.len();
    if k < 3 || values[k - 3].1 != values[k - 1].1 || values[k - 2].1 != values[k - 1].1 {
        return Err(Error::NotStabilized(nmax.max(0) as usize));
    }
    let stable = values[k - 1].1;
    let stable_from = values
        .iter()
        .rev()
        .take_while(|(_, v)| *v == stable)
        .last()
        .map(|&(n, _)| n)
        .unwrap_or(nmax);
    Ok(LimitLength {
        variant,
        seed: seq.seed,
        values,
        stable,
        stable_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MonomialIdeal;

    fn e1() -> (RingSpec, Filtration) {
        let ring = RingSpec::standard(2, 1).unwrap();
        let i1 = MonomialIdeal::maximal(2);
        let i2 = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        (ring, Filtration::new(i1, i2).unwrap())
    }

    #[test]
    fn e1_limits() {
        let (ring, filt) = e1();
        let s1 = limit_sequence(&ring, &filt, LVariant::Mixed, 1).unwrap();
        let l1 = compute_l(&ring, &filt, &s1, LVariant::Mixed, 5, Parallelism::Sequential).unwrap();
        assert_eq!(l1.stable, 1);
        let s2 = limit_sequence(&ring, &filt, LVariant::Second, 1).unwrap();
        let l2 = compute_l(&ring, &filt, &s2, LVariant::Second, 5, Parallelism::Sequential).unwrap();
        assert_eq!(l2.stable, 3);
    }

    #[test]
    fn second_variant_needs_containment() {
        let ring = RingSpec::standard(2, 1).unwrap();
        let i1 = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let filt = Filtration::new(i1, MonomialIdeal::maximal(2)).unwrap();
        assert!(matches!(
            limit_sequence(&ring, &filt, LVariant::Second, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn short_window_not_stabilized() {
        let (ring, filt) = e1();
        let s1 = limit_sequence(&ring, &filt, LVariant::Mixed, 1).unwrap();
        assert!(matches!(
            compute_l(&ring, &filt, &s1, LVariant::Mixed, 2, Parallelism::Sequential),
            Err(Error::NotStabilized(2))
        ));
    }
}

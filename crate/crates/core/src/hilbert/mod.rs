//! Bivariate Hilbert functions `H_F(n1,n2) = ℓ(R/I1^n1 I2^n2)`, finite
//! differences, polynomial fits, mixed multiplicities, the fiber-cone series
//! and its limit lengths.

pub mod fiber;
pub mod fit;
pub mod limit;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{par_map, Parallelism};
use crate::filtration::QuotientCache;
use crate::sequence::Window;

pub use fiber::{difference_identities, fiber_series, fit_fiber, FiberSeries};
pub use fit::{fit_bivariate, fit_hilbert, mixed_multiplicities, sop_multiplicities, BivariatePolynomial};
pub use limit::{compute_l, limit_sequence, LVariant, LimitLength};

/// `H_F` on a window. Negative indices are clipped to zero, matching the
/// filtration, so `H_F(n1,n2) = 0` whenever both are `<= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertTable {
    pub window: Window,
    #[serde(with = "crate::util::bidegree_map")]
    pub values: BTreeMap<(i64, i64), i64>,
}

impl HilbertTable {
    /// Staircase counts from the quotient cache.
    pub fn compute(cache: &QuotientCache, window: Window, mode: Parallelism) -> Self {
        let pts = window.points();
        let vals = par_map(mode, &pts, |&(a, b)| cache.length(a, b) as i64);
        Self {
            window,
            values: pts.into_iter().zip(vals).collect(),
        }
    }

    pub fn get(&self, n1: i64, n2: i64) -> Result<i64> {
        let key = (n1.max(0), n2.max(0));
        self.values
            .get(&key)
            .copied()
            .ok_or(Error::WindowUnderflow(n1, n2))
    }

    /// `Δ^{k1,k2} H_F(n1,n2)`.
    pub fn delta(&self, k1: usize, k2: usize, n1: i64, n2: i64) -> Result<i64> {
        delta2(|a, b| self.get(a, b), k1, k2, n1, n2)
    }
}

/// `Σ_i (-1)^i Σ_j C(k1,i-j) C(k2,j) f(n1-(i-j), n2-j)`.
pub fn delta2(
    f: impl Fn(i64, i64) -> Result<i64>,
    k1: usize,
    k2: usize,
    n1: i64,
    n2: i64,
) -> Result<i64> {
    let mut acc = 0i64;
    for a in 0..=k1 {
        for b in 0..=k2 {
            let c = small_binomial(k1, a) * small_binomial(k2, b);
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            acc += sign * c * f(n1 - a as i64, n2 - b as i64)?;
        }
    }
    Ok(acc)
}

/// Backward difference `Δ^j g(n) = Σ_s (-1)^s C(j,s) g(n-s)`.
pub fn delta1<T>(g: impl Fn(i64) -> T, j: usize, n: i64) -> T
where
    T: Zero + std::ops::Neg<Output = T> + std::ops::Mul<T, Output = T> + From<i64>,
{
    let mut acc = T::zero();
    for s in 0..=j {
        let c = T::from(small_binomial(j, s));
        let term = c * g(n - s as i64);
        acc = if s % 2 == 0 { acc + term } else { acc + -term };
    }
    acc
}

pub fn small_binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

/// The binomial polynomial `x(x-1)...(x-r+1)/r!` at an integer `x`; zero for
/// `r < 0`.
pub fn binomial(x: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..r {
        num *= BigInt::from(x - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Filtration;
    use crate::ring::MonomialIdeal;

    #[test]
    fn binomial_polynomial() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
        assert_eq!(binomial(-2, 3), BigInt::from(-4));
        assert_eq!(binomial(3, 0), BigInt::from(1));
        assert_eq!(binomial(2, 5), BigInt::from(0));
    }

    #[test]
    fn e1_table_and_delta() {
        let i1 = MonomialIdeal::maximal(2);
        let i2 = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let f = Filtration::new(i1, i2).unwrap();
        let cache = QuotientCache::build(&f, 3, 3, Parallelism::Sequential).unwrap();
        let t = HilbertTable::compute(&cache, Window::new(3, 3), Parallelism::Sequential);
        assert_eq!(t.get(1, 1).unwrap(), 6);
        assert_eq!(t.get(0, 1).unwrap(), 4);
        assert_eq!(t.get(0, 0).unwrap(), 0);
        assert_eq!(t.get(-2, -1).unwrap(), 0);
        assert_eq!(t.delta(1, 1, 1, 1).unwrap(), 1);
        assert_eq!(t.delta(0, 0, 2, 3).unwrap(), t.get(2, 3).unwrap());
        assert!(matches!(t.get(5, 0), Err(Error::WindowUnderflow(5, 0))));
    }

    #[test]
    fn delta_of_constant_vanishes() {
        for (k1, k2) in [(1, 0), (0, 1), (2, 1)] {
            assert_eq!(delta2(|_, _| Ok(7), k1, k2, 3, 3).unwrap(), 0);
        }
        assert_eq!(delta1(|_| 5i64, 2, 0), 0);
        assert_eq!(delta1(|n| n * n, 2, 4), 2);
    }
}

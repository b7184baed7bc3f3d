//! The fiber-cone Hilbert function `H(F, n) = ℓ(I2^n / I1 I2^n)` and its
//! polynomial `P(F, n) = Σ_i (-1)^i f_i C(n+d-1-i, d-1-i)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::fit::solve_rational;
use super::{binomial, delta1};
use crate::error::{Error, Result};
use crate::filtration::QuotientCache;
use crate::verdict::{Comparison, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSeries {
    pub d: usize,
    pub nmax: i64,
    /// `H(F, n)` for `n = 0..=nmax`.
    pub values: Vec<i64>,
    /// `f_0, ..., f_{d-1}`.
    pub coeffs: Vec<i64>,
    /// `P(F, n) = H(F, n)` for `fit_from <= n <= nmax`.
    pub fit_from: i64,
    /// `Δ^{d-1-i} P(-1) = (-1)^i f_i` and `Δ^{d-1-i} P(0) = Σ_{j<=i} (-1)^j f_j`.
    pub lemma: Vec<Comparison>,
    pub verdict: Verdict,
}

/// `ℓ(R/I1 I2^n) - ℓ(R/I2^n)` for `n = 0..=nmax`.
pub fn fiber_values(cache: &QuotientCache, nmax: i64) -> Vec<i64> {
    (0..=nmax)
        .map(|n| cache.length(1, n) as i64 - cache.length(0, n) as i64)
        .collect()
}

pub fn fiber_series(cache: &QuotientCache, d: usize, nmax: i64) -> Result<FiberSeries> {
    fit_fiber(fiber_values(cache, nmax), d)
}

fn basis(d: usize, i: usize, n: i64) -> BigInt {
    let r = (d - 1 - i) as i64;
    let b = binomial(n + r, r);
    if i % 2 == 0 {
        b
    } else {
        -b
    }
}

impl FiberSeries {
    /// `P(F, n)` at any integer `n`.
    pub fn poly(&self, n: i64) -> i64 {
        let v: BigInt = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &f)| BigInt::from(f) * basis(self.d, i, n))
            .sum();
        v.to_i64().expect("fiber polynomial value fits in i64")
    }

    /// `H(F, n)` in the graded convention: zero for `n < 0`.
    pub fn h(&self, n: i64) -> Option<i64> {
        if n < 0 {
            Some(0)
        } else {
            self.values.get(n as usize).copied()
        }
    }

    /// `P(F, n) - H(F, n)`, with `H` zero in negative degrees; zero from
    /// `fit_from` on.
    pub fn defect(&self, n: i64) -> i64 {
        if n >= self.fit_from {
            0
        } else {
            self.poly(n) - self.h(n).unwrap_or(0)
        }
    }
}

/// Fits on `d` consecutive values starting at the first `a` for which the
/// fit reproduces every value from `a` to the end, with at least three
/// validation points.
pub fn fit_fiber(values: Vec<i64>, d: usize) -> Result<FiberSeries> {
    if d == 0 {
        return Err(Error::Precondition("the fiber cone needs d >= 1".into()));
    }
    let nmax = values.len() as i64 - 1;
    let mut a = 0i64;
    while a + d as i64 + 2 <= nmax {
        let pts: Vec<i64> = (a..a + d as i64).collect();
        let m: Vec<Vec<BigRational>> = pts
            .iter()
            .map(|&n| (0..d).map(|i| BigRational::from_integer(basis(d, i, n))).collect())
            .collect();
        let rhs: Vec<BigRational> = pts
            .iter()
            .map(|&n| BigRational::from_integer(values[n as usize].into()))
            .collect();
        if let Some(sol) = solve_rational(m, rhs) {
            let coeffs: Option<Vec<i64>> = sol
                .iter()
                .map(|c| {
                    if c.is_integer() {
                        c.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect();
            if let Some(coeffs) = coeffs {
                let mut s = FiberSeries {
                    d,
                    nmax,
                    values: values.clone(),
                    coeffs,
                    fit_from: a,
                    lemma: Vec::new(),
                    verdict: Verdict::Pass,
                };
                if (a..=nmax).all(|n| s.poly(n) == values[n as usize]) {
                    s.lemma = lemma_rows(&s);
                    s.verdict = Verdict::all(s.lemma.iter().map(|c| c.verdict));
                    return Ok(s);
                }
            }
        }
        a += 1;
    }
    Err(Error::FitUnstable(format!(
        "no degree-{} fit of the fiber series validates up to n = {nmax}",
        d - 1
    )))
}

fn lemma_rows(s: &FiberSeries) -> Vec<Comparison> {
    let mut out = Vec::new();
    let mut partial = 0i64;
    for i in 0..s.d {
        let f = s.coeffs[i];
        let sign = if i % 2 == 0 { 1 } else { -1 };
        partial += sign * f;
        let j = s.d - 1 - i;
        out.push(Comparison::new(
            "diff-at-minus-one",
            vec![i as i64],
            delta1(|n| s.poly(n), j, -1),
            sign * f,
        ));
        out.push(Comparison::new(
            "diff-at-zero",
            vec![i as i64],
            delta1(|n| s.poly(n), j, 0),
            partial,
        ));
    }
    out
}

/// Both summation identities for a function supported (above) on
/// `n <= support_max`:
/// `Σ_{n>=i-1} C(n,i-1) Δ^j f(n) = (-1)^i Δ^{j-i} f(-1)` and
/// `Σ_{n>=i} C(n-1,i-1) Δ^j f(n) = (-1)^i Δ^{j-i} f(0)`.
pub fn difference_identities(
    f: impl Fn(i64) -> i64,
    support_max: i64,
    i: usize,
    j: usize,
) -> Result<Vec<Comparison>> {
    if i == 0 || j < i {
        return Err(Error::Precondition(format!(
            "summation identities need 1 <= i <= j, got i = {i}, j = {j}"
        )));
    }
    let top = support_max + j as i64 + 1;
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let c = |n: i64, r: i64| binomial(n, r).to_i64().expect("small binomial");
    let ii = i as i64;
    let lhs1: i64 = (ii - 1..=top).map(|n| c(n, ii - 1) * delta1(&f, j, n)).sum();
    let lhs2: i64 = (ii..=top).map(|n| c(n - 1, ii - 1) * delta1(&f, j, n)).sum();
    Ok(vec![
        Comparison::new(
            "weighted-sum-at-minus-one",
            vec![i as i64, j as i64],
            lhs1,
            sign * delta1(&f, j - i, -1),
        ),
        Comparison::new(
            "weighted-sum-at-zero",
            vec![i as i64, j as i64],
            lhs2,
            sign * delta1(&f, j - i, 0),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_series() {
        // n + 1: f_0 = 1, f_1 = 0.
        let s = fit_fiber((0..=6).map(|n| n + 1).collect(), 2).unwrap();
        assert_eq!(s.coeffs, vec![1, 0]);
        assert_eq!(s.fit_from, 0);
        assert_eq!(s.verdict, Verdict::Pass);
    }

    #[test]
    fn polynomial_ring_series() {
        // C(n+2, 2): f_0 = 1, others 0.
        let vals = (0..=8).map(|n| (n + 2) * (n + 1) / 2).collect();
        let s = fit_fiber(vals, 3).unwrap();
        assert_eq!(s.coeffs, vec![1, 0, 0]);
    }

    #[test]
    fn late_agreement() {
        // 3n - 1 from n = 2 on, irregular before.
        let vals = vec![1, 1, 5, 8, 11, 14, 17, 20];
        let s = fit_fiber(vals, 2).unwrap();
        assert_eq!(s.fit_from, 2);
        // 3(n+1) - f_1 = 3n - 1 gives f_1 = 4.
        assert_eq!(s.coeffs, vec![3, 4]);
        assert_eq!(s.defect(1), s.poly(1) - 1);
        assert_eq!(s.defect(-1), s.poly(-1));
    }

    #[test]
    fn short_series_is_unstable() {
        assert!(matches!(fit_fiber(vec![1, 2, 3], 2), Err(Error::FitUnstable(_))));
    }

    #[test]
    fn summation_identities_small_support() {
        let f = |n: i64| match n {
            0 => 3,
            1 => -2,
            2 => 5,
            _ => 0,
        };
        for (i, j) in [(1, 2), (1, 1), (2, 2), (2, 3)] {
            for c in difference_identities(f, 2, i, j).unwrap() {
                assert_eq!(c.lhs, c.rhs, "{} at i={i}, j={j}", c.label);
            }
        }
        assert!(difference_identities(f, 2, 3, 2).is_err());
    }
}

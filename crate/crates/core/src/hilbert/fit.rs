use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{binomial, HilbertTable};
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::filtration::{Filtration, QuotientCache};
use crate::linalg::LengthOptions;
use crate::ring::RingSpec;
use crate::sequence::{certify_full, derive_seed, SequenceSpec, Window};

/// `P(n1,n2) = Σ_{i1+i2 <= d} e_{i1 i2} C(n1+i1, i1) C(n2+i2, i2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariatePolynomial {
    pub d: usize,
    #[serde(with = "crate::util::rational_coeffs")]
    pub coeffs: BTreeMap<(u32, u32), BigRational>,
    /// `P = H` was validated on `[fit_from, validated_to]^2`.
    pub fit_from: i64,
    pub validated_to: i64,
    /// Set when the window had to be enlarged once.
    pub extended: bool,
}

fn basis_value(i1: u32, i2: u32, n1: i64, n2: i64) -> BigInt {
    binomial(n1 + i1 as i64, i1 as i64) * binomial(n2 + i2 as i64, i2 as i64)
}

fn exponents(d: usize) -> Vec<(u32, u32)> {
    let d = d as u32;
    (0..=d)
        .flat_map(|s| (0..=s).map(move |i2| (s - i2, i2)))
        .collect()
}

impl BivariatePolynomial {
    pub fn eval(&self, n1: i64, n2: i64) -> BigRational {
        self.coeffs
            .iter()
            .map(|(&(i1, i2), c)| c * BigRational::from_integer(basis_value(i1, i2, n1, n2)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `e_{i1 i2}` when it is an integer.
    pub fn e(&self, i1: u32, i2: u32) -> Option<BigInt> {
        let c = self.coeffs.get(&(i1, i2))?;
        c.is_integer().then(|| c.to_integer())
    }

    /// `P(n1,n2)` when it is an integer that fits in `i64`.
    pub fn value_i64(&self, n1: i64, n2: i64) -> Option<i64> {
        let v = self.eval(n1, n2);
        if v.is_integer() {
            v.to_integer().to_i64()
        } else {
            None
        }
    }
}

/// Solves `A x = b` exactly; `None` if singular.
pub(crate) fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// Fits on the triangle `{(a+i, a+j) : i+j <= d}` for the first `a` whose fit
/// agrees with the table on all of `[a, N]^2`, `N = min(n1max, n2max)`, with
/// at least three validation points per variable beyond the triangle.
pub fn fit_bivariate(table: &HilbertTable, d: usize) -> Result<BivariatePolynomial> {
    let top = table.window.n1max.min(table.window.n2max);
    let exps = exponents(d);
    let mut a = 0;
    while a + d as i64 + 3 <= top {
        let pts: Vec<(i64, i64)> = exps
            .iter()
            .map(|&(i, j)| (a + i as i64, a + j as i64))
            .collect();
        let m: Vec<Vec<BigRational>> = pts
            .iter()
            .map(|&(n1, n2)| {
                exps.iter()
                    .map(|&(i1, i2)| BigRational::from_integer(basis_value(i1, i2, n1, n2)))
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = pts
            .iter()
            .map(|&(n1, n2)| table.get(n1, n2).map(|v| BigRational::from_integer(v.into())))
            .collect::<Result<_>>()?;
        if let Some(sol) = solve_rational(m, rhs) {
            let poly = BivariatePolynomial {
                d,
                coeffs: exps.iter().copied().zip(sol).collect(),
                fit_from: a,
                validated_to: top,
                extended: false,
            };
            let ok = (a..=top).all(|n1| {
                (a..=top).all(|n2| {
                    table
                        .get(n1, n2)
                        .is_ok_and(|v| poly.eval(n1, n2) == BigRational::from_integer(v.into()))
                })
            });
            if ok {
                return Ok(poly);
            }
        }
        a += 1;
    }
    Err(Error::FitUnstable(format!(
        "no degree-{d} fit validates on a window of size {top}"
    )))
}

/// Computes the table on `window` and fits; on failure enlarges the window
/// once by half and retries.
pub fn fit_hilbert(
    filt: &Filtration,
    d: usize,
    window: Window,
    mode: Parallelism,
) -> Result<(HilbertTable, BivariatePolynomial)> {
    let attempt = |w: Window| -> Result<(HilbertTable, Result<BivariatePolynomial>)> {
        let cache = QuotientCache::build(filt, w.n1max, w.n2max, mode)?;
        let table = HilbertTable::compute(&cache, w, mode);
        let fit = fit_bivariate(&table, d);
        Ok((table, fit))
    };
    let (table, fit) = attempt(window)?;
    if let Ok(p) = fit {
        return Ok((table, p));
    }
    let grow = |n: i64| (n + n / 2 + 1).max(d as i64 + 4);
    let wider = Window::new(grow(window.n1max), grow(window.n2max));
    let (table, fit) = attempt(wider)?;
    let mut p = fit?;
    p.extended = true;
    Ok((table, p))
}

/// `e_i(I1|I2) = e_{d-i, i}` for `i = 0..=d`.
pub fn mixed_multiplicities(p: &BivariatePolynomial) -> Result<Vec<BigInt>> {
    (0..=p.d as u32)
        .map(|i| {
            let c = p.coeffs.get(&(p.d as u32 - i, i)).cloned().unwrap_or_default();
            if c.is_integer() && !c.is_negative() {
                Ok(c.to_integer())
            } else {
                Err(Error::FitUnstable(format!(
                    "top coefficient e_{i} = {c} is not a nonnegative integer"
                )))
            }
        })
        .collect()
}

/// `ℓ(R/(x_{1,d-i}, x_{2,i}))` for fresh generic elements, `i = 0..=d`, one row
/// per seed.
pub fn sop_multiplicities(
    ring: &RingSpec,
    filt: &Filtration,
    seeds: &[u64],
    opts: LengthOptions,
) -> Result<Vec<Vec<usize>>> {
    let d = ring.dim();
    seeds
        .iter()
        .map(|&seed| {
            (0..=d)
                .map(|i| {
                    let seq = SequenceSpec::generate(ring, filt, d - i, i, derive_seed(seed, i as u64))?;
                    certify_full(ring, &seq.elements, opts)
                })
                .collect()
        })
        .collect()
}

/// Fails with both values when a fitted mixed multiplicity disagrees with
/// the colength of a generic system of parameters.
pub fn cross_check_mixed(fitted: &[BigInt], by_sop: &[Vec<usize>], seeds: &[u64]) -> Result<()> {
    for (row, seed) in by_sop.iter().zip(seeds) {
        for (i, (e, &l)) in fitted.iter().zip(row).enumerate() {
            if *e != BigInt::from(l) {
                return Err(Error::CrossCheckFailed {
                    what: format!("e_{i} (seed {seed})"),
                    left: e.to_string(),
                    right: l.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Coefficients as exact `i64` when they all are integers.
pub fn integer_coeffs(p: &BivariatePolynomial) -> Option<BTreeMap<(u32, u32), i64>> {
    p.coeffs
        .iter()
        .map(|(&k, c)| {
            if c.is_integer() {
                c.to_integer().to_i64().map(|v| (k, v))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MonomialIdeal;

    fn maxmax() -> Filtration {
        Filtration::new(MonomialIdeal::maximal(2), MonomialIdeal::maximal(2)).unwrap()
    }

    #[test]
    fn maximal_ideal_pair() {
        let (_, p) = fit_hilbert(&maxmax(), 2, Window::new(6, 6), Parallelism::Sequential).unwrap();
        let e = mixed_multiplicities(&p).unwrap();
        assert_eq!(e, vec![BigInt::from(1); 3]);
        // C(n1+n2+1, 2) everywhere in the validated square.
        for n in 1..6 {
            let v = (2 * n + 1) * (2 * n) / 2;
            assert_eq!(p.value_i64(n, n), Some(v));
        }
    }

    #[test]
    fn zero_table_fits_zero() {
        let mut t = HilbertTable {
            window: Window::new(6, 6),
            values: BTreeMap::new(),
        };
        for p in t.window.points() {
            t.values.insert(p, 0);
        }
        let p = fit_bivariate(&t, 2).unwrap();
        assert!(p.coeffs.values().all(Zero::is_zero));
    }

    #[test]
    fn too_small_window_is_unstable() {
        let f = maxmax();
        let cache = QuotientCache::build(&f, 3, 3, Parallelism::Sequential).unwrap();
        let t = HilbertTable::compute(&cache, Window::new(3, 3), Parallelism::Sequential);
        assert!(matches!(fit_bivariate(&t, 2), Err(Error::FitUnstable(_))));
    }

    #[test]
    fn rational_solver() {
        let r = |v: i64| BigRational::from_integer(v.into());
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve_rational(a, vec![r(3), r(5)]).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
        assert!(solve_rational(vec![vec![r(1), r(2)], vec![r(2), r(4)]], vec![r(1), r(2)]).is_none());
    }
}

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 6;

/// A monomial, stored as its exponent vector.
///
/// The fixed-capacity array keeps monomials `Copy` and cheap to hash; only the
/// first `nvars` slots are meaningful, the rest are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    nvars: u8,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        debug_assert!(nvars <= MAX_VARS);
        Self {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn pure_power(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m
    }

    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.is_empty() || exps.len() > MAX_VARS {
            return Err(Error::BadDimension {
                got: exps.len(),
                max: MAX_VARS,
            });
        }
        let mut m = Self::one(exps.len());
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e)
                .map_err(|_| Error::Precondition(format!("exponent {e} too large")))?;
        }
        Ok(m)
    }

    /// Like [`Monomial::new`] but also checks the arity against the ring.
    pub fn with_arity(exps: &[u32], nvars: usize) -> Result<Self> {
        if exps.len() != nvars {
            return Err(Error::ArityMismatch {
                got: exps.len(),
                expected: nvars,
            });
        }
        Self::new(exps)
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps[..self.nvars as usize]
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.exps().iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        out
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
        }
        out
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a -= *b;
        }
        Some(out)
    }

    /// `self / gcd(self, other)`.
    pub fn div_gcd(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a -= (*a).min(*b);
        }
        out
    }

    /// If this is `x_i^e` with `e > 0`, returns `(i, e)`.
    pub fn as_pure_power(&self) -> Option<(usize, u16)> {
        let mut found = None;
        for (i, &e) in self.exps().iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub fn set_exp(&mut self, i: usize, e: u16) {
        self.exps[i] = e;
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, vars }
    }
}

/// Degree-lexicographic: lower degree first, ties broken so that `x` precedes `y`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps())
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = self.vars.get(i).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of exactly the given degree, in
/// degree-lexicographic order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Monomial::one(nvars);
    fill_degree(&mut cur, 0, nvars, degree, &mut out);
    out
}

fn fill_degree(cur: &mut Monomial, var: usize, nvars: usize, left: u32, out: &mut Vec<Monomial>) {
    if var + 1 == nvars {
        cur.exps[var] = left as u16;
        out.push(*cur);
        cur.exps[var] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur.exps[var] = e as u16;
        fill_degree(cur, var + 1, nvars, left - e, out);
    }
    cur.exps[var] = 0;
}

/// All monomials of degree `< bound`, degree-lexicographically sorted.
pub fn monomials_below_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
    (0..bound)
        .flat_map(|deg| monomials_of_degree(nvars, deg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_order() {
        let one = Monomial::one(2);
        let x = Monomial::var(2, 0);
        let y = Monomial::var(2, 1);
        let xy = x.mul(&y);
        let mut v = vec![xy, y, one, x];
        v.sort();
        assert_eq!(v, vec![one, x, y, xy]);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_below_degree(2, 3).len(), 6);
        let v = monomials_below_degree(3, 4);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn division() {
        let a = Monomial::new(&[2, 1]).unwrap();
        let b = Monomial::new(&[1, 1]).unwrap();
        assert!(b.divides(&a));
        assert_eq!(a.checked_div(&b), Some(Monomial::new(&[1, 0]).unwrap()));
        assert_eq!(b.checked_div(&a), None);
        assert_eq!(a.as_pure_power(), None);
        assert_eq!(Monomial::new(&[0, 3]).unwrap().as_pure_power(), Some((1, 3)));
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use crate::error::{Error, Result};

/// A monomial ideal given by its minimal generators (degree-lex sorted).
///
/// The empty generator list is the zero ideal; `{1}` is the unit ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Divisibility-reduces `gens` to the minimal generating set.
    pub fn normalize(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.sort_unstable();
        all.dedup();
        let mut minimal: Vec<Monomial> = Vec::with_capacity(all.len());
        // A proper divisor has strictly smaller degree, so it is seen first.
        for g in all {
            if !minimal.iter().any(|h| h.divides(&g)) {
                minimal.push(g);
            }
        }
        Self {
            nvars,
            gens: minimal,
        }
    }

    pub fn from_exponents(nvars: usize, gens: &[Vec<u32>]) -> Result<Self> {
        let monos = gens
            .iter()
            .map(|e| Monomial::with_arity(e, nvars))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(nvars, monos))
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn unit(nvars: usize) -> Self {
        Self {
            nvars,
            gens: vec![Monomial::one(nvars)],
        }
    }

    /// The maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(nvars: usize) -> Self {
        Self::normalize(nvars, (0..nvars).map(|i| Monomial::var(nvars, i)))
    }

    /// `m^n`.
    pub fn maximal_power(nvars: usize, n: u32) -> Self {
        Self {
            nvars,
            gens: super::monomial::monomials_of_degree(nvars, n),
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// For each variable, the exponent of the pure power among the generators.
    pub fn pure_power_exponents(&self) -> Vec<Option<u16>> {
        let mut out = vec![None; self.nvars];
        if self.is_unit() {
            return vec![Some(0); self.nvars];
        }
        for g in &self.gens {
            if let Some((i, e)) = g.as_pure_power() {
                out[i] = Some(out[i].map_or(e, |c: u16| c.min(e)));
            }
        }
        out
    }

    pub fn is_m_primary(&self) -> bool {
        self.pure_power_exponents().iter().all(Option::is_some)
    }

    pub fn check_m_primary(&self) -> Result<()> {
        match self.pure_power_exponents().iter().position(Option::is_none) {
            Some(var) => Err(Error::NotMPrimary { var }),
            None => Ok(()),
        }
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let prods = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)));
        Self::normalize(self.nvars, prods)
    }

    /// `I^n`, with `I^n = R` for `n <= 0`.
    pub fn pow(&self, n: i64) -> MonomialIdeal {
        let mut acc = Self::unit(self.nvars);
        for _ in 0..n.max(0) {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        Self::normalize(
            self.nvars,
            self.gens.iter().chain(other.gens.iter()).copied(),
        )
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let lcms = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.lcm(b)));
        Self::normalize(self.nvars, lcms)
    }

    /// `(self : m)` for a monomial `m`.
    pub fn colon_monomial(&self, m: &Monomial) -> MonomialIdeal {
        Self::normalize(self.nvars, self.gens.iter().map(|g| g.div_gcd(m)))
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> IdealDisplay<'a> {
        IdealDisplay { ideal: self, vars }
    }

    pub fn to_exponents(&self) -> Vec<Vec<u32>> {
        self.gens.iter().map(Monomial::to_vec).collect()
    }
}

/// `I1^{n1} I2^{n2}`, where a nonpositive exponent means the unit ideal.
pub fn power_product(i1: &MonomialIdeal, n1: i64, i2: &MonomialIdeal, n2: i64) -> MonomialIdeal {
    i1.pow(n1).mul(&i2.pow(n2))
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

pub struct IdealDisplay<'a> {
    ideal: &'a MonomialIdeal,
    vars: &'a [String],
}

impl fmt::Display for IdealDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.ideal.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display(self.vars))?;
        }
        write!(f, ")")
    }
}

impl Serialize for MonomialIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_exponents().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<u32>> = Vec::deserialize(d)?;
        let nvars = raw.first().map(Vec::len).unwrap_or(0);
        MonomialIdeal::from_exponents(nvars, &raw).map_err(serde::de::Error::custom)
    }
}

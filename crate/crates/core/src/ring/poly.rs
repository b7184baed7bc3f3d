use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use crate::field::PrimeField;

/// Sparse polynomial over GF(p). Terms are sorted degree-lexicographically,
/// with no zero coefficients and no repeated monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self {
            nvars: m.nvars(),
            terms: vec![(m, 1)],
        }
    }

    /// Collects terms, combining repeats and dropping zeros.
    pub fn from_terms(
        field: &PrimeField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u32)>,
    ) -> Self {
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = field.add(*e, c % field.order());
        }
        Self {
            nvars,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the lowest-degree term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // Multiplying by a monomial preserves the term order.
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect(),
        }
    }

    pub fn scale(&self, field: &PrimeField, c: u32) -> Polynomial {
        if c % field.order() == 0 {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (*t, field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn add(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        Self::from_terms(
            field,
            self.nvars,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn mul(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        let prods = self.terms.iter().flat_map(|(a, ca)| {
            other
                .terms
                .iter()
                .map(move |(b, cb)| (a.mul(b), field.mul(*ca, *cb)))
        });
        Self::from_terms(field, self.nvars, prods)
    }

    pub fn display<'a>(&'a self, field: &'a PrimeField, vars: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            field,
            vars,
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.terms.iter().map(|(m, c)| (c, m)))
            .finish()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    field: &'a PrimeField,
    vars: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let c = self.field.to_signed(*c);
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", m.display(self.vars))?;
            } else {
                write!(f, "{a}*{}", m.display(self.vars))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: u32,
    exps: Vec<u32>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: *c,
                exps: m.to_vec(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<TermRepr> = Vec::deserialize(d)?;
        let nvars = raw.first().map(|t| t.exps.len()).unwrap_or(1);
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let m = Monomial::with_arity(&t.exps, nvars).map_err(serde::de::Error::custom)?;
            if t.coeff == 0 {
                return Err(serde::de::Error::custom("zero coefficient"));
            }
            terms.push((m, t.coeff));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(serde::de::Error::custom("repeated monomial"));
        }
        Ok(Polynomial { nvars, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn combines_and_drops_zero() {
        let x = Monomial::var(2, 0);
        let p = Polynomial::from_terms(&f(), 2, [(x, 5), (x, 31998), (Monomial::one(2), 1)]);
        assert_eq!(p.terms(), &[(Monomial::one(2), 1)]);
    }

    #[test]
    fn product_of_linear_forms() {
        let field = f();
        let x = Monomial::var(2, 0);
        let y = Monomial::var(2, 1);
        let a = Polynomial::from_terms(&field, 2, [(x, 1), (y, 1)]);
        let b = Polynomial::from_terms(&field, 2, [(x, 1), (y, field.neg(1))]);
        let c = a.mul(&field, &b);
        let expect = Polynomial::from_terms(
            &field,
            2,
            [(x.mul(&x), 1), (y.mul(&y), field.neg(1))],
        );
        assert_eq!(c, expect);
        assert_eq!(c.order(), Some(2));
    }

    #[test]
    fn serde_roundtrip() {
        let field = f();
        let p = Polynomial::from_terms(
            &field,
            2,
            [(Monomial::var(2, 0), 3), (Monomial::new(&[0, 2]).unwrap(), 7)],
        );
        let s = serde_json::to_string(&p).unwrap();
        let q: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}

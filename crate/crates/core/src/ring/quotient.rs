use std::collections::HashMap;

use super::ideal::MonomialIdeal;
use super::monomial::Monomial;
use super::poly::Polynomial;
use crate::error::Result;
use crate::field::PrimeField;

/// `R/J` for an m-primary monomial ideal `J`, with its standard monomials
/// as basis.
#[derive(Clone, Debug)]
pub struct ArtinQuotient {
    ideal: MonomialIdeal,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl ArtinQuotient {
    pub fn new(ideal: &MonomialIdeal) -> Result<Self> {
        ideal.check_m_primary()?;
        let mut basis = Vec::new();
        if !ideal.is_unit() {
            let mut cur = Monomial::one(ideal.nvars());
            staircase(ideal, &mut cur, 0, &mut basis);
        }
        basis.sort_unstable();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        Ok(Self {
            ideal: ideal.clone(),
            basis,
            index,
        })
    }

    /// `R/m^D`.
    pub fn truncation(nvars: usize, degree: u32) -> Self {
        Self::new(&MonomialIdeal::maximal_power(nvars, degree))
            .expect("powers of the maximal ideal are m-primary")
    }

    #[inline]
    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    #[inline]
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// `ℓ(R/J)`.
    #[inline]
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    #[inline]
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    /// Coordinates of `f` modulo `J`, sparse and sorted by basis position.
    pub fn reduce_sparse(&self, f: &Polynomial) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = f
            .terms()
            .iter()
            .filter_map(|(m, c)| self.index.get(m).map(|&i| (i, *c)))
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Coordinates of `u * f` modulo `J`.
    pub fn reduce_product(&self, u: &Monomial, f: &Polynomial) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = f
            .terms()
            .iter()
            .filter_map(|(m, c)| self.index.get(&m.mul(u)).map(|&i| (i, *c)))
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Dense coordinates of `f` modulo `J`.
    pub fn reduce(&self, f: &Polynomial, field: &PrimeField) -> Vec<u32> {
        let mut v = vec![0u32; self.len()];
        for (i, c) in self.reduce_sparse(f) {
            v[i as usize] = field.add(v[i as usize], c);
        }
        v
    }
}

// Depth-first walk under the staircase. Once a partial exponent vector lies
// in J, so does every extension with larger exponents, so the loop stops.
fn staircase(ideal: &MonomialIdeal, cur: &mut Monomial, var: usize, out: &mut Vec<Monomial>) {
    let n = ideal.nvars();
    let mut e = 0u16;
    loop {
        cur.set_exp(var, e);
        if ideal.contains(cur) {
            break;
        }
        if var + 1 == n {
            out.push(*cur);
        } else {
            staircase(ideal, cur, var + 1, out);
        }
        e += 1;
    }
    cur.set_exp(var, 0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(gens: &[&[u32]]) -> MonomialIdeal {
        let v: Vec<Vec<u32>> = gens.iter().map(|g| g.to_vec()).collect();
        MonomialIdeal::from_exponents(gens[0].len(), &v).unwrap()
    }

    #[test]
    fn square_ideal_basis() {
        let q = ArtinQuotient::new(&ideal(&[&[2, 0], &[0, 2]])).unwrap();
        let b: Vec<Vec<u32>> = q.basis().iter().map(Monomial::to_vec).collect();
        assert_eq!(b, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn unit_and_powers() {
        assert_eq!(ArtinQuotient::new(&MonomialIdeal::unit(2)).unwrap().len(), 0);
        assert_eq!(ArtinQuotient::truncation(2, 3).len(), 6);
        assert_eq!(ArtinQuotient::truncation(3, 3).len(), 10);
    }

    #[test]
    fn rejects_non_primary() {
        assert!(ArtinQuotient::new(&ideal(&[&[2, 0], &[1, 1]])).is_err());
    }

    #[test]
    fn reduce_drops_ideal_terms() {
        let field = PrimeField::new(32003).unwrap();
        let q = ArtinQuotient::new(&ideal(&[&[2, 0], &[0, 2]])).unwrap();
        let f = Polynomial::from_terms(
            &field,
            2,
            [
                (Monomial::new(&[1, 1]).unwrap(), 3),
                (Monomial::new(&[3, 0]).unwrap(), 2),
            ],
        );
        assert_eq!(q.reduce(&f, &field), vec![0, 0, 0, 3]);
        assert_eq!(q.reduce(&Polynomial::zero(2), &field), vec![0; 4]);
    }
}

//! Lengths of quotients by polynomial ideals, computed in `R/m^D` or in
//! `R/M` for a monomial m-primary ideal `M` contained in the ideal.

use serde::{Deserialize, Serialize};

use super::matrix::{Echelon, SparseRow};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ring::{monomial, ArtinQuotient, MonomialIdeal, Polynomial};

/// How a length was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// A monomial m-primary ideal is contained in the ideal, so the length was
    /// computed exactly in the Artinian quotient by it.
    MonomialContainment { generators: Vec<Vec<u32>> },
    /// Every monomial of degree `degree - 1` lies in the truncated span, so
    /// `m^(degree - 1)` is contained in the ideal.
    FullRankWitness { degree: u32 },
    /// Only agreement across consecutive truncations was observed.
    StableTruncation { degrees: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationCertificate {
    pub degree: u32,
    pub certified: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthOptions {
    /// Largest truncation degree tried.
    pub cap: u32,
    /// Work modulo the monomial part of the generators when it is m-primary.
    pub use_monomial_part: bool,
}

impl LengthOptions {
    pub fn for_dim(d: usize) -> Self {
        let cap = match d {
            0..=2 => 40,
            3 => 25,
            _ => 16,
        };
        Self {
            cap,
            use_monomial_part: true,
        }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn truncation_only(mut self) -> Self {
        self.use_monomial_part = false;
        self
    }
}

/// The certified length of `R/(gens)` together with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedLength {
    pub length: usize,
    pub certificate: TruncationCertificate,
}

fn max_degree(gens: &[Polynomial]) -> u32 {
    gens.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
}

fn next_degree(d: u32) -> u32 {
    (d + 1).max((3 * d).div_ceil(2))
}

/// The sequence of truncation degrees tried: geometric growth from `start`,
/// ending exactly at `cap`.
fn degree_schedule(start: u32, cap: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = start.max(1);
    while d < cap {
        out.push(d);
        d = next_degree(d);
    }
    out.push(cap);
    out
}

/// Span of `{u * g mod m^D}` inside `R/m^D`, as an echelon form.
fn truncated_span(
    field: &PrimeField,
    gens: &[Polynomial],
    trunc: &ArtinQuotient,
    degree: u32,
) -> Echelon {
    let mut ech = Echelon::new(*field, trunc.len());
    for g in gens {
        let Some(ord) = g.order() else { continue };
        if ord >= degree {
            continue;
        }
        for u in trunc.basis() {
            if u.degree() + ord >= degree {
                // Basis is degree-sorted; nothing further survives.
                break;
            }
            let row = trunc.reduce_product(u, g);
            ech.insert(&row);
            if ech.is_full() {
                return ech;
            }
        }
    }
    ech
}

/// `ℓ(R/(gens))`, certified.
pub fn length_of_quotient(
    field: &PrimeField,
    nvars: usize,
    gens: &[Polynomial],
    opts: LengthOptions,
) -> Result<CertifiedLength> {
    if opts.use_monomial_part {
        let mono = MonomialIdeal::normalize(
            nvars,
            gens.iter()
                .filter(|g| g.is_monomial())
                .map(|g| g.terms()[0].0),
        );
        if mono.is_m_primary() {
            return Ok(length_modulo_monomial(field, &mono, gens));
        }
    }
    let start = (max_degree(gens) + 1).max(2);
    for degree in degree_schedule(start, opts.cap) {
        let trunc = ArtinQuotient::truncation(nvars, degree);
        let mut ech = truncated_span(field, gens, &trunc, degree);
        let witness = monomial::monomials_of_degree(nvars, degree - 1)
            .iter()
            .all(|m| ech.contains(&[(trunc.index_of(m).unwrap() as u32, 1)]));
        if !witness {
            continue;
        }
        let length = trunc.len() - ech.rank();
        let next = ArtinQuotient::truncation(nvars, degree + 1);
        let again = next.len() - truncated_span(field, gens, &next, degree + 1).rank();
        if again != length {
            return Err(Error::Unstable {
                cap: degree as usize + 1,
            });
        }
        return Ok(CertifiedLength {
            length,
            certificate: TruncationCertificate {
                degree,
                certified: true,
                evidence: Evidence::FullRankWitness { degree },
            },
        });
    }
    Err(Error::NotFiniteLength {
        cap: opts.cap as usize,
    })
}

/// `ℓ(R/(M + gens))` computed in `R/M`.
pub fn length_modulo_monomial(
    field: &PrimeField,
    mono: &MonomialIdeal,
    gens: &[Polynomial],
) -> CertifiedLength {
    let q = ArtinQuotient::new(mono).expect("caller checked m-primary");
    let mut ech = Echelon::new(*field, q.len());
    'outer: for g in gens.iter().filter(|g| !g.is_monomial()) {
        for u in q.basis() {
            let row = q.reduce_product(u, g);
            ech.insert(&row);
            if ech.is_full() {
                break 'outer;
            }
        }
    }
    CertifiedLength {
        length: q.len() - ech.rank(),
        certificate: TruncationCertificate {
            degree: mono.max_generator_degree(),
            certified: true,
            evidence: Evidence::MonomialContainment {
                generators: mono.to_exponents(),
            },
        },
    }
}

/// `ℓ(R/(A ∩ B)) = ℓ(R/A) + ℓ(R/B) − ℓ(R/(A+B))`.
pub fn intersection_length(
    field: &PrimeField,
    nvars: usize,
    a: &[Polynomial],
    b: &[Polynomial],
    opts: LengthOptions,
) -> Result<usize> {
    let la = length_of_quotient(field, nvars, a, opts)?.length;
    let lb = length_of_quotient(field, nvars, b, opts)?.length;
    let sum: Vec<Polynomial> = a.iter().chain(b).cloned().collect();
    let ls = length_of_quotient(field, nvars, &sum, opts)?.length;
    Ok(la + lb - ls)
}

/// `ℓ(A/B)` for ideals `B ⊆ A` that need not be m-primary, as
/// `dim (A + m^D)/m^D − dim (B + m^D)/m^D` once three consecutive truncation
/// degrees agree.
pub fn stable_quotient_length(
    field: &PrimeField,
    nvars: usize,
    a: &[Polynomial],
    b: &[Polynomial],
    cap: u32,
) -> Result<(usize, TruncationCertificate)> {
    let value = |degree: u32| -> Result<usize> {
        let trunc = ArtinQuotient::truncation(nvars, degree);
        let ra = truncated_span(field, a, &trunc, degree).rank();
        let rb = truncated_span(field, b, &trunc, degree).rank();
        ra.checked_sub(rb).ok_or_else(|| {
            Error::Precondition("submodule is larger than the module in truncation".into())
        })
    };
    let start = max_degree(a).max(max_degree(b)) + 2;
    for degree in degree_schedule(start, cap) {
        let v0 = value(degree)?;
        let v1 = value(degree + 1)?;
        let v2 = value(degree + 2)?;
        if v0 == v1 && v1 == v2 {
            return Ok((
                v0,
                TruncationCertificate {
                    degree,
                    certified: false,
                    evidence: Evidence::StableTruncation {
                        degrees: vec![degree, degree + 1, degree + 2],
                    },
                },
            ));
        }
    }
    Err(Error::Unstable { cap: cap as usize })
}

/// Smallest `D` with `m^D ⊆ J` for an m-primary monomial ideal `J`.
pub fn containment_degree(j: &MonomialIdeal) -> u32 {
    let mut d = 0;
    loop {
        if monomial::monomials_of_degree(j.nvars(), d)
            .iter()
            .all(|m| j.contains(m))
        {
            return d;
        }
        d += 1;
    }
}

/// `ℓ((∩_s (T_s : x_s)) / base)`, where each pair is `(x_s, T_s)` and `base`
/// is contained in every colon ideal.
///
/// Computed as a kernel dimension in `R/m^D` for `D` large enough that `m^D`
/// lies in `base` and in every `T_s`, then repeated at `D + 1`.
pub fn colon_length(
    field: &PrimeField,
    base: &MonomialIdeal,
    pairs: &[(Polynomial, MonomialIdeal)],
) -> Result<(usize, TruncationCertificate)> {
    let nvars = base.nvars();
    let base_len = ArtinQuotient::new(base)?.len();
    let targets = pairs
        .iter()
        .map(|(_, t)| ArtinQuotient::new(t))
        .collect::<Result<Vec<_>>>()?;
    let d0 = pairs
        .iter()
        .map(|(_, t)| containment_degree(t))
        .chain([containment_degree(base)])
        .max()
        .unwrap_or(0)
        .max(1);
    let at = |degree: u32| -> usize {
        let trunc = ArtinQuotient::truncation(nvars, degree);
        let total: usize = targets.iter().map(ArtinQuotient::len).sum();
        let mut ech = Echelon::new(*field, total);
        for u in trunc.basis() {
            let mut row: SparseRow = Vec::new();
            let mut offset = 0u32;
            for ((x, _), q) in pairs.iter().zip(&targets) {
                row.extend(
                    q.reduce_product(u, x)
                        .into_iter()
                        .map(|(j, v)| (j + offset, v)),
                );
                offset += q.len() as u32;
            }
            ech.insert(&row);
        }
        let kernel = trunc.len() - ech.rank();
        kernel - (trunc.len() - base_len)
    };
    let v0 = at(d0);
    let v1 = at(d0 + 1);
    if v0 != v1 {
        return Err(Error::Unstable {
            cap: d0 as usize + 1,
        });
    }
    Ok((
        v0,
        TruncationCertificate {
            degree: d0,
            certified: true,
            evidence: Evidence::MonomialContainment {
                generators: MonomialIdeal::maximal_power(nvars, d0).to_exponents(),
            },
        },
    ))
}

/// Polynomials for the generators of a monomial ideal.
pub fn monomial_generators(ideal: &MonomialIdeal) -> Vec<Polynomial> {
    ideal
        .gens()
        .iter()
        .map(|m| Polynomial::monomial(*m))
        .collect()
}

/// Generators of `g * ideal`.
pub fn times_ideal(g: &Polynomial, ideal: &MonomialIdeal) -> Vec<Polynomial> {
    ideal.gens().iter().map(|m| g.mul_monomial(m)).collect()
}

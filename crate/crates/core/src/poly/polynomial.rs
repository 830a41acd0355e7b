use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{PrimeP, Scalar};
use super::mono::Mono;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over `F_p`.
///
/// Coefficients are stored as residues in `[1, p)`; zero terms are never kept,
/// so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeP,
    nvars: usize,
    terms: BTreeMap<Mono, u32>,
}

impl Poly {
    pub fn zero(field: PrimeP, nvars: usize) -> Self {
        Poly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeP, nvars: usize, c: i64) -> Self {
        Poly::monomial(field, Mono::one(nvars), field.reduce_i64(c))
    }

    pub fn one(field: PrimeP, nvars: usize) -> Self {
        Poly::constant(field, nvars, 1)
    }

    pub fn var(field: PrimeP, nvars: usize, idx: usize) -> Self {
        Poly::monomial(field, Mono::var(nvars, idx), 1)
    }

    pub fn monomial(field: PrimeP, mono: Mono, coeff: u32) -> Self {
        let nvars = mono.nvars();
        let mut terms = BTreeMap::new();
        let c = coeff % field.get();
        if c != 0 {
            terms.insert(mono, c);
        }
        Poly {
            field,
            nvars,
            terms,
        }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I>(field: PrimeP, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Mono, u32)>,
    {
        let mut out = Poly::zero(field, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            out.add_term(m, c);
        }
        out
    }

    #[inline]
    pub fn field(&self) -> PrimeP {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Mono) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn scalar_coeff(&self, m: &Mono) -> Scalar {
        Scalar::new(self.coeff(m) as i64, self.field)
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Mono, c: u32) {
        let c = c % self.field.get();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.get(), other.field.get()));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.field, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.field.get();
        if c == 0 {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Mono, c: u32) -> Poly {
        let c = c % self.field.get();
        if c == 0 {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, &ca)| (a.mul(m), self.field.mul(ca, c)))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The common degree of all terms. `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.keys().map(Mono::degree);
        let Some(d) = it.next() else {
            return Ok(None);
        };
        if it.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::Inhomogeneous)
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Degree in the single variable `var`; 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Whether variable `var` occurs in some term.
    pub fn involves(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.field.get() - 1)
    }
}

//! Monomials and the degreewise monomial bases that fix column indices.

use std::cmp::Ordering;
use std::collections::HashMap;

/// An exponent vector.
///
/// Ordered graded-lexicographically: lower total degree first, and within a
/// degree by descending lexicographic order of the exponent vector, so that
/// in two variables `x^2 < x*y < y^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono {
    exps: Box<[u32]>,
    degree: u32,
}

impl Mono {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Mono {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Mono::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Mono::new(e)
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.nvars(), other.nvars());
        Mono {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono {
            exps: self.exps.iter().map(|a| a * k).collect(),
            degree: self.degree * k,
        }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when the division is exact.
    pub fn divide_into(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        Some(Mono {
            exps: other
                .exps
                .iter()
                .zip(self.exps.iter())
                .map(|(b, a)| b - a)
                .collect(),
            degree: other.degree - self.degree,
        })
    }

    /// Same monomial with the exponent of `var` replaced.
    pub fn with_exp(&self, var: usize, e: u32) -> Mono {
        let mut exps = self.exps.to_vec();
        exps[var] = e;
        Mono::new(exps)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `nvars` variables, ascending in the
/// [`Mono`] order. The position in this list is the column index used by
/// every matrix over the degree-`d` component.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out
}

fn fill(out: &mut Vec<Mono>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(Mono::new(cur.clone()));
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Mono::new(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// The monomials of one degree together with their column indices.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    degree: u32,
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let monos = monomials_of_degree(nvars, degree);
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            degree,
            monos,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monos(&self) -> &[Mono] {
        &self.monos
    }

    pub fn mono(&self, i: usize) -> &Mono {
        &self.monos[i]
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }
}

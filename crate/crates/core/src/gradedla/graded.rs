use std::sync::Arc;

use rayon::prelude::*;

use super::mat::MatFp;
use crate::error::{Error, Result};
use crate::poly::{Mono, MonomialBasis, Poly, PrimeP};

/// `K[x_1..x_n]` truncated at a degree bound: the monomial bases that fix the
/// coordinates of every degree component.
#[derive(Debug)]
pub struct GradedRing {
    field: PrimeP,
    nvars: usize,
    bases: Vec<MonomialBasis>,
}

impl GradedRing {
    pub fn new(field: PrimeP, nvars: usize, max_degree: usize) -> Result<Arc<Self>> {
        // validates that the matrix kernel supports this prime
        MatFp::empty(field, 0)?;
        let bases = (0..=max_degree as u32)
            .into_par_iter()
            .map(|d| MonomialBasis::new(nvars, d))
            .collect();
        Ok(Arc::new(GradedRing {
            field,
            nvars,
            bases,
        }))
    }

    pub fn field(&self) -> PrimeP {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, d: usize) -> Result<&MonomialBasis> {
        self.bases.get(d).ok_or(Error::DegreeOutOfRange {
            degree: d,
            bound: self.max_degree(),
        })
    }

    /// `dim K[V]_d`.
    pub fn dim(&self, d: usize) -> usize {
        self.bases.get(d).map_or(0, MonomialBasis::len)
    }

    /// Coordinates of `f` in degree `d`. `f` must be zero or homogeneous of
    /// degree `d`.
    pub fn to_coords(&self, f: &Poly, d: usize) -> Result<Vec<u32>> {
        if f.nvars() != self.nvars {
            return Err(Error::VariableCountMismatch(f.nvars(), self.nvars));
        }
        let basis = self.basis(d)?;
        let mut v = vec![0u32; basis.len()];
        for (m, c) in f.terms() {
            let idx = basis.index_of(m).ok_or(Error::Inhomogeneous)?;
            v[idx] = c;
        }
        Ok(v)
    }

    pub fn from_coords(&self, d: usize, v: &[u32]) -> Poly {
        let basis = &self.bases[d];
        Poly::from_terms(
            self.field,
            self.nvars,
            v.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (basis.mono(i).clone(), c)),
        )
    }

    /// Matrix whose rows are the coordinates of `polys` in degree `d`.
    pub fn poly_matrix(&self, d: usize, polys: &[Poly]) -> Result<MatFp> {
        let mut m = MatFp::empty(self.field, self.dim(d))?;
        for f in polys {
            m.push_row(&self.to_coords(f, d)?)?;
        }
        Ok(m)
    }

    /// Matrix of `v ↦ f·v` applied to the rows of `src` (coordinates in
    /// degree `d`), landing in degree `d + deg f`. The zero polynomial is
    /// treated as degree 0 and yields the zero map.
    pub fn mult_map(&self, src: &MatFp, d: usize, f: &Poly) -> Result<MatFp> {
        let e = f.homogeneous_degree()?.unwrap_or(0) as usize;
        let source = self.basis(d)?;
        let target = self.basis(d + e)?;
        if src.ncols() != source.len() {
            return Err(Error::WidthMismatch {
                expected: source.len(),
                got: src.ncols(),
            });
        }
        let terms: Vec<(Mono, u32)> = f.terms().map(|(m, c)| (m.clone(), c)).collect();
        let shifts: Vec<Vec<(usize, u32)>> = source
            .monos()
            .iter()
            .map(|m| {
                terms
                    .iter()
                    .map(|(t, c)| (target.index_of(&m.mul(t)).unwrap(), *c))
                    .collect()
            })
            .collect();
        let p = self.field;
        let mut out = MatFp::empty(p, target.len())?;
        for r in 0..src.nrows() {
            let row = src.row(r);
            let mut acc = vec![0u32; target.len()];
            for (i, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for &(tgt, c) in &shifts[i] {
                    acc[tgt] = p.add(acc[tgt], p.mul(a, c));
                }
            }
            out.push_row(&acc)?;
        }
        Ok(out)
    }
}

/// A graded subspace of `K[x_1..x_n]`, stored as one canonical RREF matrix
/// per degree `0..=D`. The bound `D` is always explicit.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    ring: Arc<GradedRing>,
    components: Vec<MatFp>,
}

impl PartialEq for GradedBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.components == other.components
    }
}

impl GradedBasis {
    /// Echelonizes each component. `components[d]` must have width
    /// `dim K[V]_d`.
    pub fn new(ring: Arc<GradedRing>, components: Vec<MatFp>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DegreeOutOfRange {
                degree: 0,
                bound: 0,
            });
        }
        if components.len() - 1 > ring.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: components.len() - 1,
                bound: ring.max_degree(),
            });
        }
        for (d, m) in components.iter().enumerate() {
            if m.ncols() != ring.dim(d) {
                return Err(Error::WidthMismatch {
                    expected: ring.dim(d),
                    got: m.ncols(),
                });
            }
        }
        let components = components.into_par_iter().map(|m| m.rref()).collect();
        Ok(GradedBasis { ring, components })
    }

    pub fn zero(ring: Arc<GradedRing>, max_degree: usize) -> Result<Self> {
        let comps = (0..=max_degree)
            .map(|d| MatFp::empty(ring.field(), ring.dim(d)))
            .collect::<Result<Vec<_>>>()?;
        GradedBasis::new(ring, comps)
    }

    /// Every degree component in full.
    pub fn full(ring: Arc<GradedRing>, max_degree: usize) -> Result<Self> {
        let comps = (0..=max_degree)
            .map(|d| MatFp::identity(ring.field(), ring.dim(d)))
            .collect::<Result<Vec<_>>>()?;
        GradedBasis::new(ring, comps)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, d: usize) -> &MatFp {
        &self.components[d]
    }

    pub fn components(&self) -> &[MatFp] {
        &self.components
    }

    pub fn dim(&self, d: usize) -> usize {
        self.components.get(d).map_or(0, MatFp::nrows)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(MatFp::nrows).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|m| m.nrows() == 0)
    }

    /// Basis vectors of degree `d` read back as polynomials.
    pub fn polys(&self, d: usize) -> Vec<Poly> {
        let m = &self.components[d];
        (0..m.nrows())
            .map(|r| self.ring.from_coords(d, &m.row(r)))
            .collect()
    }

    /// Membership of a homogeneous polynomial (the zero polynomial is always
    /// contained).
    pub fn contains(&self, f: &Poly) -> Result<bool> {
        let Some(d) = f.homogeneous_degree()? else {
            return Ok(true);
        };
        let d = d as usize;
        if d > self.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: d,
                bound: self.max_degree(),
            });
        }
        self.components[d].contains(&self.ring.to_coords(f, d)?)
    }

    fn check_same(&self, other: &GradedBasis) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && self.ring.nvars() != other.ring.nvars() {
            return Err(Error::VariableCountMismatch(
                self.ring.nvars(),
                other.ring.nvars(),
            ));
        }
        if self.max_degree() != other.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: other.max_degree(),
                bound: self.max_degree(),
            });
        }
        Ok(())
    }

    /// First degree at which `self ⊄ other`, if any.
    pub fn first_non_inclusion(&self, other: &GradedBasis) -> Result<Option<usize>> {
        self.check_same(other)?;
        for d in 0..=self.max_degree() {
            if !self.components[d].subspace_le(&other.components[d])? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    pub fn is_subspace_of(&self, other: &GradedBasis) -> Result<bool> {
        Ok(self.first_non_inclusion(other)?.is_none())
    }

    pub fn sum(&self, other: &GradedBasis) -> Result<GradedBasis> {
        self.check_same(other)?;
        let comps = self
            .components
            .par_iter()
            .zip(other.components.par_iter())
            .map(|(a, b)| a.span_sum(b))
            .collect::<Result<Vec<_>>>()?;
        GradedBasis::new(self.ring.clone(), comps)
    }

    /// `f · self`, truncated at the same bound.
    pub fn times(&self, f: &Poly) -> Result<GradedBasis> {
        let e = f.homogeneous_degree()?;
        let field = self.ring.field();
        let comps = (0..=self.max_degree())
            .into_par_iter()
            .map(|d| match e {
                Some(e) if d >= e as usize => {
                    self.ring
                        .mult_map(&self.components[d - e as usize], d - e as usize, f)
                }
                _ => MatFp::empty(field, self.ring.dim(d)),
            })
            .collect::<Result<Vec<_>>>()?;
        GradedBasis::new(self.ring.clone(), comps)
    }
}

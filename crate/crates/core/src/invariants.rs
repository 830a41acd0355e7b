//! Degreewise construction of the invariant ring, the transfer ideal and
//! ideals generated by given invariants.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gradedla::{GradedBasis, GradedRing, MatFp};
use crate::poly::Poly;
use crate::rep::CpRep;

/// `K[V]^G` up to a degree bound: `(K[V]^G)_d = ker(σ - id)` on `K[V]_d`.
#[derive(Debug, Clone)]
pub struct InvariantRingSlice {
    rep: CpRep,
    basis: GradedBasis,
}

impl InvariantRingSlice {
    pub fn rep(&self) -> &CpRep {
        &self.rep
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.basis.ring()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn dims(&self) -> HilbertData {
        HilbertData::new(self.basis.dims())
    }

    /// Basis invariants of degree `d`, in row order.
    pub fn polys(&self, d: usize) -> Vec<Poly> {
        self.basis.polys(d)
    }

    /// Checks that `f` is a nonzero homogeneous invariant; returns its degree.
    pub fn check_element(&self, f: &Poly) -> Result<usize> {
        let d = f.homogeneous_degree()?.ok_or(Error::Inhomogeneous)? as usize;
        if f.nvars() != self.rep.dim() {
            return Err(Error::VariableCountMismatch(f.nvars(), self.rep.dim()));
        }
        if !self.rep.is_invariant(f) {
            return Err(Error::NotInvariant(self.rep.render(f)));
        }
        Ok(d)
    }
}

pub fn invariant_slice(rep: &CpRep, max_degree: usize) -> Result<InvariantRingSlice> {
    let ring = GradedRing::new(rep.field(), rep.dim(), max_degree)?;
    let comps = (0..=max_degree)
        .into_par_iter()
        .map(|d| invariant_component(rep, &ring, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantRingSlice {
        rep: rep.clone(),
        basis: GradedBasis::new(ring, comps)?,
    })
}

fn invariant_component(rep: &CpRep, ring: &GradedRing, d: usize) -> Result<MatFp> {
    let basis = ring.basis(d)?;
    let field = rep.field();
    let mut sigma = rep.substitution(1);
    // rows: coordinates of σ(m) - m; invariants are the left kernel
    let mut rows = MatFp::empty(field, basis.len())?;
    for m in basis.monos() {
        let mut img = sigma.apply_mono(m, 1);
        img.add_term(m.clone(), field.get() - 1);
        rows.push_row(&ring.to_coords(&img, d)?)?;
    }
    Ok(rows.left_kernel())
}

/// The transfer ideal `I^G = Tr(K[V])` up to a degree bound.
#[derive(Debug, Clone)]
pub struct TransferIdealSlice {
    basis: GradedBasis,
}

impl TransferIdealSlice {
    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dims(&self) -> HilbertData {
        HilbertData::new(self.basis.dims())
    }
}

/// `(I^G)_d = span{Tr(m) : deg m = d}`. The transfer is a `K[V]^G`-module
/// map, so this span is already the degree-d part of an ideal.
pub fn transfer_slice(rep: &CpRep, ring: &Arc<GradedRing>, max_degree: usize) -> Result<TransferIdealSlice> {
    if max_degree > ring.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: max_degree,
            bound: ring.max_degree(),
        });
    }
    let comps = (0..=max_degree)
        .into_par_iter()
        .map(|d| {
            let basis = ring.basis(d)?;
            let mut subs: Vec<_> = (0..rep.field().get() as u64)
                .map(|k| rep.substitution(k))
                .collect();
            let mut rows = MatFp::empty(rep.field(), basis.len())?;
            for m in basis.monos() {
                let mut tr = Poly::zero(rep.field(), rep.dim());
                for s in subs.iter_mut() {
                    tr = &tr + &s.apply_mono(m, 1);
                }
                rows.push_row(&ring.to_coords(&tr, d)?)?;
            }
            Ok(rows.rref())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferIdealSlice {
        basis: GradedBasis::new(ring.clone(), comps)?,
    })
}

/// Transfers of all monomials of degrees `1..=max_degree`, ordered by
/// (degree, monomial index), zeros and repeats dropped. This is the spanning
/// description of `I^G` used by greedy grade searches.
pub fn transfer_generators(rep: &CpRep, ring: &GradedRing, max_degree: usize) -> Result<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::new();
    for d in 1..=max_degree {
        for m in ring.basis(d)?.monos() {
            let tr = rep.transfer(&Poly::monomial(rep.field(), m.clone(), 1));
            if !tr.is_zero() && !out.contains(&tr) {
                out.push(tr);
            }
        }
    }
    Ok(out)
}

/// Degree-d components of the ideal of `K[V]^G` generated by `gens`:
/// `Σ_g g·(K[V]^G)_{d - deg g}`.
pub fn ideal_slice(ring: &InvariantRingSlice, gens: &[Poly], max_degree: usize) -> Result<GradedBasis> {
    if max_degree > ring.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: max_degree,
            bound: ring.max_degree(),
        });
    }
    let mut degs = Vec::with_capacity(gens.len());
    for g in gens {
        degs.push(ring.check_element(g)?);
    }
    let graded = ring.ring();
    let comps = (0..=max_degree)
        .into_par_iter()
        .map(|d| {
            let mut acc = MatFp::empty(graded.field(), graded.dim(d))?;
            for (g, &e) in gens.iter().zip(&degs) {
                if e <= d {
                    let src = ring.basis().component(d - e);
                    acc = acc.stack(&graded.mult_map(src, d - e, g)?)?;
                }
            }
            Ok(acc.rref())
        })
        .collect::<Result<Vec<_>>>()?;
    GradedBasis::new(graded.clone(), comps)
}

/// Dimensions of the degree components `0..=D` of a graded space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HilbertData {
    dims: Vec<usize>,
}

impl HilbertData {
    pub fn new(dims: Vec<usize>) -> Self {
        HilbertData { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Coefficients of `H(t) · Π_{k} (1 - t^{s_k})` up to the bound.
    pub fn times_one_minus_t_pows(&self, shifts: &[usize]) -> Vec<i64> {
        let mut c: Vec<i64> = self.dims.iter().map(|&x| x as i64).collect();
        for &s in shifts {
            for d in (s..c.len()).rev() {
                c[d] -= c[d - s];
            }
        }
        c
    }

    /// `order`-fold difference with step `step` at each degree where it is
    /// defined (`d >= order*step`), as `(d, value)` pairs.
    pub fn finite_difference(&self, order: usize, step: usize) -> Vec<(usize, i64)> {
        let c = self.times_one_minus_t_pows(&vec![step; order]);
        (order * step..c.len()).map(|d| (d, c[d])).collect()
    }
}

/// Polynomial-growth evidence of degree `order - 1`: the `order`-fold
/// difference with step `step` vanishes on `[⌈D/2⌉, D]`, skipping the
/// degrees `<= order·step` where the truncated product still sees the
/// numerator of the Hilbert series. Returns the first degree where it fails.
pub fn growth_violation(h: &HilbertData, order: usize, step: usize) -> Option<(usize, i64)> {
    let start = h.max_degree().div_ceil(2).max(order * step + 1);
    h.finite_difference(order, step)
        .into_iter()
        .find(|&(d, v)| d >= start && v != 0)
}

/// Degreewise `dim ambient - dim sub`, after checking `sub ⊆ ambient`.
pub fn quotient_dims(ambient: &GradedBasis, sub: &GradedBasis) -> Result<HilbertData> {
    if let Some(d) = sub.first_non_inclusion(ambient)? {
        return Err(Error::InclusionFailure(d));
    }
    Ok(HilbertData::new(
        ambient
            .dims()
            .iter()
            .zip(sub.dims())
            .map(|(a, b)| a - b)
            .collect(),
    ))
}

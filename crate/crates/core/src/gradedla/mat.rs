//! Dense matrices over `F_p`: bit-packed rows for p = 2, byte rows otherwise.
//!
//! Reduction always produces the canonical reduced row echelon form (pivots
//! equal to 1, zeros above and below every pivot, zero rows dropped), so two
//! spanning sets of one subspace reduce to equal matrices.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::PrimeP;

trait RowKernel: Clone + fmt::Debug {
    type Row: Clone + fmt::Debug + PartialEq + Eq;
    fn zero(&self, cols: usize) -> Self::Row;
    fn get(&self, r: &Self::Row, c: usize) -> u32;
    fn set(&self, r: &mut Self::Row, c: usize, v: u32);
    fn is_zero(&self, r: &Self::Row) -> bool;
    fn scale(&self, r: &mut Self::Row, s: u32);
    /// `dst -= s * src`, touching only columns `>= from`.
    fn sub_mul(&self, dst: &mut Self::Row, src: &Self::Row, s: u32, from: usize);
    fn inv(&self, a: u32) -> u32;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Gf2;

impl RowKernel for Gf2 {
    type Row = Vec<u64>;

    fn zero(&self, cols: usize) -> Vec<u64> {
        vec![0; cols.div_ceil(64)]
    }

    #[inline]
    fn get(&self, r: &Vec<u64>, c: usize) -> u32 {
        ((r[c / 64] >> (c % 64)) & 1) as u32
    }

    #[inline]
    fn set(&self, r: &mut Vec<u64>, c: usize, v: u32) {
        let bit = 1u64 << (c % 64);
        if v & 1 == 1 {
            r[c / 64] |= bit;
        } else {
            r[c / 64] &= !bit;
        }
    }

    fn is_zero(&self, r: &Vec<u64>) -> bool {
        r.iter().all(|&w| w == 0)
    }

    fn scale(&self, r: &mut Vec<u64>, s: u32) {
        if s & 1 == 0 {
            r.iter_mut().for_each(|w| *w = 0);
        }
    }

    #[inline]
    fn sub_mul(&self, dst: &mut Vec<u64>, src: &Vec<u64>, s: u32, from: usize) {
        if s & 1 == 0 {
            return;
        }
        let start = from / 64;
        for (d, s) in dst[start..].iter_mut().zip(&src[start..]) {
            *d ^= *s;
        }
    }

    fn inv(&self, _a: u32) -> u32 {
        1
    }
}

#[derive(Debug, Clone)]
struct SmallP {
    p: u8,
    field: PrimeP,
    /// `neg_mul[s*p + x] = -s*x mod p`
    neg_mul: Arc<Vec<u8>>,
}

impl SmallP {
    fn new(field: PrimeP) -> Self {
        let p = field.get() as usize;
        let mut neg_mul = vec![0u8; p * p];
        for s in 0..p {
            for x in 0..p {
                neg_mul[s * p + x] = ((p - (s * x) % p) % p) as u8;
            }
        }
        SmallP {
            p: p as u8,
            field,
            neg_mul: Arc::new(neg_mul),
        }
    }
}

impl RowKernel for SmallP {
    type Row = Vec<u8>;

    fn zero(&self, cols: usize) -> Vec<u8> {
        vec![0; cols]
    }

    #[inline]
    fn get(&self, r: &Vec<u8>, c: usize) -> u32 {
        r[c] as u32
    }

    #[inline]
    fn set(&self, r: &mut Vec<u8>, c: usize, v: u32) {
        r[c] = (v % self.p as u32) as u8;
    }

    fn is_zero(&self, r: &Vec<u8>) -> bool {
        r.iter().all(|&w| w == 0)
    }

    fn scale(&self, r: &mut Vec<u8>, s: u32) {
        let p = self.p as u16;
        let s = (s % self.p as u32) as u16;
        r.iter_mut().for_each(|w| *w = ((*w as u16 * s) % p) as u8);
    }

    #[inline]
    fn sub_mul(&self, dst: &mut Vec<u8>, src: &Vec<u8>, s: u32, from: usize) {
        let s = (s % self.p as u32) as usize;
        if s == 0 {
            return;
        }
        let p = self.p as u16;
        let table = &self.neg_mul[s * self.p as usize..(s + 1) * self.p as usize];
        for (d, &x) in dst[from..].iter_mut().zip(&src[from..]) {
            let v = *d as u16 + table[x as usize] as u16;
            *d = if v >= p { v - p } else { v } as u8;
        }
    }

    fn inv(&self, a: u32) -> u32 {
        self.field.inv(a).expect("pivot is nonzero")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Dense<K: RowKernel> {
    k: K,
    cols: usize,
    rows: Vec<K::Row>,
}

impl PartialEq for SmallP {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p
    }
}
impl Eq for SmallP {}

impl<K: RowKernel> Dense<K> {
    fn row_from(&self, v: &[u32]) -> K::Row {
        let mut r = self.k.zero(self.cols);
        for (c, &x) in v.iter().enumerate() {
            if x != 0 {
                self.k.set(&mut r, c, x);
            }
        }
        r
    }

    fn row_to(&self, r: &K::Row) -> Vec<u32> {
        (0..self.cols).map(|c| self.k.get(r, c)).collect()
    }

    /// In-place canonical RREF; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let k = self.k.clone();
        let nrows = self.rows.len();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..self.cols {
            if pr == nrows {
                break;
            }
            let Some(r) = (pr..nrows).find(|&r| k.get(&self.rows[r], c) != 0) else {
                continue;
            };
            self.rows.swap(pr, r);
            let lead = k.get(&self.rows[pr], c);
            if lead != 1 {
                k.scale(&mut self.rows[pr], k.inv(lead));
            }
            let (before, rest) = self.rows.split_at_mut(pr);
            let (piv, after) = rest.split_first_mut().unwrap();
            for row in before.iter_mut().chain(after.iter_mut()) {
                let f = k.get(row, c);
                if f != 0 {
                    k.sub_mul(row, piv, f, c);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        self.rows.truncate(pr);
        pivots
    }

    /// Reduces `row` against echelon rows with the given pivots.
    fn reduce(&self, pivots: &[usize], row: &mut K::Row) {
        for (i, &c) in pivots.iter().enumerate() {
            let f = self.k.get(row, c);
            if f != 0 {
                self.k.sub_mul(row, &self.rows[i], f, c);
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Store {
    Gf2(Dense<Gf2>),
    Small(Dense<SmallP>),
}

macro_rules! on_store {
    ($s:expr, $d:ident => $e:expr) => {
        match $s {
            Store::Gf2($d) => $e,
            Store::Small($d) => $e,
        }
    };
}

/// A dense matrix over `F_p`.
#[derive(Debug, Clone)]
pub struct MatFp {
    field: PrimeP,
    store: Store,
    /// Pivot columns; present only when the matrix is in canonical RREF.
    pivots: Option<Vec<usize>>,
}

impl PartialEq for MatFp {
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        match (&self.store, &other.store) {
            (Store::Gf2(a), Store::Gf2(b)) => a == b,
            (Store::Small(a), Store::Small(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for MatFp {}

impl MatFp {
    /// An empty (0-row) matrix of the given width.
    pub fn empty(field: PrimeP, cols: usize) -> Result<Self> {
        let store = match field.get() {
            2 => Store::Gf2(Dense {
                k: Gf2,
                cols,
                rows: Vec::new(),
            }),
            p if p < 256 => Store::Small(Dense {
                k: SmallP::new(field),
                cols,
                rows: Vec::new(),
            }),
            p => return Err(Error::PrimeTooLarge(p)),
        };
        Ok(MatFp {
            field,
            store,
            pivots: Some(Vec::new()),
        })
    }

    pub fn zeros(field: PrimeP, rows: usize, cols: usize) -> Result<Self> {
        let mut m = MatFp::empty(field, cols)?;
        on_store!(&mut m.store, d => {
            let z = d.k.zero(cols);
            d.rows = vec![z; rows];
        });
        m.pivots = if rows == 0 { Some(Vec::new()) } else { None };
        Ok(m)
    }

    pub fn identity(field: PrimeP, n: usize) -> Result<Self> {
        let mut m = MatFp::zeros(field, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        m.pivots = Some((0..n).collect());
        Ok(m)
    }

    /// Builds a matrix from rows of residues (reduced mod p).
    pub fn from_rows(field: PrimeP, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut m = MatFp::empty(field, cols)?;
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn field(&self) -> PrimeP {
        self.field
    }

    pub fn nrows(&self) -> usize {
        on_store!(&self.store, d => d.rows.len())
    }

    pub fn ncols(&self) -> usize {
        on_store!(&self.store, d => d.cols)
    }

    pub fn is_echelon(&self) -> bool {
        self.pivots.is_some()
    }

    /// Pivot columns when in RREF.
    pub fn pivots(&self) -> Option<&[usize]> {
        self.pivots.as_deref()
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        on_store!(&self.store, d => d.k.get(&d.rows[r], c))
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        let v = v % self.field.get();
        on_store!(&mut self.store, d => d.k.set(&mut d.rows[r], c, v));
        self.pivots = None;
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let cur = self.get(r, c);
        let s = self.field.add(cur, v % self.field.get());
        self.set(r, c, s);
    }

    pub fn push_row(&mut self, v: &[u32]) -> Result<()> {
        let cols = self.ncols();
        if v.len() != cols {
            return Err(Error::WidthMismatch {
                expected: cols,
                got: v.len(),
            });
        }
        let p = self.field.get();
        let v: Vec<u32> = v.iter().map(|x| x % p).collect();
        on_store!(&mut self.store, d => {
            let r = d.row_from(&v);
            d.rows.push(r);
        });
        self.pivots = None;
        Ok(())
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        on_store!(&self.store, d => d.row_to(&d.rows[r]))
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.nrows()).map(|r| self.row(r)).collect()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        on_store!(&self.store, d => d.k.is_zero(&d.rows[r]))
    }

    /// Canonical reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> MatFp {
        if self.pivots.is_some() {
            return self.clone();
        }
        let mut m = self.clone();
        let piv = on_store!(&mut m.store, d => d.rref());
        m.pivots = Some(piv);
        m
    }

    pub fn rank(&self) -> usize {
        match &self.pivots {
            Some(p) => p.len(),
            None => self.rref().nrows(),
        }
    }

    fn echelon(&self) -> Cow<'_, MatFp> {
        if self.pivots.is_some() {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.rref())
        }
    }

    /// Row space, as a canonical RREF basis.
    pub fn image(&self) -> MatFp {
        self.rref()
    }

    /// Basis (in RREF) of `{v : M·vᵀ = 0}`.
    pub fn kernel(&self) -> MatFp {
        let r = self.rref();
        let cols = self.ncols();
        let piv = r.pivots.clone().unwrap();
        let mut is_pivot = vec![false; cols];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let mut out = MatFp::empty(self.field, cols).unwrap();
        for f in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (i, &c) in piv.iter().enumerate() {
                v[c] = self.field.neg(r.get(i, f));
            }
            out.push_row(&v).unwrap();
        }
        out.rref()
    }

    /// Basis (in RREF) of `{λ : λ·M = 0}`.
    pub fn left_kernel(&self) -> MatFp {
        self.transpose().kernel()
    }

    pub fn transpose(&self) -> MatFp {
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut t = MatFp::zeros(self.field, nc, nr).unwrap();
        for r in 0..nr {
            for c in 0..nc {
                let v = self.get(r, c);
                if v != 0 {
                    t.set(c, r, v);
                }
            }
        }
        t.pivots = None;
        t
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &MatFp) -> Result<MatFp> {
        self.check_width(other.ncols())?;
        let mut m = self.clone();
        match (&mut m.store, &other.store) {
            (Store::Gf2(a), Store::Gf2(b)) => a.rows.extend(b.rows.iter().cloned()),
            (Store::Small(a), Store::Small(b)) => a.rows.extend(b.rows.iter().cloned()),
            _ => {
                return Err(Error::ModulusMismatch(
                    self.field.get(),
                    other.field.get(),
                ))
            }
        }
        m.pivots = None;
        Ok(m)
    }

    /// Sum of row spaces, in RREF.
    pub fn span_sum(&self, other: &MatFp) -> Result<MatFp> {
        Ok(self.stack(other)?.rref())
    }

    fn check_width(&self, w: usize) -> Result<()> {
        if self.ncols() != w {
            return Err(Error::WidthMismatch {
                expected: self.ncols(),
                got: w,
            });
        }
        Ok(())
    }

    /// `v` reduced against the row space of `self` (which is echelonized
    /// first if necessary). The result is zero iff `v` lies in the span.
    pub fn reduce_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.check_width(v.len())?;
        let e = self.echelon();
        let piv = e.pivots.as_ref().unwrap();
        let p = self.field.get();
        let v: Vec<u32> = v.iter().map(|x| x % p).collect();
        Ok(on_store!(&e.store, d => {
            let mut r = d.row_from(&v);
            d.reduce(piv, &mut r);
            d.row_to(&r)
        }))
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.reduce_vec(v)?.iter().all(|&x| x == 0))
    }

    /// Row space of `self` contained in the row space of `other`.
    pub fn subspace_le(&self, other: &MatFp) -> Result<bool> {
        other.check_width(self.ncols())?;
        Ok(self.reduce_rows(other)?.rank() == 0)
    }

    /// Every row of `self` reduced modulo the row space of `modulus`.
    /// The result is not echelonized.
    pub fn reduce_rows(&self, modulus: &MatFp) -> Result<MatFp> {
        self.check_width(modulus.ncols())?;
        let e = modulus.echelon();
        let piv = e.pivots.as_deref().unwrap();
        let mut out = self.clone();
        match (&mut out.store, &e.store) {
            (Store::Gf2(a), Store::Gf2(b)) => a.rows.iter_mut().for_each(|r| b.reduce(piv, r)),
            (Store::Small(a), Store::Small(b)) => {
                a.rows.iter_mut().for_each(|r| b.reduce(piv, r))
            }
            _ => {
                return Err(Error::ModulusMismatch(
                    self.field.get(),
                    modulus.field.get(),
                ))
            }
        }
        out.pivots = None;
        Ok(out)
    }

    /// An RREF basis of a complement of `modulus` inside `self + modulus`:
    /// its rows are independent modulo `modulus` and vanish on the pivot
    /// columns of `modulus`.
    pub fn complement_modulo(&self, modulus: &MatFp) -> Result<MatFp> {
        Ok(self.reduce_rows(modulus)?.rref())
    }

    /// `λ·M` for a coefficient vector `λ` over the rows.
    pub fn combine_rows(&self, coeffs: &[u32]) -> Vec<u32> {
        let cols = self.ncols();
        let mut acc = vec![0u32; cols];
        for (r, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(self.row(r)) {
                *a = self.field.add(*a, self.field.mul(c, x));
            }
        }
        acc
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &MatFp) -> Result<MatFp> {
        if self.ncols() != other.nrows() {
            return Err(Error::WidthMismatch {
                expected: self.ncols(),
                got: other.nrows(),
            });
        }
        let mut out = MatFp::empty(self.field, other.ncols())?;
        for r in 0..self.nrows() {
            out.push_row(&other.combine_rows(&self.row(r)))?;
        }
        Ok(out)
    }
}

impl fmt::Display for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.nrows() {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> PrimeP {
        PrimeP::new(p).unwrap()
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        for p in [2, 3, 5] {
            let id = MatFp::identity(k(p), 3).unwrap();
            assert_eq!(id.kernel().nrows(), 0);
            let z = MatFp::zeros(k(p), 2, 3).unwrap();
            assert_eq!(z.kernel().nrows(), 3);
            assert_eq!(z.rank(), 0);
        }
    }

    #[test]
    fn rref_small_example_f3() {
        let m = MatFp::from_rows(k(3), 3, &[vec![2, 1, 0], vec![1, 2, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(r.rows(), vec![vec![1, 2, 0], vec![0, 0, 1]]);
        assert_eq!(r.pivots(), Some(&[0usize, 2][..]));
        let ker = m.kernel();
        assert_eq!(ker.rows(), vec![vec![1, 1, 0]]);
    }

    #[test]
    fn contains_and_inclusion() {
        let s = MatFp::from_rows(k(2), 4, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]).unwrap();
        assert!(s.contains(&[0, 0, 0, 0]).unwrap());
        assert!(s.contains(&[1, 0, 1, 0]).unwrap());
        assert!(!s.contains(&[0, 0, 0, 1]).unwrap());
        let t = MatFp::from_rows(k(2), 4, &[vec![1, 0, 1, 0]]).unwrap();
        assert!(t.subspace_le(&s).unwrap());
        assert!(!s.subspace_le(&t).unwrap());
        assert!(matches!(s.contains(&[1, 0]), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn wide_gf2_rows_cross_word_boundaries() {
        let cols = 130;
        let mut m = MatFp::zeros(k(2), 3, cols).unwrap();
        m.set(0, 0, 1);
        m.set(0, 129, 1);
        m.set(1, 64, 1);
        m.set(1, 129, 1);
        m.set(2, 0, 1);
        m.set(2, 64, 1);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel().nrows(), cols - 2);
    }

    #[test]
    fn large_prime_rejected() {
        assert_eq!(MatFp::empty(k(257), 3), Err(Error::PrimeTooLarge(257)));
    }
}

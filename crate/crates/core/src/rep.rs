//! The representation `V = V_{n_1} ⊕ … ⊕ V_{n_l}` of the cyclic group of
//! order p, its action on `K[V]`, transfer, norms and the norm decomposition.
//!
//! Variables are flattened block by block: `x[1,1], …, x[n_1,1], x[1,2], …`.
//! The generator acts by `x[i,j] ↦ x[i,j] + x[i-1,j]` and fixes `x[1,j]`, so
//! `x[1,j]` spans the invariant linear forms and `x[n_j,j]` is the top
//! variable of block `j`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly, PrimeP, VarLayout};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpRep {
    p: PrimeP,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    layout: VarLayout,
}

impl CpRep {
    pub fn new(p: PrimeP, blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::NoBlocks);
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut labels = Vec::new();
        for (j, &n) in blocks.iter().enumerate() {
            if n == 0 || n > p.get() as usize {
                return Err(Error::InvalidBlockSize { size: n, p: p.get() });
            }
            offsets.push(labels.len());
            labels.extend((1..=n).map(|i| (i, j + 1)));
        }
        Ok(CpRep {
            p,
            blocks,
            offsets,
            layout: VarLayout::new(labels),
        })
    }

    pub fn field(&self) -> PrimeP {
        self.p
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of summands, equal to `dim V^G`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `dim V`, the number of variables.
    pub fn dim(&self) -> usize {
        self.layout.len()
    }

    pub fn layout(&self) -> &VarLayout {
        &self.layout
    }

    /// Size `n_j` of block `j` (1-based).
    pub fn block_size(&self, j: usize) -> Result<usize> {
        j.checked_sub(1)
            .and_then(|k| self.blocks.get(k).copied())
            .ok_or(Error::InvalidVariable(1, j))
    }

    /// Flat index of `x[i,j]`.
    pub fn var(&self, i: usize, j: usize) -> Result<usize> {
        self.layout.index(i, j).ok_or(Error::InvalidVariable(i, j))
    }

    /// Flat index of the top variable `x[n_j, j]`.
    pub fn top_var(&self, j: usize) -> Result<usize> {
        let n = self.block_size(j)?;
        self.var(n, j)
    }

    pub fn x(&self, i: usize, j: usize) -> Result<Poly> {
        Ok(Poly::var(self.p, self.dim(), self.var(i, j)?))
    }

    pub fn check_nontrivial(&self) -> Result<()> {
        match self.blocks.iter().position(|&n| n == 1) {
            Some(k) => Err(Error::TrivialSummand { block: k + 1 }),
            None => Ok(()),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        crate::poly::parse(text, &self.layout, self.p)
    }

    pub fn render(&self, f: &Poly) -> String {
        crate::poly::render(f, &self.layout)
    }

    /// The substitution realising `σ^k`, with `k` taken mod p.
    pub fn substitution(&self, k: u64) -> Substitution {
        let k = k % self.p.get() as u64;
        let binom = self.p.binomial_row(k);
        let n = self.dim();
        let mut images = Vec::with_capacity(n);
        for (j, &size) in self.blocks.iter().enumerate() {
            let off = self.offsets[j];
            for i in 1..=size {
                // x[i,j] ↦ Σ_{m=0}^{i-1} C(k,m) x[i-m,j]
                let terms = (0..i).filter_map(|m| {
                    let c = binom.get(m).copied().unwrap_or(0);
                    (c != 0).then(|| (Mono::var(n, off + i - 1 - m), c))
                });
                images.push(Poly::from_terms(self.p, n, terms));
            }
        }
        Substitution::new(images)
    }

    /// `σ^k(f)`.
    pub fn sigma(&self, f: &Poly, k: u64) -> Poly {
        self.substitution(k).apply(f)
    }

    /// `Σ_{k=0}^{p-1} σ^k(f)`.
    pub fn transfer(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(self.p, self.dim());
        for k in 0..self.p.get() as u64 {
            acc = &acc + &self.sigma(f, k);
        }
        acc
    }

    /// `Π_{k=0}^{p-1} σ^k(x[i,j])`.
    pub fn norm(&self, i: usize, j: usize) -> Result<Poly> {
        let x = self.x(i, j)?;
        let mut acc = Poly::one(self.p, self.dim());
        for k in 0..self.p.get() as u64 {
            acc = &acc * &self.sigma(&x, k);
        }
        Ok(acc)
    }

    /// Norm of the top variable of block `j`.
    pub fn top_norm(&self, j: usize) -> Result<Poly> {
        let n = self.block_size(j)?;
        self.norm(n, j)
    }

    pub fn is_invariant(&self, f: &Poly) -> bool {
        &self.sigma(f, 1) == f
    }

    /// Sequential division of `f` by the norms of the top variables of the
    /// given blocks (1-based, strictly increasing).
    pub fn norm_decompose(&self, f: &Poly, blocks: &[usize]) -> Result<DecompResult> {
        let valid = blocks.windows(2).all(|w| w[0] < w[1])
            && blocks.iter().all(|&j| j >= 1 && j <= self.num_blocks());
        if !valid {
            return Err(Error::InvalidBlockList(blocks.to_vec()));
        }
        if f.nvars() != self.dim() {
            return Err(Error::VariableCountMismatch(f.nvars(), self.dim()));
        }
        let p = self.p.get();
        let mut remainder = f.clone();
        let mut quotients = Vec::with_capacity(blocks.len());
        for &j in blocks {
            let t = self.top_var(j)?;
            let norm = self.top_norm(j)?;
            let (q, r) = divide_monic(&remainder, &norm, t, p);
            quotients.push(q);
            remainder = r;
        }
        Ok(DecompResult {
            quotients,
            remainder,
            blocks: blocks.to_vec(),
        })
    }
}

impl CpRep {
    /// Reduces `f` modulo the top norms of `blocks` (any order, repeats
    /// allowed) one term at a time until no term has degree `>= p` in one of
    /// their top variables. The top norms form a Gröbner basis, so the result
    /// is independent of the order and equals the decomposition remainder.
    pub fn normal_form(&self, f: &Poly, blocks: &[usize]) -> Result<Poly> {
        let p = self.p.get();
        let norms = blocks
            .iter()
            .map(|&j| Ok((self.top_var(j)?, self.top_norm(j)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut r = f.clone();
        loop {
            let hit = norms.iter().find_map(|(t, n)| {
                r.terms()
                    .find(|(m, _)| m.exp(*t) >= p)
                    .map(|(m, c)| (m.with_exp(*t, m.exp(*t) - p), c, n))
            });
            let Some((cofactor, c, n)) = hit else {
                return Ok(r);
            };
            r = &r - &n.mul_term(&cofactor, c);
        }
    }
}

/// Division by `divisor`, which must be monic of degree `deg` in variable `t`
/// with every other term of lower `t`-degree. Returns `(q, r)` with
/// `f = q·divisor + r` and `deg_t r < deg`.
pub fn divide_monic(f: &Poly, divisor: &Poly, t: usize, deg: u32) -> (Poly, Poly) {
    let mut q = Poly::zero(f.field(), f.nvars());
    let mut r = f.clone();
    loop {
        let lead = r
            .terms()
            .filter(|(m, _)| m.exp(t) >= deg)
            .max_by(|a, b| a.0.exp(t).cmp(&b.0.exp(t)).then_with(|| a.0.cmp(b.0)))
            .map(|(m, c)| (m.clone(), c));
        let Some((m, c)) = lead else {
            return (q, r);
        };
        let cofactor = m.with_exp(t, m.exp(t) - deg);
        r = &r - &divisor.mul_term(&cofactor, c);
        q.add_term(cofactor, c);
    }
}

/// A linear substitution of variables, with cached powers of the images.
#[derive(Debug, Clone)]
pub struct Substitution {
    images: Vec<Poly>,
    powers: HashMap<(usize, u32), Poly>,
}

impl Substitution {
    pub fn new(images: Vec<Poly>) -> Self {
        Substitution {
            images,
            powers: HashMap::new(),
        }
    }

    fn power(&mut self, var: usize, e: u32) -> &Poly {
        if !self.powers.contains_key(&(var, e)) {
            let val = if e == 1 {
                self.images[var].clone()
            } else {
                let prev = self.power(var, e - 1).clone();
                &prev * &self.images[var]
            };
            self.powers.insert((var, e), val);
        }
        &self.powers[&(var, e)]
    }

    pub fn apply_mono(&mut self, m: &Mono, c: u32) -> Poly {
        let field = self.images[0].field();
        let n = m.nvars();
        let mut acc = Poly::monomial(field, Mono::one(n), c);
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let img = &self.images[v];
            if img.num_terms() == 1 {
                let (im, ic) = img.terms().next().map(|(a, b)| (a.clone(), b)).unwrap();
                acc = acc.mul_term(&im.pow(e), field.pow(ic, e as u64));
            } else {
                let pw = self.power(v, e).clone();
                acc = &acc * &pw;
            }
        }
        acc
    }

    pub fn apply(&mut self, f: &Poly) -> Poly {
        if self.images.is_empty() {
            return f.clone();
        }
        let mut acc = Poly::zero(f.field(), f.nvars());
        for (m, c) in f.terms() {
            let t = self.apply_mono(m, c);
            acc = &acc + &t;
        }
        acc
    }
}

/// Quotients and remainder of a norm decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompResult {
    pub quotients: Vec<Poly>,
    pub remainder: Poly,
    /// Block indices (1-based) whose top norms were divided by, in order.
    pub blocks: Vec<usize>,
}

impl DecompResult {
    /// `Σ q_i·N_i + r`.
    pub fn reconstruct(&self, rep: &CpRep) -> Result<Poly> {
        let mut acc = self.remainder.clone();
        for (q, &j) in self.quotients.iter().zip(&self.blocks) {
            acc = &acc + &(q * &rep.top_norm(j)?);
        }
        Ok(acc)
    }

    /// Checks `deg_{t_i} r < p` for all `i` and `deg_{t_i} q_{i'} < p` for `i < i'`.
    pub fn degree_bounds_hold(&self, rep: &CpRep) -> Result<bool> {
        let p = rep.field().get();
        for (i, &j) in self.blocks.iter().enumerate() {
            let t = rep.top_var(j)?;
            if self.remainder.degree_in(t) >= p {
                return Ok(false);
            }
            if self.quotients[i + 1..].iter().any(|q| q.degree_in(t) >= p) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

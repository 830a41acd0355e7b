//! Random polynomials for property checks and CLI sampling.

use rand::Rng;

use crate::error::Result;
use crate::poly::{Mono, Poly, PrimeP};
use crate::rep::CpRep;

/// A random monomial of total degree exactly `d`.
pub fn random_mono<R: Rng + ?Sized>(rng: &mut R, nvars: usize, d: u32) -> Mono {
    let mut exps = vec![0u32; nvars];
    for _ in 0..d {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Mono::new(exps)
}

/// Up to `nterms` random terms of degree at most `max_degree`.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeP,
    nvars: usize,
    max_degree: u32,
    nterms: usize,
) -> Poly {
    Poly::from_terms(
        field,
        nvars,
        (0..nterms).map(|_| {
            let d = rng.gen_range(0..=max_degree);
            (random_mono(rng, nvars, d), rng.gen_range(1..field.get()))
        }),
    )
}

/// Up to `nterms` random terms, all of degree `d`.
pub fn random_homogeneous<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeP,
    nvars: usize,
    d: u32,
    nterms: usize,
) -> Poly {
    Poly::from_terms(
        field,
        nvars,
        (0..nterms).map(|_| (random_mono(rng, nvars, d), rng.gen_range(1..field.get()))),
    )
}

/// A sum of up to `nterms` random products of invariants (fixed variables,
/// norms of variables, transfers of monomials), each of degree at most
/// `max_degree`.
pub fn random_invariant<R: Rng + ?Sized>(
    rng: &mut R,
    rep: &CpRep,
    max_degree: u32,
    nterms: usize,
) -> Result<Poly> {
    let (field, n) = (rep.field(), rep.dim());
    let mut factors = Vec::new();
    for (j, &size) in rep.blocks().iter().enumerate() {
        factors.push(rep.x(1, j + 1)?);
        for i in 1..=size {
            factors.push(rep.norm(i, j + 1)?);
        }
    }
    let mut acc = Poly::zero(field, n);
    for _ in 0..nterms {
        let mut term = Poly::constant(field, n, rng.gen_range(1..field.get()) as i64);
        let mut deg = 0;
        loop {
            let f = if rng.gen_bool(0.3) {
                let d = rng.gen_range(1..=max_degree.clamp(1, 4));
                rep.transfer(&Poly::monomial(field, random_mono(rng, n, d), 1))
            } else {
                factors[rng.gen_range(0..factors.len())].clone()
            };
            let Some(e) = f.total_degree() else { continue };
            if deg + e > max_degree {
                break;
            }
            deg += e;
            term = &term * &f;
            if rng.gen_bool(0.4) {
                break;
            }
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

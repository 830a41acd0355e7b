//! Prime field arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// A prime modulus, checked by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeP(u32);

impl PrimeP {
    pub fn new(value: u64) -> Result<Self> {
        if value < 2 || value > u32::MAX as u64 || !is_prime(value) {
            return Err(Error::NotPrime(value));
        }
        Ok(PrimeP(value as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// Row `k` of Pascal's triangle reduced mod p: `C(k, m)` for `m = 0..=k`.
    pub fn binomial_row(self, k: u64) -> Vec<u32> {
        let mut row = vec![1 % self.0];
        for _ in 0..k {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(1 % self.0);
            for w in row.windows(2) {
                next.push(self.add(w[0], w[1]));
            }
            next.push(1 % self.0);
            row = next;
        }
        row
    }
}

impl fmt::Display for PrimeP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p` carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    residue: u32,
    modulus: PrimeP,
}

impl Scalar {
    pub fn new(value: i64, modulus: PrimeP) -> Self {
        Scalar {
            residue: modulus.reduce_i64(value),
            modulus,
        }
    }

    pub fn zero(modulus: PrimeP) -> Self {
        Scalar { residue: 0, modulus }
    }

    pub fn one(modulus: PrimeP) -> Self {
        Scalar::new(1, modulus)
    }

    pub fn residue(self) -> u32 {
        self.residue
    }

    pub fn modulus(self) -> PrimeP {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn inverse(self) -> Option<Scalar> {
        self.modulus.inv(self.residue).map(|r| Scalar {
            residue: r,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> Scalar {
        Scalar {
            residue: self.modulus.pow(self.residue, exp),
            modulus: self.modulus,
        }
    }

    pub fn checked_add(self, rhs: Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_mul(self, rhs: Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self * rhs)
    }

    fn same_field(self, rhs: Scalar) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), rhs.modulus.get()));
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

// Operator impls panic on mismatched moduli; use the checked_* variants when
// operands come from untrusted sources.
impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.modulus, rhs.modulus, "scalar modulus mismatch");
        Scalar {
            residue: self.modulus.add(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.modulus, rhs.modulus, "scalar modulus mismatch");
        Scalar {
            residue: self.modulus.sub(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.modulus, rhs.modulus, "scalar modulus mismatch");
        Scalar {
            residue: self.modulus.mul(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            residue: self.modulus.neg(self.residue),
            modulus: self.modulus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(PrimeP::new(2).is_ok());
        assert!(PrimeP::new(3).is_ok());
        assert!(PrimeP::new(251).is_ok());
        assert_eq!(PrimeP::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeP::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeP::new(0), Err(Error::NotPrime(0)));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [2u64, 3, 5] {
            let f = PrimeP::new(p).unwrap();
            let all: Vec<Scalar> = (0..p as i64).map(|v| Scalar::new(v, f)).collect();
            let zero = Scalar::zero(f);
            let one = Scalar::one(f);
            for &a in &all {
                assert_eq!(a + zero, a);
                assert_eq!(a * one, a);
                assert_eq!(a + (-a), zero);
                if !a.is_zero() {
                    assert_eq!(a * a.inverse().unwrap(), one);
                } else {
                    assert!(a.inverse().is_none());
                }
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!((a - b) + b, a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn negative_values_reduce() {
        let f = PrimeP::new(5).unwrap();
        assert_eq!(Scalar::new(-1, f).residue(), 4);
        assert_eq!(Scalar::new(-7, f).residue(), 3);
    }

    #[test]
    fn mismatched_moduli() {
        let a = Scalar::one(PrimeP::new(2).unwrap());
        let b = Scalar::one(PrimeP::new(3).unwrap());
        assert_eq!(a.checked_add(b), Err(Error::ModulusMismatch(2, 3)));
    }

    #[test]
    fn pascal_rows() {
        let f = PrimeP::new(5).unwrap();
        assert_eq!(f.binomial_row(4), vec![1, 4, 1, 4, 1]);
        let f = PrimeP::new(2).unwrap();
        assert_eq!(f.binomial_row(2), vec![1, 0, 1]);
    }
}

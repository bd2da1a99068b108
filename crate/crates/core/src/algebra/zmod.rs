//! Residues mod d and vectors of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Reduce any signed integer into `0..modulus`.
#[inline]
pub fn reduce(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(modulus as i64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= m as u64 {
        (s - m as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, m: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + m as u64 - b as u64) as u32
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, m: u32) -> u32 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Inverse of a raw residue; `None` when `a` shares a factor with `m`.
pub(crate) fn inv_mod(a: u32, m: u32) -> Option<u32> {
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| reduce(old_s, m))
}

pub fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    if d % 2 == 0 {
        return d == 2;
    }
    let mut k = 3u64;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Dimensions the Wigner engine accepts: odd primes only.
pub fn check_odd_prime(d: u32) -> Result<()> {
    if d % 2 == 1 && is_prime(d as u64) {
        Ok(())
    } else {
        Err(Error::BadDimension(d as u64))
    }
}

/// An element of ℤ/dℤ, always held in canonical form `0..d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZMod {
    value: u32,
    modulus: u32,
}

impl ZMod {
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Self {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<Self> {
        mod_inverse(self)
    }

    fn same_modulus(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between different moduli"
        );
    }
}

/// Multiplicative inverse mod d.
pub fn mod_inverse(a: ZMod) -> Result<ZMod> {
    match inv_mod(a.value, a.modulus) {
        Some(v) => Ok(ZMod {
            value: v,
            modulus: a.modulus,
        }),
        None => Err(Error::ZeroInverse { modulus: a.modulus }),
    }
}

impl Add for ZMod {
    type Output = ZMod;
    fn add(self, rhs: ZMod) -> ZMod {
        self.same_modulus(rhs);
        ZMod {
            value: add_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Sub for ZMod {
    type Output = ZMod;
    fn sub(self, rhs: ZMod) -> ZMod {
        self.same_modulus(rhs);
        ZMod {
            value: sub_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Mul for ZMod {
    type Output = ZMod;
    fn mul(self, rhs: ZMod) -> ZMod {
        self.same_modulus(rhs);
        ZMod {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for ZMod {
    type Output = ZMod;
    fn neg(self) -> ZMod {
        ZMod {
            value: neg_mod(self.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Debug for ZMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for ZMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector over ℤ/dℤ. Phase-space vectors are laid out `(p_1..p_n, q_1..q_n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZVector {
    modulus: u32,
    entries: Vec<u32>,
}

impl ZVector {
    pub fn zeros(len: usize, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            modulus,
            entries: vec![0; len],
        }
    }

    /// Builds a vector from signed entries, reducing each into `0..modulus`.
    pub fn from_signed(values: &[i64], modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            modulus,
            entries: values.iter().map(|&v| reduce(v, modulus)).collect(),
        }
    }

    pub(crate) fn from_raw(entries: Vec<u32>, modulus: u32) -> Self {
        debug_assert!(entries.iter().all(|&v| v < modulus));
        Self { modulus, entries }
    }

    pub fn unit(len: usize, index: usize, modulus: u32) -> Self {
        let mut v = Self::zeros(len, modulus);
        v.entries[index] = 1 % modulus;
        v
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> ZMod {
        ZMod {
            value: self.entries[i],
            modulus: self.modulus,
        }
    }

    pub fn set(&mut self, i: usize, value: ZMod) {
        assert_eq!(value.modulus, self.modulus);
        self.entries[i] = value.value;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn dot(&self, other: &ZVector) -> Result<ZMod> {
        self.check_conformant(other)?;
        let m = self.modulus as u64;
        let s = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m);
        Ok(ZMod {
            value: s as u32,
            modulus: self.modulus,
        })
    }

    pub(crate) fn check_conformant(&self, other: &ZVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ZVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.entries, self.modulus)
    }
}

impl fmt::Display for ZVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

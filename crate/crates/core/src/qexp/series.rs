use std::ops::{Add, Mul, Neg, Sub};

use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Truncated q-expansion `sum_{n < prec} a(n) q^n` with exact integer coefficients.
///
/// The precision is the length of the coefficient vector; binary operations
/// return the smaller of the two operand precisions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourierSeries {
    coeffs: Vec<BigInt>,
}

impl FourierSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(prec: usize) -> Self {
        Self::new(vec![BigInt::zero(); prec])
    }

    /// The constant series 1 (or the empty series when `prec = 0`).
    pub fn one(prec: usize) -> Self {
        Self::monomial(0, prec)
    }

    /// `q^n` to precision `prec`.
    pub fn monomial(n: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if n < prec {
            s.coeffs[n] = BigInt::one();
        }
        s
    }

    /// Builds a series from a coefficient function.
    pub fn from_fn<F: FnMut(usize) -> BigInt>(prec: usize, f: F) -> Self {
        Self::new((0..prec).map(f).collect())
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^n`; fails rather than silently reading past the precision.
    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coeffs.get(n).ok_or(Error::Precision { needed: n + 1, available: self.prec() })
    }

    /// Restriction to a smaller precision.
    pub fn truncate(&self, prec: usize) -> Result<Self> {
        if prec > self.prec() {
            return Err(Error::Precision { needed: prec, available: self.prec() });
        }
        Ok(Self::new(self.coeffs[..prec].to_vec()))
    }

    /// Applies `f` to each coefficient together with its index.
    pub fn map_indexed<F: FnMut(usize, &BigInt) -> BigInt>(&self, mut f: F) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(n, c)| f(n, c)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `q^s`, keeping the precision.
    pub fn shift(&self, s: usize) -> Self {
        let prec = self.prec();
        Self::from_fn(prec, |n| if n >= s { self.coeffs[n - s].clone() } else { BigInt::zero() })
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        series_mul(self, other)
    }

    /// `self^e` truncated to the same precision, by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let prec = self.prec();
        let mut acc = Self::one(prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = series_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = series_mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse of a series whose constant term is `+-1`.
    pub fn inverse(&self) -> Result<Self> {
        let prec = self.prec();
        if prec == 0 {
            return Ok(Self::zero(0));
        }
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::Domain("series inverse needs a unit constant term".into()));
        }
        let c0 = c0.clone();
        let support: Vec<(usize, &BigInt)> =
            self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        // b_0 = c0, and sum_{k} a_k b_{n-k} = 0 for n >= 1
        let mut out: Vec<BigInt> = Vec::with_capacity(prec);
        out.push(c0.clone());
        for n in 1..prec {
            let mut acc = BigInt::zero();
            for &(k, a) in &support {
                if k > n {
                    break;
                }
                acc += a * &out[n - k];
            }
            out.push(-(acc * &c0));
        }
        Ok(Self::new(out))
    }
}

impl Add for &FourierSeries {
    type Output = FourierSeries;
    fn add(self, rhs: &FourierSeries) -> FourierSeries {
        let prec = self.prec().min(rhs.prec());
        FourierSeries::from_fn(prec, |n| &self.coeffs[n] + &rhs.coeffs[n])
    }
}

impl Sub for &FourierSeries {
    type Output = FourierSeries;
    fn sub(self, rhs: &FourierSeries) -> FourierSeries {
        let prec = self.prec().min(rhs.prec());
        FourierSeries::from_fn(prec, |n| &self.coeffs[n] - &rhs.coeffs[n])
    }
}

impl Neg for &FourierSeries {
    type Output = FourierSeries;
    fn neg(self) -> FourierSeries {
        FourierSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &FourierSeries {
    type Output = FourierSeries;
    fn mul(self, rhs: &FourierSeries) -> FourierSeries {
        series_mul(self, rhs)
    }
}

/// Below this many term products the sparse schoolbook loop beats packing.
const SCHOOLBOOK_WORK: usize = 1 << 22;

/// Exact Cauchy product truncated to the smaller precision.
pub fn series_mul(a: &FourierSeries, b: &FourierSeries) -> FourierSeries {
    let prec = a.prec().min(b.prec());
    if prec == 0 {
        return FourierSeries::zero(0);
    }
    let a = &a.coeffs[..prec];
    let b = &b.coeffs[..prec];
    let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
    let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
    if nnz_a.min(nnz_b).saturating_mul(prec) <= SCHOOLBOOK_WORK {
        FourierSeries::new(sparse_product(a, b, prec))
    } else {
        FourierSeries::new(kronecker_product(a, b, prec))
    }
}

/// Schoolbook product driven by the sparser operand.
pub(crate) fn sparse_product(a: &[BigInt], b: &[BigInt], prec: usize) -> Vec<BigInt> {
    let (sparse, dense) = {
        let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
        let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
        if nnz_a <= nnz_b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut out = vec![BigInt::zero(); prec];
    for (i, ai) in sparse.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (o, bj) in out[i..].iter_mut().zip(dense.iter()) {
            if !bj.is_zero() {
                *o += ai * bj;
            }
        }
    }
    out
}

/// Exact product by Kronecker substitution: evaluate both series at `2^s`,
/// multiply the two big integers, and read the coefficients back with a signed
/// borrow. The slot width `s` is large enough that no coefficient overflows.
///
/// The one huge multiplication goes through `malachite`, whose FFT
/// multiplication is far faster than `num-bigint` at these sizes.
pub(crate) fn kronecker_product(a: &[BigInt], b: &[BigInt], prec: usize) -> Vec<BigInt> {
    let bits_a = a.iter().map(|c| c.bits()).max().unwrap_or(0);
    let bits_b = b.iter().map(|c| c.bits()).max().unwrap_or(0);
    if bits_a == 0 || bits_b == 0 {
        return vec![BigInt::zero(); prec];
    }
    let len_bits = 64 - (prec as u64).leading_zeros() as u64;
    let slot = bits_a + bits_b + len_bits + 2;
    let product = pack(a, slot) * pack(b, slot);
    let negate = product < 0;
    let magnitude = if negate { -product } else { product };
    let limbs = Natural::try_from(magnitude).expect("non-negative").into_limbs_asc();
    unpack(&limbs, negate, slot, prec)
}

fn pack(coeffs: &[BigInt], slot: u64) -> Integer {
    let total_bits = slot * coeffs.len() as u64;
    let words = (total_bits / 64 + 2) as usize;
    let mut pos = vec![0u64; words];
    let mut neg = vec![0u64; words];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let target = if c.sign() == Sign::Minus { &mut neg } else { &mut pos };
        write_bits(target, i as u64 * slot, &c.magnitude().to_u64_digits());
    }
    Integer::from(Natural::from_owned_limbs_asc(pos)) - Integer::from(Natural::from_owned_limbs_asc(neg))
}

fn write_bits(target: &mut [u64], offset: u64, digits: &[u64]) {
    let word = (offset / 64) as usize;
    let shift = (offset % 64) as u32;
    for (j, &d) in digits.iter().enumerate() {
        let v = (d as u128) << shift;
        target[word + j] |= v as u64;
        if shift > 0 {
            target[word + j + 1] |= (v >> 64) as u64;
        }
    }
}

/// `width` bits of `src` starting at bit `offset`, as 32-bit digits.
fn read_bits(src: &[u64], offset: u64, width: u64) -> BigUint {
    let nwords = width.div_ceil(64) as usize;
    let word = (offset / 64) as usize;
    let shift = (offset % 64) as u32;
    let mut out = Vec::with_capacity(2 * nwords);
    for j in 0..nwords {
        let lo = src.get(word + j).copied().unwrap_or(0) as u128;
        let hi = src.get(word + j + 1).copied().unwrap_or(0) as u128;
        let mut w = (((hi << 64) | lo) >> shift) as u64;
        let taken = 64 * j as u64;
        if width - taken < 64 {
            w &= u64::MAX >> (64 - (width - taken));
        }
        out.push(w as u32);
        out.push((w >> 32) as u32);
    }
    BigUint::new(out)
}

fn unpack(limbs: &[u64], negate: bool, slot: u64, prec: usize) -> Vec<BigInt> {
    let half = BigUint::one() << (slot - 1);
    let full = BigInt::one() << slot;
    let mut carry = false;
    let mut out = Vec::with_capacity(prec);
    for i in 0..prec {
        let mut u = read_bits(limbs, i as u64 * slot, slot);
        if carry {
            u += 1u32;
        }
        let c = if u >= half {
            carry = true;
            BigInt::from_biguint(Sign::Plus, u) - &full
        } else {
            carry = false;
            BigInt::from_biguint(Sign::Plus, u)
        };
        out.push(if negate { -c } else { c });
    }
    out
}

/// Reference schoolbook product, kept for testing the fast paths.
pub fn naive_mul(a: &FourierSeries, b: &FourierSeries) -> FourierSeries {
    let prec = a.prec().min(b.prec());
    FourierSeries::from_fn(prec, |n| (0..=n).map(|i| &a.coeffs[i] * &b.coeffs[n - i]).sum())
}

/// `|c|` for every coefficient, as a convenience for bound checks.
pub fn abs_coeffs(s: &FourierSeries) -> Vec<BigInt> {
    s.coeffs.iter().map(|c| c.abs()).collect()
}

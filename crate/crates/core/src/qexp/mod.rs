//! Exact q-expansion engine.

mod eisenstein;
mod eta;
pub mod io;
mod series;

pub use eisenstein::{
    bernoulli, bernoulli_numbers, eisenstein_e2, eisenstein_e2_level, eisenstein_series, sigma_table, EisensteinSeries,
    Rational,
};
pub use eta::{eta_product, jacobi_cube, pentagonal};
pub use series::{abs_coeffs, naive_mul, series_mul, FourierSeries};

pub use crate::arith::sigma;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::{Error, Result};

/// `U(d)`: `sum a(dn) q^n`, precision `ceil(prec / d)`.
pub fn u_operator(f: &FourierSeries, d: u64) -> Result<FourierSeries> {
    if d == 0 {
        return Err(Error::Domain("U(0) is undefined".into()));
    }
    let d = d as usize;
    let prec = f.prec().div_ceil(d);
    Ok(FourierSeries::from_fn(prec, |n| f.coeffs()[n * d].clone()))
}

/// `V(d)`: `sum a(n) q^{dn}`, precision `d * prec`.
pub fn v_operator(f: &FourierSeries, d: u64) -> Result<FourierSeries> {
    if d == 0 {
        return Err(Error::Domain("V(0) is undefined".into()));
    }
    let d = d as usize;
    let prec = f.prec().checked_mul(d).ok_or_else(|| Error::Domain("V(d) precision overflows".into()))?;
    Ok(FourierSeries::from_fn(prec, |n| if n % d == 0 { f.coeffs()[n / d].clone() } else { BigInt::zero() }))
}

/// `theta = q d/dq`: `a(n) -> n a(n)`.
pub fn theta_operator(f: &FourierSeries) -> FourierSeries {
    f.map_indexed(|n, c| c * BigInt::from(n))
}

/// `theta^e`, i.e. `a(n) -> n^e a(n)`.
pub fn theta_power(f: &FourierSeries, e: u32) -> FourierSeries {
    f.map_indexed(|n, c| c * num_traits::pow(BigInt::from(n), e as usize))
}

/// A character `n -> {-1, 0, 1}` determined by `n mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticCharacter {
    pub modulus: u64,
    values: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn from_table(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::Domain("character table must be non-empty with values in {-1,0,1}".into()));
        }
        Ok(Self { modulus: values.len() as u64, values })
    }

    /// The principal character modulo `m` (1 on units, 0 elsewhere).
    pub fn principal(m: u64) -> Self {
        let values = (0..m).map(|n| if n.gcd(&m) == 1 { 1 } else { 0 }).collect();
        Self { modulus: m, values }
    }

    /// Kronecker character `n -> (D/n)` of a fundamental discriminant, modulus `|D|`.
    pub fn kronecker(d: i64) -> Self {
        let m = d.unsigned_abs();
        let values = (0..m).map(|n| arith::kronecker(d, n)).collect();
        Self { modulus: m, values }
    }

    /// Legendre symbol `(n/p)` for an odd prime `p`.
    pub fn legendre(p: u64) -> Self {
        let values = (0..p).map(|n| arith::legendre(n as i64, p)).collect();
        Self { modulus: p, values }
    }

    pub fn eval(&self, n: u64) -> i8 {
        self.values[(n % self.modulus) as usize]
    }
}

/// A twisted series together with its level bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twisted {
    pub series: FourierSeries,
    /// `N * m^2` for an input of level `N` twisted by a character of modulus `m`.
    pub level: u64,
}

/// `sum psi(n) a(n) q^n`.
pub fn twist_quadratic(f: &FourierSeries, chi: &QuadraticCharacter, level: u64) -> Twisted {
    let series = f.map_indexed(|n, c| match chi.eval(n as u64) {
        0 => BigInt::zero(),
        1 => c.clone(),
        _ => -c,
    });
    Twisted { series, level: level * chi.modulus * chi.modulus }
}

/// Keeps only the coefficients whose index satisfies `pred`.
pub fn filter_indices<P: Fn(u64) -> bool>(f: &FourierSeries, pred: P) -> FourierSeries {
    f.map_indexed(|n, c| if pred(n as u64) { c.clone() } else { BigInt::zero() })
}

/// `[SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    arith::factor_u64(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p + 1))
}

/// Sturm bound `floor(k/12 * [SL_2(Z) : Gamma_0(N)])`.
pub fn sturm_bound(k: u64, n: u64) -> u64 {
    k * gamma0_index(n) / 12
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceOutcome {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Whether `a(n) = b(n) (mod m)` for all `n <= bound`.
pub fn congruent_up_to(a: &FourierSeries, b: &FourierSeries, m: &BigInt, bound: usize) -> Result<CongruenceOutcome> {
    let avail = a.prec().min(b.prec());
    if bound >= avail {
        return Err(Error::Precision { needed: bound + 1, available: avail });
    }
    let first_failure = (0..=bound).find(|&n| !(&a.coeffs()[n] - &b.coeffs()[n]).is_multiple_of(m));
    Ok(CongruenceOutcome { holds: first_failure.is_none(), first_failure })
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FourierSeries;
use crate::{Error, Result};

/// Exact rational number backed by `num_rational`; always reduced with a positive denominator.
pub type Rational = BigRational;

/// Bernoulli numbers `B_0 .. B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(m+1, m)
        b.push(-acc / Rational::from_integer(binom));
    }
    b
}

pub fn bernoulli(k: usize) -> Rational {
    bernoulli_numbers(k).pop().expect("non-empty")
}

/// `E_k` split as `1 + factor * sum sigma_{k-1}(n) q^n`.
///
/// `scaled` is `den * E_k` where `den` is the denominator of `factor`, so it
/// has integer coefficients; `integral()` returns `E_k` itself when `den = 1`.
#[derive(Clone, Debug)]
pub struct EisensteinSeries {
    pub weight: u32,
    pub factor: Rational,
    pub scaled: FourierSeries,
}

impl EisensteinSeries {
    pub fn denominator(&self) -> &BigInt {
        self.factor.denom()
    }

    /// The series itself when its coefficients are integers.
    pub fn integral(&self) -> Option<&FourierSeries> {
        self.factor.denom().is_one().then_some(&self.scaled)
    }

    /// Coefficient of `q^n` as an exact rational.
    pub fn coeff(&self, n: usize) -> Result<Rational> {
        Ok(Rational::new(self.scaled.coeff(n)?.clone(), self.denominator().clone()))
    }
}

/// Divisor sums `sigma_m(n)` for `0 <= n < prec` (entry 0 is 0), by a divisor sieve.
pub fn sigma_table(m: u32, prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec];
    for d in 1..prec {
        let dm = num_traits::pow(BigInt::from(d), m as usize);
        let mut j = d;
        while j < prec {
            out[j] += &dm;
            j += d;
        }
    }
    out
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` for even `k >= 4`.
pub fn eisenstein_series(k: u32, prec: usize) -> Result<EisensteinSeries> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Domain(format!("Eisenstein series needs even k >= 4, got {k}")));
    }
    let bk = bernoulli(k as usize);
    let factor = -Rational::from_integer(BigInt::from(2 * k)) / bk;
    Ok(build(k, factor, prec))
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n` (quasimodular).
pub fn eisenstein_e2(prec: usize) -> EisensteinSeries {
    build(2, Rational::from_integer(BigInt::from(-24)), prec)
}

/// `E_2(z) - p^r E_2(p^r z)`, a genuine weight-2 form on `Gamma_0(p^r)`
/// that agrees with `E_2` modulo `p^r`.
pub fn eisenstein_e2_level(p: u64, r: u32, prec: usize) -> Result<FourierSeries> {
    let pr = p.checked_pow(r).filter(|&q| q > 1).ok_or_else(|| Error::Domain(format!("bad level {p}^{r}")))?;
    let e2 = eisenstein_e2(prec);
    let e2 = e2.integral().expect("E_2 has integer coefficients");
    let shifted = super::v_operator(&e2.truncate(prec.div_ceil(pr as usize))?, pr)?.truncate(prec)?;
    Ok(e2 - &shifted.scale(&BigInt::from(pr)))
}

fn build(k: u32, factor: Rational, prec: usize) -> EisensteinSeries {
    let den = factor.denom().clone();
    let num = factor.numer().clone();
    let sig = sigma_table(k - 1, prec);
    let scaled = FourierSeries::from_fn(prec, |n| if n == 0 { den.clone() } else { &num * &sig[n] });
    EisensteinSeries { weight: k, factor, scaled }
}

//! Representation numbers of two quadratic forms and their splitting into an
//! Eisenstein part and a cusp part.
//!
//! `Q1 = x^2 + y^2 + 3z^2 + 3w^2 + xz + yw` has level 11 and its cusp part is a
//! multiple of the level-11 newform; `Q2` is the sum of 24 squares, whose cusp
//! part is a combination of `tau(n)`, `tau(n/2)`, `tau(n/4)`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::sigma_of_quotient;
use crate::newforms::{build_form, NewformSpec};
use crate::qexp::FourierSeries;
use crate::{Error, Result};

/// `Q(x) = x^T A x / 2` for a symmetric integer `A` with even diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticFormSpec {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

/// Largest dimension handled by lattice enumeration.
pub const MAX_ENUM_DIM: usize = 6;

impl QuadraticFormSpec {
    pub fn new(name: &str, gram: Vec<Vec<i64>>) -> Result<Self> {
        let spec = Self { name: name.into(), gram };
        let d = spec.dim();
        if d == 0 || spec.gram.iter().any(|r| r.len() != d) {
            return Err(Error::Domain("Gram matrix must be square and non-empty".into()));
        }
        for i in 0..d {
            if spec.gram[i][i] % 2 != 0 {
                return Err(Error::Domain("Gram matrix needs an even diagonal".into()));
            }
            for j in 0..d {
                if spec.gram[i][j] != spec.gram[j][i] {
                    return Err(Error::Domain("Gram matrix must be symmetric".into()));
                }
            }
        }
        spec.cholesky()?;
        Ok(spec)
    }

    pub fn q1() -> Self {
        Self::new("Q1", vec![vec![2, 0, 1, 0], vec![0, 2, 0, 1], vec![1, 0, 6, 0], vec![0, 1, 0, 6]])
            .expect("Q1 is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// `Q(x)`, exactly.
    pub fn eval(&self, x: &[i64]) -> i64 {
        let d = self.dim();
        let mut q = 0i64;
        for i in 0..d {
            q += self.gram[i][i] / 2 * x[i] * x[i];
            for j in i + 1..d {
                q += self.gram[i][j] * x[i] * x[j];
            }
        }
        q
    }

    /// `Q(x) = sum_i h_i (x_i + sum_{j > i} m_ij x_j)^2` with exact rational
    /// `h_i` and `m_ij`; fails unless every pivot is positive.
    pub fn cholesky(&self) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
        let d = self.dim();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into()) * &half).collect())
            .collect();
        let mut h = vec![BigRational::zero(); d];
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            if !a[i][i].is_positive() {
                return Err(Error::Domain(format!("{} is not positive definite", self.name)));
            }
            h[i] = a[i][i].clone();
            for j in i + 1..d {
                m[i][j] = &a[i][j] / &h[i];
            }
            for j in i + 1..d {
                for l in i + 1..d {
                    let delta = &h[i] * &m[i][j] * &m[i][l];
                    a[j][l] -= delta;
                }
            }
        }
        Ok((h, m))
    }
}

/// `r_Q(n)` for `0 <= n <= n_max` by Fincke-Pohst enumeration.
///
/// Coordinate ranges come from the exact Cholesky data, widened slightly so
/// that float rounding cannot drop a vector; each candidate is then tested
/// with the exact integer value of `Q`.
pub fn r_q_enumerate(spec: &QuadraticFormSpec, n_max: u64) -> Result<Vec<u64>> {
    let d = spec.dim();
    if d > MAX_ENUM_DIM {
        return Err(Error::Unsupported(format!("enumeration is limited to dimension {MAX_ENUM_DIM}")));
    }
    let (h, m) = spec.cholesky()?;
    let hf: Vec<f64> = h.iter().map(|v| v.to_f64().expect("finite")).collect();
    let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| v.to_f64().expect("finite")).collect()).collect();
    let budget = n_max as f64;
    let last = d - 1;
    let r = (budget / hf[last]).sqrt() + 1e-6;
    let outer: Vec<i64> = ((-r).floor() as i64..=r.ceil() as i64).collect();
    let counts = outer
        .par_iter()
        .map(|&xl| {
            let mut counts = vec![0u64; n_max as usize + 1];
            let mut x = vec![0i64; d];
            x[last] = xl;
            let used = hf[last] * (xl as f64).powi(2);
            if used <= budget + 1e-6 {
                descend(spec, &hf, &mf, n_max, last, used, &mut x, &mut counts);
            }
            counts
        })
        .reduce(
            || vec![0u64; n_max as usize + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    spec: &QuadraticFormSpec,
    h: &[f64],
    m: &[Vec<f64>],
    n_max: u64,
    fixed_from: usize,
    used: f64,
    x: &mut [i64],
    counts: &mut [u64],
) {
    if fixed_from == 0 {
        let q = spec.eval(x);
        if q >= 0 && q as u64 <= n_max {
            counts[q as usize] += 1;
        }
        return;
    }
    let i = fixed_from - 1;
    let centre: f64 = -(i + 1..x.len()).map(|j| m[i][j] * x[j] as f64).sum::<f64>();
    let rest = (n_max as f64 - used).max(0.0);
    let r = (rest / h[i]).sqrt() + 1e-6;
    let lo = (centre - r).floor() as i64;
    let hi = (centre + r).ceil() as i64;
    for xi in lo..=hi {
        let t = xi as f64 - centre;
        let u = used + h[i] * t * t;
        if u <= n_max as f64 + 1e-6 {
            x[i] = xi;
            descend(spec, h, m, n_max, i, u, x, counts);
        }
    }
    x[i] = 0;
}

/// `sum_{k in Z} q^{k^2}`.
pub fn unary_theta(prec: usize) -> FourierSeries {
    let mut c = vec![BigInt::zero(); prec];
    let mut k = 0usize;
    while k * k < prec {
        c[k * k] += if k == 0 { 1 } else { 2 };
        k += 1;
    }
    FourierSeries::new(c)
}

/// `r_{Q2}(n)` for `n <= n_max`, as the 24th power of the unary theta series.
pub fn r_q2_theta(n_max: usize) -> Vec<BigInt> {
    let (_, t24) = theta_powers(n_max + 1);
    t24.into_coeffs()
}

/// `(theta^8, theta^24)` to precision `prec`, by squarings.
pub fn theta_powers(prec: usize) -> (FourierSeries, FourierSeries) {
    let t = unary_theta(prec);
    let t2 = t.mul(&t);
    let t4 = t2.mul(&t2);
    let t8 = t4.mul(&t4);
    let t16 = t8.mul(&t8);
    let t24 = t16.mul(&t8);
    (t8, t24)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadForm {
    Q1,
    Q2,
}

impl FromStr for QuadForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q1" => Ok(QuadForm::Q1),
            "q2" => Ok(QuadForm::Q2),
            _ => Err(Error::Parse(format!("unknown quadratic form {s:?}"))),
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadForm::Q1 => "q1",
            QuadForm::Q2 => "q2",
        })
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `tau(n / d)`, zero unless `d | n`.
fn coeff_of_quotient(f: &FourierSeries, n: u64, d: u64) -> BigInt {
    if n == 0 || !n.is_multiple_of(d) {
        BigInt::zero()
    } else {
        f.coeffs()[(n / d) as usize].clone()
    }
}

/// Coefficient tables the two decompositions draw on.
#[derive(Clone, Debug)]
pub struct CuspData {
    /// `tau(n)` for `Q2`, the level-11 newform for `Q1`.
    pub series: FourierSeries,
    pub form: QuadForm,
}

impl CuspData {
    pub fn build(form: QuadForm, n_max: usize) -> Result<Self> {
        let spec = match form {
            QuadForm::Q1 => NewformSpec::level11(),
            QuadForm::Q2 => NewformSpec::delta(12)?,
        };
        Ok(Self { series: build_form(&spec, n_max + 1)?, form })
    }
}

/// Coefficient of `q^n` in the Eisenstein part.
pub fn eisenstein_coeff(form: QuadForm, n: u64) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    match form {
        QuadForm::Q1 => {
            let s = sigma_of_quotient(1, n, 1) - BigInt::from(11) * sigma_of_quotient(1, n, 11);
            rat(12, 5) * BigRational::from_integer(s)
        }
        QuadForm::Q2 => {
            let s = sigma_of_quotient(11, n, 1) - BigInt::from(2) * sigma_of_quotient(11, n, 2)
                + BigInt::from(4096) * sigma_of_quotient(11, n, 4);
            rat(16, 691) * BigRational::from_integer(s)
        }
    }
}

pub const GAMMAS: [i64; 3] = [259, 11920, 1_060_864];

/// `259 tau(n) + 11920 tau(n/2) + 1060864 tau(n/4)`.
pub fn gamma_combination(tau: &FourierSeries, n: u64) -> BigInt {
    BigInt::from(GAMMAS[0]) * coeff_of_quotient(tau, n, 1)
        + BigInt::from(GAMMAS[1]) * coeff_of_quotient(tau, n, 2)
        + BigInt::from(GAMMAS[2]) * coeff_of_quotient(tau, n, 4)
}

/// Coefficient of `q^n` in the cusp part.
pub fn cusp_coeff(data: &CuspData, n: u64) -> Result<BigRational> {
    if n as usize >= data.series.prec() {
        return Err(Error::Precision { needed: n as usize + 1, available: data.series.prec() });
    }
    Ok(match data.form {
        QuadForm::Q1 => rat(8, 5) * BigRational::from_integer(data.series.coeffs()[n as usize].clone()),
        QuadForm::Q2 => rat(128, 691) * BigRational::from_integer(gamma_combination(&data.series, n)),
    })
}

/// Representation numbers of `form` for `n <= n_max`.
pub fn representation_numbers(form: QuadForm, n_max: u64) -> Result<Vec<BigInt>> {
    Ok(match form {
        QuadForm::Q1 => r_q_enumerate(&QuadraticFormSpec::q1(), n_max)?.into_iter().map(BigInt::from).collect(),
        QuadForm::Q2 => r_q2_theta(n_max as usize),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub form: QuadForm,
    pub n_max: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

/// Checks `r_Q(n) = E_Q(n) + C_Q(n)` exactly for `n <= n_max`.
pub fn decomposition_check(form: QuadForm, n_max: u64) -> Result<DecompositionReport> {
    let r = representation_numbers(form, n_max)?;
    let data = CuspData::build(form, n_max as usize)?;
    decomposition_check_with(form, &r, &data)
}

pub fn decomposition_check_with(form: QuadForm, r: &[BigInt], data: &CuspData) -> Result<DecompositionReport> {
    let n_max = r.len() as u64 - 1;
    let failures: Vec<u64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let total = eisenstein_coeff(form, n) + cusp_coeff(data, n)?;
            Ok((total != BigRational::from_integer(r[n as usize].clone())).then_some(n))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(DecompositionReport { form, n_max, holds: failures.is_empty(), first_failure: failures.first().copied() })
}

/// `n, r_Q, eis_num, eis_den, cusp_num, cusp_den` rows.
pub fn write_table_csv<W: Write>(form: QuadForm, r: &[BigInt], data: &CuspData, mut w: W) -> Result<()> {
    writeln!(w, "n,r_Q,eis_num,eis_den,cusp_num,cusp_den")?;
    for (n, rn) in r.iter().enumerate() {
        let e = eisenstein_coeff(form, n as u64);
        let c = cusp_coeff(data, n as u64)?;
        writeln!(w, "{n},{rn},{},{},{},{}", e.numer(), e.denom(), c.numer(), c.denom())?;
    }
    Ok(())
}

/// `tau(2^a)` for `a <= a_max` by the Hecke recursion.
pub fn tau_two_powers(a_max: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::one(), BigInt::from(-24)];
    let p11 = BigInt::from(2048);
    while t.len() <= a_max {
        let n = t.len();
        let next = BigInt::from(-24) * &t[n - 1] - &p11 * &t[n - 2];
        t.push(next);
    }
    t.truncate(a_max + 1);
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FAlphaSequence {
    pub gammas: [i64; 3],
    /// `f_a` as decimal strings.
    pub values: Vec<String>,
    /// `f_a != 0` for every stored `a`.
    pub nonvanishing: bool,
    /// `tau(2^a) != 0` for every stored `a`.
    pub tau_nonvanishing: bool,
    /// Indices `a >= 2` where `f_a = -24 f_{a-1} - 2048 f_{a-2}` fails.
    pub recurrence_failures: Vec<usize>,
}

impl FAlphaSequence {
    pub fn value(&self, a: usize) -> BigInt {
        self.values[a].parse().expect("stored as decimal")
    }
}

/// `f_a = 259 tau(2^a) + 11920 tau(2^{a-1}) + 1060864 tau(2^{a-2})`, computed directly.
pub fn f_alpha_values(a_max: usize) -> Vec<BigInt> {
    let t = tau_two_powers(a_max);
    let at = |i: isize| if i < 0 { BigInt::zero() } else { t[i as usize].clone() };
    (0..=a_max as isize)
        .map(|a| {
            BigInt::from(GAMMAS[0]) * at(a) + BigInt::from(GAMMAS[1]) * at(a - 1) + BigInt::from(GAMMAS[2]) * at(a - 2)
        })
        .collect()
}

pub fn f_alpha(a_max: usize) -> FAlphaSequence {
    let f = f_alpha_values(a_max);
    let t = tau_two_powers(a_max);
    let recurrence_failures =
        (2..=a_max).filter(|&a| f[a] != BigInt::from(-24) * &f[a - 1] - BigInt::from(2048) * &f[a - 2]).collect();
    FAlphaSequence {
        gammas: GAMMAS,
        nonvanishing: f.iter().all(|v| !v.is_zero()),
        tau_nonvanishing: t.iter().all(|v| !v.is_zero()),
        values: f.iter().map(|v| v.to_string()).collect(),
        recurrence_failures,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm19Report {
    pub n_max: u64,
    /// `r_{Q2}(n) = E(n)` exactly when `tau(n) = 0`, for every `n` checked.
    pub biconditional_holds: bool,
    /// `gamma`-combination `= (f_a / tau(2^a)) tau(n)` for `n = 2^a m`, `m` odd.
    pub factorization_holds: bool,
    pub counterexample: Option<u64>,
    /// How many `n` had `tau(n) = 0` (expected 0).
    pub tau_zeros: u64,
}

impl Thm19Report {
    pub fn passed(&self) -> bool {
        self.biconditional_holds && self.factorization_holds
    }
}

/// For `1 <= n <= n_max`: `r_{Q2}(n)` equals its Eisenstein part iff `tau(n) = 0`.
pub fn thm19_check(n_max: u64) -> Result<Thm19Report> {
    let r = r_q2_theta(n_max as usize);
    let data = CuspData::build(QuadForm::Q2, n_max as usize)?;
    thm19_check_with(&r, &data)
}

pub fn thm19_check_with(r: &[BigInt], data: &CuspData) -> Result<Thm19Report> {
    let n_max = r.len() as u64 - 1;
    let tau = &data.series;
    let a_max = 64 - n_max.max(1).leading_zeros() as usize;
    let f = f_alpha_values(a_max);
    let t2 = tau_two_powers(a_max);
    let rows: Vec<(u64, bool, bool, bool)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let tau_n = &tau.coeffs()[n as usize];
            let equals_eis = BigRational::from_integer(r[n as usize].clone()) == eisenstein_coeff(QuadForm::Q2, n);
            let bicond = equals_eis == tau_n.is_zero();
            let a = n.trailing_zeros() as usize;
            let fact = gamma_combination(tau, n) * &t2[a] == &f[a] * tau_n;
            (n, bicond, fact, tau_n.is_zero())
        })
        .collect();
    let counterexample = rows.iter().find(|r| !(r.1 && r.2)).map(|r| r.0);
    Ok(Thm19Report {
        n_max,
        biconditional_holds: rows.iter().all(|r| r.1),
        factorization_holds: rows.iter().all(|r| r.2),
        counterexample,
        tau_zeros: rows.iter().filter(|r| r.3).count() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_small_counts() {
        let r = r_q_enumerate(&QuadraticFormSpec::q1(), 20).unwrap();
        assert_eq!(r[0], 1);
        assert_eq!(r[1], 4);
        // brute force over a box that certainly contains every solution
        let q = QuadraticFormSpec::q1();
        let mut want = [0u64; 21];
        for a in -7..=7i64 {
            for b in -7..=7i64 {
                for c in -4..=4i64 {
                    for d in -4..=4i64 {
                        let v = q.eval(&[a, b, c, d]);
                        if v <= 20 {
                            want[v as usize] += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(r, want.to_vec());
    }

    #[test]
    fn rejects_indefinite_and_odd() {
        assert!(QuadraticFormSpec::new("h", vec![vec![2, 3], vec![3, 2]]).is_err());
        assert!(QuadraticFormSpec::new("odd", vec![vec![1]]).is_err());
        assert!(QuadraticFormSpec::new("asym", vec![vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn q2_first_terms() {
        let r = r_q2_theta(2);
        assert_eq!(r[0], BigInt::from(1));
        assert_eq!(r[1], BigInt::from(48));
        assert_eq!(r[2], BigInt::from(1104));
    }

    #[test]
    fn printed_coefficients() {
        assert_eq!(eisenstein_coeff(QuadForm::Q2, 1), rat(16, 691));
        assert_eq!(eisenstein_coeff(QuadForm::Q1, 11), rat(12, 5));
        let data = CuspData::build(QuadForm::Q2, 4).unwrap();
        assert_eq!(cusp_coeff(&data, 1).unwrap(), rat(33152, 691));
        assert_eq!(cusp_coeff(&data, 0).unwrap(), BigRational::zero());
    }

    #[test]
    fn f_alpha_start() {
        let f = f_alpha_values(3);
        assert_eq!(f[0], BigInt::from(259));
        assert_eq!(f[1], BigInt::from(5704));
        assert_eq!(f[2], BigInt::from(393536));
        assert_eq!(BigInt::from(-24) * &f[1] - BigInt::from(2048) * &f[0], BigInt::from(-667328));
        assert_eq!(f[3], BigInt::from(-24) * &f[2] - BigInt::from(2048) * &f[1]);
        assert_eq!(f_alpha(10).recurrence_failures, vec![2]);
    }

    #[test]
    fn small_decompositions() {
        assert!(decomposition_check(QuadForm::Q1, 60).unwrap().holds);
        assert!(decomposition_check(QuadForm::Q2, 60).unwrap().holds);
        assert!(thm19_check(64).unwrap().passed());
    }
}

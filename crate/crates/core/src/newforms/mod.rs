//! The seven concrete newforms and their Hecke angles.

pub mod elliptic;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, divisor_counts};
use crate::qexp::{eisenstein_series, eta_product, FourierSeries};
use crate::{Error, Result};

/// Relative slack allowed on the Deligne bound before clamping `cos(theta_p)`.
pub const DELIGNE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Recipe {
    EtaProduct,
    DeltaTimesEisenstein,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewformSpec {
    pub weight: u32,
    pub level: u64,
    pub recipe: Recipe,
}

impl NewformSpec {
    pub const LEVEL1_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

    pub fn new(weight: u32, level: u64) -> Result<Self> {
        let recipe = match (weight, level) {
            (12, 1) | (2, 11) => Recipe::EtaProduct,
            (16 | 18 | 20 | 22 | 26, 1) => Recipe::DeltaTimesEisenstein,
            _ => {
                return Err(Error::Unsupported(format!(
                    "no newform of weight {weight} and level {level} in this collection"
                )))
            }
        };
        Ok(Self { weight, level, recipe })
    }

    /// The unique normalized cusp form of weight `k` and level 1.
    pub fn delta(k: u32) -> Result<Self> {
        Self::new(k, 1)
    }

    /// The weight-2 newform of level 11.
    pub fn level11() -> Self {
        Self { weight: 2, level: 11, recipe: Recipe::EtaProduct }
    }

    pub fn all() -> Vec<Self> {
        let mut v: Vec<Self> = Self::LEVEL1_WEIGHTS.iter().map(|&k| Self::delta(k).expect("valid")).collect();
        v.push(Self::level11());
        v
    }

    pub fn name(&self) -> String {
        if self.level == 1 {
            format!("delta{}", self.weight)
        } else {
            "11a".to_string()
        }
    }

    /// Whether `p` divides the level.
    pub fn is_bad(&self, p: u64) -> bool {
        self.level.is_multiple_of(p)
    }
}

impl fmt::Display for NewformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for NewformSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "11a" || t == "level11" {
            return Ok(Self::level11());
        }
        let k: u32 = t
            .strip_prefix("delta")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::Unsupported(format!("unknown form {s:?}")))?;
        Self::delta(k)
    }
}

/// q-expansion of the form to precision `prec`, normalized with `a(1) = 1`.
pub fn build_form(spec: &NewformSpec, prec: usize) -> Result<FourierSeries> {
    let f = match (spec.weight, spec.level) {
        (12, 1) => eta_product(&[(1, 24)], prec)?,
        (2, 11) => eta_product(&[(1, 2), (11, 2)], prec)?,
        (k, 1) => {
            let delta = eta_product(&[(1, 24)], prec)?;
            let e = eisenstein_series(k - 12, prec)?;
            let e = e.integral().ok_or_else(|| Error::Unsupported(format!("E_{} is not integral", k - 12)))?;
            delta.mul(e)
        }
        _ => return Err(Error::Unsupported(format!("{spec:?}"))),
    };
    if prec > 1 && !f.coeffs()[1].is_one() {
        return Err(Error::Relation(format!("{spec} is not normalized: a(1) = {}", f.coeffs()[1])));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub multiplicative_checked: usize,
    pub prime_power_checked: usize,
    pub violation: Option<String>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks multiplicativity on coprime pairs and the prime-power recursion
/// `a(p^{r+1}) = a(p) a(p^r) - p^{k-1} a(p^{r-1})` for all indices below `prec`.
///
/// Multiplicativity is verified as `a(n) = a(p^e) a(n / p^e)` with `p^e || n`
/// for the smallest prime `p | n`; by induction on the number of prime factors
/// this is equivalent to `a(mn) = a(m) a(n)` for every coprime pair.
/// The recursion is skipped for primes dividing `level`.
pub fn hecke_check(f: &FourierSeries, k: u32, level: u64, prec: usize) -> Result<HeckeReport> {
    let prec = prec.min(f.prec());
    let a = f.coeffs();
    let mut report = HeckeReport { multiplicative_checked: 0, prime_power_checked: 0, violation: None };
    if prec < 2 {
        return Ok(report);
    }
    if !a[1].is_one() {
        report.violation = Some(format!("a(1) = {}", a[1]));
        return Ok(report);
    }
    let spf = arith::spf_table(prec - 1);
    for n in 2..prec {
        let p = spf[n] as usize;
        let mut pe = p;
        while (n / pe).is_multiple_of(p) {
            pe *= p;
        }
        let m = n / pe;
        if m > 1 {
            report.multiplicative_checked += 1;
            if a[n] != &a[pe] * &a[m] {
                report.violation = Some(format!("a({n}) != a({pe}) a({m})"));
                return Ok(report);
            }
        } else if pe > p && !level.is_multiple_of(p as u64) {
            // n = p^{r+1}
            report.prime_power_checked += 1;
            let pk = num_traits::pow(BigInt::from(p), (k - 1) as usize);
            let expect = &a[p] * &a[n / p] - pk * &a[n / p / p];
            if a[n] != expect {
                report.violation = Some(format!("a({n}) != a({p}) a({}) - {p}^{} a({})", n / p, k - 1, n / p / p));
                return Ok(report);
            }
        } else if pe > p {
            // p || N: a(p^{r+1}) = a(p) a(p^r)
            report.prime_power_checked += 1;
            if a[n] != &a[p] * &a[n / p] {
                report.violation = Some(format!("a({n}) != a({p}) a({})", n / p));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Exact check of `|a(n)| <= d(n) n^{(k-1)/2}` for every `1 <= n < prec`,
/// done as `a(n)^2 <= d(n)^2 n^{k-1}`.
pub fn deligne_check(f: &FourierSeries, k: u32) -> Result<()> {
    let d = divisor_counts(f.prec().saturating_sub(1));
    for (n, c) in f.coeffs().iter().enumerate().skip(1) {
        let lhs = c * c;
        let rhs = BigInt::from(d[n] as u64 * d[n] as u64) * num_traits::pow(BigInt::from(n), (k - 1) as usize);
        if lhs > rhs {
            return Err(Error::Deligne { p: n as u64, a: c.to_string() });
        }
    }
    Ok(())
}

/// `a_p / (2 p^{(k-1)/2})` in double precision.
pub fn normalized_ap(a_p: &BigInt, p: u64, k: u32) -> f64 {
    if a_p.is_zero() {
        return 0.0;
    }
    let a = a_p.to_f64().expect("finite");
    a / (2.0 * (p as f64).powf(0.5 * (k as f64 - 1.0)))
}

/// `theta_p = arccos(a_p / (2 p^{(k-1)/2}))` in `[0, pi]`.
pub fn theta_angle(a_p: &BigInt, p: u64, k: u32) -> Result<f64> {
    if a_p.is_zero() {
        return Ok(FRAC_PI_2);
    }
    let c = normalized_ap(a_p, p, k);
    if c.abs() > 1.0 + DELIGNE_TOLERANCE {
        return Err(Error::Deligne { p, a: a_p.to_string() });
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Hecke angles `theta_p` for the primes `p <= range` not dividing the level.
#[derive(Clone, Debug)]
pub struct AngleTable {
    pub spec: NewformSpec,
    pub range: u64,
    primes: Vec<u64>,
    angles: Vec<f64>,
    coeffs: Vec<BigInt>,
}

impl AngleTable {
    /// Builds the table from an existing expansion (precision must exceed `range`).
    pub fn from_series(spec: NewformSpec, f: &FourierSeries, range: u64) -> Result<Self> {
        if (range as usize) >= f.prec() {
            return Err(Error::Precision { needed: range as usize + 1, available: f.prec() });
        }
        let primes: Vec<u64> = arith::primes_up_to(range).into_iter().filter(|&p| !spec.is_bad(p)).collect();
        let coeffs: Vec<BigInt> = primes.iter().map(|&p| f.coeffs()[p as usize].clone()).collect();
        let angles = primes
            .par_iter()
            .zip(coeffs.par_iter())
            .map(|(&p, a)| theta_angle(a, p, spec.weight))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { spec, range, primes, angles, coeffs })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    fn index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn angle(&self, p: u64) -> Option<f64> {
        self.index(p).map(|i| self.angles[i])
    }

    pub fn coeff(&self, p: u64) -> Option<&BigInt> {
        self.index(p).map(|i| &self.coeffs[i])
    }

    /// Exact integer test `a(p) = 0`.
    pub fn is_zero_at(&self, p: u64) -> Option<bool> {
        self.coeff(p).map(|c| c.is_zero())
    }

    /// `(p, theta_p)` in increasing order of `p`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.primes.iter().copied().zip(self.angles.iter().copied())
    }

    /// Entries with `lo <= p <= hi`; errors if the table stops short of `hi`.
    pub fn window(&self, lo: u64, hi: u64) -> Result<std::ops::Range<usize>> {
        if hi > self.range {
            return Err(Error::Precision { needed: hi as usize, available: self.range as usize });
        }
        let a = self.primes.partition_point(|&p| p < lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        Ok(a..b)
    }

    pub fn entry(&self, i: usize) -> (u64, f64, &BigInt) {
        (self.primes[i], self.angles[i], &self.coeffs[i])
    }

    /// CSV `p,theta_p` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "p,theta_p")?;
        for (p, t) in self.iter() {
            writeln!(w, "{p},{t:.16e}")?;
        }
        Ok(())
    }

    /// Largest `|a_p| / (2 p^{(k-1)/2})` over the table; at most 1 by construction.
    pub fn max_normalized(&self) -> f64 {
        self.primes
            .iter()
            .zip(&self.coeffs)
            .map(|(&p, a)| normalized_ap(a, p, self.spec.weight).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Expands the form to `x_max + 1` and tabulates its angles.
pub fn build_angle_table(spec: &NewformSpec, x_max: u64) -> Result<AngleTable> {
    let f = build_form(spec, x_max as usize + 1)?;
    AngleTable::from_series(*spec, &f, x_max)
}

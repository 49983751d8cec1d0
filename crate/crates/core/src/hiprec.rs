//! Binary fixed-point reals with a few hundred fractional bits.
//!
//! Only what the bound evaluators need: field operations, `ln`, `sqrt`,
//! `exp`, and decimal output to a requested number of significant digits.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits; 384 bits is about 115 decimal digits.
pub const FRAC_BITS: u32 = 384;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HiPrec(BigInt);

fn one_raw() -> BigInt {
    BigInt::one() << FRAC_BITS
}

impl HiPrec {
    pub fn from_raw(raw: BigInt) -> Self {
        Self(raw)
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigInt::from(n) << FRAC_BITS)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self(n << FRAC_BITS)
    }

    /// `num / den` for integers.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Interprets `v` through its shortest round-trip decimal form, so that
    /// `1e23` means the integer 10^23 rather than the nearest double.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite input to HiPrec::from_f64");
        let s = format!("{v:e}");
        Self::parse_decimal(&s).expect("Rust float formatting is parseable")
    }

    /// Parses `[-]d[.ddd][e[-]x]` exactly.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let (mant, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mant),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let digits = format!("{int_part}{frac_part}");
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let m: BigInt = digits.parse().ok()?;
        let e10 = exp - frac_part.len() as i64;
        let ten_pow = num_traits::pow(BigInt::from(10), e10.unsigned_abs() as usize);
        let raw = if e10 >= 0 { (m * ten_pow) << FRAC_BITS } else { (m << FRAC_BITS) / ten_pow };
        Some(Self(if neg { -raw } else { raw }))
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits();
        let s = bits.saturating_sub(64);
        let top = (&self.0 >> s).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(s as i32 - FRAC_BITS as i32)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.0.is_negative(), "square root of a negative number");
        Self((&self.0 << FRAC_BITS).sqrt())
    }

    /// `2 atanh(z) = 2 sum z^{2j+1} / (2j+1)` for `|z| < 1`.
    fn two_atanh(z: &Self) -> Self {
        let z2 = z.clone() * z.clone();
        let mut power = z.clone();
        let mut acc = Self(BigInt::zero());
        let mut j = 0i64;
        while !power.0.is_zero() {
            acc = acc + Self(&power.0 / (2 * j + 1));
            power = power * z2.clone();
            j += 1;
        }
        Self(acc.0 << 1)
    }

    pub fn ln2() -> Self {
        static LN2: OnceLock<HiPrec> = OnceLock::new();
        LN2.get_or_init(|| Self::two_atanh(&Self::ratio(1, 3))).clone()
    }

    pub fn ln(&self) -> Self {
        assert!(self.0.is_positive(), "logarithm of a non-positive number");
        // self = m 2^e with m in [1, 2)
        let e = self.0.bits() as i64 - 1 - FRAC_BITS as i64;
        let m = if e >= 0 { Self(&self.0 >> e as u64) } else { Self(&self.0 << (-e) as u64) };
        let one = Self(one_raw());
        let z = (m.clone() - one.clone()) / (m + one);
        Self::ln2() * Self::from_int(e) + Self::two_atanh(&z)
    }

    pub fn exp(&self) -> Self {
        // self = n ln 2 + r, |r| <= ln2 / 2
        let ln2 = Self::ln2();
        let n = (self.clone() / ln2.clone()).round_to_int();
        let r = self.clone() - ln2 * Self::from_bigint(&n);
        let mut term = Self(one_raw());
        let mut acc = term.clone();
        let mut j = 1i64;
        while !term.0.is_zero() {
            term = Self((term * r.clone()).0 / j);
            acc = acc + term.clone();
            j += 1;
        }
        let n = n.to_i64().expect("exponent fits");
        if n >= 0 {
            Self(acc.0 << n as u64)
        } else {
            Self(acc.0 >> (-n) as u64)
        }
    }

    pub fn e() -> Self {
        static E: OnceLock<HiPrec> = OnceLock::new();
        E.get_or_init(|| Self::from_int(1).exp()).clone()
    }

    pub fn pi() -> Self {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        static PI: OnceLock<HiPrec> = OnceLock::new();
        PI.get_or_init(|| {
            let atan_inv = |k: i64| {
                let mut power = Self::ratio(1, k);
                let mut acc = Self(BigInt::zero());
                let mut j = 0i64;
                while !power.0.is_zero() {
                    let t = Self(&power.0 / (2 * j + 1));
                    acc = if j % 2 == 0 { acc + t } else { acc - t };
                    power = Self(power.0 / (k * k));
                    j += 1;
                }
                acc
            };
            Self::from_int(16) * atan_inv(5) - Self::from_int(4) * atan_inv(239)
        })
        .clone()
    }

    fn round_to_int(&self) -> BigInt {
        (&self.0 + (BigInt::one() << (FRAC_BITS - 1))) >> FRAC_BITS
    }

    /// Scientific notation with `digits` significant digits (rounded).
    pub fn to_scientific(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.0.is_zero() {
            return "0".into();
        }
        let neg = self.0.sign() == Sign::Minus;
        let mag = self.0.abs();
        let mut exp10 = self.abs().to_f64().log10().floor() as i64;
        // the float estimate can be off by one near powers of ten
        for _ in 0..3 {
            let shift = digits as i64 - 1 - exp10;
            let scaled = scale_round(&mag, shift);
            let len = scaled.to_string().len();
            if len == digits {
                let s = scaled.to_string();
                let body = if digits > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
                return format!("{}{}e{}", if neg { "-" } else { "" }, body, exp10);
            }
            exp10 += len as i64 - digits as i64;
        }
        unreachable!("decimal exponent search did not settle")
    }
}

/// `round(mag * 10^shift / 2^FRAC_BITS)`.
fn scale_round(mag: &BigInt, shift: i64) -> BigInt {
    let ten = num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    let (num, den) = if shift >= 0 { (mag * ten, one_raw()) } else { (mag.clone(), one_raw() * ten) };
    (num * 2 + &den) / (den * 2)
}

impl fmt::Display for HiPrec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(f.precision().unwrap_or(50)))
    }
}

impl Add for HiPrec {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for HiPrec {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for HiPrec {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self((self.0 * rhs.0) >> FRAC_BITS)
    }
}

impl Div for HiPrec {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.0.is_zero(), "division by zero");
        Self((self.0 << FRAC_BITS) / rhs.0)
    }
}

impl Neg for HiPrec {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// The scalar operations the bound formulas are written against.
pub trait Real:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn lit(v: f64) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn e() -> Self;
    fn pi() -> Self;
    fn as_f64(&self) -> f64;
}

impl Real for f64 {
    fn lit(v: f64) -> Self {
        v
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn e() -> Self {
        std::f64::consts::E
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Real for HiPrec {
    fn lit(v: f64) -> Self {
        HiPrec::from_f64(v)
    }
    fn ln(&self) -> Self {
        HiPrec::ln(self)
    }
    fn sqrt(&self) -> Self {
        HiPrec::sqrt(self)
    }
    fn e() -> Self {
        HiPrec::e()
    }
    fn pi() -> Self {
        HiPrec::pi()
    }
    fn as_f64(&self) -> f64 {
        self.to_f64()
    }
}

//! Closed-form evaluators for the explicit bounds, and the empirical
//! quantities they are compared against.
//!
//! Every formula is written once, generically over [`Real`], and evaluated in
//! `f64` and optionally in [`HiPrec`]. Reports keep each summand separately.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{for_each_prime_in, prime_pi};
use crate::hiprec::{HiPrec, Real};
use crate::newforms::AngleTable;
use crate::quadrature::integrate;
use crate::satotate::{psi_symn_window, theta_symn_sum, Accumulator, Interval};
use crate::{Error, Result};

/// Threshold on `x` for the interval-count and symmetric-power lemmas.
pub const X_MAIN: f64 = 1e17;
/// Threshold on `x` for the zero-coefficient count.
pub const X_ZERO: f64 = 1e11;
/// Threshold on the zero height `T`.
pub const T_MIN: f64 = 1e12;
/// Range of smoothing widths allowed by the coefficient-sum bounds.
pub const DELTA_MAX: f64 = 1e-3;
/// Chebyshev-function constant: `theta(x) < THETA_RATIO x` for all `x > 1`.
pub const THETA_RATIO: f64 = 1.001102;
/// Start of the Schoenfeld band `|pi(x) - Li(x)| <= sqrt(x) log(x) / (8 pi)`.
pub const SCHOENFELD_START: u64 = 2657;

/// Significant digits printed in high-precision mode.
pub const HP_DIGITS: usize = 60;

/// `Li(x) = int_2^x dt / log t`, computed as `int_{log 2}^{log x} e^u / u du`.
pub fn li(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::Domain(format!("Li needs finite x >= 2, got {x}")));
    }
    let q = integrate(|u: f64| u.exp() / u, 2f64.ln(), x.ln(), 0.0, 1e-14)?;
    Ok(q.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    InRegime,
    Extrapolated,
}

impl Regime {
    fn from(ok: bool) -> Self {
        if ok {
            Regime::InRegime
        } else {
            Regime::Extrapolated
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_hp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub which: Which,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_hp: Option<String>,
    pub regime: Regime,
    pub terms: Vec<Term>,
    pub notes: Vec<String>,
}

/// Parameters shared by the evaluators; each evaluator reads what it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundContext {
    #[serde(rename = "N", alias = "level")]
    pub level: u64,
    #[serde(rename = "k", alias = "weight")]
    pub weight: u32,
    pub x: f64,
    #[serde(default)]
    pub interval: Option<Interval>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default, rename = "T")]
    pub t: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub j: Option<u64>,
}

impl BoundContext {
    pub fn new(level: u64, weight: u32, x: f64) -> Self {
        Self { level, weight, x, interval: None, n: None, t: None, delta: None, j: None }
    }

    pub fn with_interval(mut self, i: Interval) -> Self {
        self.interval = Some(i);
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_j(mut self, j: u64) -> Self {
        self.j = Some(j);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.level == 0 || self.weight < 2 {
            return Err(Error::Domain(format!("need N >= 1 and k >= 2, got N = {}, k = {}", self.level, self.weight)));
        }
        if !(self.x.is_finite() && self.x >= 2.0) {
            return Err(Error::Domain(format!("need finite x >= 2, got {}", self.x)));
        }
        if let Some(t) = self.t {
            if !(t.is_finite() && t > 1.0) {
                return Err(Error::Domain(format!("need finite T > 1, got {t}")));
            }
        }
        if let Some(d) = self.delta {
            if d.is_nan() || d <= 0.0 {
                return Err(Error::Domain(format!("need delta > 0, got {d}")));
            }
        }
        Ok(())
    }

    fn need_n(&self) -> Result<u64> {
        self.n.ok_or_else(|| Error::Domain("this bound needs the symmetric power index n".into()))
    }

    fn need_t(&self) -> Result<f64> {
        self.t.ok_or_else(|| Error::Domain("this bound needs the zero height T".into()))
    }

    /// `N (k - 1)`.
    fn nk(&self) -> f64 {
        self.level as f64 * (self.weight as f64 - 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    /// Interval count `|pi_{f,I}(x) - mu_ST(I) (pi(2x) - pi(x))|`.
    Main,
    /// Count of primes in `[x, 2x]` with `a(p) = 0`.
    Zero,
    /// `|Theta*_{Sym^n f}(x)|`.
    ThetaStar,
    /// `|Theta - Psi|` for `Sym^n f`.
    PrimePower,
    /// Zeros of `L(Sym^n f, s)` with imaginary part in `[j, j+1]`.
    ZeroCount,
    /// Contribution of the trivial zeros.
    TrivialZero,
    /// Sum over nontrivial zeros of height at most `T`.
    SumOverZeros,
    /// `R(T, x)` in the truncated explicit formula.
    ExplicitFormula,
}

impl Which {
    pub const ALL: [Which; 8] = [
        Which::Main,
        Which::Zero,
        Which::ThetaStar,
        Which::PrimePower,
        Which::ZeroCount,
        Which::TrivialZero,
        Which::SumOverZeros,
        Which::ExplicitFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Which::Main => "main",
            Which::Zero => "zero",
            Which::ThetaStar => "theta-star",
            Which::PrimePower => "prime-power",
            Which::ZeroCount => "zero-count",
            Which::TrivialZero => "trivial-zero",
            Which::SumOverZeros => "sum-over-zeros",
            Which::ExplicitFormula => "explicit-formula",
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Which::ALL.into_iter().find(|w| w.name() == s).ok_or_else(|| Error::Parse(format!("unknown bound {s:?}")))
    }
}

type Terms<R> = Vec<(&'static str, R)>;

fn main_terms<R: Real>(nk: f64, x: f64, len: f64) -> Terms<R> {
    let x = R::lit(x);
    let lx = x.ln();
    let llx = lx.ln();
    let x34 = x.sqrt() * x.sqrt().sqrt();
    let len = R::lit(len);
    vec![
        ("5 x^{3/4} / 2", R::lit(2.5) * x34.clone()),
        ("-x^{3/4} loglog x / (2 log x)", -(x34.clone() * llx) / (R::lit(2.0) * lx.clone())),
        ("log(N(k-1)) x^{3/4} / log x", R::lit(nk).ln() * x34 / lx),
        (
            "-2 (7 + 10 L) log L / (25 L) sqrt x",
            -(R::lit(2.0) * (R::lit(7.0) + R::lit(10.0) * len.clone()) * len.ln()) / (R::lit(25.0) * len) * x.sqrt(),
        ),
    ]
}

fn zero_terms<R: Real>(nk: f64, x: f64) -> Terms<R> {
    let x = R::lit(x);
    let lx = x.ln();
    let llx = lx.ln();
    let x34 = x.sqrt() * x.sqrt().sqrt();
    let l32 = lx.clone() * lx.sqrt();
    vec![
        ("7.392 x^{3/4} / sqrt(log x)", R::lit(7.392) * x34.clone() / lx.sqrt()),
        ("-7.391 x^{3/4} loglog x / (log x)^{3/2}", -(R::lit(7.391) * x34.clone() * llx) / l32.clone()),
        (
            "(15.296 + 14.784 log(N(k-1))) x^{3/4} / (log x)^{3/2}",
            (R::lit(15.296) + R::lit(14.784) * R::lit(nk).ln()) * x34 / l32,
        ),
    ]
}

fn theta_star_terms<R: Real>(n: u64, nk: f64, k: u32, x: f64) -> Terms<R> {
    let nr = R::lit(n as f64);
    let x = R::lit(x);
    let sx = x.sqrt();
    let lx = x.ln();
    let ln1 = R::lit(n as f64 + 1.0).ln();
    vec![
        ("(7/25) n log(n+1) sqrt x", R::lit(7.0) / R::lit(25.0) * nr.clone() * ln1.clone() * sx.clone()),
        (
            "((1/8) log x + (1/7) log(N(k-1))) n sqrt x",
            (lx.clone() / R::lit(8.0) + R::lit(nk).ln() / R::lit(7.0)) * nr * sx.clone(),
        ),
        ("(2/5) log(n+1) sqrt x", R::lit(2.0) / R::lit(5.0) * ln1 * sx.clone()),
        ("(log x + (7/5) log(k+7)) sqrt x", (lx + R::lit(7.0) / R::lit(5.0) * R::lit(k as f64 + 7.0).ln()) * sx),
    ]
}

fn prime_power_terms<R: Real>(n: u64, x: f64) -> Terms<R> {
    let x = R::lit(x);
    vec![("(8/5)(n+1) sqrt x / log x", R::lit(8.0) / R::lit(5.0) * R::lit(n as f64 + 1.0) * x.sqrt() / x.ln())]
}

fn zero_count_terms<R: Real>(n: u64, j: u64, nk: f64, k: u32) -> Terms<R> {
    let nr = R::lit(n as f64);
    let jr = R::lit(j as f64);
    vec![
        ("(5n/6) log(N(k-1)/2)", R::lit(5.0) * nr.clone() / R::lit(6.0) * (R::lit(nk) / R::lit(2.0)).ln()),
        ("2 log(4j + k + 7)", R::lit(2.0) * (R::lit(4.0) * jr.clone() + R::lit(k as f64 + 7.0)).ln()),
        (
            "(5(n+5)/6) log(n/2 + 7/2 + j)",
            R::lit(5.0) * (nr.clone() + R::lit(5.0)) / R::lit(6.0)
                * (nr / R::lit(2.0) + R::lit(7.0) / R::lit(2.0) + jr).ln(),
        ),
    ]
}

fn trivial_zero_terms<R: Real>(n: u64, x: f64) -> Terms<R> {
    vec![("(n+3) / sqrt x", R::lit(n as f64 + 3.0) / R::lit(x).sqrt())]
}

fn sum_over_zeros_terms<R: Real>(n: u64, t: f64, x: f64, nk: f64, k: u32) -> Terms<R> {
    let nr = R::lit(n as f64);
    let tr = R::lit(t);
    let sl = R::lit(x).sqrt() * tr.ln();
    vec![
        ("sqrt x log T n log(n+1)", sl.clone() * nr.clone() * R::lit(n as f64 + 1.0).ln()),
        ("(1/2) sqrt x log T log(T N(k-1))", sl.clone() * (tr.clone() * R::lit(nk)).ln() / R::lit(2.0)),
        ("sqrt x log T log n", sl.clone() * nr.ln()),
        ("(9/2) sqrt x log T log(T(k+7))", R::lit(9.0) / R::lit(2.0) * sl * (tr * R::lit(k as f64 + 7.0)).ln()),
    ]
}

fn explicit_formula_terms<R: Real>(t: f64, x: f64) -> Terms<R> {
    let tr = R::lit(t);
    let xr = R::lit(x);
    let lx = xr.ln();
    let pre = R::e() * lx.clone() / (R::lit(2.0) * tr.clone());
    vec![
        ("(e log x / 2T) 8T", pre.clone() * R::lit(8.0) * tr),
        ("(e log x / 2T) 9x", pre.clone() * R::lit(9.0) * xr.clone()),
        ("(e log x / 2T) 4x log x", pre * R::lit(4.0) * xr * lx),
    ]
}

fn terms_for<R: Real>(which: Which, ctx: &BoundContext) -> Result<Terms<R>> {
    let nk = ctx.nk();
    Ok(match which {
        Which::Main => {
            let i = ctx.interval.ok_or_else(|| Error::Domain("the interval-count bound needs an interval".into()))?;
            if i.len().is_nan() || i.len() <= 0.0 {
                return Err(Error::Domain("the interval-count bound needs alpha < beta".into()));
            }
            main_terms(nk, ctx.x, i.len())
        }
        Which::Zero => zero_terms(nk, ctx.x),
        Which::ThetaStar => theta_star_terms(ctx.need_n()?, nk, ctx.weight, ctx.x),
        Which::PrimePower => prime_power_terms(ctx.need_n()?, ctx.x),
        Which::ZeroCount => zero_count_terms(ctx.need_n()?, ctx.j.unwrap_or(0), nk, ctx.weight),
        Which::TrivialZero => trivial_zero_terms(ctx.need_n()?, ctx.x),
        Which::SumOverZeros => {
            let n = ctx.need_n()?;
            if n == 0 {
                return Err(Error::Domain("the zero-sum bound contains log n and needs n >= 1".into()));
            }
            sum_over_zeros_terms(n, ctx.need_t()?, ctx.x, nk, ctx.weight)
        }
        Which::ExplicitFormula => explicit_formula_terms(ctx.need_t()?, ctx.x),
    })
}

fn in_regime(which: Which, ctx: &BoundContext) -> bool {
    let t_ok = ctx.t.is_some_and(|t| t >= T_MIN);
    match which {
        Which::Main | Which::ThetaStar | Which::PrimePower | Which::TrivialZero => ctx.x >= X_MAIN,
        Which::Zero => ctx.x >= X_ZERO,
        Which::ZeroCount => true,
        Which::SumOverZeros | Which::ExplicitFormula => t_ok,
    }
}

/// Smoothing width used in the derivation of the interval-count bound,
/// `(sqrt(39)/20) x^{-1/4} log x`.
pub fn derivation_delta(x: f64) -> f64 {
    39f64.sqrt() / 20.0 * x.powf(-0.25) * x.ln()
}

/// Zero height used in the derivation of the symmetric-power bound, `20 sqrt(x) log x`.
pub fn derivation_height(x: f64) -> f64 {
    20.0 * x.sqrt() * x.ln()
}

/// Smallest `x` (to relative accuracy `1e-12`) beyond which the derivation's
/// smoothing width stays below `DELTA_MAX`.
pub fn derivation_delta_threshold() -> f64 {
    // delta(x) decreases for log x > 4; bisect on log x
    let (mut lo, mut hi) = (4.0f64, 200.0f64);
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if derivation_delta(mid.exp()) >= DELTA_MAX {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.exp()
}

fn notes_for(which: Which, ctx: &BoundContext, regime: Regime) -> Vec<String> {
    let mut notes = Vec::new();
    if regime == Regime::Extrapolated {
        notes.push(format!("{which}: parameters lie outside the range where the inequality is proved"));
    }
    match which {
        Which::Main => {
            let d = derivation_delta(ctx.x);
            notes.push(format!("derivation delta = {d:e}"));
            if d >= DELTA_MAX {
                notes.push(format!(
                    "derivation delta >= {DELTA_MAX:e}: outside the range of the coefficient-sum bounds (x < {:e})",
                    derivation_delta_threshold()
                ));
            }
        }
        Which::ThetaStar => {
            let t = derivation_height(ctx.x);
            notes.push(format!("derivation T = 20 sqrt(x) log x = {t:e}"));
            if t < T_MIN {
                notes.push(format!("derivation T < {T_MIN:e}: the zero-sum bound does not apply"));
            }
        }
        _ => {}
    }
    notes
}

/// Evaluates one bound, optionally also in high precision.
pub fn evaluate(which: Which, ctx: &BoundContext, high_precision: bool) -> Result<BoundReport> {
    ctx.validate()?;
    let lo: Terms<f64> = terms_for(which, ctx)?;
    let value = lo.iter().map(|t| t.1).sum::<f64>();
    let (hp_terms, value_hp) = if high_precision {
        let hp: Terms<HiPrec> = terms_for(which, ctx)?;
        let total = hp.iter().fold(HiPrec::from_int(0), |a, t| a + t.1.clone());
        (Some(hp), Some(total.to_scientific(HP_DIGITS)))
    } else {
        (None, None)
    };
    let terms = lo
        .iter()
        .enumerate()
        .map(|(i, (name, v))| Term {
            name: (*name).to_string(),
            value: *v,
            value_hp: hp_terms.as_ref().map(|h| h[i].1.to_scientific(HP_DIGITS)),
        })
        .collect();
    let regime = Regime::from(in_regime(which, ctx));
    Ok(BoundReport { which, value, value_hp, regime, terms, notes: notes_for(which, ctx, regime) })
}

pub fn thm_main_bound(ctx: &BoundContext) -> Result<BoundReport> {
    evaluate(Which::Main, ctx, false)
}

pub fn thm_zero_bound(ctx: &BoundContext) -> Result<BoundReport> {
    evaluate(Which::Zero, ctx, false)
}

pub fn theta_star_bound(n: u64, x: f64, level: u64, weight: u32) -> Result<BoundReport> {
    evaluate(Which::ThetaStar, &BoundContext::new(level, weight, x).with_n(n), false)
}

pub fn prime_power_error_bound(n: u64, x: f64) -> Result<BoundReport> {
    evaluate(Which::PrimePower, &BoundContext::new(1, 2, x).with_n(n), false)
}

pub fn zero_count_bound(n: u64, j: u64, level: u64, weight: u32) -> Result<BoundReport> {
    evaluate(Which::ZeroCount, &BoundContext::new(level, weight, 2.0).with_n(n).with_j(j), false)
}

pub fn trivial_zero_bound(n: u64, x: f64) -> Result<BoundReport> {
    evaluate(Which::TrivialZero, &BoundContext::new(1, 2, x).with_n(n), false)
}

pub fn sum_over_zeros_bound(n: u64, t: f64, x: f64, level: u64, weight: u32) -> Result<BoundReport> {
    evaluate(Which::SumOverZeros, &BoundContext::new(level, weight, x).with_n(n).with_t(t), false)
}

/// `R(T, x)`.
pub fn explicit_formula_error(t: f64, x: f64) -> Result<BoundReport> {
    evaluate(Which::ExplicitFormula, &BoundContext::new(1, 2, x).with_t(t), false)
}

/// The only term of the interval-count bound that depends on `N` and `k`, next
/// to the `loglog` term it has to stay under, `(loglog x / 2) x^{3/4} / log x`.
pub fn level_weight_term_vs_loglog(level: u64, weight: u32, x: f64) -> (f64, f64) {
    let t: Terms<f64> = main_terms(level as f64 * (weight as f64 - 1.0), x, 1.0);
    (t[2].1, -t[1].1)
}

/// Exact `|Theta_{Sym^n f}(x) - Psi_{Sym^n f}(x)|` from the table.
pub fn prime_power_error_actual(n: u64, x: u64, table: &AngleTable) -> Result<f64> {
    Ok((theta_symn_sum(x, n, table)? - psi_symn_window(x, n, table)?).abs())
}

/// `Theta*_{Sym^n f}(x) = Theta_{Sym^n f}(x) - [n = 0] (Li(2x) - Li(x))`.
pub fn theta_star_actual(n: u64, x: u64, table: &AngleTable) -> Result<f64> {
    let theta = theta_symn_sum(x, n, table)?;
    if n == 0 {
        let xf = x as f64;
        Ok(theta - (li(2.0 * xf)? - li(xf)?))
    } else {
        Ok(theta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevCheck {
    pub limit: u64,
    pub max_ratio: f64,
    pub argmax: u64,
    pub holds: bool,
}

/// Checks `theta(x) < THETA_RATIO x` for every real `x` in `(1, limit]`.
///
/// `theta(x)/x` only has local maxima at primes, so checking at each prime
/// covers the whole range.
pub fn chebyshev_theta_check(limit: u64) -> ChebyshevCheck {
    let mut acc = Accumulator::default();
    let (mut max_ratio, mut argmax) = (0.0f64, 0u64);
    for_each_prime_in(2, limit, |p| {
        acc.add((p as f64).ln());
        let r = acc.value() / p as f64;
        if r > max_ratio {
            max_ratio = r;
            argmax = p;
        }
    });
    ChebyshevCheck { limit, max_ratio, argmax, holds: max_ratio < THETA_RATIO }
}

/// `theta(x) = sum_{p <= x} log p`.
pub fn chebyshev_theta(x: u64) -> f64 {
    let mut acc = Accumulator::default();
    for_each_prime_in(2, x, |p| acc.add((p as f64).ln()));
    acc.value()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchoenfeldCheck {
    pub x: u64,
    pub pi: u64,
    pub li: f64,
    pub band: f64,
    pub regime: Regime,
    pub holds: bool,
}

/// `|pi(x) - Li(x)| <= sqrt(x) log(x) / (8 pi)`.
pub fn schoenfeld_check(x: u64) -> Result<SchoenfeldCheck> {
    let xf = x as f64;
    let pi = prime_pi(x);
    let l = li(xf)?;
    let band = xf.sqrt() * xf.ln() / (8.0 * std::f64::consts::PI);
    Ok(SchoenfeldCheck {
        x,
        pi,
        li: l,
        band,
        regime: Regime::from(x >= SCHOENFELD_START),
        holds: (pi as f64 - l).abs() <= band,
    })
}

/// Weighted count of proper prime powers `p^m` (`m >= 2`) in `[x, 2x]`:
/// `sum log p / log x`, an upper bound for `|Theta - Psi| / (n + 1)`.
pub fn proper_prime_power_weight(x: u64) -> f64 {
    let mut acc = Accumulator::default();
    let lx = (x as f64).ln();
    let hi = 2 * x;
    for_each_prime_in(2, crate::arith::isqrt(hi), |p| {
        let mut q = p * p;
        while q <= hi {
            if q >= x {
                acc.add((p as f64).ln() / lx);
            }
            match q.checked_mul(p) {
                Some(nq) => q = nq,
                None => break,
            }
        }
    });
    acc.value()
}

//! Sato-Tate statistics, the order-2 Vinogradov smoothing and the Chebyshev sums.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::prime_power;
use crate::newforms::AngleTable;
use crate::{Error, Result};

/// Compensated (Neumaier) summation with a fixed, sequential order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Accumulator::default();
    it.into_iter().for_each(|v| acc.add(v));
    acc.value()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub alpha: f64,
    pub beta: f64,
}

impl Interval {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) || !(0.0..=PI).contains(&beta) || alpha > beta {
            return Err(Error::Domain(format!("need 0 <= alpha <= beta <= pi, got [{alpha}, {beta}]")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn full() -> Self {
        Self { alpha: 0.0, beta: PI }
    }

    pub fn len(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn is_empty(&self) -> bool {
        self.beta <= self.alpha
    }

    /// Endpoint hits count as inside.
    pub fn contains(&self, theta: f64) -> bool {
        self.alpha <= theta && theta <= self.beta
    }
}

/// Sato-Tate measure `(2/pi) int_I sin^2`, via the antiderivative `(t - sin(2t)/2)/pi`.
pub fn mu_st(i: &Interval) -> f64 {
    let f = |t: f64| (t - (2.0 * t).sin() / 2.0) / PI;
    f(i.beta) - f(i.alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothSign {
    Plus,
    Minus,
}

impl SmoothSign {
    fn s(self) -> f64 {
        match self {
            SmoothSign::Plus => 1.0,
            SmoothSign::Minus => -1.0,
        }
    }
}

/// Smoothing order; fixed.
pub const SMOOTHING_ORDER: u32 = 2;

/// Majorant (`Plus`) or minorant (`Minus`) of the indicator of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingSpec {
    pub interval: Interval,
    pub delta: f64,
    pub sign: SmoothSign,
}

impl SmoothingSpec {
    pub fn new(interval: Interval, delta: f64, sign: SmoothSign) -> Result<Self> {
        if !(delta > 0.0 && delta < 1e-3) {
            return Err(Error::Domain(format!("delta must lie in (0, 1/1000), got {delta}")));
        }
        let spec = Self { interval, delta, sign };
        let (a, b) = spec.endpoints();
        if b - a < delta || b - a > 1.0 - delta {
            return Err(Error::Domain(format!("smoothing window [{a}, {b}] violates delta <= b - a <= 1 - delta")));
        }
        Ok(spec)
    }

    /// `(a, b) = (alpha/2pi -+ delta/2, beta/2pi +- delta/2)`.
    pub fn endpoints(&self) -> (f64, f64) {
        let s = self.sign.s();
        (
            self.interval.alpha / (2.0 * PI) - s * self.delta / 2.0,
            self.interval.beta / (2.0 * PI) + s * self.delta / 2.0,
        )
    }

    pub fn a_n(&self, n: u64) -> f64 {
        fourier_coefficient(self.interval.alpha, self.interval.beta, self.delta, self.sign, n)
    }
}

/// CDF of the triangle density of half-width `h` centred at 0.
fn triangle_cdf(u: f64, h: f64) -> f64 {
    if u <= -h {
        0.0
    } else if u <= 0.0 {
        (u + h) * (u + h) / (2.0 * h * h)
    } else if u < h {
        1.0 - (h - u) * (h - u) / (2.0 * h * h)
    } else {
        1.0
    }
}

/// The period-1 Vinogradov function `g(y)` for the window `(a, b)` of `spec`.
///
/// For order 2 the Fourier coefficients are those of the indicator of `[a, b]`
/// times `sinc(pi n delta/2)^2`, i.e. the indicator convolved with a triangle
/// kernel of half-width `delta/2`. That convolution is evaluated exactly here.
pub fn vinogradov_g(y: f64, spec: &SmoothingSpec) -> f64 {
    let (a, b) = spec.endpoints();
    let h = spec.delta / 2.0;
    // reduce into one period starting at a - h
    let t = y - (a - h);
    let y = (a - h) + (t - t.floor());
    triangle_cdf(y - a, h) - triangle_cdf(y - b, h)
}

/// `g_{I,+-delta}(theta) = g(theta/2pi) + g(-theta/2pi)`.
pub fn g_angle(theta: f64, spec: &SmoothingSpec) -> f64 {
    let y = theta / (2.0 * PI);
    vinogradov_g(y, spec) + vinogradov_g(-y, spec)
}

/// Squared sinc factor `(sin(pi n delta/2)/(pi n delta/2))^2`.
fn sinc2(n: u64, delta: f64) -> f64 {
    let x = PI * n as f64 * delta / 2.0;
    if x == 0.0 {
        1.0
    } else {
        let s = x.sin() / x;
        s * s
    }
}

/// `a_n(I, +-delta)` from the closed formula, for arbitrary `alpha <= beta`.
pub fn fourier_coefficient(alpha: f64, beta: f64, delta: f64, sign: SmoothSign, n: u64) -> f64 {
    let s = sign.s();
    if n == 0 {
        return (beta - alpha) / PI + s * 2.0 * delta;
    }
    let nf = n as f64;
    ((nf * (beta + s * PI * delta)).sin() - (nf * (alpha - s * PI * delta)).sin()) / (nf * PI) * sinc2(n, delta)
}

pub fn fourier_a_n(spec: &SmoothingSpec, n: u64) -> f64 {
    spec.a_n(n)
}

/// Envelope for `|a_n|`: `(2/(n pi)) min(1, (2/(pi n delta))^2)`.
pub fn envelope(n: u64, delta: f64) -> f64 {
    let nf = n as f64;
    let r = 2.0 / (PI * nf * delta);
    2.0 / (nf * PI) * (r * r).min(1.0)
}

/// First index from which `envelope(n) = C / n^3` with `C = 8 / (pi^3 delta^2)`.
fn cubic_start(delta: f64) -> u64 {
    (2.0 / (PI * delta)).ceil() as u64
}

fn cubic_constant(delta: f64) -> f64 {
    8.0 / (PI.powi(3) * delta * delta)
}

/// Certified upper bound for `sum_{n > big_n} envelope(n)`.
pub fn envelope_tail(big_n: u64, delta: f64) -> f64 {
    let start = cubic_start(delta);
    let c = cubic_constant(delta);
    let mut acc = Accumulator::default();
    let mut n = big_n;
    while n < start {
        n += 1;
        acc.add(envelope(n, delta));
    }
    // sum_{m > n} c/m^3 <= c/(2 n^2)
    acc.add(c / (2.0 * (n as f64) * (n as f64)));
    acc.value()
}

/// Fourier partial sum of `g_{I,+-delta}(theta)` through `n_max`, with a certified bound on the omitted tail.
pub fn g_angle_fourier(theta: f64, spec: &SmoothingSpec, n_max: u64) -> (f64, f64) {
    let mut acc = Accumulator::default();
    acc.add(spec.a_n(0));
    for n in 1..=n_max {
        acc.add(2.0 * spec.a_n(n) * (n as f64 * theta).cos());
    }
    (acc.value(), 2.0 * envelope_tail(n_max, spec.delta))
}

/// `U_n(x)`, Chebyshev polynomial of the second kind, for `|x| <= 1`.
pub fn chebyshev_u(n: u64, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("U_n needs |x| <= 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(n as f64 + 1.0);
    }
    if x == -1.0 {
        let v = n as f64 + 1.0;
        return Ok(if n.is_multiple_of(2) { v } else { -v });
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return Ok(1.0);
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn check_window(x: u64, table: &AngleTable) -> Result<std::ops::Range<usize>> {
    let hi = x.checked_mul(2).ok_or_else(|| Error::Domain("2x overflows".into()))?;
    table.window(x, hi)
}

/// `#{p in [x, 2x] : theta_p in I}` (endpoints inclusive; primes dividing the level excluded).
pub fn pi_f_interval(x: u64, i: &Interval, table: &AngleTable) -> Result<u64> {
    let w = check_window(x, table)?;
    Ok(table.angles()[w].iter().filter(|&&t| i.contains(t)).count() as u64)
}

/// `#{p in [x, 2x] : a(p) = 0}`, tested on the integer coefficients.
pub fn pi_f_zero(x: u64, table: &AngleTable) -> Result<u64> {
    let w = check_window(x, table)?;
    Ok(w.filter(|&i| num_traits::Zero::is_zero(table.entry(i).2)).count() as u64)
}

/// Number of primes of the table in `[x, 2x]`.
pub fn window_prime_count(x: u64, table: &AngleTable) -> Result<u64> {
    Ok(check_window(x, table)?.len() as u64)
}

/// `Lambda_{Sym^n f}(j)`: `U_n(cos(m theta_p)) log p` if `j = p^m`, else 0.
pub fn lambda_symn(j: u64, n: u64, table: &AngleTable) -> Result<f64> {
    if j < 2 {
        return Err(Error::Domain(format!("Lambda needs j >= 2, got {j}")));
    }
    let Some((p, m)) = prime_power(j) else { return Ok(0.0) };
    let theta = table.angle(p).ok_or_else(|| Error::Domain(format!("no angle for p = {p} in the table")))?;
    Ok(chebyshev_u(n, (m as f64 * theta).cos().clamp(-1.0, 1.0))? * (p as f64).ln())
}

/// `Theta_{Sym^n f}(x) = sum_{p in [x, 2x]} U_n(cos theta_p)`.
pub fn theta_symn_sum(x: u64, n: u64, table: &AngleTable) -> Result<f64> {
    let w = check_window(x, table)?;
    let mut acc = Accumulator::default();
    for &t in &table.angles()[w] {
        acc.add(chebyshev_u(n, t.cos())?);
    }
    Ok(acc.value())
}

/// `Theta_{Sym^n f}(x)` for all `n <= n_max` at once.
pub fn theta_symn_all(x: u64, n_max: u64, table: &AngleTable) -> Result<Vec<f64>> {
    let w = check_window(x, table)?;
    let len = n_max as usize + 1;
    let mut acc = vec![Accumulator::default(); len];
    for &t in &table.angles()[w] {
        let c = t.cos();
        let (mut prev, mut cur) = (0.0f64, 1.0f64); // U_{-1}, U_0
        for slot in acc.iter_mut() {
            slot.add(cur);
            let next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    Ok(acc.iter().map(|a| a.value()).collect())
}

/// Prime powers `p^m` (`m >= 1`) in `[lo, hi]` with `p` in the table.
fn prime_powers_in(lo: u64, hi: u64, table: &AngleTable) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in table.primes() {
        if p > hi {
            break;
        }
        let mut q = p;
        let mut m = 1;
        loop {
            if q >= lo {
                out.push((p, m));
            }
            match q.checked_mul(p) {
                Some(nq) if nq <= hi => {
                    q = nq;
                    m += 1;
                }
                _ => break,
            }
        }
    }
    out
}

/// `Psi_{Sym^n f}(x) = sum_{j in [x, 2x]} Lambda(j) / log j`.
pub fn psi_symn_window(x: u64, n: u64, table: &AngleTable) -> Result<f64> {
    check_window(x, table)?;
    let mut acc = Accumulator::default();
    for (p, m) in prime_powers_in(x, 2 * x, table) {
        let theta = table.angle(p).expect("table prime");
        acc.add(chebyshev_u(n, (m as f64 * theta).cos().clamp(-1.0, 1.0))? / m as f64);
    }
    Ok(acc.value())
}

/// `psi_{Sym^n f}(x) = sum_{j <= x} Lambda(j)`.
pub fn psi_symn_cumulative(x: u64, n: u64, table: &AngleTable) -> Result<f64> {
    if x > table.range {
        return Err(Error::Precision { needed: x as usize, available: table.range as usize });
    }
    let mut acc = Accumulator::default();
    for (p, m) in prime_powers_in(2, x, table) {
        let theta = table.angle(p).expect("table prime");
        acc.add(chebyshev_u(n, (m as f64 * theta).cos().clamp(-1.0, 1.0))? * (p as f64).ln());
    }
    Ok(acc.value())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub x: u64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub n_trunc: u64,
    pub lower: f64,
    pub count: u64,
    pub upper: f64,
    pub tail_bound: f64,
    pub holds: bool,
}

/// `sum_{n <= N} (a_n - a_{n+2}) Theta_n` from precomputed `Theta_n`.
fn truncated_sum(spec: &SmoothingSpec, theta: &[f64], n_trunc: u64) -> f64 {
    let mut acc = Accumulator::default();
    for n in 0..=n_trunc {
        acc.add((spec.a_n(n) - spec.a_n(n + 2)) * theta[n as usize]);
    }
    acc.value()
}

/// Per-prime bound on the gap between the full smoothing series and its
/// truncation at `N`.
///
/// Since `U_n - U_{n-2} = 2 cos(n theta)`, the truncated sum equals
/// `a_0 + 2 sum_{1..N} a_n cos(n theta) - a_{N+1} U_{N-1} - a_{N+2} U_N`, so the
/// gap is at most `2 T(N) + env(N+1) N + env(N+2) (N+1)`.
pub fn sandwich_tail_per_prime(n_trunc: u64, delta: f64) -> f64 {
    let n = n_trunc as f64;
    2.0 * envelope_tail(n_trunc, delta) + envelope(n_trunc + 1, delta) * n + envelope(n_trunc + 2, delta) * (n + 1.0)
}

/// Checks `lower - tail <= pi_{f,I}(x) <= upper + tail` at finite truncation.
pub fn sandwich_check(x: u64, i: &Interval, delta: f64, n_trunc: u64, table: &AngleTable) -> Result<SandwichReport> {
    if n_trunc < 2 {
        return Err(Error::Domain("n_trunc must be at least 2".into()));
    }
    let plus = SmoothingSpec::new(*i, delta, SmoothSign::Plus)?;
    let minus = SmoothingSpec::new(*i, delta, SmoothSign::Minus)?;
    let theta = theta_symn_all(x, n_trunc, table)?;
    let primes = window_prime_count(x, table)?;
    let count = pi_f_interval(x, i, table)?;
    let lower = truncated_sum(&minus, &theta, n_trunc);
    let upper = truncated_sum(&plus, &theta, n_trunc);
    let tail_bound = primes as f64 * sandwich_tail_per_prime(n_trunc, delta);
    let c = count as f64;
    Ok(SandwichReport {
        x,
        alpha: i.alpha,
        beta: i.beta,
        delta,
        n_trunc,
        lower,
        count,
        upper,
        tail_bound,
        holds: lower - tail_bound <= c && c <= upper + tail_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub mu_st_mass: f64,
}

/// Angle histogram over `[x, 2x]` with `bins` equal bins on `[0, pi]`.
pub fn histogram(x: u64, bins: usize, table: &AngleTable) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::Domain("need at least one bin".into()));
    }
    let w = check_window(x, table)?;
    let width = PI / bins as f64;
    let mut counts = vec![0u64; bins];
    for &t in &table.angles()[w] {
        let b = ((t / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(b, count)| {
            let lo = b as f64 * width;
            let hi = if b + 1 == bins { PI } else { (b + 1) as f64 * width };
            HistogramBin { lo, hi, count, mu_st_mass: mu_st(&Interval { alpha: lo, beta: hi }) }
        })
        .collect())
}

/// `pi_{f,I}(x) / (pi(2x) - pi(x)) - mu_ST(I)`.
pub fn st_deviation(x: u64, i: &Interval, table: &AngleTable) -> Result<f64> {
    let total = window_prime_count(x, table)?;
    if total == 0 {
        return Err(Error::Domain(format!("no primes in [{x}, {}]", 2 * x)));
    }
    Ok(pi_f_interval(x, i, table)? as f64 / total as f64 - mu_st(i))
}

/// Directly summed `sum_n |a_n - a_{n+2}| w(n)` for the four weights of the
/// coefficient-sum bounds, with certified tails, next to the bounds themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSumCheck {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub sign: SmoothSign,
    /// partial sum + tail, per weight `1, log(n+1), n, n log(n+1)`
    pub sums: [f64; 4],
    pub tails: [f64; 4],
    pub bounds: [f64; 4],
}

impl CoefficientSumCheck {
    pub fn holds(&self) -> bool {
        (0..4).all(|i| self.sums[i] <= self.bounds[i])
    }
}

pub fn coefficient_sum_check(alpha: f64, beta: f64, delta: f64, sign: SmoothSign, n_max: u64) -> CoefficientSumCheck {
    let mut acc = [Accumulator::default(); 4];
    let mut prev2 = fourier_coefficient(alpha, beta, delta, sign, 0);
    let mut prev1 = fourier_coefficient(alpha, beta, delta, sign, 1);
    for n in 0..=n_max {
        let next = fourier_coefficient(alpha, beta, delta, sign, n + 2);
        let d = (prev2 - next).abs();
        let nf = n as f64;
        let l = (nf + 1.0).ln();
        acc[0].add(d);
        acc[1].add(d * l);
        acc[2].add(d * nf);
        acc[3].add(d * nf * l);
        prev2 = prev1;
        prev1 = next;
    }
    let tails = coefficient_sum_tails(n_max, delta);
    let sums = [0, 1, 2, 3].map(|i| acc[i].value() + tails[i]);
    let li = 1.0 / delta;
    let len = beta - alpha;
    let bounds = [
        2.0 * li.ln(),
        2.0 * li.ln().powi(2) - 2.0 * len.ln(),
        2.0 / delta,
        2.0 / delta * li.ln() - 2.0 * len.ln() / len,
    ];
    CoefficientSumCheck { alpha, beta, delta, sign, sums, tails, bounds }
}

/// Tails beyond `N` for the four weights, from `|a_n - a_{n+2}| <= 2C/n^3`
/// (valid once `n` is past the cubic regime of the envelope).
fn coefficient_sum_tails(n_max: u64, delta: f64) -> [f64; 4] {
    let start = cubic_start(delta);
    let c = cubic_constant(delta);
    // sum the pre-cubic stretch explicitly, if any
    let mut pre = [Accumulator::default(); 4];
    let mut n = n_max;
    while n < start {
        n += 1;
        let d = envelope(n, delta) + envelope(n + 2, delta);
        let nf = n as f64;
        let l = (nf + 1.0).ln();
        pre[0].add(d);
        pre[1].add(d * l);
        pre[2].add(d * nf);
        pre[3].add(d * nf * l);
    }
    let nf = n as f64;
    let l2n = (2.0 * nf).ln();
    let cubic = [
        c / (nf * nf),
        2.0 * c * (l2n / (2.0 * nf * nf) + 1.0 / (4.0 * nf * nf)),
        2.0 * c / nf,
        2.0 * c * (l2n + 1.0) / nf,
    ];
    [0, 1, 2, 3].map(|i| pre[i].value() + cubic[i])
}

/// `|a_0 - a_2 - mu_ST(I)|` against `4 delta`.
pub fn main_term_gap(alpha: f64, beta: f64, delta: f64, sign: SmoothSign) -> f64 {
    let a0 = fourier_coefficient(alpha, beta, delta, sign, 0);
    let a2 = fourier_coefficient(alpha, beta, delta, sign, 2);
    (a0 - a2 - mu_st(&Interval { alpha, beta })).abs()
}

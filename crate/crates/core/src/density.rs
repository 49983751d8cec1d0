//! Nonvanishing density: congruence tables for the level-1 forms, Serre's
//! sieve for the zeros of tau, and the explicit lower bound for
//! `prod_{a(p)=0} (1 - 1/(p+1))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, is_probable_prime, legendre, pow_mod, primes_up_to, sigma_mod};
use crate::bounds::{self, BoundContext, Which};
use crate::newforms::{build_form, elliptic, NewformSpec};
use crate::qexp::{
    congruent_up_to, filter_indices, sigma_table, sturm_bound, twist_quadratic, FourierSeries, QuadraticCharacter,
};
use crate::quadrature::integrate;
use crate::{Error, Result};

/// Which `n` a congruence applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassCondition {
    All,
    /// `n = residue (mod modulus)`
    Residue {
        modulus: u64,
        residue: u64,
    },
    /// `gcd(n, p) = 1`
    Coprime {
        p: u64,
    },
    /// `(n/p) = -1`
    NonResidue {
        p: u64,
    },
}

impl ClassCondition {
    pub fn admits(&self, n: u64) -> bool {
        match *self {
            ClassCondition::All => true,
            ClassCondition::Residue { modulus, residue } => n % modulus == residue,
            ClassCondition::Coprime { p } => n.gcd(&p) == 1,
            ClassCondition::NonResidue { p } => legendre((n % p) as i64, p) == -1,
        }
    }
}

/// Right-hand side of a congruence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Rhs {
    /// `c n^e sigma_m(n)`
    Sigma {
        c: u64,
        e: u64,
        m: u64,
    },
    /// `n^e tau_j(n)`
    Form {
        e: u64,
        j: u32,
    },
    Zero,
}

/// One congruence `tau_k(n) = rhs (mod modulus)` for `n` satisfying `condition`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub modulus: u64,
    pub condition: ClassCondition,
    pub rhs: Rhs,
}

/// A rule of the table; the braced entries carry a sharper clause for a
/// subclass of `n` as `refinement`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRule {
    pub weight: u32,
    pub clause: Clause,
    pub refinement: Option<Clause>,
}

impl CongruenceRule {
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        std::iter::once(&self.clause).chain(self.refinement.iter())
    }

    /// Other forms the rule refers to.
    pub fn referenced_weights(&self) -> Vec<u32> {
        self.clauses()
            .filter_map(|c| match c.rhs {
                Rhs::Form { j, .. } => Some(j),
                _ => None,
            })
            .collect()
    }
}

pub const RULE_WEIGHTS: [u32; 5] = [16, 18, 20, 22, 26];

fn cl(modulus: u64, condition: ClassCondition, rhs: Rhs) -> Clause {
    Clause { modulus, condition, rhs }
}

/// The congruence table for `tau_k`, `k` in {16, 18, 20, 22, 26}.
pub fn rule_table(k: u32) -> Result<Vec<CongruenceRule>> {
    use ClassCondition::*;
    let all = All;
    let r8 = Residue { modulus: 8, residue: 7 };
    let r3 = Residue { modulus: 3, residue: 2 };
    let s = |c, e, m| Rhs::Sigma { c, e, m };
    let f = |e, j| Rhs::Form { e, j };
    let one = |clause| CongruenceRule { weight: k, clause, refinement: None };
    let two = |clause, refinement| CongruenceRule { weight: k, clause, refinement: Some(refinement) };
    let rules = match k {
        16 => vec![
            one(cl(1 << 13, r8, s(6497, 0, 15))),
            one(cl(6561, r3, s(1, 813, 2763))),
            one(cl(25, Coprime { p: 5 }, s(1, 17, 1))),
            one(cl(343, Coprime { p: 7 }, s(1, 85, 139))),
            one(cl(11, Coprime { p: 11 }, s(1, 1, 3))),
            one(cl(13, all, f(2, 12))),
            one(cl(31, NonResidue { p: 31 }, Rhs::Zero)),
            one(cl(3617, all, s(1, 0, 15))),
        ],
        18 => vec![
            one(cl(1 << 13, r8, s(865, 0, 17))),
            one(cl(729, r3, s(1, 117, 269))),
            one(cl(125, Coprime { p: 5 }, s(1, 22, 73))),
            two(cl(7, all, s(1, 1, 3)), cl(49, NonResidue { p: 7 }, s(1, 1, 15))),
            two(cl(11, all, s(1, 1, 5)), cl(121, NonResidue { p: 11 }, s(1, 1, 15))),
            one(cl(13, Coprime { p: 13 }, s(1, 1, 3))),
            one(cl(43867, all, s(1, 0, 17))),
        ],
        20 => vec![
            one(cl(1 << 15, r8, s(2945, 0, 19))),
            one(cl(729, r3, s(1, 207, 91))),
            one(cl(25, Coprime { p: 5 }, s(1, 6, 7))),
            two(cl(7, all, s(1, 2, 3)), cl(49, NonResidue { p: 7 }, s(1, 2, 15))),
            one(cl(11, all, s(1, 1, 7))),
            one(cl(13, all, s(1, 1, 5))),
            one(cl(17, all, f(2, 16))),
            one(cl(283, all, s(1, 0, 19))),
            one(cl(617, all, s(1, 0, 19))),
        ],
        22 => vec![
            one(cl(1 << 15, r8, s(3969, 0, 21))),
            one(cl(6561, r3, s(1, 3, 15))),
            one(cl(25, all, s(1, 7, 7))),
            one(cl(49, Coprime { p: 7 }, s(1, 26, 11))),
            one(cl(11, all, f(0, 12))),
            one(cl(13, all, s(1, 1, 7))),
            one(cl(17, all, s(1, 1, 3))),
            one(cl(19, all, f(2, 18))),
            one(cl(131, all, s(1, 0, 21))),
            one(cl(593, all, s(1, 0, 21))),
        ],
        26 => vec![
            one(cl(1 << 13, r8, s(545, 0, 25))),
            one(cl(729, r3, s(1, 171, 169))),
            one(cl(25, all, s(1, 6, 13))),
            two(cl(7, all, s(1, 2, 3)), cl(343, NonResidue { p: 7 }, s(1, 2, 21))),
            one(cl(11, all, s(1, 1, 3))),
            one(cl(13, all, f(1, 12))),
            one(cl(17, all, s(1, 1, 7))),
            one(cl(19, all, s(1, 1, 5))),
            one(cl(23, all, f(2, 22))),
            one(cl(657931, all, s(1, 0, 25))),
        ],
        _ => return Err(Error::Unsupported(format!("no congruence table for weight {k}"))),
    };
    Ok(rules)
}

/// Expansions of the level-1 forms, keyed by weight.
#[derive(Clone, Debug, Default)]
pub struct FormBank {
    forms: BTreeMap<u32, FourierSeries>,
}

impl FormBank {
    /// Builds `Delta_k` for each weight to precision `prec`.
    pub fn build(weights: &[u32], prec: usize) -> Result<Self> {
        let forms = weights
            .par_iter()
            .map(|&k| Ok((k, build_form(&NewformSpec::delta(k)?, prec)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { forms })
    }

    /// Every weight needed to check the rules of `k`.
    pub fn for_rules(k: u32, prec: usize) -> Result<Self> {
        let mut weights = vec![k];
        for r in rule_table(k)? {
            weights.extend(r.referenced_weights());
        }
        weights.sort_unstable();
        weights.dedup();
        Self::build(&weights, prec)
    }

    pub fn get(&self, k: u32) -> Result<&FourierSeries> {
        self.forms.get(&k).ok_or_else(|| Error::Domain(format!("weight {k} missing from the form bank")))
    }

    pub fn prec(&self) -> usize {
        self.forms.values().map(FourierSeries::prec).min().unwrap_or(0)
    }
}

fn mod_u64(a: &BigInt, m: u64) -> u64 {
    let r = a % BigInt::from(m);
    let r = if r < BigInt::zero() { r + m } else { r };
    r.to_u64().expect("reduced residue")
}

fn rhs_mod(rhs: &Rhs, n: u64, m: u64, bank: &FormBank) -> Result<u64> {
    Ok(match *rhs {
        Rhs::Zero => 0,
        Rhs::Sigma { c, e, m: s } => {
            let v = (c % m) as u128 * pow_mod(n % m, e, m) as u128 % m as u128;
            (v * sigma_mod(s, n, m) as u128 % m as u128) as u64
        }
        Rhs::Form { e, j } => {
            let t = mod_u64(&bank.get(j)?.coeffs()[n as usize], m);
            (pow_mod(n % m, e, m) as u128 * t as u128 % m as u128) as u64
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: usize,
    pub modulus: u64,
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule: CongruenceRule,
    /// Number of `(clause, n)` pairs checked.
    pub checked: u64,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub weight: u32,
    pub bound: u64,
    pub outcomes: Vec<RuleOutcome>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.violations.is_empty())
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.outcomes.iter().flat_map(|o| o.violations.iter())
    }
}

/// Checks every rule of weight `k` for all qualifying `1 <= n <= bound`.
pub fn check_rules_with(k: u32, bound: u64, bank: &FormBank) -> Result<RuleReport> {
    if bound as usize >= bank.prec() {
        return Err(Error::Precision { needed: bound as usize + 1, available: bank.prec() });
    }
    let lhs_series = bank.get(k)?;
    let outcomes = rule_table(k)?
        .into_iter()
        .enumerate()
        .map(|(idx, rule)| {
            let per_n = (1..=bound)
                .into_par_iter()
                .map(|n| {
                    let mut checked = 0u64;
                    let mut bad = Vec::new();
                    for c in rule.clauses().filter(|c| c.condition.admits(n)) {
                        checked += 1;
                        let lhs = mod_u64(&lhs_series.coeffs()[n as usize], c.modulus);
                        let rhs = rhs_mod(&c.rhs, n, c.modulus, bank)?;
                        if lhs != rhs {
                            bad.push(Violation { rule: idx, modulus: c.modulus, n, lhs, rhs });
                        }
                    }
                    Ok((checked, bad))
                })
                .collect::<Result<Vec<_>>>()?;
            let checked = per_n.iter().map(|p| p.0).sum();
            let violations = per_n.into_iter().flat_map(|p| p.1).collect();
            Ok(RuleOutcome { rule, checked, violations })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RuleReport { weight: k, bound, outcomes })
}

/// Builds the needed expansions and checks the rules of weight `k` up to `bound`.
pub fn check_rules(k: u32, bound: u64) -> Result<RuleReport> {
    let bank = FormBank::for_rules(k, bound as usize + 1)?;
    check_rules_with(k, bound, &bank)
}

/// Sturm-bound certificate for `tau_16(n) = 6497 sigma_15(n) (mod 2^13)` on `n = 7 (mod 8)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmCertificate {
    pub weight: u32,
    pub level: u64,
    pub sturm_bound: u64,
    /// The character combination `(chi_0 - chi_{-4} + chi_8 - chi_{-8}) / 4`
    /// reproduces the residue-class filter.
    pub twist_matches_filter: bool,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

impl SturmCertificate {
    pub fn certified(&self) -> bool {
        self.twist_matches_filter && self.holds
    }
}

/// Projection onto `n = 7 (mod 8)` as a combination of four quadratic twists.
fn project_seven_mod_eight(f: &FourierSeries) -> Result<(FourierSeries, u64)> {
    let twists = [
        (1i64, QuadraticCharacter::principal(8)),
        (-1, QuadraticCharacter::kronecker(-4)),
        (1, QuadraticCharacter::kronecker(8)),
        (-1, QuadraticCharacter::kronecker(-8)),
    ];
    let mut acc = FourierSeries::zero(f.prec());
    let mut level = 1;
    for (sign, chi) in twists {
        let t = twist_quadratic(f, &chi, 1);
        // the principal character mod 8 and chi_{-4} live on modulus 8 and 4;
        // the combination sits on Gamma_0(64) either way
        level = level.max(t.level);
        acc = if sign > 0 { &acc + &t.series } else { &acc - &t.series };
    }
    let four = BigInt::from(4);
    let mut out = Vec::with_capacity(acc.prec());
    for c in acc.coeffs() {
        if !(c % &four).is_zero() {
            return Err(Error::Relation("character combination is not divisible by 4".into()));
        }
        out.push(c / &four);
    }
    Ok((FourierSeries::new(out), level))
}

pub fn sturm_certificate_weight16() -> Result<SturmCertificate> {
    let level = 64u64;
    let bound = sturm_bound(16, level);
    let prec = bound as usize + 1;
    let tau16 = build_form(&NewformSpec::delta(16)?, prec)?;
    let sig = FourierSeries::new(sigma_table(15, prec));
    let rhs = sig.scale(&BigInt::from(6497));
    let (lhs_proj, lvl_a) = project_seven_mod_eight(&tau16)?;
    let (rhs_proj, lvl_b) = project_seven_mod_eight(&rhs)?;
    let is_seven = |n: u64| n % 8 == 7;
    let twist_matches_filter = lhs_proj == filter_indices(&tau16, is_seven)
        && rhs_proj == filter_indices(&rhs, is_seven)
        && lvl_a.max(lvl_b) == level;
    let out = congruent_up_to(&lhs_proj, &rhs_proj, &BigInt::from(1u64 << 13), bound as usize)?;
    Ok(SturmCertificate {
        weight: 16,
        level,
        sturm_bound: bound,
        twist_matches_filter,
        holds: out.holds,
        first_failure: out.first_failure,
    })
}

/// `M` in Serre's condition `p = hM - 1`.
pub const SERRE_M: u64 = 3_094_972_416_000;
pub const SERRE_CLASSES_49: [u64; 3] = [0, 30, 48];

/// Whether `h` passes the two class conditions (before primality).
pub fn serre_class_ok(h: u64) -> bool {
    SERRE_CLASSES_49.contains(&(h % 49)) && legendre(((h + 1) % 23) as i64, 23) == 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub h_max: u64,
    pub class_survivors: u64,
    pub observed_class_density: f64,
    /// `3/49 * 11/23`: nonzero squares mod 23.
    pub predicted_class_density: f64,
    pub candidates: Vec<u64>,
    /// Every candidate passed a second, randomized primality test.
    pub retest_passed: bool,
}

/// Largest `h` for which `hM - 1` fits in a `u64`.
pub const SERRE_H_LIMIT: u64 = u64::MAX / SERRE_M;

/// All primes `p = hM - 1`, `1 <= h <= h_max`, that pass Serre's class conditions.
pub fn serre_sieve(h_max: u64) -> Result<SieveReport> {
    if h_max == 0 {
        return Err(Error::Domain("h_max must be at least 1".into()));
    }
    if h_max > SERRE_H_LIMIT {
        return Err(Error::Domain(format!("h_max above {SERRE_H_LIMIT} overflows 64 bits")));
    }
    let survivors: Vec<u64> = (1..=h_max).into_par_iter().filter(|&h| serre_class_ok(h)).collect();
    let candidates: Vec<u64> = survivors.par_iter().map(|&h| h * SERRE_M - 1).filter(|&p| is_prime_u64(p)).collect();
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(0x5e77e);
    let retest_passed = candidates.iter().all(|&p| is_probable_prime(p, 32, &mut rng));
    Ok(SieveReport {
        h_max,
        class_survivors: survivors.len() as u64,
        observed_class_density: survivors.len() as f64 / h_max as f64,
        predicted_class_density: 3.0 / 49.0 * 11.0 / 23.0,
        candidates,
        retest_passed,
    })
}

/// Replacement for `pi_f(y)` inside the omega sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundFn {
    /// The explicit bound for primes with vanishing coefficient.
    ZeroCount {
        level: u64,
        weight: u32,
    },
    Constant {
        value: f64,
    },
}

impl BoundFn {
    pub fn eval(&self, y: f64) -> Result<f64> {
        match *self {
            BoundFn::Constant { value } => Ok(value),
            BoundFn::ZeroCount { level, weight } => {
                Ok(bounds::evaluate(Which::Zero, &BoundContext::new(level, weight, y), false)?.value)
            }
        }
    }

    /// Upper bound for `int_X^inf omega(x, x0) / x^2 dx`.
    fn tail(&self, x0: f64, big_x: f64) -> f64 {
        match *self {
            BoundFn::Constant { value } => {
                let v = value.max(0.0);
                v * (1.0 + (big_x / x0).log2() + std::f64::consts::LOG2_E) / big_x
            }
            BoundFn::ZeroCount { level, weight } => {
                // B(y) <= c y^{3/4} for y >= x0/2 (the loglog term is negative there)
                let ly = (x0 / 2.0).ln();
                let nk = (level as f64 * (weight as f64 - 1.0)).ln();
                let c = 7.392 / ly.sqrt() + (15.296 + 14.784 * nk).max(0.0) / ly.powf(1.5);
                let c2 = c / (2f64.powf(0.75) - 1.0);
                4.0 * c2 * big_x.powf(-0.25)
            }
        }
    }
}

/// `omega_f(x, x0) = sum_{j=1}^{1 + floor(log2(x/x0))} B(x / 2^j)`.
pub fn omega_f(x: f64, x0: f64, bound: &BoundFn) -> Result<f64> {
    if !(x0 > 0.0 && x >= x0) {
        return Err(Error::Domain(format!("need x >= x0 > 0, got x = {x}, x0 = {x0}")));
    }
    let terms = 1 + doublings(x, x0);
    let mut acc = crate::satotate::Accumulator::default();
    for j in 1..=terms {
        acc.add(bound.eval(x / 2f64.powi(j as i32))?);
    }
    Ok(acc.value())
}

/// `floor(log2(x / x0))`, computed without rounding surprises at exact powers of two.
fn doublings(x: f64, x0: f64) -> u32 {
    let mut m = 0u32;
    while x0 * 2f64.powi(m as i32 + 1) <= x {
        m += 1;
    }
    m
}

/// Zero-primes at or below `x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrimeData {
    List {
        primes: Vec<u64>,
    },
    /// Only a count is known, with every prime at least `min`.
    Count {
        count: u64,
        min: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub x0: f64,
    pub bound: BoundFn,
    pub primes: PrimeData,
    /// `alpha_f` as `(num, den)`; 1 for level 1, 14/15 for the level-11 form.
    pub alpha_f: (u64, u64),
}

impl DensityConfig {
    fn validate(&self) -> Result<()> {
        if !(self.x0.is_finite() && self.x0 > 1.0) {
            return Err(Error::Domain(format!("x0 must be finite and > 1, got {}", self.x0)));
        }
        if self.alpha_f.1 == 0 || self.alpha_f.0 > self.alpha_f.1 {
            return Err(Error::Domain("alpha_f must be a fraction in [0, 1]".into()));
        }
        match &self.primes {
            PrimeData::List { primes } if primes.iter().any(|&p| p as f64 > self.x0) => {
                Err(Error::Domain("listed zero-primes must not exceed x0".into()))
            }
            PrimeData::Count { min, .. } if *min == 0 => Err(Error::Domain("prime floor must be positive".into())),
            _ => Ok(()),
        }?;
        if matches!(self.bound, BoundFn::ZeroCount { .. }) && self.x0 < 8.0 {
            return Err(Error::Domain("the zero-count bound needs x0 >= 8".into()));
        }
        Ok(())
    }

    fn alpha(&self) -> f64 {
        self.alpha_f.0 as f64 / self.alpha_f.1 as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// Lower bound for `prod_{a(p)=0} (1 - 1/(p+1))`.
    pub product_lower_bound: f64,
    /// `alpha_f` times the product bound: a lower bound for the density.
    pub lower_bound: f64,
    pub integral: f64,
    pub integral_error: f64,
    /// Certified bound on the part of the integral beyond the last doubling.
    pub truncated_tail: f64,
    pub finite_product: f64,
    pub doublings: u32,
    pub regime: bounds::Regime,
}

/// Integral of `omega(x) / (x^2 + x)` over `[x0, inf)`, panel by panel over
/// the doubling intervals `[x0 2^m, x0 2^{m+1})` where `omega` is smooth, in
/// the variable `u = log x`. Stops once `tail(X) <= TAIL_TOL`.
pub fn doubling_integral<F, T>(x0: f64, omega: F, tail: T) -> Result<(f64, f64, f64, u32)>
where
    F: Fn(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    const TAIL_TOL: f64 = 1e-12;
    const MAX_DOUBLINGS: u32 = 4000;
    let mut value = crate::satotate::Accumulator::default();
    let mut error = 0.0;
    let mut m = 0u32;
    loop {
        let lo = x0 * 2f64.powi(m as i32);
        let hi = 2.0 * lo;
        let failure = std::cell::Cell::new(None);
        let q = integrate(
            |u: f64| {
                let x = u.exp();
                match omega(x) {
                    Ok(w) => w / (x + 1.0),
                    Err(e) => {
                        failure.set(Some(e.to_string()));
                        0.0
                    }
                }
            },
            lo.ln(),
            hi.ln(),
            1e-300,
            1e-11,
        )?;
        if let Some(msg) = failure.take() {
            return Err(Error::Domain(msg));
        }
        value.add(q.value);
        error += q.error;
        m += 1;
        let t = tail(hi);
        if t <= TAIL_TOL {
            return Ok((value.value(), error, t, m));
        }
        if m >= MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::Quadrature(format!("tail {t:e} not below {TAIL_TOL:e} after {m} doublings")));
        }
    }
}

pub fn density_lower_bound(config: &DensityConfig) -> Result<DensityReport> {
    config.validate()?;
    let x0 = config.x0;
    let bound = config.bound;
    // omega is evaluated strictly inside each doubling panel, so the term count is stable
    let (integral, integral_error, truncated_tail, doublings) =
        doubling_integral(x0, |x| omega_f(x, x0, &bound), |big_x| bound.tail(x0, big_x))?;
    let log_product: f64 = match &config.primes {
        PrimeData::List { primes } => primes.iter().map(|&p| (-1.0 / (p as f64 + 1.0)).ln_1p()).sum(),
        PrimeData::Count { count, min } => *count as f64 * (-1.0 / (*min as f64 + 1.0)).ln_1p(),
    };
    let finite_product = log_product.exp();
    // the truncated tail only lowers the bound further
    let product_lower_bound = (-(integral + integral_error + truncated_tail)).exp() * finite_product;
    let regime = match bound {
        BoundFn::ZeroCount { .. } if x0 / 2.0 < bounds::X_ZERO => bounds::Regime::Extrapolated,
        _ => bounds::Regime::InRegime,
    };
    Ok(DensityReport {
        product_lower_bound,
        lower_bound: config.alpha() * product_lower_bound,
        integral,
        integral_error,
        truncated_tail,
        finite_product,
        doublings,
        regime,
    })
}

/// `alpha_f prod_{p in zero_primes} (1 - 1/(p+1))`.
pub fn density_upper_bound(zero_primes: &[u64], alpha_f: (u64, u64)) -> f64 {
    let log: f64 = zero_primes.iter().map(|&p| (-1.0 / (p as f64 + 1.0)).ln_1p()).sum();
    alpha_f.0 as f64 / alpha_f.1 as f64 * log.exp()
}

pub const ALPHA_11A: (u64, u64) = (14, 15);
pub const ALPHA_LEVEL1: (u64, u64) = (1, 1);

pub fn density_upper_bound_11a(zero_primes: &[u64]) -> f64 {
    density_upper_bound(zero_primes, ALPHA_11A)
}

/// Primes `p <= limit` with `a_p = 0` for the level-11 form, from point counts.
pub fn supersingular_primes_11a(limit: u64) -> Vec<u64> {
    let primes = primes_up_to(limit);
    primes.par_iter().copied().filter(|&p| p != 11 && elliptic::ap_bsgs(p) == 0).collect()
}

/// Serre's count of `tau`-zero candidates below `10^23`, and its floor.
pub const DELTA12_PRIME_COUNT: u64 = 1810;
pub const DELTA12_PRIME_MIN: u64 = SERRE_M - 1;

/// The printed strict lower bounds for the level-1 densities, by weight.
pub const TABLE_LOWER_BOUNDS: [(u32, f64); 6] =
    [(12, 0.9999912), (16, 0.9999911), (18, 0.9999951), (20, 0.9999973), (22, 0.9999985), (26, 0.9999909)];

/// Crossover point that reproduces the table entry for weight `k`.
pub fn table_x0(k: u32) -> Result<f64> {
    Ok(match k {
        12 | 16 | 26 => 1e23,
        18 => 1e24,
        20 => 1e25,
        22 => 1e26,
        _ => return Err(Error::Unsupported(format!("no table entry for weight {k}"))),
    })
}

/// Configuration used for the table entry of weight `k`: Serre's count for
/// `Delta_12`, and no zero-primes below `x0` for the other weights.
pub fn table_config(k: u32) -> Result<DensityConfig> {
    let primes = if k == 12 {
        PrimeData::Count { count: DELTA12_PRIME_COUNT, min: DELTA12_PRIME_MIN }
    } else {
        PrimeData::List { primes: Vec::new() }
    };
    Ok(DensityConfig {
        x0: table_x0(k)?,
        bound: BoundFn::ZeroCount { level: 1, weight: k },
        primes,
        alpha_f: ALPHA_LEVEL1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_counts() {
        let counts: Vec<usize> = RULE_WEIGHTS.iter().map(|&k| rule_table(k).unwrap().len()).collect();
        assert_eq!(counts, vec![8, 7, 9, 10, 10]);
        assert!(rule_table(12).is_err());
    }

    #[test]
    fn small_rule_check() {
        let r = check_rules(16, 300).unwrap();
        assert!(r.passed(), "{:?}", r.violations().next());
    }

    #[test]
    fn detects_a_wrong_rule() {
        let bank = FormBank::build(&[16], 50).unwrap();
        let bad = cl(13, ClassCondition::All, Rhs::Sigma { c: 1, e: 0, m: 1 });
        let lhs = mod_u64(&bank.get(16).unwrap().coeffs()[2], 13);
        assert_ne!(lhs, rhs_mod(&bad.rhs, 2, 13, &bank).unwrap());
    }

    #[test]
    fn serre_classes() {
        assert!(!serre_class_ok(1));
        assert!(serre_class_ok(30));
        assert_eq!(SERRE_M % 23, 22);
        assert!(!is_prime_u64(30 * SERRE_M - 1));
    }

    #[test]
    fn omega_counts_terms() {
        let c = BoundFn::Constant { value: 2.0 };
        assert_eq!(omega_f(100.0, 100.0, &c).unwrap(), 2.0);
        assert_eq!(omega_f(399.0, 100.0, &c).unwrap(), 4.0);
        assert_eq!(omega_f(400.0, 100.0, &c).unwrap(), 6.0);
        assert!(omega_f(50.0, 100.0, &c).is_err());
    }

    #[test]
    fn trivial_density() {
        let cfg = DensityConfig {
            x0: 100.0,
            bound: BoundFn::Constant { value: 0.0 },
            primes: PrimeData::List { primes: vec![] },
            alpha_f: ALPHA_LEVEL1,
        };
        assert_eq!(density_lower_bound(&cfg).unwrap().lower_bound, 1.0);
    }

    #[test]
    fn building_block_integral() {
        let x0 = 1e6;
        let (v, _, _, _) = doubling_integral(x0, |_| Ok(1.0), |x| 1.0 / x).unwrap();
        assert!((v - (1.0 / x0).ln_1p()).abs() < 2e-12);
    }

    #[test]
    fn upper_bound_basics() {
        assert!((density_upper_bound_11a(&[]) - 14.0 / 15.0).abs() < 1e-15);
        let one = density_upper_bound_11a(&[19]);
        assert!((one - 14.0 / 15.0 * (1.0 - 1.0 / 20.0)).abs() < 1e-15);
    }

    #[test]
    fn sturm_certificate() {
        let c = sturm_certificate_weight16().unwrap();
        assert_eq!(c.sturm_bound, 128);
        assert!(c.certified(), "{c:?}");
    }
}

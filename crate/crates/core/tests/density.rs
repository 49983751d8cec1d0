use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use sato_tate_core::arith::primes_up_to;
use sato_tate_core::density::{
    check_rules_with, density_lower_bound, density_upper_bound, omega_f, rule_table, serre_sieve,
    sturm_certificate_weight16, supersingular_primes_11a, table_config, BoundFn, DensityConfig, FormBank, PrimeData,
    ALPHA_11A, ALPHA_LEVEL1, RULE_WEIGHTS, SERRE_M, TABLE_LOWER_BOUNDS,
};

const BOUND: u64 = 10_000;

fn residue(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn divisor_sum(m: u32, n: u64) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(m)).sum()
}

#[test]
fn rule_tables_hold_to_ten_thousand() {
    let bank = FormBank::build(&[12, 16, 18, 20, 22, 26], BOUND as usize + 1).unwrap();
    let counts: Vec<usize> = RULE_WEIGHTS.iter().map(|&k| rule_table(k).unwrap().len()).collect();
    assert_eq!(counts.iter().sum::<usize>(), 44);
    for k in RULE_WEIGHTS {
        let report = check_rules_with(k, BOUND, &bank).unwrap();
        assert!(report.passed(), "k = {k}: {:?}", report.violations().next());
        assert!(report.outcomes.iter().all(|o| o.checked > 0));
    }

    // the rules tying one weight to another, recomputed here
    let c = |k: u32, n: u64| bank.get(k).unwrap().coeffs()[n as usize].clone();
    let cross: [(u32, u32, u32, u64); 6] =
        [(16, 12, 2, 13), (20, 16, 2, 17), (22, 18, 2, 19), (26, 22, 2, 23), (26, 12, 1, 13), (22, 12, 0, 11)];
    for (k, j, e, m) in cross {
        for n in 1..=BOUND {
            let rhs = BigInt::from(n).pow(e) * c(j, n);
            assert_eq!(residue(&c(k, n), m), residue(&rhs, m), "tau_{k} vs n^{e} tau_{j} mod {m} at n = {n}");
        }
    }

    // the congruences modulo the Bernoulli primes, with divisor sums by trial division
    for (k, p) in [(16, 3617u64), (18, 43867), (20, 283), (20, 617), (22, 131), (22, 593), (26, 657_931)] {
        for n in 1..=1500 {
            assert_eq!(residue(&c(k, n), p), residue(&divisor_sum(k - 1, n), p), "k = {k}, p = {p}, n = {n}");
        }
    }
}

#[test]
fn sturm_certificate_for_weight_sixteen() {
    let cert = sturm_certificate_weight16().unwrap();
    assert_eq!((cert.level, cert.sturm_bound), (64, 128));
    assert!(cert.twist_matches_filter);
    assert!(cert.certified(), "{cert:?}");
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let bases = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in bases {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in bases {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn class_ok(h: u64) -> bool {
    let squares: Vec<u64> = (1..23).map(|x| x * x % 23).collect();
    [0, 30, 48].contains(&(h % 49)) && squares.contains(&((h + 1) % 23))
}

#[test]
fn serre_sieve_is_sound_and_complete() {
    let h_max = 300_000;
    let report = serre_sieve(h_max).unwrap();
    assert!(report.retest_passed);
    let expected: Vec<u64> =
        (1..=h_max).filter(|&h| class_ok(h)).map(|h| h * SERRE_M - 1).filter(|&p| is_prime(p)).collect();
    assert_eq!(report.candidates, expected);
    for &p in &report.candidates {
        assert_eq!(p % SERRE_M, SERRE_M - 1);
    }
    let survivors = (1..=h_max).filter(|&h| class_ok(h)).count() as u64;
    assert_eq!(report.class_survivors, survivors);
    assert!((report.observed_class_density / report.predicted_class_density - 1.0).abs() < 0.01);
    assert!(serre_sieve(0).is_err());
}

#[test]
fn omega_with_a_constant_bound_counts_doublings() {
    let x0 = 1000.0;
    let b = BoundFn::Constant { value: 3.0 };
    for (x, terms) in [(1000.0, 1.0), (1999.0, 1.0), (2000.0, 2.0), (4000.0, 3.0), (1e6, 10.0)] {
        assert_eq!(omega_f(x, x0, &b).unwrap(), 3.0 * terms, "x = {x}");
    }
    assert!(omega_f(999.0, x0, &b).is_err());
}

/// With a constant bound `c`, the integral is `c sum_m (m+1) log((2X+2)/(2X+1))`, `X = x0 2^m`.
#[test]
fn constant_bound_integral_in_closed_form() {
    let (x0, c) = (500.0f64, 2.5);
    let config = DensityConfig {
        x0,
        bound: BoundFn::Constant { value: c },
        primes: PrimeData::List { primes: vec![2, 3] },
        alpha_f: ALPHA_LEVEL1,
    };
    let r = density_lower_bound(&config).unwrap();
    let mut exact = 0.0;
    for m in 0..200 {
        let lo = x0 * 2f64.powi(m);
        let hi = 2.0 * lo;
        let piece = ((hi / (hi + 1.0)).ln() - (lo / (lo + 1.0)).ln()) * c * (m as f64 + 1.0);
        exact += piece;
    }
    assert!((r.integral - exact).abs() < 1e-9, "{} vs {exact}", r.integral);
    let finite = (1.0 - 1.0 / 3.0) * (1.0 - 1.0 / 4.0);
    assert!((r.finite_product - finite).abs() < 1e-15);
    assert!(r.lower_bound <= finite * (-exact).exp());
}

fn constant_config(x0: f64, c: f64, primes: Vec<u64>) -> DensityConfig {
    DensityConfig { x0, bound: BoundFn::Constant { value: c }, primes: PrimeData::List { primes }, alpha_f: ALPHA_11A }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn more_zero_primes_never_raise_the_bound(
        x0 in 100.0..1e6f64,
        c in 0.0..50.0f64,
        picks in prop::collection::vec(0usize..25, 0..6),
        extra in 0usize..25,
    ) {
        let primes = primes_up_to(100);
        let mut list: Vec<u64> = picks.iter().map(|&i| primes[i]).collect();
        list.sort_unstable();
        list.dedup();
        let before = density_lower_bound(&constant_config(x0, c, list.clone())).unwrap();
        if !list.contains(&primes[extra]) {
            list.push(primes[extra]);
        }
        let after = density_lower_bound(&constant_config(x0, c, list.clone())).unwrap();
        prop_assert!(after.lower_bound <= before.lower_bound);
        prop_assert!(after.lower_bound <= density_upper_bound(&list, ALPHA_11A));
    }

    #[test]
    fn larger_constant_never_raises_the_bound(x0 in 100.0..1e6f64, c in 0.0..50.0f64, dc in 0.0..50.0f64) {
        let lo = density_lower_bound(&constant_config(x0, c, vec![19, 29])).unwrap();
        let hi = density_lower_bound(&constant_config(x0, c + dc, vec![19, 29])).unwrap();
        prop_assert!(hi.lower_bound <= lo.lower_bound);
        prop_assert!((0.0..=1.0).contains(&hi.lower_bound));
    }
}

#[test]
fn zero_count_bound_with_more_primes() {
    let base = DensityConfig {
        x0: 1e6,
        bound: BoundFn::ZeroCount { level: 11, weight: 2 },
        primes: PrimeData::List { primes: supersingular_primes_11a(1000) },
        alpha_f: ALPHA_11A,
    };
    let mut more = base.clone();
    more.primes = PrimeData::List { primes: supersingular_primes_11a(1_000_000) };
    let (a, b) = (density_lower_bound(&base).unwrap(), density_lower_bound(&more).unwrap());
    assert!(b.lower_bound <= a.lower_bound);
    assert!(b.lower_bound >= 0.0);
}

/// `#E(F_p)` via `y^2 + y = f(x)` iff `(2y+1)^2 = 4f(x) + 1`, using Euler's criterion.
fn ap_11a(p: u64) -> i64 {
    let f = |x: i64| x * x * x - x * x - 10 * x - 20;
    let mut count = 1i64;
    for x in 0..p as i64 {
        let d = BigInt::from(4 * f(x) + 1).mod_floor(&BigInt::from(p));
        count += if d == BigInt::from(0) {
            1
        } else if d.modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p)) == BigInt::from(1) {
            2
        } else {
            0
        };
    }
    p as i64 + 1 - count
}

#[test]
fn supersingular_primes_of_the_level_eleven_curve() {
    let found = supersingular_primes_11a(3000);
    let expected: Vec<u64> = primes_up_to(3000).into_iter().filter(|&p| p > 2 && p != 11 && ap_11a(p) == 0).collect();
    assert_eq!(found, expected);
    assert!(found.iter().all(|&p| p % 11 != 0));
    let upper = density_upper_bound(&found, ALPHA_11A);
    let manual: f64 = found.iter().map(|&p| p as f64 / (p as f64 + 1.0)).product::<f64>() * 14.0 / 15.0;
    assert!((upper - manual).abs() < 1e-14);
}

#[test]
fn table_entries_are_strict_lower_bounds() {
    for (k, printed) in TABLE_LOWER_BOUNDS {
        let r = density_lower_bound(&table_config(k).unwrap()).unwrap();
        assert!(r.lower_bound > printed, "k = {k}: {}", r.lower_bound);
        assert_eq!((r.lower_bound * 1e7).floor() / 1e7, printed, "k = {k}");
        assert!(r.truncated_tail.is_finite() && r.truncated_tail.abs() <= 1e-12);
    }
}

#[test]
fn density_config_is_validated() {
    let mut c = constant_config(100.0, 1.0, vec![101]);
    assert!(density_lower_bound(&c).is_err());
    c.primes = PrimeData::List { primes: vec![] };
    c.alpha_f = (3, 2);
    assert!(density_lower_bound(&c).is_err());
    c.alpha_f = (1, 1);
    c.x0 = 1.0;
    assert!(density_lower_bound(&c).is_err());
}

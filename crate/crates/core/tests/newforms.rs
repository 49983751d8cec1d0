use num_bigint::BigInt;
use rayon::prelude::*;

use sato_tate_core::arith::primes_up_to;
use sato_tate_core::newforms::elliptic::{ap_bsgs, ap_naive, count_points_naive};
use sato_tate_core::newforms::{build_form, deligne_check, hecke_check, theta_angle, NewformSpec};
use sato_tate_core::qexp::FourierSeries;

const PREC: usize = 100_000;

#[test]
fn deligne_and_hecke_hold_for_every_form() {
    NewformSpec::all().par_iter().for_each(|spec| {
        let f = build_form(spec, PREC).unwrap();
        deligne_check(&f, spec.weight).unwrap_or_else(|e| panic!("{spec}: {e}"));
        let report = hecke_check(&f, spec.weight, spec.level, PREC).unwrap();
        assert!(report.passed(), "{spec}: {:?}", report.violation);
        assert!(report.multiplicative_checked > 50_000);
    });
}

#[test]
fn level_eleven_matches_point_counts() {
    let f = build_form(&NewformSpec::level11(), 10_001).unwrap();
    for p in primes_up_to(10_000) {
        if p == 11 {
            continue;
        }
        let a = ap_naive(p);
        assert_eq!(f.coeffs()[p as usize], BigInt::from(a), "p = {p}");
        assert_eq!(ap_bsgs(p), a, "p = {p}");
        assert_eq!(count_points_naive(p) as i64, p as i64 + 1 - a);
    }
    // bad reduction: a(11) = 1 for split multiplicative reduction
    assert_eq!(f.coeffs()[11], BigInt::from(1));
    for r in 2..=3 {
        assert_eq!(f.coeffs()[11usize.pow(r)], BigInt::from(1));
    }
    // the bad-prime relation a(121) = a(11)^2 is part of the Hecke check
    let mut tampered = f.coeffs().to_vec();
    tampered[121] += 1;
    let report = hecke_check(&FourierSeries::new(tampered), 2, 11, 10_001).unwrap();
    assert!(report.violation.unwrap().starts_with("a(121)"));
}

/// `a(2^r)` from `a(2)` by the Hecke recursion, against the expansion.
#[test]
fn powers_of_two_follow_from_a2() {
    let prec = 1 << 12;
    for k in NewformSpec::LEVEL1_WEIGHTS {
        let f = build_form(&NewformSpec::delta(k).unwrap(), prec + 1).unwrap();
        let a2 = f.coeffs()[2].clone();
        let pk = BigInt::from(2).pow(k - 1);
        let (mut prev, mut cur) = (BigInt::from(1), a2.clone());
        let mut r = 1;
        while (1usize << r) <= prec {
            assert_eq!(f.coeffs()[1 << r], cur, "k = {k}, 2^{r}");
            let next = &a2 * &cur - &pk * &prev;
            prev = cur;
            cur = next;
            r += 1;
        }
    }
}

/// For `Delta * E_m`, `a(2) = tau(2) - 2m/B_m`.
#[test]
fn level_one_values_at_two() {
    // Bernoulli numbers B_m as (num, den)
    let bernoulli = [(4, (-1, 30)), (6, (1, 42)), (8, (-1, 30)), (10, (5, 66)), (14, (7, 6))];
    for (m, (num, den)) in bernoulli {
        let k = 12 + m;
        let factor = -2 * m as i64 * den / num;
        let f = build_form(&NewformSpec::delta(k).unwrap(), 3).unwrap();
        assert_eq!(f.coeffs()[2], BigInt::from(-24 + factor), "k = {k}");
    }
}

#[test]
fn angles_lie_in_range_and_reproduce_coefficients() {
    let spec = NewformSpec::delta(12).unwrap();
    let f = build_form(&spec, 10_000).unwrap();
    for p in primes_up_to(9_999) {
        let a = &f.coeffs()[p as usize];
        let t = theta_angle(a, p, 12).unwrap();
        assert!((0.0..=std::f64::consts::PI).contains(&t));
        let back = 2.0 * (p as f64).powf(5.5) * t.cos();
        let a: f64 = a.to_string().parse().unwrap();
        assert!((back - a).abs() <= 1e-9 * (p as f64).powf(5.5), "p = {p}");
    }
}

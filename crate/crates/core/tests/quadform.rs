use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use sato_tate_core::newforms::{build_form, NewformSpec};
use sato_tate_core::quadform::{
    decomposition_check, f_alpha, r_q2_theta, r_q_enumerate, representation_numbers, tau_two_powers, theta_powers,
    thm19_check, QuadForm, QuadraticFormSpec,
};

/// `r_Q(n)` for `n <= n_max` by scanning the box `|x_i| <= r`.
fn brute_force(spec: &QuadraticFormSpec, n_max: u64, r: i64) -> Vec<u64> {
    let d = spec.dim();
    let mut counts = vec![0u64; n_max as usize + 1];
    let mut x = vec![-r; d];
    loop {
        let q = spec.eval(&x);
        if (0..=n_max as i64).contains(&q) {
            counts[q as usize] += 1;
        }
        let mut i = 0;
        while i < d && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == d {
            return counts;
        }
        x[i] += 1;
    }
}

#[test]
fn q1_enumeration_matches_a_box_scan() {
    let q1 = QuadraticFormSpec::q1();
    // Q1 >= 0.8 |x|^2, so |x_i| <= 9 covers n <= 60
    let n_max = 60;
    assert_eq!(r_q_enumerate(&q1, n_max).unwrap(), brute_force(&q1, n_max, 9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Diagonally dominant Gram matrices: `Q(x) >= |x|^2 / 2` in every case.
    #[test]
    fn enumeration_matches_box_scan_for_random_forms(
        diag in prop::collection::vec(1i64..5, 3),
        off in prop::collection::vec(-1i64..=1, 3),
    ) {
        let mut g = vec![vec![0i64; 3]; 3];
        for i in 0..3 {
            g[i][i] = 2 * diag[i] + 2;
        }
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            g[i][j] = off[k];
            g[j][i] = off[k];
        }
        let spec = QuadraticFormSpec::new("random", g).unwrap();
        let n_max = 40;
        prop_assert_eq!(r_q_enumerate(&spec, n_max).unwrap(), brute_force(&spec, n_max, 9));
    }
}

#[test]
fn rejects_bad_gram_matrices() {
    assert!(QuadraticFormSpec::new("odd", vec![vec![1]]).is_err());
    assert!(QuadraticFormSpec::new("asym", vec![vec![2, 1], vec![0, 2]]).is_err());
    assert!(QuadraticFormSpec::new("indef", vec![vec![2, 3], vec![3, 2]]).is_err());
    assert!(QuadraticFormSpec::new("empty", vec![]).is_err());
}

#[test]
fn representation_numbers_are_even_and_nonnegative() {
    let n_max = 2000;
    for form in [QuadForm::Q1, QuadForm::Q2] {
        let r = representation_numbers(form, n_max).unwrap();
        assert_eq!(r[0], BigInt::one());
        for (n, v) in r.iter().enumerate().skip(1) {
            assert!(*v >= BigInt::zero(), "{form} at {n}");
            assert!((v % 2u32).is_zero(), "{form} at {n}");
        }
    }
    let r2 = r_q2_theta(n_max as usize);
    for (n, v) in r2.iter().enumerate().skip(1) {
        assert!((v % 16u32).is_zero(), "n = {n}");
    }
}

/// `r_8` by convolving a brute-force `r_4` with itself, and by Jacobi's formula.
#[test]
fn eight_squares_three_ways() {
    let n_max = 50usize;
    let mut r4 = vec![0i64; n_max + 1];
    let b = 8i64;
    for a in -b..=b {
        for c in -b..=b {
            for d in -b..=b {
                for e in -b..=b {
                    let s = (a * a + c * c + d * d + e * e) as usize;
                    if s <= n_max {
                        r4[s] += 1;
                    }
                }
            }
        }
    }
    let (t8, t24) = theta_powers(n_max + 1);
    for n in 0..=n_max {
        let conv: i64 = (0..=n).map(|i| r4[i] * r4[n - i]).sum();
        assert_eq!(t8.coeffs()[n], BigInt::from(conv), "n = {n}");
        if n > 0 {
            let jacobi: i64 = 16
                * (1..=n as i64)
                    .filter(|d| n as i64 % d == 0)
                    .map(|d| if (n as i64 + d) % 2 == 0 { d.pow(3) } else { -d.pow(3) })
                    .sum::<i64>();
            assert_eq!(t8.coeffs()[n], BigInt::from(jacobi), "n = {n}");
        }
    }
    // r_24(1) = 48, r_24(2) = 1104
    assert_eq!(t24.coeffs()[1], BigInt::from(48));
    assert_eq!(t24.coeffs()[2], BigInt::from(2 * 24 * 23));
}

#[test]
fn decompositions_hold() {
    for (form, n_max) in [(QuadForm::Q1, 1500), (QuadForm::Q2, 3000)] {
        let r = decomposition_check(form, n_max).unwrap();
        assert!(r.holds, "{form}: first failure at {:?}", r.first_failure);
    }
}

#[test]
fn tau_at_powers_of_two() {
    let t = tau_two_powers(300);
    assert!(t.iter().all(|v| !v.is_zero()));
    let delta = build_form(&NewformSpec::delta(12).unwrap(), (1 << 14) + 1).unwrap();
    for (a, v) in t.iter().enumerate().take(15) {
        assert_eq!(&delta.coeffs()[1 << a], v, "a = {a}");
    }
    // from the recursion, v_2(tau(2^a)) = 3a exactly, so no term vanishes
    for (a, v) in t.iter().enumerate() {
        assert_eq!(v.trailing_zeros(), Some(3 * a as u64), "a = {a}");
    }
}

#[test]
fn f_alpha_nonvanishing_to_three_hundred() {
    let f = f_alpha(300);
    assert!(f.nonvanishing && f.tau_nonvanishing);
    assert_eq!(f.values.len(), 301);
    let t = tau_two_powers(300);
    for a in 2..=300 {
        let direct = BigInt::from(259) * &t[a] + BigInt::from(11920) * &t[a - 1] + BigInt::from(1_060_864) * &t[a - 2];
        assert_eq!(f.value(a), direct, "a = {a}");
    }
    // the linear recurrence only fails where the shifted terms start
    assert_eq!(f.recurrence_failures, vec![2]);
}

#[test]
fn twenty_four_squares_vanishing_criterion() {
    let r = thm19_check(4000).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.tau_zeros, 0);
    assert_eq!(r.counterexample, None);
}

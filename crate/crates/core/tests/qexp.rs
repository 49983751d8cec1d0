use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use sato_tate_core::qexp::{
    eisenstein_series, eta_product, naive_mul, series_mul, sturm_bound, theta_operator, u_operator, v_operator,
    FourierSeries,
};

fn series(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1_000_000_000i64..1_000_000_000, 1..max_len)
}

/// Coefficients spanning many limbs, so the packed product sees carries.
fn big_series(max_len: usize) -> impl Strategy<Value = FourierSeries> {
    prop::collection::vec((any::<i64>(), 0u32..300), 1..max_len)
        .prop_map(|v| FourierSeries::new(v.into_iter().map(|(c, s)| BigInt::from(c) << s).collect()))
}

fn at_prec(v: &[i64], prec: usize) -> FourierSeries {
    FourierSeries::from_fn(prec, |n| BigInt::from(v.get(n).copied().unwrap_or(0)))
}

/// Schoolbook product written out independently of the library.
fn schoolbook(a: &FourierSeries, b: &FourierSeries) -> Vec<BigInt> {
    let prec = a.prec().min(b.prec());
    let mut out = vec![BigInt::zero(); prec];
    for i in 0..prec {
        for j in 0..prec - i {
            out[i + j] += &a.coeffs()[i] * &b.coeffs()[j];
        }
    }
    out
}

proptest! {
    #[test]
    fn product_is_commutative(a in series(60), b in series(60)) {
        let prec = a.len().min(b.len());
        let (a, b) = (at_prec(&a, prec), at_prec(&b, prec));
        prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
    }

    #[test]
    fn product_is_associative(a in series(40), b in series(40), c in series(40)) {
        let prec = a.len().min(b.len()).min(c.len());
        let (a, b, c) = (at_prec(&a, prec), at_prec(&b, prec), at_prec(&c, prec));
        prop_assert_eq!(series_mul(&series_mul(&a, &b), &c), series_mul(&a, &series_mul(&b, &c)));
    }

    #[test]
    fn product_matches_schoolbook(a in big_series(120), b in big_series(120)) {
        let p = series_mul(&a, &b);
        prop_assert_eq!(p.coeffs(), &schoolbook(&a, &b)[..]);
        prop_assert_eq!(&p, &naive_mul(&a, &b));
    }

    #[test]
    fn u_undoes_v(a in series(80), d in 1u64..12) {
        let f = at_prec(&a, a.len());
        let g = u_operator(&v_operator(&f, d).unwrap(), d).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn theta_commutes_with_v_up_to_d(a in series(80), d in 1u64..12) {
        let f = at_prec(&a, a.len());
        let lhs = theta_operator(&v_operator(&f, d).unwrap());
        let rhs = v_operator(&theta_operator(&f), d).unwrap().scale(&BigInt::from(d));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Long and dense enough to take the packed product path.
    #[test]
    fn packed_product_matches_schoolbook(
        a in prop::collection::vec((any::<i64>(), 0u32..200), 2100..2400),
        b in prop::collection::vec((any::<i64>(), 0u32..200), 2100..2400),
    ) {
        let to_series = |v: Vec<(i64, u32)>| FourierSeries::new(v.into_iter().map(|(c, s)| BigInt::from(c) << s).collect());
        let (a, b) = (to_series(a), to_series(b));
        let p = series_mul(&a, &b);
        prop_assert_eq!(p.coeffs(), &schoolbook(&a, &b)[..]);
    }
}

#[test]
fn product_of_long_series_matches_schoolbook() {
    // long enough for the packed path, with signs mixed in
    let a = FourierSeries::from_fn(3000, |n| BigInt::from((n as i64 * 7919) % 2003 - 1001) << (n % 97));
    let b = FourierSeries::from_fn(3000, |n| BigInt::from((n as i64 * 104_729) % 4001 - 2000));
    assert_eq!(series_mul(&a, &b).coeffs(), &schoolbook(&a, &b)[..]);
}

#[test]
fn eisenstein_p_minus_one_is_one_mod_p() {
    let prec = 2000;
    for p in [5u32, 7, 11, 13] {
        let e = eisenstein_series(p - 1, prec).unwrap();
        let den = e.denominator().clone();
        assert!(!den.is_multiple_of(&BigInt::from(p)), "E_{} denominator divisible by {p}", p - 1);
        let pb = BigInt::from(p);
        for (n, c) in e.scaled.coeffs().iter().enumerate() {
            let want = if n == 0 { den.clone() } else { BigInt::zero() };
            assert!((c - want).is_multiple_of(&pb), "E_{} at n = {n}", p - 1);
        }
    }
}

#[test]
fn sturm_bound_for_large_level() {
    assert_eq!(sturm_bound(4390, 19683), 9_600_930);
    assert_eq!(sturm_bound(16, 64), 128);
}

#[test]
fn eta_products_against_direct_products() {
    // prod (1 - q^n)^24 by repeated multiplication of truncated factors
    let prec = 200;
    let mut direct: Vec<BigInt> = (0..prec).map(|n| BigInt::from(u8::from(n == 0))).collect();
    for n in 1..prec {
        for _ in 0..24 {
            for m in (n..prec).rev() {
                let lower = direct[m - n].clone();
                direct[m] -= lower;
            }
        }
    }
    let delta = eta_product(&[(1, 24)], prec).unwrap();
    assert_eq!(delta.coeffs()[1..], direct[..prec - 1]);
}

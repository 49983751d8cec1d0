use num_bigint::BigInt;
use num_traits::Zero;

use super::{v_operator, FourierSeries};
use crate::{Error, Result};

/// `prod_{n >= 1} (1 - q^n)` via Euler's pentagonal number theorem.
pub fn pentagonal(prec: usize) -> FourierSeries {
    let mut c = vec![BigInt::zero(); prec];
    if prec == 0 {
        return FourierSeries::new(c);
    }
    c[0] = BigInt::from(1);
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 >= prec {
            break;
        }
        c[g1] = BigInt::from(sign);
        if g2 < prec {
            c[g2] = BigInt::from(sign);
        }
        k += 1;
    }
    FourierSeries::new(c)
}

/// `prod_{n >= 1} (1 - q^n)^3 = sum_{k >= 0} (-1)^k (2k+1) q^{k(k+1)/2}` (Jacobi).
pub fn jacobi_cube(prec: usize) -> FourierSeries {
    let mut c = vec![BigInt::zero(); prec];
    let mut k = 0usize;
    while k * (k + 1) / 2 < prec {
        let v = (2 * k + 1) as i64;
        c[k * (k + 1) / 2] = BigInt::from(if k.is_multiple_of(2) { v } else { -v });
        k += 1;
    }
    FourierSeries::new(c)
}

/// `prod (1 - q^n)^e` for `e >= 0`: the sparse Jacobi cube raised to `e / 3`
/// by repeated squaring, times the pentagonal series for the remainder.
fn eta_power(e: u64, prec: usize) -> FourierSeries {
    let cube = jacobi_cube(prec).pow((e / 3) as u32);
    match e % 3 {
        0 => cube,
        r => cube.mul(&pentagonal(prec).pow(r as u32)),
    }
}

/// Expansion of `q^{sum d e / 24} prod_i prod_{n >= 1} (1 - q^{d_i n})^{e_i}`.
///
/// Each factor is expanded at the base scale, inverted for negative exponents,
/// and then dilated by `V(d)`.
pub fn eta_product(factors: &[(u64, i64)], prec: usize) -> Result<FourierSeries> {
    let weighted: i64 = factors.iter().map(|&(d, e)| d as i64 * e).sum();
    if factors.iter().any(|&(d, _)| d == 0) {
        return Err(Error::Domain("eta factor with scale 0".into()));
    }
    if weighted % 24 != 0 || weighted < 0 {
        return Err(Error::Domain(format!(
            "eta product has leading exponent {weighted}/24, not a non-negative integer"
        )));
    }
    let lead = (weighted / 24) as usize;
    if lead >= prec {
        return Ok(FourierSeries::zero(prec));
    }
    let inner = prec - lead;
    let mut acc = FourierSeries::one(inner);
    for &(d, e) in factors {
        let d = d as usize;
        let base_prec = inner.div_ceil(d);
        let powered = eta_power(e.unsigned_abs(), base_prec);
        let powered = if e < 0 { powered.inverse()? } else { powered };
        let dilated = v_operator(&powered, d as u64)?.truncate(inner)?;
        acc = acc.mul(&dilated);
    }
    Ok(acc.shift_into(lead, prec))
}

impl FourierSeries {
    /// `q^s * self`, with the result extended to precision `prec`.
    pub(crate) fn shift_into(&self, s: usize, prec: usize) -> FourierSeries {
        FourierSeries::from_fn(prec, |n| {
            if n >= s && n - s < self.prec() {
                self.coeffs()[n - s].clone()
            } else {
                BigInt::zero()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::series::naive_mul;

    /// Expand prod (1 - q^{dn})^e factor by factor, the slow way.
    fn naive_eta(factors: &[(u64, i64)], prec: usize) -> FourierSeries {
        let mut acc = FourierSeries::one(prec);
        for &(d, e) in factors {
            for n in 1..prec {
                let step = d as usize * n;
                if step >= prec {
                    break;
                }
                let mut f = FourierSeries::one(prec);
                let mut c = f.clone().into_coeffs();
                c[step] = BigInt::from(-1);
                f = FourierSeries::new(c);
                for _ in 0..e {
                    acc = naive_mul(&acc, &f);
                }
            }
        }
        let lead = factors.iter().map(|&(d, e)| d as i64 * e).sum::<i64>() / 24;
        acc.shift_into(lead as usize, prec)
    }

    #[test]
    fn delta_start() {
        let d = eta_product(&[(1, 24)], 3).unwrap();
        assert_eq!(d, FourierSeries::from_i64(&[0, 1, -24]));
        assert_eq!(eta_product(&[(1, 24)], 12).unwrap(), naive_eta(&[(1, 24)], 12));
    }

    #[test]
    fn level_eleven_start() {
        let f = eta_product(&[(1, 2), (11, 2)], 30).unwrap();
        assert_eq!(f, naive_eta(&[(1, 2), (11, 2)], 30));
        assert_eq!(f.coeffs()[1], BigInt::from(1));
        assert_eq!(f.coeffs()[2], BigInt::from(-2));
    }

    #[test]
    fn rejects_fractional_leading_power() {
        assert!(eta_product(&[(1, 1)], 5).is_err());
    }

    #[test]
    fn negative_exponent_cancels() {
        let f = eta_product(&[(1, 24), (2, 24), (1, -24)], 20).unwrap();
        let g = eta_product(&[(2, 24)], 20).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn jacobi_cube_is_pentagonal_cubed() {
        assert_eq!(jacobi_cube(200), naive_mul(&naive_mul(&pentagonal(200), &pentagonal(200)), &pentagonal(200)));
    }

    #[test]
    fn pentagonal_matches_product() {
        let p = pentagonal(60);
        let mut acc = FourierSeries::one(60);
        for n in 1..60 {
            let mut c = vec![BigInt::zero(); 60];
            c[0] = BigInt::from(1);
            c[n] = BigInt::from(-1);
            acc = naive_mul(&acc, &FourierSeries::new(c));
        }
        assert_eq!(p, acc);
    }
}

//! Elementary integer arithmetic: sieves, divisor sums, primality, residue symbols.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Error;

/// Width of one segment of the segmented sieve (bytes of the odd-only bitmap).
const SEGMENT: u64 = 1 << 18;

/// Simple sieve of Eratosthenes, used to seed the segmented sieve.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve over `[lo, hi]` (inclusive); memory is `O(sqrt(hi) + SEGMENT)`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime_in(lo, hi, |p| out.push(p));
    out
}

/// All primes `p <= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    primes_in_range(2, limit)
}

/// Calls `f` on every prime in `[lo, hi]`, in increasing order.
pub fn for_each_prime_in<F: FnMut(u64)>(lo: u64, hi: u64, mut f: F) {
    if hi < 2 || lo > hi {
        return;
    }
    let lo = lo.max(2);
    if lo <= 2 {
        f(2);
    }
    let base = small_primes(isqrt(hi));
    // odd numbers only: index i in a segment starting at odd `start` is start + 2i
    let mut start = if lo <= 3 { 3 } else { lo | 1 };
    let mut seg = vec![true; SEGMENT as usize];
    while start <= hi {
        let end = (start + 2 * (SEGMENT - 1)).min(hi);
        let len = ((end - start) / 2 + 1) as usize;
        seg[..len].iter_mut().for_each(|b| *b = true);
        for &p in base.iter().skip(1) {
            if p * p > end {
                break;
            }
            let mut m = (start.div_ceil(p)).max(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            while m <= end {
                seg[((m - start) / 2) as usize] = false;
                m += 2 * p;
            }
        }
        for (i, &is_p) in seg[..len].iter().enumerate() {
            if is_p {
                let v = start + 2 * i as u64;
                if v > 1 {
                    f(v);
                }
            }
        }
        start = end + 2;
    }
}

/// Prime counting by sieving; `pi(x)` for `x < 2` is 0.
pub fn prime_pi(x: u64) -> u64 {
    let mut c = 0;
    for_each_prime_in(2, x, |_| c += 1);
    c
}

/// Smallest-prime-factor table for `0..=n`. Entries 0 and 1 are 0.
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Factorization `n = prod p^e` using a smallest-prime-factor table.
pub fn factor_with_spf(mut n: usize, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

/// Trial-division factorization for `u64`.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// If `j = p^m` with `p` prime and `m >= 1`, returns `(p, m)`.
pub fn prime_power(j: u64) -> Option<(u64, u32)> {
    if j < 2 {
        return None;
    }
    let f = factor_u64(j);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// Divisor power sum `sigma_m(n) = sum_{d | n} d^m`.
pub fn sigma(m: u32, n: i64) -> Result<BigInt, Error> {
    if n <= 0 {
        return Err(Error::Domain(format!("sigma requires n >= 1, got {n}")));
    }
    let n = n as u64;
    let mut total = BigInt::one();
    for (p, e) in factor_u64(n) {
        // (p^{m(e+1)} - 1) / (p^m - 1), or e+1 when m = 0
        let pm = num_traits::pow(BigInt::from(p), m as usize);
        let mut term = BigInt::one();
        let mut acc = BigInt::one();
        for _ in 0..e {
            acc *= &pm;
            term += &acc;
        }
        total *= term;
    }
    Ok(total)
}

/// `sigma_m(x)` with the convention that it vanishes when `x` is not a positive integer;
/// here `x = n / d`.
pub fn sigma_of_quotient(m: u32, n: u64, d: u64) -> BigInt {
    if n == 0 || !n.is_multiple_of(d) {
        BigInt::zero()
    } else {
        sigma(m, (n / d) as i64).expect("positive argument")
    }
}

/// `sigma_m(n) mod modulus` for `n >= 1`.
pub fn sigma_mod(m: u64, n: u64, modulus: u64) -> u64 {
    let mut total = 1u128 % modulus as u128;
    for (p, e) in factor_u64(n) {
        let pm = pow_mod(p % modulus, m, modulus) as u128;
        let mut acc = 1u128 % modulus as u128;
        let mut term = acc;
        for _ in 0..e {
            acc = acc * pm % modulus as u128;
            term = (term + acc) % modulus as u128;
        }
        total = total * term % modulus as u128;
    }
    total as u64
}

/// Number of divisors, for every `n` in `0..=limit` (entry 0 is 0).
pub fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    for i in 1..=limit {
        let mut j = i;
        while j <= limit {
            d[j] += 1;
            j += i;
        }
    }
    d
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn split_odd(n: u64) -> (u64, u32) {
    let s = (n - 1).trailing_zeros();
    ((n - 1) >> s, s)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (d, s) = split_odd(n);
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| miller_rabin_round(n, d, s, a))
}

/// Miller-Rabin with `rounds` random bases; probabilistic.
pub fn is_probable_prime<R: rand::Rng>(n: u64, rounds: usize, rng: &mut R) -> bool {
    if n < 4 {
        return n == 2 || n == 3;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let (d, s) = split_odd(n);
    (0..rounds).all(|_| {
        let a = rng.gen_range(2..n - 1);
        miller_rabin_round(n, d, s, a)
    })
}

/// Legendre symbol `(a/p)` for an odd prime `p` via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, mut n: u64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 if a = +-1 mod 8, -1 if a = +-3 mod 8
        let a8 = a.rem_euclid(8);
        if tz % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (a/n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Valuation `ord_p(n)` for `n != 0`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Square root modulo an odd prime (Tonelli-Shanks). `None` when `a` is a non-residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let (q, s) = split_odd(p);
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_primes(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn segmented_sieve_matches_trial_division() {
        assert_eq!(primes_up_to(2000), naive_primes(2000));
        let window: Vec<u64> = naive_primes(3000).into_iter().filter(|&p| p >= 1234).collect();
        assert_eq!(primes_in_range(1234, 3000), window);
        assert_eq!(primes_in_range(2, 2), vec![2]);
        assert_eq!(primes_in_range(2, 3), vec![2, 3]);
        assert!(primes_in_range(24, 28).is_empty());
    }

    #[test]
    fn segmented_sieve_across_segments() {
        // span several segments
        let hi = 3 * 2 * SEGMENT + 17;
        assert_eq!(prime_pi(hi) as usize, small_primes(hi).len());
        assert_eq!(prime_pi(1_000_000), 78498);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(11, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(1, 6).unwrap(), BigInt::from(12));
        assert_eq!(sigma(11, 2).unwrap(), BigInt::from(2049));
        assert_eq!(sigma(0, 12).unwrap(), BigInt::from(6));
        assert!(sigma(1, 0).is_err());
        assert!(sigma(1, -3).is_err());
        assert_eq!(sigma_of_quotient(1, 12, 5), BigInt::zero());
        assert_eq!(sigma_of_quotient(1, 22, 11), BigInt::from(3));
    }

    #[test]
    fn sigma_mod_agrees_with_exact() {
        for n in 1..300u64 {
            for (m, modulus) in [(15u32, 8192u64), (2763, 6561), (1, 25), (25, 657931)] {
                let exact = sigma(m, n as i64).unwrap() % BigInt::from(modulus);
                assert_eq!(BigInt::from(sigma_mod(m as u64, n, modulus)), exact);
            }
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..500).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, naive_primes(499));
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime_u64(92849172479999));
    }

    #[test]
    fn residue_symbols() {
        assert_eq!(legendre(8, 23), 1);
        assert_eq!(legendre(5, 23), -1);
        assert_eq!(legendre(46, 23), 0);
        for p in [3u64, 5, 7, 11, 13, 31] {
            for a in -40i64..40 {
                assert_eq!(kronecker(a, p), legendre(a, p));
            }
        }
        // (-4/n) and (8/n)
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(8, 2), 0);
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 97, 65537, 1_000_003] {
            for a in 1..60u64 {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a % p);
                } else {
                    assert_eq!(legendre(a as i64, p), -1);
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(1), None);
    }
}

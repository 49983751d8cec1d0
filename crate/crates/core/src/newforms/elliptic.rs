//! Point counts on the conductor-11 curve `y^2 + y = x^3 - x^2 - 10x - 20`.

use std::collections::HashMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};

use crate::arith::{isqrt, legendre, mul_mod, pow_mod, sqrt_mod};

/// `#E(F_p)` by direct enumeration (projective point included).
pub fn count_points_naive(p: u64) -> u64 {
    if p == 2 {
        let mut count = 1;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = (y * y + y) % 2;
                // x^3 - x^2 - 10x - 20 = x^3 + x^2 mod 2
                let rhs = (x * x * x + x * x) % 2;
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        return count;
    }
    // (2y + 1)^2 = 4x^3 - 4x^2 - 40x - 79
    let pi = p as i64;
    let mut count = 1u64;
    for x in 0..p {
        let xi = x as i128;
        let d = (4 * xi * xi * xi - 4 * xi * xi - 40 * xi - 79).rem_euclid(pi as i128) as i64;
        count += (1 + legendre(d, p) as i64) as u64;
    }
    count
}

/// `a_p = p + 1 - #E(F_p)` by enumeration.
pub fn ap_naive(p: u64) -> i64 {
    p as i64 + 1 - count_points_naive(p) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Point {
    Inf,
    Aff(u64, u64),
}

/// `Y^2 = X^3 + a2 X^2 + a4 X + a6` over `F_p`; with `X = 4x`, `Y = 4(2y+1)` the
/// curve above becomes `Y^2 = X^3 - 4X^2 - 160X - 1264` for odd `p`.
struct Curve {
    p: u64,
    a2: u64,
    a4: u64,
    a6: u64,
}

impl Curve {
    fn new(p: u64) -> Self {
        let r = |v: i64| v.rem_euclid(p as i64) as u64;
        Self { p, a2: r(-4), a4: r(-160), a6: r(-1264) }
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mul_mod(x, x, p);
        let x3 = mul_mod(x2, x, p);
        (x3 + mul_mod(self.a2, x2, p) + mul_mod(self.a4, x, p) + self.a6) % p
    }

    fn neg(&self, a: Point) -> Point {
        match a {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => Point::Aff(x, (self.p - y) % self.p),
        }
    }

    fn add(&self, a: Point, b: Point) -> Point {
        let p = self.p;
        let (x1, y1, x2, y2) = match (a, b) {
            (Point::Inf, q) | (q, Point::Inf) => return q,
            (Point::Aff(x1, y1), Point::Aff(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return Point::Inf;
            }
            let num = (3 * mul_mod(x1, x1, p) + 2 * mul_mod(self.a2, x1, p) + self.a4) % p;
            mul_mod(num, self.inv(2 * y1 % p), p)
        } else {
            mul_mod((y2 + p - y1) % p, self.inv((x2 + p - x1) % p), p)
        };
        let x3 = (mul_mod(lambda, lambda, p) + 3 * p - self.a2 - x1 - x2) % p;
        let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
        Point::Aff(x3, y3)
    }

    fn mul(&self, mut n: u64, mut a: Point) -> Point {
        let mut acc = Point::Inf;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, a);
            }
            a = self.add(a, a);
            n >>= 1;
        }
        acc
    }

    fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        loop {
            let x = rng.gen_range(0..self.p);
            if let Some(y) = sqrt_mod(self.rhs(x), self.p) {
                return Point::Aff(x, y);
            }
        }
    }

    /// Exact order of `a`, given a multiple `m` of it.
    fn order_from_multiple(&self, a: Point, mut m: u64) -> u64 {
        for (q, _) in crate::arith::factor_u64(m) {
            while m.is_multiple_of(q) && self.mul(m / q, a) == Point::Inf {
                m /= q;
            }
        }
        m
    }

    /// All `m` in `[lo, hi]` with `m a = O`, by baby-step giant-step.
    fn multiples_in(&self, a: Point, lo: u64, hi: u64) -> Vec<u64> {
        let width = hi - lo + 1;
        let s = isqrt(width) + 1;
        let mut baby: HashMap<Point, u64> = HashMap::with_capacity(s as usize);
        let mut cur = Point::Inf;
        for j in 0..s {
            if j > 0 && cur == Point::Inf {
                // small order: enumerate multiples directly
                let ord = j;
                return (lo.div_ceil(ord) * ord..=hi).step_by(ord as usize).collect();
            }
            baby.entry(cur).or_insert(j);
            cur = self.add(cur, a);
        }
        let step = self.mul(s, a);
        let mut giant = self.mul(lo, a);
        let mut out = Vec::new();
        let mut i = 0;
        while lo + i * s <= hi {
            if let Some(&j) = baby.get(&self.neg(giant)) {
                let m = lo + i * s + j;
                if m <= hi {
                    out.push(m);
                }
            }
            giant = self.add(giant, step);
            i += 1;
        }
        out
    }
}

/// `#E(F_p)` by baby-step giant-step inside the Hasse interval, falling back
/// to enumeration when the group structure leaves the order ambiguous.
/// Valid for odd primes of good reduction (`p != 11`).
pub fn count_points_bsgs(p: u64) -> u64 {
    if p < 50 {
        return count_points_naive(p);
    }
    let curve = Curve::new(p);
    let r = isqrt(4 * p);
    let (lo, hi) = (p + 1 - r, p + 1 + r);
    let mut rng = rand::rngs::StdRng::seed_from_u64(p);
    let mut l = 1u64;
    for _ in 0..24 {
        let a = curve.random_point(&mut rng);
        let ms = curve.multiples_in(a, lo, hi);
        let Some(&m0) = ms.first() else { break };
        let ord = curve.order_from_multiple(a, m0);
        l = l.lcm(&ord);
        let first = lo.div_ceil(l) * l;
        if first <= hi && first + l > hi {
            return first;
        }
    }
    count_points_naive(p)
}

/// `a_p` through the baby-step giant-step count.
pub fn ap_bsgs(p: u64) -> i64 {
    p as i64 + 1 - count_points_bsgs(p) as i64
}

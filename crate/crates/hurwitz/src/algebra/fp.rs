//! Word-sized prime fields with Barrett reduction.

use super::ring::{Field, Ring};

/// The prime field `F_p` for `p < 2^63`.
///
/// For `p < 2^32` multiplication reduces by a precomputed Barrett
/// reciprocal; larger primes fall back to 128-bit division. Elements are
/// canonical representatives in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    p: u64,
    barrett: u64, // floor(2^64 / p), valid when p < 2^32
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 63), "prime out of range");
        let barrett = if p < (1 << 32) {
            ((1u128 << 64) / p as u128) as u64
        } else {
            0
        };
        Fp { p, barrett }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_u64(&self, x: u64) -> u64 {
        if self.p < (1 << 32) {
            let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
            let mut r = x.wrapping_sub(q.wrapping_mul(self.p));
            if r >= self.p {
                r -= self.p;
            }
            r
        } else {
            x % self.p
        }
    }

    /// Canonical representative of a signed integer.
    pub fn from_i64_elem(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    /// Balanced representative in `(-p/2, p/2]`.
    pub fn balanced(&self, a: u64) -> i64 {
        if 2 * a > self.p {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All field elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Ring for Fp {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.p < (1 << 32) {
            self.reduce_u64(a * b)
        } else {
            ((*a as u128 * *b as u128) % self.p as u128) as u64
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn try_inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on signed 128-bit words
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "p must be prime");
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.from_i64_elem(n)
    }
}

impl Field for Fp {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrett_matches_modulo() {
        for &p in &[2u64, 3, 11, 101, 65521, (1 << 31) - 1, 4294967291] {
            let f = Fp::new(p);
            let samples = [0u64, 1, p - 1, p / 2, 12345 % p, (p - 1) / 3];
            for &a in &samples {
                for &b in &samples {
                    assert_eq!(f.mul(&a, &b), ((a as u128 * b as u128) % p as u128) as u64);
                }
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        let f = Fp::new(65537);
        for a in 1..2000u64 {
            let inv = f.try_inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.try_inv(&0), None);
    }

    #[test]
    fn large_prime_fallback() {
        let p = (1u64 << 61) - 1;
        let f = Fp::new(p);
        let a = p - 3;
        let b = p - 7;
        assert_eq!(f.mul(&a, &b), ((a as u128 * b as u128) % p as u128) as u64);
        let inv = f.try_inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), 1);
    }

    #[test]
    fn balanced_representatives() {
        let f = Fp::new(11);
        assert_eq!(f.balanced(6), -5);
        assert_eq!(f.balanced(5), 5);
        assert_eq!(f.balanced(0), 0);
    }
}

//! The residue ring `Z/p^N` with big-integer representatives.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ring::Ring;

/// `Z/p^N`, elements stored as canonical representatives in `0..p^N`.
///
/// Units are exactly the residues not divisible by `p`. Balanced
/// representatives in `(-p^N/2, p^N/2]` are used for display and
/// serialization; arithmetic stays canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZpN {
    p: u64,
    n: u32,
    modulus: BigUint,
}

impl ZpN {
    pub fn new(p: u64, n: u32) -> Self {
        assert!(n >= 1);
        let modulus = BigUint::from(p).pow(n);
        ZpN { p, n, modulus }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn reduce_int(&self, a: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        a.mod_floor(&m).to_biguint().unwrap()
    }

    pub fn reduce(&self, a: &BigUint) -> BigUint {
        a % &self.modulus
    }

    /// Balanced representative in `(-p^N/2, p^N/2]`.
    pub fn balanced(&self, a: &BigUint) -> BigInt {
        let two_a = BigUint::from(2u32) * a;
        if two_a > self.modulus {
            BigInt::from(a.clone()) - BigInt::from(self.modulus.clone())
        } else {
            BigInt::from(a.clone())
        }
    }

    /// Reduction to `F_p` of a residue.
    pub fn to_fp(&self, a: &BigUint) -> u64 {
        (a % BigUint::from(self.p)).to_u64().unwrap()
    }

    /// The same ring at a different precision exponent.
    pub fn with_exponent(&self, n: u32) -> ZpN {
        ZpN::new(self.p, n)
    }

    /// p-adic valuation of a residue, capped at the precision exponent.
    pub fn valuation(&self, a: &BigUint) -> u32 {
        if a.is_zero() {
            return self.n;
        }
        let p = BigUint::from(self.p);
        let mut v = 0;
        let mut rest = a.clone();
        while v < self.n {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            v += 1;
        }
        v
    }
}

impl Ring for ZpN {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }
    fn try_inv(&self, a: &BigUint) -> Option<BigUint> {
        if (a % BigUint::from(self.p)).is_zero() {
            return None;
        }
        let m = BigInt::from(self.modulus.clone());
        let e = Integer::extended_gcd(&BigInt::from(a.clone()), &m);
        debug_assert!(e.gcd.is_one());
        Some(e.x.mod_floor(&m).to_biguint().unwrap())
    }
    fn from_i64(&self, n: i64) -> BigUint {
        self.reduce_int(&BigInt::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_and_inverses() {
        let r = ZpN::new(11, 3);
        let a = r.from_i64(17);
        let inv = r.try_inv(&a).unwrap();
        assert!(r.is_one(&r.mul(&a, &inv)));
        assert_eq!(r.try_inv(&r.from_i64(22)), None);
    }

    #[test]
    fn balanced_matches_sign() {
        let r = ZpN::new(11, 2);
        assert_eq!(r.balanced(&r.from_i64(-41)), BigInt::from(-41));
        assert_eq!(r.balanced(&r.from_i64(50)), BigInt::from(50));
        assert_eq!(r.balanced(&r.from_i64(61)), BigInt::from(-60));
    }

    #[test]
    fn valuation_counts_p_powers() {
        let r = ZpN::new(3, 5);
        assert_eq!(r.valuation(&r.from_i64(0)), 5);
        assert_eq!(r.valuation(&r.from_i64(18)), 2);
        assert_eq!(r.valuation(&r.from_i64(5)), 0);
    }
}

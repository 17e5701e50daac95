//! Dense univariate polynomials over a ring context.
//!
//! Coefficients are stored lowest degree first; the zero polynomial is the
//! empty vector and the leading coefficient is otherwise nonzero. All
//! arithmetic is exact in the coefficient ring.

use super::ring::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly<R: Ring> {
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> UniPoly<R> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn new(ring: &R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        UniPoly::new(ring, vec![c])
    }

    pub fn one(ring: &R) -> Self {
        UniPoly::constant(ring, ring.one())
    }

    /// `c · x^k`
    pub fn monomial(ring: &R, c: R::Elem, k: usize) -> Self {
        if ring.is_zero(&c) {
            return UniPoly::zero();
        }
        let mut coeffs = vec![ring.zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    /// `x + c`
    pub fn linear(ring: &R, c: R::Elem) -> Self {
        UniPoly {
            coeffs: vec![c, ring.one()],
        }
    }

    pub fn from_i64(ring: &R, coeffs: &[i64]) -> Self {
        UniPoly::new(ring, coeffs.iter().map(|&c| ring.from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, ring: &R, k: usize) -> R::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, ring: &R) -> bool {
        self.leading().is_some_and(|c| ring.is_one(c))
    }

    pub fn eval(&self, ring: &R, x: &R::Elem) -> R::Elem {
        let mut acc = ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = ring.add(&ring.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.add(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        UniPoly::new(ring, out)
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        UniPoly::new(ring, out)
    }

    pub fn neg(&self, ring: &R) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect(),
        }
    }

    pub fn scale(&self, ring: &R, c: &R::Elem) -> Self {
        if ring.is_zero(c) {
            return UniPoly::zero();
        }
        UniPoly::new(
            ring,
            self.coeffs.iter().map(|a| ring.mul(a, c)).collect(),
        )
    }

    /// `self - c·other`
    pub fn sub_scaled(&self, ring: &R, other: &Self, c: &R::Elem) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(
                &self.coeff(ring, i),
                &ring.mul(&other.coeff(ring, i), c),
            ));
        }
        UniPoly::new(ring, out)
    }

    pub fn mul(&self, ring: &R, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        UniPoly::new(ring, out)
    }

    pub fn pow(&self, ring: &R, e: u32) -> Self {
        let mut acc = UniPoly::one(ring);
        for _ in 0..e {
            acc = acc.mul(ring, self);
        }
        acc
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, ring: &R, k: usize) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn derivative(&self, ring: &R) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| ring.mul(&ring.from_i64((i + 1) as i64), c))
            .collect();
        UniPoly::new(ring, out)
    }

    /// Quotient and remainder by a monic divisor; valid over any ring.
    pub fn divrem_monic(&self, ring: &R, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(ring), "divisor must be monic");
        let dd = divisor.degree().unwrap();
        if self.coeffs.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![ring.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone();
            if ring.is_zero(&q) {
                continue;
            }
            quo[i - dd] = q.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = ring.sub(&rem[i - dd + j], &ring.mul(&q, b));
            }
        }
        rem.truncate(dd);
        (UniPoly::new(ring, quo), UniPoly::new(ring, rem))
    }

    /// Exact division by a monic divisor; panics when the remainder is nonzero.
    pub fn div_exact_monic(&self, ring: &R, divisor: &Self) -> Self {
        let (q, r) = self.divrem_monic(ring, divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Expand a list of `(factor, multiplicity)` pairs.
    pub fn expand_factored(ring: &R, factors: &[(UniPoly<R>, u32)]) -> Self {
        let mut acc = UniPoly::one(ring);
        for (f, m) in factors {
            acc = acc.mul(ring, &f.pow(ring, *m));
        }
        acc
    }
}

impl<R: Field> UniPoly<R> {
    pub fn monic(&self, ring: &R) -> Self {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) if ring.is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = ring.inv(lc);
                self.scale(ring, &inv)
            }
        }
    }

    pub fn divrem(&self, ring: &R, divisor: &Self) -> (Self, Self) {
        let lc = divisor.leading().expect("division by zero polynomial");
        if ring.is_one(lc) {
            return self.divrem_monic(ring, divisor);
        }
        let inv = ring.inv(lc);
        let monic = divisor.scale(ring, &inv);
        let (q, r) = self.divrem_monic(ring, &monic);
        (q.scale(ring, &inv), r)
    }

    pub fn rem(&self, ring: &R, divisor: &Self) -> Self {
        self.divrem(ring, divisor).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, IntRing};

    #[test]
    fn canonical_zero() {
        let f = Fp::new(11);
        let p = UniPoly::from_i64(&f, &[0, 0, 0]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn mul_and_divrem_round_trip() {
        let f = Fp::new(101);
        let a = UniPoly::from_i64(&f, &[3, 0, 7, 1]);
        let b = UniPoly::from_i64(&f, &[9, 5, 1]);
        let prod = a.mul(&f, &b);
        let (q, r) = prod.divrem(&f, &b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        let (q2, r2) = prod.add(&f, &UniPoly::from_i64(&f, &[1])).divrem(&f, &b);
        assert_eq!(q2, a);
        assert_eq!(r2, UniPoly::from_i64(&f, &[1]));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let f = Fp::new(11);
        assert!(UniPoly::from_i64(&f, &[5]).derivative(&f).is_zero());
        assert!(UniPoly::<Fp>::zero().derivative(&f).is_zero());
    }

    #[test]
    fn monic_divrem_over_integers() {
        let z = IntRing;
        let a = UniPoly::from_i64(&z, &[2, -3, 0, 5, 1]);
        let b = UniPoly::from_i64(&z, &[7, 2, 1]);
        let (q, r) = a.divrem_monic(&z, &b);
        let back = q.mul(&z, &b).add(&z, &r);
        assert_eq!(back, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn eval_horner() {
        let f = Fp::new(13);
        let p = UniPoly::from_i64(&f, &[1, 2, 3]); // 3x^2 + 2x + 1
        assert_eq!(p.eval(&f, &2), (3 * 4 + 2 * 2 + 1) % 13);
    }
}

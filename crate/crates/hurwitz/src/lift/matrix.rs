//! Dense square matrices over `Z/p^N` with unit-pivot Gaussian inversion.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::algebra::{Ring, ZpN};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZpMatrix {
    pub n: usize,
    entries: Vec<BigUint>, // row-major
}

impl ZpMatrix {
    pub fn zero(n: usize) -> Self {
        ZpMatrix {
            n,
            entries: vec![BigUint::zero(); n * n],
        }
    }

    pub fn identity(ring: &ZpN, n: usize) -> Self {
        let mut m = ZpMatrix::zero(n);
        for i in 0..n {
            *m.at_mut(i, i) = ring.one();
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigUint {
        &mut self.entries[i * self.n + j]
    }

    /// Entrywise reduction into another precision of the same prime.
    pub fn reduced(&self, ring: &ZpN) -> ZpMatrix {
        ZpMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| ring.reduce(e)).collect(),
        }
    }

    pub fn mul(&self, ring: &ZpN, other: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = ZpMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = ring.mul(a, other.at(k, j));
                    *out.at_mut(i, j) = ring.add(out.at(i, j), &t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &ZpN, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = ring.zero();
                for j in 0..self.n {
                    acc = ring.add(&acc, &ring.mul(self.at(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// Inverse by Gaussian elimination with unit pivots; `None` when the
    /// matrix is singular modulo p.
    pub fn invert(&self, ring: &ZpN) -> Option<ZpMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = ZpMatrix::identity(ring, n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| ring.try_inv(a.at(r, col)).is_some())?;
            if pivot_row != col {
                for j in 0..n {
                    a.entries.swap(col * n + j, pivot_row * n + j);
                    inv.entries.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pinv = ring.try_inv(a.at(col, col)).unwrap();
            for j in 0..n {
                *a.at_mut(col, j) = ring.mul(a.at(col, j), &pinv);
                *inv.at_mut(col, j) = ring.mul(inv.at(col, j), &pinv);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let t = ring.mul(&factor, a.at(col, j));
                    *a.at_mut(r, j) = ring.sub(a.at(r, j), &t);
                    let t = ring.mul(&factor, inv.at(col, j));
                    *inv.at_mut(r, j) = ring.sub(inv.at(r, j), &t);
                }
            }
        }
        Some(inv)
    }
}

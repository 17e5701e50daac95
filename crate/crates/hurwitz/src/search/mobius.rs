//! The projective line over `F_p` and its Möbius transformations.

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Fp, Ring};

/// A point of `P¹(F_p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum P1Fp {
    Infinity,
    Finite(u64),
}

impl P1Fp {
    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Fp::Infinity)
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            P1Fp::Finite(x) => Some(*x),
            P1Fp::Infinity => None,
        }
    }
}

impl Serialize for P1Fp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            P1Fp::Infinity => s.serialize_str("inf"),
            P1Fp::Finite(x) => s.serialize_u64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for P1Fp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(u64),
            Str(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(x) => Ok(P1Fp::Finite(x)),
            Wire::Str(s) if s == "inf" || s == "∞" => Ok(P1Fp::Infinity),
            Wire::Str(s) => Err(serde::de::Error::custom(format!(
                "expected residue or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// `z ↦ (az + b)/(cz + d)` over `F_p`, determinant nonzero.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MobiusFp {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl MobiusFp {
    pub fn identity() -> Self {
        MobiusFp {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn det(&self, f: &Fp) -> u64 {
        f.sub(&f.mul(&self.a, &self.d), &f.mul(&self.b, &self.c))
    }

    pub fn apply(&self, f: &Fp, z: P1Fp) -> P1Fp {
        match z {
            P1Fp::Finite(x) => {
                let num = f.add(&f.mul(&self.a, &x), &self.b);
                let den = f.add(&f.mul(&self.c, &x), &self.d);
                if den == 0 {
                    P1Fp::Infinity
                } else {
                    P1Fp::Finite(f.mul(&num, &f.inv(&den)))
                }
            }
            P1Fp::Infinity => {
                if self.c == 0 {
                    P1Fp::Infinity
                } else {
                    P1Fp::Finite(f.mul(&self.a, &f.inv(&self.c)))
                }
            }
        }
    }

    pub fn inverse(&self, f: &Fp) -> MobiusFp {
        // adjugate; projective scaling is irrelevant
        MobiusFp {
            a: self.d,
            b: f.neg(&self.b),
            c: f.neg(&self.c),
            d: self.a,
        }
    }

    /// The transformation sending `(z1, z2, z3) ↦ (∞, 0, 1)`.
    pub fn to_std_triple(f: &Fp, z1: P1Fp, z2: P1Fp, z3: P1Fp) -> MobiusFp {
        assert!(z1 != z2 && z1 != z3 && z2 != z3, "triple must be distinct");
        let m = match (z1, z2, z3) {
            (P1Fp::Infinity, P1Fp::Finite(q2), P1Fp::Finite(q3)) => MobiusFp {
                a: 1,
                b: f.neg(&q2),
                c: 0,
                d: f.sub(&q3, &q2),
            },
            (P1Fp::Finite(q1), P1Fp::Infinity, P1Fp::Finite(q3)) => MobiusFp {
                a: 0,
                b: f.sub(&q3, &q1),
                c: 1,
                d: f.neg(&q1),
            },
            (P1Fp::Finite(q1), P1Fp::Finite(q2), P1Fp::Infinity) => MobiusFp {
                a: 1,
                b: f.neg(&q2),
                c: 1,
                d: f.neg(&q1),
            },
            (P1Fp::Finite(q1), P1Fp::Finite(q2), P1Fp::Finite(q3)) => MobiusFp {
                a: f.sub(&q3, &q1),
                b: f.neg(&f.mul(&q2, &f.sub(&q3, &q1))),
                c: f.sub(&q3, &q2),
                d: f.neg(&f.mul(&q1, &f.sub(&q3, &q2))),
            },
            _ => unreachable!("at most one point is infinite"),
        };
        debug_assert_ne!(m.det(f), 0);
        debug_assert_eq!(m.apply(f, z1), P1Fp::Infinity);
        debug_assert_eq!(m.apply(f, z2), P1Fp::Finite(0));
        debug_assert_eq!(m.apply(f, z3), P1Fp::Finite(1));
        m
    }
}

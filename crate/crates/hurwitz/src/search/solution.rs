//! Finite-field solutions and their independent re-verification.

use serde::{Deserialize, Serialize};

use crate::algebra::{poly_gcd, shape_of, shape_with_infinity, Fp, Partition, Ring, UniPoly};

use super::mobius::{MobiusFp, P1Fp};
use super::SearchError;

/// A factored monic polynomial over `F_p` on the wire.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FpPolyWire {
    pub ring: String,
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPolyWire {
    pub fn pack(fp: &Fp, poly: &UniPoly<Fp>) -> Self {
        FpPolyWire {
            ring: "Fp".into(),
            p: fp.p(),
            coeffs: poly.coeffs().to_vec(),
        }
    }

    pub fn unpack(&self) -> (Fp, UniPoly<Fp>) {
        let fp = Fp::new(self.p);
        (fp, UniPoly::new(&fp, self.coeffs.clone()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactorWire {
    pub factor: FpPolyWire,
    pub multiplicity: u32,
}

/// One rational map over `F_p` solving the shape problem, in the normalized
/// chart `q_1 = ∞`, `q_2 = 0`: the map is `W_2 / (λ·W_1)`, with the fiber
/// over ∞ carrying an extra point at ∞ of multiplicity `infinity_multiplicity`
/// when the denominator degree drops.
#[derive(Clone, Debug, PartialEq)]
pub struct FFSolution {
    pub prime: u64,
    pub degree: usize,
    /// Factored denominator slots (finite part of the fiber over `q_1`).
    pub w1: Vec<(UniPoly<Fp>, u32)>,
    /// Factored numerator slots (the fiber over `q_2 = 0`).
    pub w2: Vec<(UniPoly<Fp>, u32)>,
    /// Multiplicity of ∞ in the fiber over `q_1` (the pinned slot), 0 if none.
    pub infinity_multiplicity: u32,
    pub lambda: u64,
    /// Resolved points in the normalized chart (`∞, 0, q_3, …`).
    pub points: Vec<P1Fp>,
    /// The same points pulled back through `M^{-1}` to the problem's chart.
    pub original_points: Vec<P1Fp>,
    /// The normalizing transformation `M` with `M(Q_1) = ∞`, `M(Q_2) = 0`.
    pub mobius: MobiusFp,
}

#[derive(Serialize, Deserialize)]
struct FFSolutionWire {
    prime: u64,
    degree: usize,
    w1: Vec<FactorWire>,
    w2: Vec<FactorWire>,
    infinity_multiplicity: u32,
    lambda: u64,
    points: Vec<P1Fp>,
    original_points: Vec<P1Fp>,
    mobius: MobiusFp,
}

impl Serialize for FFSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let fp = Fp::new(self.prime);
        let pack = |v: &[(UniPoly<Fp>, u32)]| {
            v.iter()
                .map(|(f, m)| FactorWire {
                    factor: FpPolyWire::pack(&fp, f),
                    multiplicity: *m,
                })
                .collect()
        };
        FFSolutionWire {
            prime: self.prime,
            degree: self.degree,
            w1: pack(&self.w1),
            w2: pack(&self.w2),
            infinity_multiplicity: self.infinity_multiplicity,
            lambda: self.lambda,
            points: self.points.clone(),
            original_points: self.original_points.clone(),
            mobius: self.mobius,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FFSolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = FFSolutionWire::deserialize(d)?;
        let unpack = |v: Vec<FactorWire>| {
            v.into_iter()
                .map(|fw| (fw.factor.unpack().1, fw.multiplicity))
                .collect()
        };
        Ok(FFSolution {
            prime: w.prime,
            degree: w.degree,
            w1: unpack(w.w1),
            w2: unpack(w.w2),
            infinity_multiplicity: w.infinity_multiplicity,
            lambda: w.lambda,
            points: w.points,
            original_points: w.original_points,
            mobius: w.mobius,
        })
    }
}

impl FFSolution {
    pub fn fp(&self) -> Fp {
        Fp::new(self.prime)
    }

    pub fn w1_expanded(&self) -> UniPoly<Fp> {
        UniPoly::expand_factored(&self.fp(), &self.w1)
    }

    pub fn w2_expanded(&self) -> UniPoly<Fp> {
        UniPoly::expand_factored(&self.fp(), &self.w2)
    }

    /// Numerator of `f - q_i` for a finite normalized point: `W_2 - λ·q_i·W_1`.
    pub fn wi(&self, q: u64) -> UniPoly<Fp> {
        let fp = self.fp();
        let m = fp.mul(&self.lambda, &q);
        self.w2_expanded().sub_scaled(&fp, &self.w1_expanded(), &m)
    }

    /// Independent re-verification: shapes via the gcd chain, coprimality
    /// via the gcd, and the coherence of every resolved point.
    pub fn verify(&self, shapes: &[Partition]) -> Result<(), SearchError> {
        let fp = self.fp();
        let d = self.degree;
        let w1 = self.w1_expanded();
        let w2 = self.w2_expanded();
        let fail = |msg: String| Err(SearchError::SoundnessFailure(msg));

        if self.lambda == 0 || self.lambda >= fp.p() {
            return fail("λ is not a nonzero residue".into());
        }
        if w1.degree().unwrap_or(0) + self.infinity_multiplicity as usize != d
            && !(w1.degree() == Some(0) && self.infinity_multiplicity as usize == d)
        {
            return fail("denominator degree and ∞ multiplicity disagree".into());
        }
        let g = poly_gcd(&fp, &w1, &w2);
        if g.degree() != Some(0) {
            return fail("W1 and W2 are not coprime".into());
        }
        // fiber over q_1 = ∞
        let fiber1 = if self.infinity_multiplicity as usize == d {
            Partition::new(vec![d as u32]).unwrap()
        } else {
            shape_with_infinity(&fp, &w1, d).map_err(|e| SearchError::SoundnessFailure(e.to_string()))?
        };
        if fiber1 != shapes[0] {
            return fail(format!("fiber over ∞ has shape {fiber1}, want {}", shapes[0]));
        }
        // fiber over q_2 = 0
        let fiber2 =
            shape_of(&fp, &w2).map_err(|e| SearchError::SoundnessFailure(e.to_string()))?;
        if fiber2 != shapes[1] {
            return fail(format!("fiber over 0 has shape {fiber2}, want {}", shapes[1]));
        }
        if w2.degree() != Some(d) {
            return fail("numerator degree is not d".into());
        }
        // resolved points distinct and coherent
        let mut seen: Vec<P1Fp> = Vec::new();
        for pt in &self.points {
            if seen.contains(pt) {
                return fail("resolved points collide".into());
            }
            seen.push(*pt);
        }
        for (i, shape) in shapes.iter().enumerate().skip(2) {
            let q = match self.points[i] {
                P1Fp::Finite(q) if q != 0 => q,
                _ => return fail(format!("point {} is not a finite nonzero residue", i + 1)),
            };
            let wi = self.wi(q);
            let s = shape_with_infinity(&fp, &wi, d)
                .map_err(|e| SearchError::SoundnessFailure(e.to_string()))?;
            if s != *shape {
                return fail(format!("fiber over q_{} has shape {s}, want {shape}", i + 1));
            }
        }
        Ok(())
    }

    /// Canonical form `(numerator, denominator·λ)` for set comparisons: the
    /// map as a pair with monic numerator.
    pub fn canonical_map(&self) -> (Vec<u64>, Vec<u64>) {
        let fp = self.fp();
        let den = self.w1_expanded().scale(&fp, &self.lambda);
        (self.w2_expanded().coeffs().to_vec(), den.coeffs().to_vec())
    }
}

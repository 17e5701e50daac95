//! Search problems and their normalized form.

use serde::{Deserialize, Serialize};

use crate::algebra::{Fp, Partition};

use super::mobius::{MobiusFp, P1Fp};
use super::SearchError;

/// A branch point constraint: a prescribed element of `P¹(F_p)`, or free
/// (the search discovers it). Only points with index ≥ 3 may be free.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    #[serde(with = "free_marker")]
    Free,
    Specified(P1Fp),
}

mod free_marker {
    pub fn serialize<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("free")
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        use serde::Deserialize;
        let s = String::deserialize(d)?;
        if s == "free" {
            Ok(())
        } else {
            Err(serde::de::Error::custom("expected \"free\""))
        }
    }
}

/// Prescribed fiber shapes above prescribed (or free) points of `P¹(F_p)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SearchProblem {
    pub prime: u64,
    pub degree: usize,
    pub shapes: Vec<Partition>,
    pub points: Vec<PointSpec>,
}

impl SearchProblem {
    pub fn validate(&self) -> Result<(), SearchError> {
        let d = self.degree;
        if d < 1 {
            return Err(SearchError::InvalidProblem("degree must be ≥ 1".into()));
        }
        if self.shapes.len() != self.points.len() {
            return Err(SearchError::InvalidProblem(
                "shapes and points must have equal length".into(),
            ));
        }
        if self.shapes.len() < 2 {
            return Err(SearchError::InvalidProblem(
                "need at least two branch points".into(),
            ));
        }
        for a in &self.shapes {
            if a.total() as usize != d {
                return Err(SearchError::InvalidProblem(format!(
                    "shape {a} does not sum to the degree {d}"
                )));
            }
        }
        let defect: u32 = self.shapes.iter().map(|a| a.defect()).sum();
        if defect != 2 * d as u32 - 2 {
            return Err(SearchError::InvalidProblem(format!(
                "total branching defect {defect} violates the count 2d-2 = {}",
                2 * d - 2
            )));
        }
        let max_mult = self.shapes.iter().map(|a| a.max_part()).max().unwrap();
        if self.prime <= max_mult as u64 {
            return Err(SearchError::PrimeTooSmall {
                p: self.prime,
                max_mult,
            });
        }
        let mut seen = Vec::new();
        for (i, pt) in self.points.iter().enumerate() {
            match pt {
                PointSpec::Free if i < 2 => {
                    return Err(SearchError::InvalidProblem(
                        "the first two points must be specified".into(),
                    ));
                }
                PointSpec::Free => {}
                PointSpec::Specified(q) => {
                    if let P1Fp::Finite(x) = q {
                        if *x >= self.prime {
                            return Err(SearchError::InvalidProblem(format!(
                                "point {x} is not a residue mod {}",
                                self.prime
                            )));
                        }
                    }
                    if seen.contains(q) {
                        return Err(SearchError::InvalidProblem(
                            "specified points must be distinct".into(),
                        ));
                    }
                    seen.push(*q);
                }
            }
        }
        Ok(())
    }

    /// Stable content hash used to tie checkpoints to a problem.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("serializable");
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        let out = h.finalize();
        out.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }

    /// Apply the target normalization `M(Q_1) = ∞`, `M(Q_2) = 0`, with the
    /// third normalization fixed by sending `Q_3` (when specified) or a
    /// fallback reference point to 1.
    pub fn normalize(&self) -> Result<NormalizedProblem, SearchError> {
        self.validate()?;
        let fp = Fp::new(self.prime);
        let q1 = match self.points[0] {
            PointSpec::Specified(q) => q,
            PointSpec::Free => unreachable!("validated"),
        };
        let q2 = match self.points[1] {
            PointSpec::Specified(q) => q,
            PointSpec::Free => unreachable!("validated"),
        };
        let third = match self.points.get(2) {
            Some(PointSpec::Specified(q)) => *q,
            _ => {
                // fallback reference: the smallest residue distinct from Q_1, Q_2
                (0..self.prime)
                    .map(P1Fp::Finite)
                    .chain([P1Fp::Infinity])
                    .find(|c| *c != q1 && *c != q2)
                    .expect("p ≥ 2 leaves a free point")
            }
        };
        let mobius = MobiusFp::to_std_triple(&fp, q1, q2, third);
        let mut norm_points = Vec::with_capacity(self.points.len());
        for (i, pt) in self.points.iter().enumerate() {
            norm_points.push(match pt {
                PointSpec::Free => PointSpec::Free,
                PointSpec::Specified(q) => {
                    let m = mobius.apply(&fp, *q);
                    if i >= 2 {
                        match m {
                            P1Fp::Finite(x) if x != 0 => {}
                            _ => {
                                return Err(SearchError::InvalidProblem(
                                    "normalized point collides with ∞ or 0".into(),
                                ))
                            }
                        }
                    }
                    PointSpec::Specified(m)
                }
            });
        }
        Ok(NormalizedProblem {
            fp,
            degree: self.degree,
            shapes: self.shapes.clone(),
            points: norm_points,
            mobius,
            original: self.clone(),
        })
    }
}

/// A problem with `q_1 = ∞`, `q_2 = 0` and the normalizing map recorded.
#[derive(Clone, Debug)]
pub struct NormalizedProblem {
    pub fp: Fp,
    pub degree: usize,
    pub shapes: Vec<Partition>,
    pub points: Vec<PointSpec>,
    pub mobius: MobiusFp,
    pub original: SearchProblem,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shapes(v: &[&[u32]]) -> Vec<Partition> {
        v.iter().map(|s| Partition::new(s.to_vec()).unwrap()).collect()
    }

    #[test]
    fn golden_problem_validates() {
        let p = SearchProblem {
            prime: 11,
            degree: 13,
            shapes: shapes(&[&[4, 3, 2, 2, 2], &[4, 3, 2, 2, 2], &[4, 3, 2, 2, 2]]),
            points: vec![
                PointSpec::Specified(P1Fp::Infinity),
                PointSpec::Specified(P1Fp::Finite(0)),
                PointSpec::Free,
            ],
        };
        p.validate().unwrap();
        let n = p.normalize().unwrap();
        assert_eq!(n.mobius, MobiusFp::identity());
    }

    #[test]
    fn riemann_hurwitz_violation_rejected() {
        let p = SearchProblem {
            prime: 7,
            degree: 3,
            shapes: shapes(&[&[3], &[3], &[3]]),
            points: vec![
                PointSpec::Specified(P1Fp::Infinity),
                PointSpec::Specified(P1Fp::Finite(0)),
                PointSpec::Specified(P1Fp::Finite(1)),
            ],
        };
        assert!(matches!(p.validate(), Err(SearchError::InvalidProblem(_))));
    }

    #[test]
    fn small_prime_rejected() {
        let p = SearchProblem {
            prime: 3,
            degree: 4,
            shapes: shapes(&[&[4], &[4], &[2, 1, 1], &[2, 1, 1]]),
            points: vec![
                PointSpec::Specified(P1Fp::Infinity),
                PointSpec::Specified(P1Fp::Finite(0)),
                PointSpec::Specified(P1Fp::Finite(1)),
                PointSpec::Specified(P1Fp::Finite(2)),
            ],
        };
        assert!(matches!(p.validate(), Err(SearchError::PrimeTooSmall { .. })));
    }

    #[test]
    fn points_json_round_trip() {
        let pts = vec![
            PointSpec::Specified(P1Fp::Infinity),
            PointSpec::Specified(P1Fp::Finite(0)),
            PointSpec::Free,
            PointSpec::Specified(P1Fp::Finite(5)),
        ];
        let s = serde_json::to_string(&pts).unwrap();
        assert_eq!(s, r#"["inf",0,"free",5]"#);
        let back: Vec<PointSpec> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pts);
    }
}

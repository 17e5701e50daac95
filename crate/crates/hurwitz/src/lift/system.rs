//! Coherent systems over `Z/p^N`: the factored data being lifted.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::algebra::{Partition, Ring, UniPoly, ZpN};

use super::LiftError;

/// A point of `P¹(Z/p^N)`; finite points are residues.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointZpN {
    Infinity,
    Finite(BigUint),
}

impl PointZpN {
    pub fn reduced(&self, ring: &ZpN) -> PointZpN {
        match self {
            PointZpN::Infinity => PointZpN::Infinity,
            PointZpN::Finite(x) => PointZpN::Finite(ring.reduce(x)),
        }
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            PointZpN::Finite(x) => Some(x),
            PointZpN::Infinity => None,
        }
    }
}

/// How one factor slot `W_{i,j}` is represented.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SlotState {
    /// The normalized preimage at ∞: no polynomial, the degree drops.
    AtInfinity,
    /// A pinned factor with no unknowns (`x^μ` or `(x-1)^μ` after splitting).
    Pinned(UniPoly<ZpN>),
    /// Monic factor whose non-leading coefficients are unknowns.
    Unknown(UniPoly<ZpN>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WSlot {
    pub beta: u32,
    pub mu: u32,
    pub state: SlotState,
}

impl WSlot {
    pub fn poly(&self) -> Option<&UniPoly<ZpN>> {
        match &self.state {
            SlotState::AtInfinity => None,
            SlotState::Pinned(p) | SlotState::Unknown(p) => Some(p),
        }
    }
}

/// Bookkeeping for a shape slot `β^μ` split into `β^1·β^{μ-1}` during
/// normalization, so the original shape stays recoverable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SplitRecord {
    pub fiber: usize,
    pub beta: u32,
    pub original_mu: u32,
}

/// Factored polynomials `W_i = ∏_j W_{i,j}^{β_{i,j}}`, a unit `λ`, and
/// points `q_i`, coherent in the sense that `F_i = W_i + λ·q_i·W_1 - W_2`
/// vanishes mod `p^N` for all `i ≥ 3`, and normalized: `q_1, q_2, q_3 =
/// ∞, 0, 1` and the first preimages sit at `∞, 0, 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoherentSystem {
    pub ring: ZpN,
    pub degree: usize,
    /// Original (pre-split) shapes, for reporting.
    pub shapes: Vec<Partition>,
    pub slots: Vec<Vec<WSlot>>,
    pub lambda: BigUint,
    pub points: Vec<PointZpN>,
    pub splits: Vec<SplitRecord>,
}

impl CoherentSystem {
    pub fn k(&self) -> usize {
        self.slots.len()
    }

    /// Number of unknown coefficients, λ included.
    pub fn num_unknowns(&self) -> usize {
        1 + self
            .slots
            .iter()
            .flatten()
            .map(|s| match s.state {
                SlotState::Unknown(_) => s.mu as usize,
                _ => 0,
            })
            .sum::<usize>()
    }

    pub fn is_normalized(&self) -> bool {
        if self.k() < 3 {
            return false;
        }
        let one = self.ring.one();
        matches!(self.points[0], PointZpN::Infinity)
            && self.points[1].finite().is_some_and(|x| x.bits() == 0)
            && self.points[2].finite() == Some(&one)
            && self.slots[0]
                .iter()
                .any(|s| matches!(s.state, SlotState::AtInfinity))
    }

    /// Expanded `W_i` at the current precision (`i` 0-based).
    pub fn w(&self, i: usize) -> UniPoly<ZpN> {
        let factors: Vec<(UniPoly<ZpN>, u32)> = self.slots[i]
            .iter()
            .filter_map(|s| s.poly().map(|p| (p.clone(), s.beta)))
            .collect();
        UniPoly::expand_factored(&self.ring, &factors)
    }

    /// The unknown coefficients in the fixed order: fibers ascending, slots
    /// ascending, coefficient index `s` ascending (descending powers), λ last.
    pub fn unknown_vector(&self) -> ResidueVector {
        let mut entries = Vec::with_capacity(self.num_unknowns());
        for fiber in &self.slots {
            for slot in fiber {
                if let SlotState::Unknown(poly) = &slot.state {
                    let mu = slot.mu as usize;
                    for s in 1..=mu {
                        entries.push(poly.coeff(&self.ring, mu - s));
                    }
                }
            }
        }
        entries.push(self.lambda.clone());
        ResidueVector {
            ring: self.ring.clone(),
            entries,
        }
    }

    /// Replace the unknowns (inverse of [`unknown_vector`]).
    pub fn set_unknowns(&mut self, v: &[BigUint]) -> Result<(), LiftError> {
        if v.len() != self.num_unknowns() {
            return Err(LiftError::Internal(format!(
                "unknown vector length {} != {}",
                v.len(),
                self.num_unknowns()
            )));
        }
        let ring = self.ring.clone();
        let mut it = v.iter();
        for fiber in &mut self.slots {
            for slot in fiber {
                if let SlotState::Unknown(poly) = &mut slot.state {
                    let mu = slot.mu as usize;
                    let mut coeffs = vec![ring.zero(); mu + 1];
                    coeffs[mu] = ring.one();
                    for s in 1..=mu {
                        coeffs[mu - s] = ring.reduce(it.next().unwrap());
                    }
                    *poly = UniPoly::new(&ring, coeffs);
                }
            }
        }
        self.lambda = ring.reduce(it.next().unwrap());
        Ok(())
    }

    /// The same system viewed at a different precision exponent (entries
    /// reduced; raising the exponent keeps canonical representatives).
    pub fn at_precision(&self, n: u32) -> CoherentSystem {
        let ring = self.ring.with_exponent(n);
        let conv = |p: &UniPoly<ZpN>| {
            UniPoly::new(&ring, p.coeffs().iter().map(|c| ring.reduce(c)).collect())
        };
        CoherentSystem {
            ring: ring.clone(),
            degree: self.degree,
            shapes: self.shapes.clone(),
            slots: self
                .slots
                .iter()
                .map(|fiber| {
                    fiber
                        .iter()
                        .map(|s| WSlot {
                            beta: s.beta,
                            mu: s.mu,
                            state: match &s.state {
                                SlotState::AtInfinity => SlotState::AtInfinity,
                                SlotState::Pinned(p) => SlotState::Pinned(conv(p)),
                                SlotState::Unknown(p) => SlotState::Unknown(conv(p)),
                            },
                        })
                        .collect()
                })
                .collect(),
            lambda: ring.reduce(&self.lambda),
            points: self.points.iter().map(|q| q.reduced(&ring)).collect(),
            splits: self.splits.clone(),
        }
    }
}

/// Entries of `Z/p^N` in the fixed variable order `(w_{1,2,1}, …, λ)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueVector {
    pub ring: ZpN,
    pub entries: Vec<BigUint>,
}

impl ResidueVector {
    /// Balanced representatives in `(-p^N/2, p^N/2]`.
    pub fn balanced(&self) -> Vec<BigInt> {
        self.entries.iter().map(|e| self.ring.balanced(e)).collect()
    }

    pub fn from_balanced(ring: &ZpN, vals: &[BigInt]) -> ResidueVector {
        ResidueVector {
            ring: ring.clone(),
            entries: vals.iter().map(|v| ring.reduce_int(v)).collect(),
        }
    }
}

// --- JSON wire format: big integers as decimal strings -------------------

#[derive(Serialize, Deserialize)]
struct SlotWire {
    beta: u32,
    mu: u32,
    state: String, // "infinity" | "pinned" | "unknown"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct SystemWire {
    p: u64,
    precision_exponent: u32,
    degree: usize,
    shapes: Vec<Partition>,
    slots: Vec<Vec<SlotWire>>,
    lambda: String,
    points: Vec<String>,
    splits: Vec<SplitRecord>,
}

impl Serialize for CoherentSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dump_poly =
            |p: &UniPoly<ZpN>| Some(p.coeffs().iter().map(|c| c.to_string()).collect());
        SystemWire {
            p: self.ring.p(),
            precision_exponent: self.ring.exponent(),
            degree: self.degree,
            shapes: self.shapes.clone(),
            slots: self
                .slots
                .iter()
                .map(|fiber| {
                    fiber
                        .iter()
                        .map(|slot| SlotWire {
                            beta: slot.beta,
                            mu: slot.mu,
                            state: match slot.state {
                                SlotState::AtInfinity => "infinity".into(),
                                SlotState::Pinned(_) => "pinned".into(),
                                SlotState::Unknown(_) => "unknown".into(),
                            },
                            coeffs: slot.poly().and_then(dump_poly),
                        })
                        .collect()
                })
                .collect(),
            lambda: self.lambda.to_string(),
            points: self
                .points
                .iter()
                .map(|q| match q {
                    PointZpN::Infinity => "inf".to_string(),
                    PointZpN::Finite(x) => x.to_string(),
                })
                .collect(),
            splits: self.splits.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoherentSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = SystemWire::deserialize(d)?;
        let ring = ZpN::new(w.p, w.precision_exponent);
        let parse_int =
            |s: &str| s.parse::<BigUint>().map_err(|e| D::Error::custom(e.to_string()));
        let parse_poly = |coeffs: &Option<Vec<String>>| -> Result<UniPoly<ZpN>, D::Error> {
            let cs = coeffs
                .as_ref()
                .ok_or_else(|| D::Error::custom("missing coefficients"))?;
            let mut v = Vec::with_capacity(cs.len());
            for c in cs {
                v.push(ring.reduce(&c.parse::<BigUint>().map_err(|e| D::Error::custom(e))?));
            }
            Ok(UniPoly::new(&ring, v))
        };
        let mut slots = Vec::new();
        for fiber in &w.slots {
            let mut out = Vec::new();
            for slot in fiber {
                let state = match slot.state.as_str() {
                    "infinity" => SlotState::AtInfinity,
                    "pinned" => SlotState::Pinned(parse_poly(&slot.coeffs)?),
                    "unknown" => SlotState::Unknown(parse_poly(&slot.coeffs)?),
                    other => return Err(D::Error::custom(format!("bad slot state {other:?}"))),
                };
                out.push(WSlot {
                    beta: slot.beta,
                    mu: slot.mu,
                    state,
                });
            }
            slots.push(out);
        }
        let points = w
            .points
            .iter()
            .map(|s| {
                if s == "inf" {
                    Ok(PointZpN::Infinity)
                } else {
                    Ok(PointZpN::Finite(ring.reduce(&parse_int(s)?)))
                }
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        Ok(CoherentSystem {
            ring: ring.clone(),
            degree: w.degree,
            shapes: w.shapes,
            slots,
            lambda: ring.reduce(&parse_int(&w.lambda)?),
            points,
            splits: w.splits,
        })
    }
}

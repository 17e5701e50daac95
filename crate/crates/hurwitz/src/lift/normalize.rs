//! Normalization of a finite-field solution for lifting.
//!
//! Brings the data to the form `q_1, q_2, q_3 = ∞, 0, 1` with the first
//! preimages `C_{1,1}, C_{2,1}, C_{3,1}` at `∞, 0, 1`: a target-side
//! scaling moves `q_3` to 1, and a source-side Möbius transformation moves
//! one rational point of each of the first three fibers to `∞, 0, 1`,
//! splitting a shape slot `β^μ` into `β^1·β^{μ-1}` where the chosen point
//! sits inside a larger factor. Aborts when some fiber has no rational
//! point.

use num_bigint::BigUint;

use crate::algebra::{multiplicity_split, Field, Fp, Ring, UniPoly, ZpN};
use crate::search::{FFSolution, MobiusFp, P1Fp};

use super::system::{CoherentSystem, PointZpN, SlotState, SplitRecord, WSlot};
use super::LiftError;

/// Factored fiber data in the source chart, one entry per multiplicity class.
struct Fiber {
    slots: Vec<(UniPoly<Fp>, u32)>, // squarefree factor, multiplicity β
    infinity: u32,                  // multiplicity at ∞ (0 if absent)
}

pub fn normalize(sol: &FFSolution) -> Result<CoherentSystem, LiftError> {
    let fp = sol.fp();
    let d = sol.degree;
    let k = sol.points.len();
    if k < 3 {
        return Err(LiftError::NotNormalizable(
            "lifting needs at least three branch points".into(),
        ));
    }

    // target-side scaling: divide all q_i by q_3, fold the factor into λ
    let q3 = match sol.points[2] {
        P1Fp::Finite(q) if q != 0 => q,
        _ => {
            return Err(LiftError::NotNormalizable(
                "third point must be a finite nonzero residue".into(),
            ))
        }
    };
    let lambda0 = fp.mul(&sol.lambda, &q3);
    let q3_inv = fp.inv(&q3);
    let mut points_scaled: Vec<u64> = Vec::with_capacity(k); // finite q_i, i ≥ 2 (0-based)
    for i in 2..k {
        match sol.points[i] {
            P1Fp::Finite(q) if q != 0 => points_scaled.push(fp.mul(&q, &q3_inv)),
            _ => {
                return Err(LiftError::NotNormalizable(
                    "points beyond the second must be finite nonzero".into(),
                ))
            }
        }
    }

    // fibers in the source chart
    let w1 = sol.w1_expanded();
    let w2 = sol.w2_expanded();
    let mut fibers: Vec<Fiber> = Vec::with_capacity(k);
    fibers.push(Fiber {
        slots: sol.w1.clone(),
        infinity: sol.infinity_multiplicity,
    });
    fibers.push(Fiber {
        slots: sol.w2.clone(),
        infinity: 0,
    });
    for (idx, _) in (2..k).enumerate() {
        let m = fp.mul(&lambda0, &points_scaled[idx]);
        let wi = w2.sub_scaled(&fp, &w1, &m);
        if wi.degree() != Some(d) {
            return Err(LiftError::NotNormalizable(
                "a fiber polynomial drops degree; ∞ lies in a non-distinguished fiber".into(),
            ));
        }
        let slots = multiplicity_split(&fp, &wi)
            .map_err(|e| LiftError::Internal(e.to_string()))?;
        fibers.push(Fiber {
            slots,
            infinity: 0,
        });
    }

    // choose rational points of the first three fibers
    let c1 = choose_point(&fp, &fibers[0]);
    let c2 = choose_point(&fp, &fibers[1]);
    let c3 = choose_point(&fp, &fibers[2]);
    let (c1, c2, c3) = match (c1, c2, c3) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => {
            return Err(LiftError::NotNormalizable(
                "no rational point in one of the first three fibers".into(),
            ))
        }
    };

    let mobius = MobiusFp::to_std_triple(&fp, c1, c2, c3);
    let inv = mobius.inverse(&fp);

    // transform each fiber: split the chosen factor off, map the rest
    let ring1 = ZpN::new(fp.p(), 1);
    let mut slots_out: Vec<Vec<WSlot>> = Vec::with_capacity(k);
    let mut splits: Vec<SplitRecord> = Vec::new();
    for (i, fiber) in fibers.iter().enumerate() {
        let pin = match i {
            0 => Some(c1),
            1 => Some(c2),
            2 => Some(c3),
            _ => None,
        };
        let (slots, split) = transform_fiber(&fp, &ring1, fiber, pin, &inv, i)?;
        if let Some(s) = split {
            splits.push(s);
        }
        slots_out.push(slots);
    }

    // λ in the new chart from the coherence of fiber 3:
    // W̃_2 - W̃_3 = λ·W̃_1, compared at the leading coefficient of W̃_1
    let expand = |slots: &[WSlot]| {
        let fs: Vec<(UniPoly<ZpN>, u32)> = slots
            .iter()
            .filter_map(|s| s.poly().map(|p| (p.clone(), s.beta)))
            .collect();
        UniPoly::expand_factored(&ring1, &fs)
    };
    let w1_new = expand(&slots_out[0]);
    let w2_new = expand(&slots_out[1]);
    let w3_new = expand(&slots_out[2]);
    let diff = w2_new.sub(&ring1, &w3_new);
    let t = w1_new.degree().ok_or(LiftError::Internal("W1 vanished".into()))?;
    let lead = w1_new.coeff(&ring1, t);
    let lead_inv = ring1
        .try_inv(&lead)
        .ok_or(LiftError::Internal("W1 leading coefficient not a unit".into()))?;
    let lambda_new = ring1.mul(&diff.coeff(&ring1, t), &lead_inv);
    if ring1.is_zero(&lambda_new) {
        return Err(LiftError::Internal("λ must be a unit".into()));
    }

    let mut points: Vec<PointZpN> = vec![
        PointZpN::Infinity,
        PointZpN::Finite(num_traits::Zero::zero()),
    ];
    for q in &points_scaled {
        points.push(PointZpN::Finite(BigUint::from(*q)));
    }

    let sys = CoherentSystem {
        ring: ring1,
        degree: d,
        shapes: {
            // shapes carried through unchanged; fibers only re-chart
            let mut v = Vec::with_capacity(k);
            for fiber in &fibers {
                let mut parts: Vec<u32> = Vec::new();
                for (f, beta) in &fiber.slots {
                    for _ in 0..f.degree().unwrap_or(0) {
                        parts.push(*beta);
                    }
                }
                if fiber.infinity > 0 {
                    parts.push(fiber.infinity);
                }
                v.push(
                    crate::algebra::Partition::from_unsorted(parts)
                        .map_err(|e| LiftError::Internal(e.to_string()))?,
                );
            }
            v
        },
        slots: slots_out,
        lambda: lambda_new,
        points,
        splits,
    };

    // the normalized data must be coherent mod p
    let res = super::ops::residual_vector(&sys)?;
    if res.iter().any(|r| !sys.ring.is_zero(r)) {
        return Err(LiftError::Internal(
            "normalized data failed the coherence check mod p".into(),
        ));
    }
    Ok(sys)
}

/// A rational point of the fiber: ∞ when present, else a root of a factor,
/// preferring linear factors (no split needed) in slot order.
fn choose_point(fp: &Fp, fiber: &Fiber) -> Option<P1Fp> {
    if fiber.infinity > 0 {
        return Some(P1Fp::Infinity);
    }
    for (f, _) in &fiber.slots {
        if f.degree() == Some(1) {
            let root = fp.neg(&f.coeff(fp, 0));
            return Some(P1Fp::Finite(root));
        }
    }
    for (f, _) in &fiber.slots {
        for r in 0..fp.p() {
            if fp.is_zero(&f.eval(fp, &r)) {
                return Some(P1Fp::Finite(r));
            }
        }
    }
    None
}

/// Transform one fiber through the source Möbius, pinning `pin` (when given)
/// to its normalized image and splitting its slot if needed.
fn transform_fiber(
    fp: &Fp,
    ring1: &ZpN,
    fiber: &Fiber,
    pin: Option<P1Fp>,
    inv: &MobiusFp,
    fiber_index: usize,
) -> Result<(Vec<WSlot>, Option<SplitRecord>), LiftError> {
    let mut out: Vec<WSlot> = Vec::new();
    let mut split = None;
    let to_zpn = |poly: &UniPoly<Fp>| {
        UniPoly::new(
            ring1,
            poly.coeffs().iter().map(|&c| BigUint::from(c)).collect(),
        )
    };
    // the normalized image of the pinned point (∞ for fiber 1, 0 for 2, 1 for 3)
    let pinned_state = |beta: u32| match fiber_index {
        0 => WSlot {
            beta,
            mu: 1,
            state: SlotState::AtInfinity,
        },
        1 => WSlot {
            beta,
            mu: 1,
            state: SlotState::Pinned(UniPoly::from_i64(ring1, &[0, 1])),
        },
        2 => WSlot {
            beta,
            mu: 1,
            state: SlotState::Pinned(UniPoly::from_i64(ring1, &[-1, 1])),
        },
        _ => unreachable!(),
    };

    if fiber.infinity > 0 {
        // the fiber's ∞ point maps through the Möbius like any other point
        let image = transform_point(fp, inv, P1Fp::Infinity);
        match (pin, image) {
            (Some(P1Fp::Infinity), _) => out.push(pinned_state(fiber.infinity)),
            (_, img) => {
                // ∞ was not the pinned point: it becomes a finite factor
                let x = match img {
                    P1Fp::Finite(x) => x,
                    P1Fp::Infinity => unreachable!("pin handled above"),
                };
                out.push(WSlot {
                    beta: fiber.infinity,
                    mu: 1,
                    state: SlotState::Unknown(to_zpn(&UniPoly::new(
                        fp,
                        vec![fp.neg(&x), 1],
                    ))),
                });
            }
        }
    }

    for (f, beta) in &fiber.slots {
        let mut rest = f.clone();
        if let Some(P1Fp::Finite(c)) = pin {
            if fp.is_zero(&f.eval(fp, &c)) {
                // split (x - c) out of this slot
                let linear = UniPoly::new(fp, vec![fp.neg(&c), 1]);
                rest = f.div_exact_monic(fp, &linear);
                out.push(pinned_state(*beta));
                if f.degree() != Some(1) {
                    split = Some(SplitRecord {
                        fiber: fiber_index,
                        beta: *beta,
                        original_mu: f.degree().unwrap() as u32,
                    });
                }
            }
        }
        if rest.degree() == Some(0) {
            continue;
        }
        let transformed = mobius_substitute(fp, &rest, inv)?;
        out.push(WSlot {
            beta: *beta,
            mu: transformed.degree().unwrap() as u32,
            state: SlotState::Unknown(to_zpn(&transformed)),
        });
    }
    // slot order: β descending, the pinned β^1 piece before its split rest
    out.sort_by(|a, b| b.beta.cmp(&a.beta));
    Ok((out, split))
}

fn transform_point(fp: &Fp, inv: &MobiusFp, z: P1Fp) -> P1Fp {
    // `inv` is M^{-1}; the forward image of z is M(z), recovered by
    // inverting again (projective scaling safe)
    inv.inverse(fp).apply(fp, z)
}

/// Monic polynomial whose roots are `M(roots of g)`, where `inv = M^{-1} =
/// (a x + b)/(c x + d)`: the homogeneous substitution `(cx+d)^m·g(M^{-1}x)`,
/// made monic. Requires no root of `g` at `M^{-1}(∞)`.
fn mobius_substitute(
    fp: &Fp,
    g: &UniPoly<Fp>,
    inv: &MobiusFp,
) -> Result<UniPoly<Fp>, LiftError> {
    let m = g.degree().unwrap();
    let up = UniPoly::new(fp, vec![inv.b, inv.a]);
    let lo = UniPoly::new(fp, vec![inv.d, inv.c]);
    let mut acc: UniPoly<Fp> = UniPoly::zero();
    for (i, coef) in g.coeffs().iter().enumerate() {
        if fp.is_zero(coef) {
            continue;
        }
        let term = up
            .pow(fp, i as u32)
            .mul(fp, &lo.pow(fp, (m - i) as u32))
            .scale(fp, coef);
        acc = acc.add(fp, &term);
    }
    if acc.degree() != Some(m) {
        return Err(LiftError::Internal(
            "Möbius substitution dropped degree; a root sits at the pole".into(),
        ));
    }
    Ok(acc.monic(fp))
}

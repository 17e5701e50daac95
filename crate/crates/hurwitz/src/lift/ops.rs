//! The coherence residual and its Jacobian.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::algebra::{Ring, UniPoly, ZpN};

use super::matrix::ZpMatrix;
use super::system::{CoherentSystem, SlotState};
use super::LiftError;

/// The residual polynomials `F_i = W_i + λ·q_i·W_1 - W_2` for `i ≥ 3`,
/// each of degree < d, coefficients reduced mod `p^N`.
pub fn coherence_residual(sys: &CoherentSystem) -> Result<Vec<UniPoly<ZpN>>, LiftError> {
    if !sys.is_normalized() {
        return Err(LiftError::NotNormalized);
    }
    let ring = &sys.ring;
    let w1 = sys.w(0);
    let w2 = sys.w(1);
    let mut out = Vec::with_capacity(sys.k() - 2);
    for i in 2..sys.k() {
        let q = sys.points[i]
            .finite()
            .ok_or_else(|| LiftError::Internal("point q_i must be finite".into()))?;
        let wi = sys.w(i);
        let m = ring.mul(&sys.lambda, q);
        let fi = wi.add(ring, &w1.scale(ring, &m)).sub(ring, &w2);
        if fi.degree().is_some_and(|deg| deg >= sys.degree) {
            return Err(LiftError::Internal(
                "residual degree did not cancel; shapes are malformed".into(),
            ));
        }
        out.push(fi);
    }
    Ok(out)
}

/// The residual as a flat vector of `(k-2)·d` coefficients.
pub fn residual_vector(sys: &CoherentSystem) -> Result<Vec<BigUint>, LiftError> {
    let ring = &sys.ring;
    let polys = coherence_residual(sys)?;
    let mut out = Vec::with_capacity((sys.k() - 2) * sys.degree);
    for fi in polys {
        for t in 0..sys.degree {
            out.push(fi.coeff(ring, t));
        }
    }
    Ok(out)
}

/// Jacobian of the `(k-2)·d` coefficient equations with respect to the
/// unknowns `{w_{i,j,s}} ∪ {λ}`; square of dimension `(k-2)·d`.
pub fn jacobian(sys: &CoherentSystem) -> Result<ZpMatrix, LiftError> {
    if !sys.is_normalized() {
        return Err(LiftError::NotNormalized);
    }
    let ring = &sys.ring;
    let d = sys.degree;
    let n = (sys.k() - 2) * d;
    if sys.num_unknowns() != n {
        return Err(LiftError::DimensionMismatch {
            unknowns: sys.num_unknowns(),
            equations: n,
        });
    }
    let w1 = sys.w(0);

    // cofactor polynomials P_{i,j} = β_j · W_{i,j}^{β_j - 1} · ∏_{j'≠j} W_{i,j'}^{β_{j'}}
    // so that ∂W_i/∂w_{i,j,s} = P_{i,j} · x^{μ_j - s}
    let cofactor = |i: usize, j: usize| -> UniPoly<ZpN> {
        let mut acc = UniPoly::constant(ring, ring.from_i64(sys.slots[i][j].beta as i64));
        for (j2, slot) in sys.slots[i].iter().enumerate() {
            if let Some(poly) = slot.poly() {
                let e = if j2 == j { slot.beta - 1 } else { slot.beta };
                acc = acc.mul(ring, &poly.pow(ring, e));
            }
        }
        acc
    };

    // column layout must match CoherentSystem::unknown_vector
    struct Col {
        fiber: usize,
        deriv: UniPoly<ZpN>, // ∂W_fiber/∂var as a polynomial
    }
    let mut cols: Vec<Col> = Vec::with_capacity(n);
    for i in 0..sys.k() {
        for (j, slot) in sys.slots[i].iter().enumerate() {
            if !matches!(slot.state, SlotState::Unknown(_)) {
                continue;
            }
            let base = cofactor(i, j);
            let mu = slot.mu as usize;
            for s in 1..=mu {
                cols.push(Col {
                    fiber: i,
                    deriv: base.shift_up(ring, mu - s),
                });
            }
        }
    }
    // λ column: ∂F_i/∂λ = q_i·W_1
    let lambda_col = w1.clone();

    let mut m = ZpMatrix::zero(n);
    for (block, i) in (2..sys.k()).enumerate() {
        let q = sys.points[i].finite().unwrap().clone();
        for (c, col) in cols.iter().enumerate() {
            // ∂F_i/∂var: +∂W_i (fiber = i), +λq_i·∂W_1 (fiber = 0), -∂W_2 (fiber = 1)
            let contrib: Option<UniPoly<ZpN>> = if col.fiber == i {
                Some(col.deriv.clone())
            } else if col.fiber == 0 {
                let mqi = ring.mul(&sys.lambda, &q);
                Some(col.deriv.scale(ring, &mqi))
            } else if col.fiber == 1 {
                Some(col.deriv.neg(ring))
            } else {
                None
            };
            if let Some(poly) = contrib {
                for t in 0..d {
                    *m.at_mut(block * d + t, c) = poly.coeff(ring, t);
                }
            }
        }
        // λ column is last
        let lam = lambda_col.scale(ring, &q);
        for t in 0..d {
            *m.at_mut(block * d + t, n - 1) = lam.coeff(ring, t);
        }
    }
    Ok(m)
}

/// Residual divisibility: every entry divisible by `p^N`, returning the
/// quotients mod `p^N` (used by the Hensel step at doubled precision).
pub fn divide_residual(
    ring2: &ZpN,
    half_exp: u32,
    res: &[BigUint],
) -> Result<Vec<BigUint>, LiftError> {
    let p_half = BigUint::from(ring2.p()).pow(half_exp);
    let mut out = Vec::with_capacity(res.len());
    for r in res {
        if (r % &p_half) != BigUint::zero() {
            return Err(LiftError::PreconditionViolated(
                "residual is not divisible by p^N".into(),
            ));
        }
        out.push(r / &p_half);
    }
    Ok(out)
}

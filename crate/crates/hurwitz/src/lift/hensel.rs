//! Hensel lifting with quadratic precision growth.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::algebra::Ring;
use crate::search::FFSolution;

use super::matrix::ZpMatrix;
use super::normalize::normalize;
use super::ops::{divide_residual, jacobian, residual_vector};
use super::system::{CoherentSystem, PointZpN};
use super::LiftError;

/// One Newton step over `Z/p^N`: from a system coherent mod `p^N` with an
/// inverse Jacobian mod `p^N`, produce the system coherent mod `p^{2N}` and
/// the updated inverse, via `b = -(F(a)/p^N)·J^{-1}(a)` and
/// `B' = B - p^N·B·C`.
///
/// `points_at_2n`, when given, replaces the prescribed points `q_i`
/// (`i ≥ 3`) by their reductions at the doubled precision before the step;
/// they must agree with the current points mod `p^N`.
pub fn hensel_step(
    sys: &CoherentSystem,
    jinv: &ZpMatrix,
    points_at_2n: Option<&[PointZpN]>,
) -> Result<(CoherentSystem, ZpMatrix), LiftError> {
    let n = sys.ring.exponent();
    let ring2 = sys.ring.with_exponent(2 * n);
    let p_n = BigUint::from(sys.ring.p()).pow(n);

    // view the same representatives at doubled precision, with the
    // prescribed points refreshed
    let mut sys2 = sys.at_precision(2 * n);
    if let Some(lifts) = points_at_2n {
        if lifts.len() != sys2.points.len() - 2 {
            return Err(LiftError::Internal(
                "point lifts must cover the entries beyond ∞ and 0".into(),
            ));
        }
        for ((slot, old), lift) in sys2
            .points
            .iter_mut()
            .zip(&sys.points)
            .skip(2)
            .zip(lifts)
        {
            let refreshed = lift.reduced(&ring2);
            let consistent = match (&refreshed, old) {
                (PointZpN::Finite(a), PointZpN::Finite(b)) => (a % &p_n) == (b % &p_n),
                (PointZpN::Infinity, PointZpN::Infinity) => true,
                _ => false,
            };
            if !consistent {
                return Err(LiftError::PreconditionViolated(
                    "point lift disagrees with the current point mod p^N".into(),
                ));
            }
            *slot = refreshed;
        }
    }

    let res = residual_vector(&sys2)?;
    let quot = divide_residual(&ring2, n, &res)?;

    // b = -J^{-1}·(F/p^N) mod p^N; a' = a + p^N·b
    let b = jinv.mul_vec(
        &sys.ring,
        &quot.iter().map(|q| sys.ring.reduce(q)).collect::<Vec<_>>(),
    );
    let a = sys2.unknown_vector();
    let a_next: Vec<BigUint> = a
        .entries
        .iter()
        .zip(&b)
        .map(|(ai, bi)| ring2.sub(ai, &ring2.mul(&p_n, bi)))
        .collect();
    sys2.set_unknowns(&a_next)?;

    // residual must vanish exactly at doubled precision
    let res2 = residual_vector(&sys2)?;
    if res2.iter().any(|r| !r.is_zero()) {
        return Err(LiftError::Internal(
            "Newton step did not kill the residual mod p^2N".into(),
        ));
    }

    // inverse update: A·B = 1 + p^N·C, B' = B - p^N·B·C
    let a_mat = jacobian(&sys2)?;
    let b_mat = jinv.reduced(&ring2);
    let ab = a_mat.mul(&ring2, &b_mat);
    let mut c_mat = ZpMatrix::zero(ab.n);
    let ident = ZpMatrix::identity(&ring2, ab.n);
    for i in 0..ab.n {
        for j in 0..ab.n {
            let diff = ring2.sub(ab.at(i, j), ident.at(i, j));
            if (&diff % &p_n) != BigUint::zero() {
                return Err(LiftError::Internal(
                    "A·B - 1 is not divisible by p^N".into(),
                ));
            }
            *c_mat.at_mut(i, j) = ring2.reduce(&(&diff / &p_n));
        }
    }
    let bc = b_mat.mul(&ring2, &c_mat);
    let mut jinv_next = ZpMatrix::zero(ab.n);
    for i in 0..ab.n {
        for j in 0..ab.n {
            let t = ring2.mul(&p_n, bc.at(i, j));
            *jinv_next.at_mut(i, j) = ring2.sub(b_mat.at(i, j), &t);
        }
    }
    debug_assert_eq!(
        jinv_next.mul(&ring2, &a_mat),
        ZpMatrix::identity(&ring2, ab.n),
        "updated inverse must invert J(a') mod p^2N"
    );
    Ok((sys2, jinv_next))
}

/// Lift a finite-field solution to precision `p^{2^t} ≥ p^{target_exp}`.
///
/// `q_lifts`, when given, supplies the points `q_i` (`i ≥ 3`) at the final
/// precision or better; the default keeps the naive integer embedding of
/// the residues. Aborts with [`LiftError::NotNormalizable`] or
/// [`LiftError::SingularJacobian`]; both mean "restart with another prime".
pub fn lift_solution(
    sol: &FFSolution,
    target_exp: u32,
    q_lifts: Option<&[PointZpN]>,
) -> Result<CoherentSystem, LiftError> {
    let mut sys = normalize(sol)?;
    if target_exp <= 1 {
        return Ok(sys);
    }
    let jac = jacobian(&sys)?;
    let mut jinv = jac.invert(&sys.ring).ok_or(LiftError::SingularJacobian)?;
    while sys.ring.exponent() < target_exp {
        let (sys2, jinv2) = hensel_step(&sys, &jinv, q_lifts)?;
        debug_assert!({
            let back = sys2.at_precision(sys.ring.exponent());
            back.unknown_vector().entries == sys.unknown_vector().entries
        });
        sys = sys2;
        jinv = jinv2;
    }
    Ok(sys)
}

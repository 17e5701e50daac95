//! The λ sets of the enumeration: scalars making a combination have the
//! required shape.

use crate::algebra::{shape_with_infinity, Field, Fp, Partition, Ring, UniPoly};

/// All `m ≠ 0` such that `W_2 - m·W_1` has shape `α` (with the degree
/// drop counted at ∞ when `deg W_1 = deg W_2`).
pub fn scaled_set(
    fp: &Fp,
    w1: &UniPoly<Fp>,
    w2: &UniPoly<Fp>,
    degree: usize,
    alpha: &Partition,
) -> Vec<u64> {
    let mut out = Vec::new();
    for m in 1..fp.p() {
        let v = w2.sub_scaled(fp, w1, &m);
        let ok = match v.degree() {
            Some(deg) if deg == degree => crate::algebra::shape_matches(fp, &v, alpha),
            Some(_) => shape_with_infinity(fp, &v, degree).is_ok_and(|s| s == *alpha),
            None => false,
        };
        if ok {
            out.push(m);
        }
    }
    out
}

/// All `λ ≠ 0` with `shape(W_2 - λ·q·W_1) = α`; brute force over `F_p^×`.
pub fn lambda_set(
    fp: &Fp,
    w1: &UniPoly<Fp>,
    w2: &UniPoly<Fp>,
    q: u64,
    degree: usize,
    alpha: &Partition,
) -> Vec<u64> {
    assert!(q != 0, "q must be a nonzero residue");
    let qinv = fp.inv(&q);
    scaled_set(fp, w1, w2, degree, alpha)
        .into_iter()
        .map(|m| fp.mul(&m, &qinv))
        .collect()
}

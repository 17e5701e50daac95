//! Shapes of polynomials via gcd chains.
//!
//! The shape of `f` is the partition of `deg f` by root multiplicities over
//! the algebraic closure. With `g_e = gcd(f, f', …, f^{(e)})` the degree
//! drops `deg g_{e-1} - deg g_e` spell out the dual partition, provided
//! every multiplicity is below the characteristic; a violation leaves an
//! inconsistent drop sequence, which is reported as an error instead of a
//! wrong shape.

use super::poly::UniPoly;
use super::ring::Field;
use super::{AlgebraError, Fp, Partition};

/// Monic greatest common divisor over a field.
pub fn poly_gcd<F: Field>(ring: &F, f: &UniPoly<F>, g: &UniPoly<F>) -> UniPoly<F> {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(ring, &b);
        a = b;
        b = r;
    }
    a.monic(ring)
}

/// Shape of a nonzero polynomial of degree ≥ 1.
pub fn shape_of(ring: &Fp, f: &UniPoly<Fp>) -> Result<Partition, AlgebraError> {
    let dual = dual_shape_chain(ring, f, None)?;
    Ok(Partition::new(dual)
        .expect("chain produced a valid dual partition")
        .dual())
}

/// Multiset of fiber multiplicities of a rational-map numerator, including
/// the point at infinity when the degree drops below `d`.
pub fn shape_with_infinity(
    ring: &Fp,
    f: &UniPoly<Fp>,
    d: usize,
) -> Result<Partition, AlgebraError> {
    let deg = f.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    assert!(deg <= d);
    let mut parts: Vec<u32> = if deg >= 1 {
        shape_of(ring, f)?.parts().to_vec()
    } else {
        Vec::new()
    };
    if deg < d {
        parts.push((d - deg) as u32);
    }
    Partition::from_unsorted(parts)
}

/// Early-abort test `shape(f) == target` (stops at the first degree drop
/// that contradicts the target's dual).
pub fn shape_matches(ring: &Fp, f: &UniPoly<Fp>, target: &Partition) -> bool {
    let Some(deg) = f.degree() else {
        return false;
    };
    if deg as u32 != target.total() {
        return false;
    }
    if deg == 0 {
        return true;
    }
    let dual = target.dual();
    matches!(dual_shape_chain(ring, f, Some(dual.parts())), Ok(_))
}

/// The degree-drop sequence `α*_e = deg g_{e-1} - deg g_e`; with a target
/// supplied, aborts as soon as a drop disagrees.
fn dual_shape_chain(
    ring: &Fp,
    f: &UniPoly<Fp>,
    target_dual: Option<&[u32]>,
) -> Result<Vec<u32>, AlgebraError> {
    let deg = f.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if deg == 0 {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut drops: Vec<u32> = Vec::new();
    let mut g = f.monic(ring);
    let mut fe = f.clone();
    for e in 1..=deg {
        fe = fe.derivative(ring);
        let g_next = poly_gcd(ring, &g, &fe);
        let drop = (g.degree().unwrap() - g_next.degree().unwrap()) as u32;
        if let Some(t) = target_dual {
            let want = t.get(e - 1).copied().unwrap_or(0);
            if drop != want {
                return Err(AlgebraError::CharacteristicViolation { p: ring.p() });
            }
        }
        if drops.last().is_some_and(|&prev| drop > prev) {
            // drops must be weakly decreasing for a true shape
            return Err(AlgebraError::CharacteristicViolation { p: ring.p() });
        }
        drops.push(drop);
        g = g_next;
        if g.degree() == Some(0) {
            break;
        }
    }
    if g.degree() != Some(0) {
        return Err(AlgebraError::CharacteristicViolation { p: ring.p() });
    }
    // Σ_e α*_e must equal deg f
    if drops.iter().sum::<u32>() != deg as u32 {
        return Err(AlgebraError::CharacteristicViolation { p: ring.p() });
    }
    Ok(drops)
}

/// Coprime monic factors by multiplicity class: `f = ∏ f_j^{β_j}` with
/// `β_1 > … > β_n`, each `f_j` collecting all roots of multiplicity `β_j`.
/// All factors are defined over the base field.
pub fn multiplicity_split(
    ring: &Fp,
    f: &UniPoly<Fp>,
) -> Result<Vec<(UniPoly<Fp>, u32)>, AlgebraError> {
    let deg = f.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    // chain gcds G_e = gcd(f, f', …, f^{(e)}) and layer quotients
    // h_e = G_{e-1}/G_e = ∏_{α_i ≥ e} l_i; then f_β = h_β / h_{β+1}.
    let shape = shape_of(ring, f)?;
    let alpha_max = shape.max_part() as usize;
    let mut chain: Vec<UniPoly<Fp>> = Vec::with_capacity(alpha_max + 1);
    chain.push(f.monic(ring));
    let mut fe = f.clone();
    for _e in 1..=alpha_max {
        fe = fe.derivative(ring);
        let g = poly_gcd(ring, chain.last().unwrap(), &fe);
        chain.push(g);
    }
    let mut layers: Vec<UniPoly<Fp>> = Vec::with_capacity(alpha_max + 1);
    for e in 1..=alpha_max {
        layers.push(chain[e - 1].div_exact_monic(ring, &chain[e]));
    }
    layers.push(UniPoly::one(ring)); // h_{α_max + 1} = 1
    let mut out = Vec::new();
    for beta in (1..=alpha_max).rev() {
        let fj = layers[beta - 1].div_exact_monic(ring, &layers[beta]);
        if fj.degree().unwrap_or(0) > 0 {
            out.push((fj, beta as u32));
        }
    }
    out.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(out)
}

//! Lifting goldens: the worked a⁰ → a¹ example and the 67-digit
//! coefficient at precision 11^64, plus quadratic-convergence properties.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use hurwitz::algebra::{Partition, Ring, UniPoly};
use hurwitz::lift::{
    coherence_residual, hensel_step, jacobian, lift_solution, normalize, residual_vector,
};
use hurwitz::search::{FFSolution, MobiusFp, P1Fp};

/// The worked example: W1 = (x-5)³(x³+3x²+2x+3)², W2 = x⁴(x+3)³(x³-3x-5)²,
/// λ = -4, Q = (∞, 0, 1) over F_11.
fn golden_solution() -> FFSolution {
    let fp = hurwitz::algebra::Fp::new(11);
    let poly = |c: &[i64]| UniPoly::from_i64(&fp, c);
    FFSolution {
        prime: 11,
        degree: 13,
        w1: vec![(poly(&[-5, 1]), 3), (poly(&[3, 2, 3, 1]), 2)],
        w2: vec![
            (poly(&[0, 1]), 4),
            (poly(&[3, 1]), 3),
            (poly(&[-5, -3, 0, 1]), 2),
        ],
        infinity_multiplicity: 4,
        lambda: fp.from_i64_elem(-4),
        points: vec![P1Fp::Infinity, P1Fp::Finite(0), P1Fp::Finite(1)],
        original_points: vec![P1Fp::Infinity, P1Fp::Finite(0), P1Fp::Finite(1)],
        mobius: MobiusFp::identity(),
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn normalized_vector_matches_coefficients() {
    let sys = normalize(&golden_solution()).unwrap();
    assert!(sys.is_normalized());
    assert_eq!(sys.num_unknowns(), 13);
    // clean convention: (w_{1,2,1}; w_{1,3,1..3}; w_{2,2,1}; w_{2,3,1..3};
    // w_{3,2,1}; w_{3,3,1..3}; λ) with W = x^μ + Σ_s w_s x^{μ-s}
    let a0 = sys.unknown_vector().balanced();
    assert_eq!(
        a0,
        ints(&[-5, 3, 2, 3, 3, 0, -3, -5, -3, 0, -2, -3, -4])
    );
    // residual vanishes mod 11
    let res = residual_vector(&sys).unwrap();
    assert!(res.iter().all(|r| r.is_zero()));
}

#[test]
fn jacobian_invertible_mod_11() {
    let sys = normalize(&golden_solution()).unwrap();
    let j = jacobian(&sys).unwrap();
    assert_eq!(j.n, 13);
    assert!(j.invert(&sys.ring).is_some());
}

#[test]
fn hensel_step_reproduces_printed_lift() {
    let sys = normalize(&golden_solution()).unwrap();
    let jinv = jacobian(&sys).unwrap().invert(&sys.ring).unwrap();
    let (sys2, jinv2) = hensel_step(&sys, &jinv, None).unwrap();
    assert_eq!(sys2.ring.exponent(), 2);
    // the printed lift, in balanced representatives mod 121
    let a1 = sys2.unknown_vector().balanced();
    assert_eq!(
        a1,
        ints(&[50, -41, 13, 25, -19, -33, 19, -60, -47, 11, -46, -58, 51]),
        "bit-exact match of the printed a¹"
    );
    // reduction compatibility: a¹ ≡ a⁰ mod 11
    let back = sys2.at_precision(1);
    assert_eq!(
        back.unknown_vector().entries,
        sys.unknown_vector().entries
    );
    // F(a¹) ≡ 0 mod 121
    let res = residual_vector(&sys2).unwrap();
    assert!(res.iter().all(|r| r.is_zero()));
    // the updated inverse really inverts J(a¹) mod 121
    let j2 = jacobian(&sys2).unwrap();
    let prod = jinv2.mul(&sys2.ring, &j2);
    assert_eq!(prod, hurwitz::lift::ZpMatrix::identity(&sys2.ring, 13));
}

#[test]
fn lift_to_64_matches_printed_67_digit_coefficient() {
    let sys = lift_solution(&golden_solution(), 64, None).unwrap();
    assert_eq!(sys.ring.exponent(), 64);
    let a = sys.unknown_vector();
    let w121 = &a.entries[0];
    let expect: BigUint =
        "1400834756308742009361916361765119584358776523123371526525883115012"
            .parse()
            .unwrap();
    assert_eq!(*w121, expect);
    // coherence at full precision
    let res = residual_vector(&sys).unwrap();
    assert!(res.iter().all(|r| r.is_zero()));
}

#[test]
fn target_one_returns_input_unchanged() {
    let sys = lift_solution(&golden_solution(), 1, None).unwrap();
    assert_eq!(sys.ring.exponent(), 1);
    assert_eq!(
        sys.unknown_vector().balanced(),
        ints(&[-5, 3, 2, 3, 3, 0, -3, -5, -3, 0, -2, -3, -4])
    );
}

#[test]
fn perturbed_coefficient_breaks_second_order_coherence() {
    let sys = normalize(&golden_solution()).unwrap();
    let mut sys2 = sys.at_precision(2);
    // perturb one unknown by p: still coherent mod p, not mod p²
    let mut a = sys2.unknown_vector().entries;
    a[0] = sys2.ring.add(&a[0], &BigUint::from(11u32));
    sys2.set_unknowns(&a).unwrap();
    let res = residual_vector(&sys2).unwrap();
    let p = BigUint::from(11u32);
    assert!(res.iter().all(|r| (r % &p) == BigUint::zero()));
    assert!(res.iter().any(|r| !r.is_zero()));
}

#[test]
fn residual_against_schoolbook_expansion() {
    // coherence_residual must agree with a direct expansion of
    // W_i + λ q_i W_1 - W_2 computed here from scratch
    let sys = normalize(&golden_solution()).unwrap();
    let ring = &sys.ring;
    let res = coherence_residual(&sys).unwrap();
    assert_eq!(res.len(), 1);
    let w1 = sys.w(0);
    let w2 = sys.w(1);
    let w3 = sys.w(2);
    let q3 = sys.points[2].finite().unwrap();
    let m = ring.mul(&sys.lambda, q3);
    let direct = w3.add(ring, &w1.scale(ring, &m)).sub(ring, &w2);
    assert_eq!(res[0], direct);
}

#[test]
fn quadratic_convergence_on_random_small_systems() {
    // k = 3, d ≤ 5 systems seeded from real searches over small primes:
    // the residual valuation at least doubles per step
    use hurwitz::search::{search_all, PointSpec, SearchOptions, SearchProblem};
    let mut tested = 0;
    for (p, d, shapes) in [
        (7u64, 3usize, vec![vec![3], vec![2, 1], vec![2, 1]]),
        (11, 3, vec![vec![3], vec![2, 1], vec![2, 1]]),
        (7, 4, vec![vec![4], vec![2, 1, 1], vec![2, 2]]),
        (11, 4, vec![vec![4], vec![2, 1, 1], vec![2, 2]]),
        (11, 5, vec![vec![5], vec![2, 2, 1], vec![2, 2, 1]]),
        (13, 5, vec![vec![4, 1], vec![2, 2, 1], vec![3, 1, 1]]),
    ] {
        let problem = SearchProblem {
            prime: p,
            degree: d,
            shapes: shapes
                .into_iter()
                .map(|s| Partition::new(s).unwrap())
                .collect(),
            points: vec![
                PointSpec::Specified(P1Fp::Infinity),
                PointSpec::Specified(P1Fp::Finite(0)),
                PointSpec::Specified(P1Fp::Finite(1)),
            ],
        };
        let (sols, _) = search_all(&problem, &SearchOptions::default()).unwrap();
        for sol in sols.iter().take(20) {
            let sys = match normalize(sol) {
                Ok(s) => s,
                Err(_) => continue, // not every solution is normalizable
            };
            let jinv = match jacobian(&sys).unwrap().invert(&sys.ring) {
                Some(j) => j,
                None => continue,
            };
            // three steps: precision 1 → 2 → 4 → 8, exact residual at each
            let mut cur = sys;
            let mut inv = jinv;
            for _ in 0..3 {
                let (next, ninv) = hensel_step(&cur, &inv, None).unwrap();
                let res = residual_vector(&next).unwrap();
                assert!(res.iter().all(|r| r.is_zero()));
                cur = next;
                inv = ninv;
            }
            assert_eq!(cur.ring.exponent(), 8);
            tested += 1;
        }
    }
    assert!(tested >= 100, "only {tested} systems exercised");
}

#[test]
fn exact_solution_gives_zero_correction() {
    // an already-exact integer solution has b = 0: lift twice, then reduce
    // back — the unknowns at precision 2 viewed mod p⁴ must be fixed by
    // another step when they are exact. Use the golden lifted far enough
    // that the step is the identity on the low digits.
    let sys4 = lift_solution(&golden_solution(), 4, None).unwrap();
    let sys8 = lift_solution(&golden_solution(), 8, None).unwrap();
    assert_eq!(
        sys8.at_precision(4).unknown_vector().entries,
        sys4.unknown_vector().entries
    );
}

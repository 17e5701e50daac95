//! Enumeration of factored monic polynomials with a prescribed shape.
//!
//! Two modes. Plain mode walks every tuple of monic polynomials with the
//! slot degrees `μ_j` in colexicographic coefficient order; shape and
//! coprimality are checked afterwards. Pool mode builds each slot from
//! distinct monic irreducibles so that shape and coprimality inside a side
//! hold automatically; it is used when the field is small enough to list
//! the irreducibles.

use crate::algebra::{Fp, Partition, UniPoly};

/// All monic irreducibles of degree ≤ `max_degree`, with global piece ids.
pub struct IrreduciblePool {
    pieces: Vec<UniPoly<Fp>>,
    offsets: Vec<usize>, // offsets[d] = first id of degree d+1
}

impl IrreduciblePool {
    pub fn build(fp: &Fp, max_degree: u32) -> Self {
        let mut pieces: Vec<UniPoly<Fp>> = Vec::new();
        let mut offsets = Vec::new();
        for deg in 1..=max_degree {
            offsets.push(pieces.len());
            let found_below = pieces.clone();
            for coeffs in MonicOdometer::new(fp, deg as usize) {
                let cand = UniPoly::new(fp, coeffs);
                let mut irred = true;
                for q in &found_below {
                    if q.degree().unwrap() * 2 > deg as usize {
                        break;
                    }
                    if cand.rem(fp, q).is_zero() {
                        irred = false;
                        break;
                    }
                }
                if irred {
                    pieces.push(cand);
                }
            }
        }
        offsets.push(pieces.len());
        IrreduciblePool { pieces, offsets }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn piece(&self, id: usize) -> &UniPoly<Fp> {
        &self.pieces[id]
    }

    pub fn count_of_degree(&self, deg: u32) -> usize {
        self.offsets[deg as usize] - self.offsets[deg as usize - 1]
    }

    /// Global id of a monic irreducible, by linear scan (test support).
    pub fn id_of(&self, q: &UniPoly<Fp>) -> Option<usize> {
        self.pieces.iter().position(|x| x == q)
    }

    /// All squarefree monic polynomials of degree `mu` as products of
    /// distinct pieces, with the used-piece mask.
    pub fn squarefree_of_degree(&self, fp: &Fp, mu: u32) -> Vec<(UniPoly<Fp>, PieceMask)> {
        let mut out = Vec::new();
        let words = self.mask_words();
        let mut chosen: Vec<usize> = Vec::new();
        self.squarefree_rec(fp, mu as usize, 0, &mut chosen, words, &mut out);
        out
    }

    fn squarefree_rec(
        &self,
        fp: &Fp,
        remaining: usize,
        min_id: usize,
        chosen: &mut Vec<usize>,
        words: usize,
        out: &mut Vec<(UniPoly<Fp>, PieceMask)>,
    ) {
        if remaining == 0 {
            let mut poly = UniPoly::one(fp);
            let mut mask = PieceMask::empty(words);
            for &id in chosen.iter() {
                poly = poly.mul(fp, self.piece(id));
                mask.set(id);
            }
            out.push((poly, mask));
            return;
        }
        for id in min_id..self.pieces.len() {
            let deg = self.pieces[id].degree().unwrap();
            if deg > remaining {
                break;
            }
            chosen.push(id);
            self.squarefree_rec(fp, remaining - deg, id + 1, chosen, words, out);
            chosen.pop();
        }
    }

    pub fn mask_words(&self) -> usize {
        self.pieces.len().div_ceil(64)
    }
}

/// A small bitset over pool piece ids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PieceMask(Vec<u64>);

impl PieceMask {
    pub fn empty(words: usize) -> Self {
        PieceMask(vec![0; words])
    }

    pub fn set(&mut self, id: usize) {
        self.0[id / 64] |= 1 << (id % 64);
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0[id / 64] & (1 << (id % 64)) != 0
    }

    #[inline]
    pub fn intersects(&self, other: &PieceMask) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &PieceMask) -> PieceMask {
        PieceMask(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }
}

/// Monic polynomials of a fixed degree in colexicographic coefficient
/// order (the constant coefficient varies fastest).
pub struct MonicOdometer {
    p: u64,
    coeffs: Vec<u64>, // low coefficients only; leading 1 is implicit
    degree: usize,
    done: bool,
}

impl MonicOdometer {
    pub fn new(fp: &Fp, degree: usize) -> Self {
        MonicOdometer {
            p: fp.p(),
            coeffs: vec![0; degree],
            degree,
            done: false,
        }
    }
}

impl Iterator for MonicOdometer {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let mut item = self.coeffs.clone();
        item.push(1);
        // advance
        let mut i = 0;
        loop {
            if i == self.degree {
                self.done = true;
                break;
            }
            self.coeffs[i] += 1;
            if self.coeffs[i] < self.p {
                break;
            }
            self.coeffs[i] = 0;
            i += 1;
        }
        Some(item)
    }
}

/// How one run-length slot `β^μ` of a shape is produced.
#[derive(Clone, Debug)]
pub enum SlotKind {
    /// Enumerated monic polynomial of degree `μ`.
    Enumerate,
    /// Pinned to a fixed factor (normalization speedup).
    Fixed(UniPoly<Fp>),
    /// The slot sits at ∞: the factor is omitted and the degree drops.
    AtInfinity,
}

#[derive(Clone, Debug)]
pub struct SlotPlan {
    pub beta: u32,
    pub mu: u32,
    pub kind: SlotKind,
}

/// Enumeration plan for one side (`W_1` or `W_2`).
#[derive(Clone, Debug)]
pub struct SidePlan {
    pub shape: Partition,
    pub slots: Vec<SlotPlan>,
}

impl SidePlan {
    /// Plan with every slot enumerated.
    pub fn plain(shape: &Partition) -> SidePlan {
        let slots = shape
            .rle()
            .into_iter()
            .map(|(beta, mu)| SlotPlan {
                beta,
                mu,
                kind: SlotKind::Enumerate,
            })
            .collect();
        SidePlan {
            shape: shape.clone(),
            slots,
        }
    }

    /// Pin the first `μ = 1` slot, if any, to ∞ (for `W_1`) or to a fixed
    /// linear factor (for `W_2`).
    pub fn with_pin(shape: &Partition, fp: &Fp, pin: Pin) -> SidePlan {
        let mut plan = SidePlan::plain(shape);
        if let Some(slot) = plan.slots.iter_mut().find(|s| s.mu == 1) {
            slot.kind = match pin {
                Pin::Infinity => SlotKind::AtInfinity,
                Pin::Zero => SlotKind::Fixed(UniPoly::from_i64(fp, &[0, 1])),
            };
        }
        plan
    }

    pub fn pinned_infinity_mult(&self) -> u32 {
        self.slots
            .iter()
            .find(|s| matches!(s.kind, SlotKind::AtInfinity))
            .map(|s| s.beta)
            .unwrap_or(0)
    }

    /// Degree of the expanded side polynomial.
    pub fn expanded_degree(&self) -> usize {
        self.slots
            .iter()
            .map(|s| match s.kind {
                SlotKind::AtInfinity => 0,
                _ => (s.beta * s.mu) as usize,
            })
            .sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pin {
    Infinity,
    Zero,
}

/// One enumerated side value: the slot factors with multiplicities, the
/// expanded polynomial, and the pool pieces consumed.
#[derive(Clone, Debug)]
pub struct SideEntry {
    pub factors: Vec<(UniPoly<Fp>, u32)>,
    pub expanded: UniPoly<Fp>,
    pub mask: PieceMask,
}

/// Enumerate all factored tuples for a plan.
///
/// With a pool, slots are filled by squarefree products of distinct pieces,
/// disjoint across slots and from `excluded`, so the side shape and
/// coprimality hold automatically. Without a pool every tuple of monic
/// polynomials with the slot degrees is produced, in colexicographic
/// coefficient order, with no filtering; callers apply
/// [`side_has_plan_shape`] afterwards.
pub fn enumerate_factored(
    fp: &Fp,
    plan: &SidePlan,
    pool: Option<&IrreduciblePool>,
    excluded: Option<&PieceMask>,
) -> Vec<SideEntry> {
    let mut out = Vec::new();
    match pool {
        Some(pool) => {
            let words = pool.mask_words();
            let per_slot: Vec<Vec<(UniPoly<Fp>, PieceMask)>> = plan
                .slots
                .iter()
                .map(|s| match &s.kind {
                    SlotKind::Enumerate => pool.squarefree_of_degree(fp, s.mu),
                    SlotKind::Fixed(f) => {
                        let mut mask = PieceMask::empty(words);
                        if let Some(id) = pool.id_of(f) {
                            mask.set(id);
                        }
                        vec![(f.clone(), mask)]
                    }
                    SlotKind::AtInfinity => vec![(UniPoly::one(fp), PieceMask::empty(words))],
                })
                .collect();
            let mut stack: Vec<usize> = vec![0; plan.slots.len()];
            pool_assign(fp, plan, &per_slot, excluded, &mut stack, 0, &mut out);
        }
        None => {
            let slot_values: Vec<Vec<UniPoly<Fp>>> = plan
                .slots
                .iter()
                .map(|s| match &s.kind {
                    SlotKind::Enumerate => MonicOdometer::new(fp, s.mu as usize)
                        .map(|c| UniPoly::new(fp, c))
                        .collect(),
                    SlotKind::Fixed(f) => vec![f.clone()],
                    SlotKind::AtInfinity => vec![UniPoly::one(fp)],
                })
                .collect();
            let mut idx = vec![0usize; plan.slots.len()];
            loop {
                let factors: Vec<(UniPoly<Fp>, u32)> = plan
                    .slots
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !matches!(s.kind, SlotKind::AtInfinity))
                    .map(|(j, s)| (slot_values[j][idx[j]].clone(), s.beta))
                    .collect();
                let expanded = UniPoly::expand_factored(fp, &factors);
                out.push(SideEntry {
                    factors,
                    expanded,
                    mask: PieceMask::empty(0),
                });
                // odometer over slots, first slot fastest
                let mut j = 0;
                loop {
                    if j == plan.slots.len() {
                        return out;
                    }
                    idx[j] += 1;
                    if idx[j] < slot_values[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        }
    }
    out
}

fn pool_assign(
    fp: &Fp,
    plan: &SidePlan,
    per_slot: &[Vec<(UniPoly<Fp>, PieceMask)>],
    excluded: Option<&PieceMask>,
    stack: &mut Vec<usize>,
    depth: usize,
    out: &mut Vec<SideEntry>,
) {
    if depth == plan.slots.len() {
        let words = per_slot
            .iter()
            .flat_map(|v| v.first())
            .map(|(_, m)| m.0.len())
            .next()
            .unwrap_or(0);
        let mut mask = PieceMask::empty(words);
        let mut factors = Vec::new();
        for (j, slot) in plan.slots.iter().enumerate() {
            if matches!(slot.kind, SlotKind::AtInfinity) {
                continue;
            }
            let (poly, m) = &per_slot[j][stack[j]];
            mask = mask.union(m);
            factors.push((poly.clone(), slot.beta));
        }
        let expanded = UniPoly::expand_factored(fp, &factors);
        out.push(SideEntry {
            factors,
            expanded,
            mask,
        });
        return;
    }
    'next: for (i, (_, m)) in per_slot[depth].iter().enumerate() {
        if matches!(plan.slots[depth].kind, SlotKind::Enumerate) {
            if let Some(ex) = excluded {
                if m.intersects(ex) {
                    continue 'next;
                }
            }
        }
        for j in 0..depth {
            if matches!(plan.slots[j].kind, SlotKind::AtInfinity) {
                continue;
            }
            if per_slot[j][stack[j]].1.intersects(m) {
                continue 'next;
            }
        }
        stack[depth] = i;
        pool_assign(fp, plan, per_slot, excluded, stack, depth + 1, out);
    }
}

/// Whether a side entry's expanded polynomial has the plan's shape (the ∞
/// slot, when pinned, carries the removed part). Pool-mode entries satisfy
/// this by construction.
pub fn side_has_plan_shape(fp: &Fp, plan: &SidePlan, expanded: &UniPoly<Fp>) -> bool {
    let inf = plan.pinned_infinity_mult();
    if expanded.degree().is_none() {
        return false;
    }
    let mut want = plan.shape.clone();
    if inf > 0 {
        // the enumerated part must carry the shape minus the ∞ slot
        let parts: Vec<u32> = {
            let mut v = want.parts().to_vec();
            let pos = v.iter().position(|&x| x == inf).unwrap();
            v.remove(pos);
            v
        };
        if parts.is_empty() {
            return expanded.degree() == Some(0);
        }
        want = Partition::new(parts).unwrap();
    }
    crate::algebra::shape_matches(fp, expanded, &want)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // #irreducibles of degree m = (1/m) Σ_{d|m} μ(d) p^{m/d}
        for p in [2u64, 3, 5, 11] {
            let fp = Fp::new(p);
            let pool = IrreduciblePool::build(&fp, 4);
            let necklace = |m: u64| -> u64 {
                let moebius = |n: u64| -> i64 {
                    match n {
                        1 => 1,
                        2 | 3 => -1,
                        4 => 0,
                        _ => unreachable!(),
                    }
                };
                let mut s: i64 = 0;
                for d in 1..=m {
                    if m % d == 0 {
                        s += moebius(d) * (p as i64).pow((m / d) as u32);
                    }
                }
                (s / m as i64) as u64
            };
            for m in 1..=4u32 {
                assert_eq!(
                    pool.count_of_degree(m) as u64,
                    necklace(m as u64),
                    "p = {p}, degree {m}"
                );
            }
        }
    }

    #[test]
    fn squarefree_count_is_p_pow_minus_p_pow() {
        // squarefree monic of degree n ≥ 2 over F_p: p^n - p^{n-1}
        let fp = Fp::new(11);
        let pool = IrreduciblePool::build(&fp, 3);
        let sf3 = pool.squarefree_of_degree(&fp, 3);
        assert_eq!(sf3.len(), 11usize.pow(3) - 11usize.pow(2));
    }

    #[test]
    fn plain_mode_counts_tuples() {
        // shape (2,1) over F_3, μ-profile (1,1): 3 × 3 = 9 tuples
        let fp = Fp::new(3);
        let shape = Partition::new(vec![2, 1]).unwrap();
        let plan = SidePlan::plain(&shape);
        let entries = enumerate_factored(&fp, &plan, None, None);
        assert_eq!(entries.len(), 9);
        // shape filtering removes the tuples with colliding linear factors
        let valid = entries
            .iter()
            .filter(|e| side_has_plan_shape(&fp, &plan, &e.expanded))
            .count();
        assert_eq!(valid, 6);
    }

    #[test]
    fn single_slot_shape_d() {
        let fp = Fp::new(5);
        let shape = Partition::new(vec![4]).unwrap();
        let plan = SidePlan::with_pin(&shape, &fp, Pin::Infinity);
        let entries = enumerate_factored(&fp, &plan, None, None);
        assert_eq!(entries.len(), 1); // the sole degree-0 cofactor
        assert_eq!(entries[0].expanded, UniPoly::one(&fp));
    }

    #[test]
    fn odometer_is_colex() {
        let fp = Fp::new(3);
        let polys: Vec<Vec<u64>> = MonicOdometer::new(&fp, 2).collect();
        assert_eq!(polys.len(), 9);
        assert_eq!(polys[0], vec![0, 0, 1]);
        assert_eq!(polys[1], vec![1, 0, 1]);
        assert_eq!(polys[2], vec![2, 0, 1]);
        assert_eq!(polys[3], vec![0, 1, 1]);
    }
}

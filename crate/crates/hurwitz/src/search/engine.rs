//! The exhaustive search driver.
//!
//! The two enumerated sides are materialized with their normalization pins,
//! the pair space is split into stripes over the first side, and stripes are
//! processed by independent workers whose results are merged in cursor
//! order, so the output sequence is identical for any worker count. A
//! checkpoint records the next unprocessed stripe.
//!
//! Most pairs die in an evaluation pre-filter: a shape slot `β^1` of some
//! fiber `i ≥ 3` is a single rational point r where `W_2 - λ·q_i·W_1`('s
//! first β-1 derivatives) must vanish, so r determines `λ·q_i = W_2(r)/W_1(r)`
//! and β-1 more equalities check for free. Surviving pairs go through the
//! full λ-set intersection and an independent re-verification, so the filter
//! only ever discards pairs, never accepts them.

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Fp, Ring, UniPoly};

use super::enumerate::{
    enumerate_factored, side_has_plan_shape, IrreduciblePool, Pin, PieceMask, SidePlan, SlotKind,
};
use super::lambda::scaled_set;
use super::mobius::P1Fp;
use super::problem::{NormalizedProblem, PointSpec, SearchProblem};
use super::solution::FFSolution;
use super::SearchError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PinMode {
    /// Pin the first `μ = 1` slot of `α_1` at ∞ and of `α_2` at 0.
    Auto,
    /// No source normalization; enumerate full-degree sides.
    Off,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub threads: usize,
    pub limit: Option<u64>,
    pub checkpoint: Option<PathBuf>,
    pub pin_mode: PinMode,
    /// Enable the rational-point evaluation pre-filter.
    pub anchor_filter: bool,
    /// Use the irreducible pool when `p^{μ_max} ≤ pool_limit`.
    pub pool_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 0,
            limit: None,
            checkpoint: None,
            pin_mode: PinMode::Auto,
            anchor_filter: true,
            pool_limit: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub stripes: u64,
    pub pairs: u64,
    pub candidates: u64,
    pub emitted: u64,
}

/// Cursor record tying a resumable run to its problem.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SearchCheckpoint {
    pub version: u32,
    pub problem_hash: String,
    pub next_stripe: u64,
    pub emitted: u64,
}

struct AnchorPlan {
    /// 0-based point index `i ≥ 2` the filter anchors on.
    index: usize,
    beta: u32,
}

struct SideTables {
    /// `values[o][e·p + r]` = o-th derivative of entry e's expanded side at r.
    values: Vec<Vec<u64>>,
    /// inverses of the 0-th values, 0 where the value is 0 (first side only).
    inv: Vec<u64>,
}

struct Engine {
    fp: Fp,
    degree: usize,
    norm: NormalizedProblem,
    plan1: SidePlan,
    side1: Vec<super::enumerate::SideEntry>,
    side2: Vec<super::enumerate::SideEntry>,
    pool_used: bool,
    anchor: Option<AnchorPlan>,
    tables1: Option<SideTables>,
    tables2: Option<SideTables>,
    /// viable λ domain 1..p, or anchored candidates per pair
    first_free_pinned: bool,
}

impl Engine {
    fn build(problem: &SearchProblem, opts: &SearchOptions) -> Result<Engine, SearchError> {
        let norm = problem.normalize()?;
        let fp = norm.fp;
        let d = norm.degree;

        let (plan1, plan2) = match opts.pin_mode {
            PinMode::Auto => (
                SidePlan::with_pin(&norm.shapes[0], &fp, Pin::Infinity),
                SidePlan::with_pin(&norm.shapes[1], &fp, Pin::Zero),
            ),
            PinMode::Off => (
                SidePlan::plain(&norm.shapes[0]),
                SidePlan::plain(&norm.shapes[1]),
            ),
        };

        let mu_max = plan1
            .slots
            .iter()
            .chain(&plan2.slots)
            .filter(|s| matches!(s.kind, SlotKind::Enumerate))
            .map(|s| s.mu)
            .max()
            .unwrap_or(1);
        let pool_size: u64 = (fp.p() as f64).powi(mu_max as i32) as u64;
        let use_pool = pool_size <= opts.pool_limit;
        let pool = use_pool.then(|| IrreduciblePool::build(&fp, mu_max.max(1)));

        let (side1, side2) = match &pool {
            Some(pool) => {
                // pieces consumed by pinned factors are excluded everywhere
                let mut fixed = PieceMask::empty(pool.mask_words());
                for slot in plan1.slots.iter().chain(&plan2.slots) {
                    if let SlotKind::Fixed(f) = &slot.kind {
                        if let Some(id) = pool.id_of(f) {
                            fixed.set(id);
                        }
                    }
                }
                let s1 = enumerate_factored(&fp, &plan1, Some(pool), Some(&fixed));
                let s2 = enumerate_factored(&fp, &plan2, Some(pool), Some(&fixed));
                (s1, s2)
            }
            None => {
                let s1: Vec<_> = enumerate_factored(&fp, &plan1, None, None)
                    .into_iter()
                    .filter(|e| side_has_plan_shape(&fp, &plan1, &e.expanded))
                    .collect();
                let s2: Vec<_> = enumerate_factored(&fp, &plan2, None, None)
                    .into_iter()
                    .filter(|e| side_has_plan_shape(&fp, &plan2, &e.expanded))
                    .collect();
                (s1, s2)
            }
        };

        // the residual target scaling is only free when every point beyond
        // the first two is free; then the first free point is normalized to
        // the smallest unused residue
        let any_specified_tail = norm
            .points
            .iter()
            .skip(2)
            .any(|p| matches!(p, PointSpec::Specified(_)));
        let first_free_pinned = !any_specified_tail && norm.points.len() > 2;

        // anchor selection: a β^1 slot of a fiber i ≥ 3 whose point is a
        // rational critical point of known multiplicity
        let mut anchor = None;
        if opts.anchor_filter && plan1.pinned_infinity_mult() > 0 && norm.points.len() > 2 {
            let mut best: Option<(u32, usize, Option<u64>)> = None;
            let first_free = norm
                .points
                .iter()
                .position(|p| matches!(p, PointSpec::Free));
            for (i, spec) in norm.points.iter().enumerate().skip(2) {
                let q = match spec {
                    PointSpec::Specified(P1Fp::Finite(q)) => Some(*q),
                    PointSpec::Specified(P1Fp::Infinity) => continue,
                    PointSpec::Free => {
                        if first_free_pinned && Some(i) == first_free {
                            None
                        } else {
                            continue;
                        }
                    }
                };
                for (beta, mu) in norm.shapes[i].rle() {
                    if mu == 1 {
                        if best.is_none() || beta > best.unwrap().0 {
                            best = Some((beta, i, q));
                        }
                        break;
                    }
                }
            }
            if let Some((beta, index, _)) = best {
                anchor = Some(AnchorPlan { index, beta });
            }
        }

        let mut engine = Engine {
            fp,
            degree: d,
            norm,
            plan1,
            side1,
            side2,
            pool_used: use_pool,
            anchor,
            tables1: None,
            tables2: None,
            first_free_pinned,
        };
        if engine.anchor.is_some() {
            engine.tables1 = Some(engine.build_tables(true));
            engine.tables2 = Some(engine.build_tables(false));
        }
        Ok(engine)
    }

    fn build_tables(&self, first_side: bool) -> SideTables {
        let fp = &self.fp;
        let p = fp.p() as usize;
        let beta = self.anchor.as_ref().unwrap().beta as usize;
        let entries = if first_side { &self.side1 } else { &self.side2 };
        let mut values = vec![vec![0u64; entries.len() * p]; beta];
        let mut inv = Vec::new();
        for (e, entry) in entries.iter().enumerate() {
            let mut poly = entry.expanded.clone();
            for table in values.iter_mut().take(beta) {
                for r in 0..p {
                    table[e * p + r] = poly.eval(fp, &(r as u64));
                }
                poly = poly.derivative(fp);
            }
        }
        if first_side {
            inv = vec![0u64; entries.len() * p];
            for (i, v) in values[0].iter().enumerate() {
                inv[i] = fp.try_inv(v).unwrap_or(0);
            }
        }
        SideTables { values, inv }
    }

    /// Anchored candidate scalars `m = λ·q_anchor` for one pair.
    #[inline]
    fn anchor_candidates(&self, e1: usize, e2: usize, out: &mut Vec<u64>) {
        out.clear();
        let fp = &self.fp;
        let p = fp.p() as usize;
        let beta = self.anchor.as_ref().unwrap().beta as usize;
        let t1 = self.tables1.as_ref().unwrap();
        let t2 = self.tables2.as_ref().unwrap();
        let base1 = e1 * p;
        let base2 = e2 * p;
        'r: for r in 0..p {
            let w1v = t1.values[0][base1 + r];
            if w1v == 0 {
                continue;
            }
            let w2v = t2.values[0][base2 + r];
            if w2v == 0 {
                continue;
            }
            let m = fp.mul(&w2v, &t1.inv[base1 + r]);
            for o in 1..beta {
                let lhs = t2.values[o][base2 + r];
                let rhs = fp.mul(&m, &t1.values[o][base1 + r]);
                if lhs != rhs {
                    continue 'r;
                }
            }
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }

    /// Full verification of one pair; optionally restricted to anchored
    /// scalar candidates. Returns solutions in deterministic order.
    fn verify_pair(&self, e1: usize, e2: usize, anchored: Option<&[u64]>) -> Vec<FFSolution> {
        let fp = &self.fp;
        let d = self.degree;
        let w1 = &self.side1[e1];
        let w2 = &self.side2[e2];

        if !self.pool_used {
            let g = crate::algebra::poly_gcd(fp, &w1.expanded, &w2.expanded);
            if g.degree() != Some(0) {
                return Vec::new();
            }
        }

        // assignments: λ plus resolutions of the free points
        #[derive(Clone)]
        struct Partial {
            lambda: Option<u64>,
            resolved: Vec<(usize, u64)>,
        }
        let mut partials = vec![Partial {
            lambda: None,
            resolved: Vec::new(),
        }];

        let used_specified: Vec<u64> = self
            .norm
            .points
            .iter()
            .filter_map(|s| match s {
                PointSpec::Specified(P1Fp::Finite(q)) => Some(*q),
                _ => None,
            })
            .collect();

        let anchor_index = self.anchor.as_ref().map(|a| a.index);
        let mut first_free_seen = false;

        for (i, spec) in self.norm.points.iter().enumerate().skip(2) {
            let shape = &self.norm.shapes[i];
            let mut next: Vec<Partial> = Vec::new();
            match spec {
                PointSpec::Specified(P1Fp::Finite(q)) => {
                    let qinv = fp.inv(q);
                    for part in &partials {
                        match part.lambda {
                            Some(lam) => {
                                let m = fp.mul(&lam, q);
                                let v = w2.expanded.sub_scaled(fp, &w1.expanded, &m);
                                if self.shape_ok(&v, shape) {
                                    next.push(part.clone());
                                }
                            }
                            None => {
                                let ms: Vec<u64> = match (anchored, anchor_index) {
                                    (Some(c), Some(ai)) if ai == i => c.to_vec(),
                                    _ => scaled_set(fp, &w1.expanded, &w2.expanded, d, shape),
                                };
                                for m in ms {
                                    let v = w2.expanded.sub_scaled(fp, &w1.expanded, &m);
                                    if !self.shape_ok(&v, shape) {
                                        continue;
                                    }
                                    let mut p2 = part.clone();
                                    p2.lambda = Some(fp.mul(&m, &qinv));
                                    next.push(p2);
                                }
                            }
                        }
                    }
                }
                PointSpec::Specified(P1Fp::Infinity) => unreachable!("normalized points are finite"),
                PointSpec::Free => {
                    let pin_here = self.first_free_pinned && !first_free_seen;
                    first_free_seen = true;
                    for part in &partials {
                        if pin_here {
                            // normalized representative: this point is the
                            // smallest residue unused by specified points
                            let q = (1..fp.p())
                                .find(|c| !used_specified.contains(c))
                                .expect("a residue is available");
                            debug_assert!(part.lambda.is_none());
                            let ms: Vec<u64> = match (anchored, anchor_index) {
                                (Some(c), Some(ai)) if ai == i => c.to_vec(),
                                _ => scaled_set(fp, &w1.expanded, &w2.expanded, d, shape),
                            };
                            for m in ms {
                                let v = w2.expanded.sub_scaled(fp, &w1.expanded, &m);
                                if !self.shape_ok(&v, shape) {
                                    continue;
                                }
                                let mut p2 = part.clone();
                                p2.lambda = Some(fp.mul(&m, &fp.inv(&q)));
                                p2.resolved.push((i, q));
                                next.push(p2);
                            }
                        } else {
                            // branch over every compatible unused residue
                            let lambdas: Vec<u64> = match part.lambda {
                                Some(l) => vec![l],
                                None => (1..fp.p()).collect(),
                            };
                            for lam in lambdas {
                                for q in 1..fp.p() {
                                    if used_specified.contains(&q)
                                        || part.resolved.iter().any(|&(_, r)| r == q)
                                    {
                                        continue;
                                    }
                                    let m = fp.mul(&lam, &q);
                                    let v = w2.expanded.sub_scaled(fp, &w1.expanded, &m);
                                    if !self.shape_ok(&v, shape) {
                                        continue;
                                    }
                                    let mut p2 = part.clone();
                                    p2.lambda = Some(lam);
                                    p2.resolved.push((i, q));
                                    next.push(p2);
                                }
                            }
                        }
                    }
                }
            }
            partials = next;
            if partials.is_empty() {
                return Vec::new();
            }
        }

        let mut out = Vec::new();
        for part in partials {
            let lambda = match part.lambda {
                Some(l) => l,
                // k = 2: any nonzero λ completes the map
                None => {
                    for lam in 1..fp.p() {
                        out.push(self.assemble(w1, w2, lam, &[]));
                    }
                    continue;
                }
            };
            out.push(self.assemble(w1, w2, lambda, &part.resolved));
        }
        out.sort_by_key(|s| (s.lambda, s.points.iter().map(|p| p.finite()).collect::<Vec<_>>()));
        out.dedup();
        // soundness: every emitted solution re-verifies independently
        out.retain(|sol| sol.verify(&self.norm.shapes).is_ok());
        out
    }

    fn shape_ok(&self, v: &UniPoly<Fp>, shape: &crate::algebra::Partition) -> bool {
        match v.degree() {
            Some(deg) if deg == self.degree => crate::algebra::shape_matches(&self.fp, v, shape),
            Some(_) => crate::algebra::shape_with_infinity(&self.fp, v, self.degree)
                .is_ok_and(|s| s == *shape),
            None => false,
        }
    }

    fn assemble(
        &self,
        w1: &super::enumerate::SideEntry,
        w2: &super::enumerate::SideEntry,
        lambda: u64,
        resolved: &[(usize, u64)],
    ) -> FFSolution {
        let fp = &self.fp;
        let minv = self.norm.mobius.inverse(fp);
        let mut points = Vec::with_capacity(self.norm.points.len());
        for (i, spec) in self.norm.points.iter().enumerate() {
            points.push(match spec {
                PointSpec::Specified(q) => *q,
                PointSpec::Free => P1Fp::Finite(
                    resolved
                        .iter()
                        .find(|&&(j, _)| j == i)
                        .map(|&(_, q)| q)
                        .expect("every free point is resolved"),
                ),
            });
        }
        let original_points = points.iter().map(|&q| minv.apply(fp, q)).collect();
        FFSolution {
            prime: fp.p(),
            degree: self.degree,
            w1: w1.factors.clone(),
            w2: w2.factors.clone(),
            infinity_multiplicity: self.plan1.pinned_infinity_mult(),
            lambda,
            points,
            original_points,
            mobius: self.norm.mobius,
        }
    }

    fn scan_stripe(&self, e1: usize) -> (Vec<FFSolution>, u64, u64) {
        let mut sols = Vec::new();
        let mut pairs = 0u64;
        let mut cands = 0u64;
        let mut scratch: Vec<u64> = Vec::with_capacity(4);
        for e2 in 0..self.side2.len() {
            if self.pool_used && self.side1[e1].mask.intersects(&self.side2[e2].mask) {
                continue;
            }
            pairs += 1;
            if self.anchor.is_some() {
                self.anchor_candidates(e1, e2, &mut scratch);
                if scratch.is_empty() {
                    continue;
                }
                cands += 1;
                sols.extend(self.verify_pair(e1, e2, Some(&scratch)));
            } else {
                sols.extend(self.verify_pair(e1, e2, None));
            }
        }
        (sols, pairs, cands)
    }
}

/// Run the search, feeding each solution to `sink` in deterministic order.
/// The sink returns `false` to stop early.
pub fn search_with(
    problem: &SearchProblem,
    opts: &SearchOptions,
    mut sink: impl FnMut(FFSolution) -> bool,
) -> Result<SearchStats, SearchError> {
    let engine = Engine::build(problem, opts)?;
    let n_stripes = engine.side1.len() as u64;
    let mut stats = SearchStats {
        stripes: n_stripes,
        ..Default::default()
    };

    let mut start_stripe = 0u64;
    if let Some(path) = &opts.checkpoint {
        if path.exists() {
            let data = fs::read_to_string(path).map_err(|e| SearchError::Io(e.to_string()))?;
            let cp: SearchCheckpoint =
                serde_json::from_str(&data).map_err(|e| SearchError::Io(e.to_string()))?;
            if cp.problem_hash != problem.content_hash() {
                return Err(SearchError::CheckpointMismatch);
            }
            start_stripe = cp.next_stripe;
            stats.emitted = cp.emitted;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| SearchError::Io(e.to_string()))?;

    let chunk = (opts.threads.max(rayon::current_num_threads()) * 16).max(64) as u64;
    let mut next = start_stripe;
    'outer: while next < n_stripes {
        let hi = (next + chunk).min(n_stripes);
        let results: Vec<(u64, Vec<FFSolution>, u64, u64)> = pool.install(|| {
            (next..hi)
                .into_par_iter()
                .map(|s| {
                    let (sols, pairs, cands) = engine.scan_stripe(s as usize);
                    (s, sols, pairs, cands)
                })
                .collect()
        });
        for (_, sols, pairs, cands) in results {
            stats.pairs += pairs;
            stats.candidates += cands;
            for sol in sols {
                stats.emitted += 1;
                let keep_going = sink(sol);
                let at_limit = opts.limit.is_some_and(|l| stats.emitted >= l);
                if !keep_going || at_limit {
                    break 'outer;
                }
            }
        }
        next = hi;
        if let Some(path) = &opts.checkpoint {
            save_checkpoint(path, problem, next, stats.emitted)?;
        }
    }
    if let Some(path) = &opts.checkpoint {
        save_checkpoint(path, problem, next.max(start_stripe), stats.emitted)?;
    }
    Ok(stats)
}

fn save_checkpoint(
    path: &PathBuf,
    problem: &SearchProblem,
    next_stripe: u64,
    emitted: u64,
) -> Result<(), SearchError> {
    let cp = SearchCheckpoint {
        version: 1,
        problem_hash: problem.content_hash(),
        next_stripe,
        emitted,
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string_pretty(&cp).unwrap())
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| SearchError::Io(e.to_string()))
}

/// Collect every solution (test and small-problem convenience).
pub fn search_all(
    problem: &SearchProblem,
    opts: &SearchOptions,
) -> Result<(Vec<FFSolution>, SearchStats), SearchError> {
    let mut out = Vec::new();
    let stats = search_with(problem, opts, |s| {
        out.push(s);
        true
    })?;
    Ok((out, stats))
}

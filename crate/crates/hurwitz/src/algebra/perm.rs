//! Permutations of `{1..d}` and admissible tuples.
//!
//! Products compose left to right: `(σ·ρ)(x) = ρ(σ(x))`. JSON encodes a
//! permutation as its 1-based image list.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, Partition};

/// A permutation, stored as 0-based images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(d: usize) -> Perm {
        Perm {
            images: (0..d as u32).collect(),
        }
    }

    /// From 0-based images, validated as a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm, AlgebraError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if (i as usize) >= d || seen[i as usize] {
                return Err(AlgebraError::InvalidPermutation(
                    "image list is not a bijection".into(),
                ));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// From disjoint cycles in 1-based notation; fixed points may be omitted.
    pub fn from_cycles(d: usize, cycles: &[&[u32]]) -> Result<Perm, AlgebraError> {
        let mut images: Vec<u32> = (0..d as u32).collect();
        let mut touched = vec![false; d];
        for cyc in cycles {
            for w in 0..cyc.len() {
                let a = cyc[w];
                let b = cyc[(w + 1) % cyc.len()];
                if a == 0 || a as usize > d || b == 0 || b as usize > d {
                    return Err(AlgebraError::InvalidPermutation(format!(
                        "cycle entry out of range 1..{d}"
                    )));
                }
                if touched[(a - 1) as usize] {
                    return Err(AlgebraError::InvalidPermutation(
                        "cycles are not disjoint".into(),
                    ));
                }
                touched[(a - 1) as usize] = true;
                images[(a - 1) as usize] = b - 1;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Perm { images }
    }

    /// Left-to-right product: apply `self` first, then `next`.
    pub fn then(&self, next: &Perm) -> Perm {
        assert_eq!(self.degree(), next.degree());
        Perm {
            images: self.images.iter().map(|&v| next.apply(v)).collect(),
        }
    }

    /// Conjugate `τ^{-1}·σ·τ` (left-to-right product).
    pub fn conjugate_by(&self, tau: &Perm) -> Perm {
        tau.inverse().then(self).then(tau)
    }

    /// Disjoint cycles covering all points, fixed points included,
    /// each cycle starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d as u32 {
            if seen[start as usize] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("non-empty degree")
    }

    /// 1-based image list.
    pub fn images_one_based(&self) -> Vec<u32> {
        self.images.iter().map(|&v| v + 1).collect()
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for cyc in self.cycles() {
            if cyc.len() < 2 {
                continue;
            }
            wrote = true;
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A Hurwitz datum: `k` permutations of `{1..d}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermTuple {
    degree: usize,
    perms: Vec<Perm>,
}

impl PermTuple {
    pub fn new(degree: usize, perms: Vec<Perm>) -> Result<Self, AlgebraError> {
        if perms.iter().any(|p| p.degree() != degree) {
            return Err(AlgebraError::InvalidPermutation(
                "degree mismatch in tuple".into(),
            ));
        }
        Ok(PermTuple { degree, perms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// Left-to-right product `σ_1·σ_2⋯σ_k`.
    pub fn product(&self) -> Perm {
        self.perms
            .iter()
            .fold(Perm::identity(self.degree), |acc, p| acc.then(p))
    }

    /// Whether the generated group acts transitively on `{1..d}`.
    pub fn is_transitive(&self) -> bool {
        let d = self.degree;
        if d == 0 {
            return false;
        }
        let mut reached = vec![false; d];
        let mut stack = vec![0u32];
        reached[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for p in &self.perms {
                for y in [p.apply(x), p.inverse().apply(x)] {
                    if !reached[y as usize] {
                        reached[y as usize] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
        }
        count == d
    }

    /// Total cycle-length defect `Σ_{i,c} (length(c) - 1)`.
    pub fn total_defect(&self) -> u32 {
        self.perms.iter().map(|p| p.cycle_type().defect()).sum()
    }

    /// Admissibility: transitive, product identity, defect `2d - 2`.
    pub fn is_admissible(&self) -> bool {
        self.product().is_identity()
            && self.total_defect() == 2 * self.degree as u32 - 2
            && self.is_transitive()
    }

    pub fn cycle_types(&self) -> Vec<Partition> {
        self.perms.iter().map(|p| p.cycle_type()).collect()
    }

    pub fn conjugate_by(&self, tau: &Perm) -> PermTuple {
        PermTuple {
            degree: self.degree,
            perms: self.perms.iter().map(|p| p.conjugate_by(tau)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PermTupleWire {
    degree: usize,
    perms: Vec<Vec<u32>>,
}

impl Serialize for PermTuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PermTupleWire {
            degree: self.degree,
            perms: self.perms.iter().map(|p| p.images_one_based()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = PermTupleWire::deserialize(d)?;
        let perms = wire
            .perms
            .into_iter()
            .map(|images| {
                if images.iter().any(|&v| v == 0) {
                    return Err(serde::de::Error::custom("images are 1-based"));
                }
                Perm::from_images(images.iter().map(|&v| v - 1).collect())
                    .map_err(serde::de::Error::custom)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PermTuple::new(wire.degree, perms).map_err(serde::de::Error::custom)
    }
}

/// The tuple from Cui's degree-13 problem.
pub fn cui_tuple() -> PermTuple {
    let s1 = Perm::from_cycles(
        13,
        &[&[1, 7, 11, 2], &[3, 8], &[4, 5], &[6, 10], &[9, 12, 13]],
    )
    .unwrap();
    let s2 = Perm::from_cycles(
        13,
        &[&[1, 3, 12, 4], &[5, 9], &[6, 7], &[10, 13, 11], &[2, 8]],
    )
    .unwrap();
    let s3 = Perm::from_cycles(
        13,
        &[&[1, 5, 13, 6], &[7, 10], &[2, 3], &[8, 11, 12], &[4, 9]],
    )
    .unwrap();
    PermTuple::new(13, vec![s1, s2, s3]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cui_tuple_is_admissible() {
        let t = cui_tuple();
        assert!(t.product().is_identity());
        assert_eq!(t.total_defect(), 24);
        assert!(t.is_transitive());
        assert!(t.is_admissible());
        for p in t.perms() {
            assert_eq!(p.cycle_type(), Partition::new(vec![4, 3, 2, 2, 2]).unwrap());
        }
    }

    #[test]
    fn two_point_tuple_is_admissible() {
        for d in 2..9usize {
            let fwd: Vec<u32> = (1..=d as u32).collect();
            let bwd: Vec<u32> = (1..=d as u32).rev().collect();
            let s1 = Perm::from_cycles(d, &[&fwd]).unwrap();
            let s2 = Perm::from_cycles(d, &[&bwd]).unwrap();
            let t = PermTuple::new(d, vec![s1, s2]).unwrap();
            assert!(t.is_admissible(), "d = {d}");
        }
    }

    #[test]
    fn intransitive_tuple_rejected() {
        let s = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let t = PermTuple::new(3, vec![s.clone(), s]).unwrap();
        assert!(t.product().is_identity());
        assert!(!t.is_transitive());
        assert!(!t.is_admissible());
    }

    #[test]
    fn product_is_left_to_right() {
        // (1,2,3)·(1,2)·(2,3) = id under left-to-right composition
        let s1 = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let s2 = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let s3 = Perm::from_cycles(3, &[&[2, 3]]).unwrap();
        let t = PermTuple::new(3, vec![s1, s2, s3]).unwrap();
        assert!(t.product().is_identity());
        assert!(t.is_admissible());
    }

    #[test]
    fn admissibility_invariant_under_conjugation() {
        let t = cui_tuple();
        let tau = Perm::from_cycles(13, &[&[1, 9, 4], &[2, 13], &[5, 7, 6, 11]]).unwrap();
        assert!(t.conjugate_by(&tau).is_admissible());
    }

    #[test]
    fn json_uses_one_based_images() {
        let t = PermTuple::new(
            2,
            vec![
                Perm::from_cycles(2, &[&[1, 2]]).unwrap(),
                Perm::from_cycles(2, &[&[2, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"degree":2,"perms":[[2,1],[2,1]]}"#);
        let back: PermTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}

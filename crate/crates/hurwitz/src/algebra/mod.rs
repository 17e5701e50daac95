//! Exact arithmetic: modular integers, residue rings `Z/p^N`, big
//! integers/rationals, dense univariate polynomials, gcd chains, shapes of
//! polynomials, and permutation tuples.

mod fp;
mod partition;
mod perm;
mod poly;
mod ring;
mod shape;
mod zpn;

pub use fp::Fp;
pub use partition::Partition;
pub use perm::{cui_tuple, Perm, PermTuple};
pub use poly::UniPoly;
pub use ring::{Field, IntRing, RatRing, Ring};
pub use shape::{multiplicity_split, poly_gcd, shape_matches, shape_of, shape_with_infinity};
pub use zpn::ZpN;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial has no shape")]
    ZeroPolynomial,
    #[error("root multiplicity not below the field characteristic (p = {p})")]
    CharacteristicViolation { p: u64 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

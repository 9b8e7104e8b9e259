//! Conjugacy-class computations in finite permutation groups.
//!
//! The crate provides permutation arithmetic on up to 65535 points, groups
//! backed by a verified base and strong generating set, conjugacy-class
//! tables with deterministic naming, power maps and real/quasi-real
//! classification, class-multiplication structure constants, the rack
//! type-D search in its exhaustive, randomized and maximal-subgroup forms,
//! and a base-image codec used to keep witness logs small.
//!
//! Composition is left-to-right everywhere: `(p * q)` applies `p` first.
//! See [`perm`] for the convention note.

pub mod basecodec;
pub mod classes;
pub mod cli;
pub mod conjugacy;
pub mod error;
pub mod group;
pub mod groupio;
pub mod perm;
pub mod rng;
pub mod typed;

pub use crate::classes::{ClassTable, ClassTableConfig, ConjugacyClass, QuasiRealInfo};
pub use crate::conjugacy::{are_conjugate, centralizer, DEFAULT_CLASS_THRESHOLD};
pub use crate::error::{Error, Result};
pub use crate::group::PermGroup;
pub use crate::perm::{parse_perm, CycleType, Permutation, MAX_DEGREE};
pub use crate::rng::RandomSource;
pub use crate::typed::{
    check_pair, direct_product, fusion_map, typed_exhaustive, typed_maximal, typed_random,
    FusionMap, SearchConfig, TypeDVerdict, TypeDWitness,
};

//! Finite permutation groups, right cosets, the coset actions and orbit counting.

mod builtin;
mod coset;
mod finite;
mod orbit;
mod perm;

pub use builtin::{builtin_group, builtin_pair, GroupPair};
pub use coset::{CosetSpace, TupleCodec};
pub use finite::{conjugacy_classes, ConjugacyClass, Elem, FiniteGroup, Subgroup, DEFAULT_MAX_ORDER};
pub use orbit::{burnside_count, count_orbits, isotropy, orbits, OrbitCount, Orbits};
pub use perm::Perm;

//! Exact-arithmetic engine for the subgroup-subfactor planar algebra P(⋆_n)^G.
//!
//! Two models of the same standard invariant are built side by side:
//!
//! * the loop model: the graph planar algebra of the star graph ⋆_n with the
//!   induced action of `G` ([`planar`], [`invariant`]);
//! * the operator-matrix model: group-algebra-valued matrices realising the
//!   basic-construction tower of `R⋊H ⊂ R⋊G` ([`model`]).
//!
//! [`iso`] carries the isomorphism between them and the checks that it
//! commutes with the generating tangles; [`tangle`] is a small expression
//! language for composite tangles evaluated in either model.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod graph;
pub mod group;
pub mod invariant;
pub mod iso;
pub mod linalg;
pub mod model;
pub mod planar;
pub mod scalar;
pub mod tangle;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};

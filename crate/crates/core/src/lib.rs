//! Kernels for ψ-growth processes with overlap.
//!
//! This crate is `no_std` (it needs `alloc`) and contains everything that is a pure
//! function of its inputs: point/cone primitives, seeded samplers for Poisson and
//! binomial inputs, the extremality functionals (downward-cone, lower-envelope and
//! birth–growth acceptance), convex-hull vertex tests with the support-epigraph dual,
//! and the estimators used to check the λ^τ limit theory.
//!
//! Parallel execution, file formats and the command line live in the `psi-growth`
//! companion crate. Work that fans out over replicates goes through the
//! [`exec::Executor`] trait so that the aggregation order never depends on the
//! scheduler.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod extremality;
pub mod geometry;
pub mod hull;
pub mod index;
pub mod math;
pub mod rng;
pub mod sampling;
pub mod simplex;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{
    compute_exponents, downward_cone_contains, rescale, upward_cone_contains, PointConfiguration, PsiSpec, Region,
    ScalingExponents, SpaceTimePoint,
};

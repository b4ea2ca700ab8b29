//! Reduced random walks on the alcoves of an affine Weyl group.
//!
//! The walk starts at the fundamental alcove and at each step crosses a wall
//! chosen uniformly among those that lead away from it, so it never crosses a
//! hyperplane twice. Its shadow in the finite Weyl group `W` is a Markov chain
//! whose stationary distribution `ζ` gives both the probability of ending in
//! each Weyl chamber and the limit direction `ψ`.
//!
//! * [`roots`], [`weyl`], [`affine`]: root data, the finite group, alcoves.
//! * [`walker`]: simulation and exact step distributions.
//! * [`wchain`]: the chain on `W`, `ζ`, `ψ` and related probes.
//! * [`shi`]: the Shi arrangement and the absorbing graph Γ.
//! * [`ncore`]: the type A picture in terms of n-cores.
//!
//! All probabilities that can be computed exactly are returned as
//! [`Rational`] values.

pub mod error;
pub mod linalg;
pub mod roots;
pub mod weyl;
pub mod affine;
pub mod walker;
pub mod wchain;
pub mod shi;
pub mod ncore;

pub use affine::{AffineElement, AffineRoot};
pub use error::{CoxError, Result};
pub use linalg::Rational;
pub use ncore::{BoundaryProfile, CorePartition};
pub use roots::{CartanType, CorootVec, Family, RootSystem, RootVec};
pub use shi::{GammaGraph, ShiRegion};
pub use walker::{Trajectory, Variant};
pub use wchain::{Distribution, TransitionMatrix, WeightScheme};
pub use weyl::{WeylElement, WeylGroup};

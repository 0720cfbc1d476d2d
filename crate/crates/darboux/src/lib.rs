//! Geometry kernel for curves on oriented surfaces: Darboux frames, surface
//! curvatures, special-curve classification, and the construction and
//! numerical certification of associated helices.
//!
//! Everything is pure over immutable inputs; samples, reports and curves can
//! be computed concurrently without shared state.

// Index-based loops are the natural shape for the small fixed-size
// convolutions and rotations in this crate.
#![allow(clippy::needless_range_loop)]

pub mod associated;
pub mod classify;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod frames;
pub mod geometry;
pub mod tol;
pub mod verify;

#[doc(hidden)]
pub mod testing;

pub use error::{KernelError, Result};

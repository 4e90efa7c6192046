//! Lagrangian families in the generalized tangent bundle `TM ⊕ T*M`.
//!
//! [`pointwise`] works in a single fiber over any exact field. The symbolic
//! layers ([`calculus`], [`frames`], [`compat`]) use rational functions over
//! the Gaussian rationals as coefficients.

pub mod calculus;
pub mod compat;
pub mod error;
pub mod frames;
pub mod pointwise;

pub use error::{GeomError, Result};

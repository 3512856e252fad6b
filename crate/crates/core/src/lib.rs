//! Numerical verification of the transgression of differential lifts of the
//! first Pontryagin class to central extensions of `Diff⁺(S¹)`.
//!
//! The crate evaluates Bott–Thurston cocycles, builds the bisimplicial double
//! complex of 1-forms on `Γᵖ × F × ℝ^q` and checks the coboundary identities
//! relating `x₁ dx₂` to the Bott–Thurston integrand, and measures central
//! charges of the resulting Lie algebra cocycles.

pub mod chernweil;
pub mod cli;
pub mod cocycle;
pub mod diffeo;
pub mod dual;
pub mod error;
pub mod quadrature;
pub mod sampling;
pub mod simplicial;
pub mod witt;

pub use diffeo::{CircleDiffeo, Jet, WittField};
pub use error::{Error, Result};

//! Pointwise curvature laboratory for almost Hermitian manifolds.
//!
//! Charts are given by expression fields for the metric and the almost
//! complex structure; every derivative is exact (Taylor-mode jets), so
//! curvature identities can be checked down to rounding error.

pub mod exprjet;
pub mod tensor;
pub mod manifold;
pub mod bochner;
pub mod sample;
pub mod cframe;
pub mod verify;
pub mod cli;

//! Exact exterior algebra of polynomial differential forms over ℚ, order-one
//! differential operators `D = L_K + i_L + λ_μ`, and the deformed
//! `S`-module structures `f · τ = α f τ + β df ∧ i_R τ` that make such
//! operators `S`-linear.

pub mod applications;
pub mod deformation;
pub mod error;
pub mod exterior;
pub mod frontend;
pub mod linalg;
pub mod modtools;
pub mod operators;
pub mod scalar_poly;
pub mod vvforms;

pub use error::{Error, Result};

#[cfg(test)]
mod testutil;

//! Exact mixed volumes, mixed area measures and mixed Hessian measures.
//!
//! Polytopes live over exact rationals and directions on the sphere are
//! primitive integer vectors, so every polytope-level quantity in this crate
//! is computed exactly. The smooth and appendix laboratories are floating
//! point diagnostics.

pub mod appendix;
pub mod cli;
pub mod cone;
pub mod direction;
pub mod error;
pub mod extremality;
pub mod hessian;
pub mod json;
pub mod linalg;
pub mod mixed;
pub mod polytope;
pub mod rational;
pub mod smooth;

pub use cone::Cone;
pub use direction::Direction;
pub use error::{Error, Result};
pub use polytope::{Face, Halfspace, HyperplaneChart, Polytope};
pub use rational::Rational;

//! Exact operator calculus for the Sturm representation of the two-body
//! Coulomb problem: normal-ordered differential operators over exact
//! rational-function coefficients, gauge rotations, finite-dimensional
//! representations on the polynomial flag, the hidden `g(2)` algebra and
//! the Riemannian data of the two-dimensional reduction.

pub mod cli;
pub mod coeffring;
pub mod coulomb2d;
pub mod coulomb3d;
pub mod decompose;
pub mod diffgeo;
pub mod flagrep;
pub mod g2algebra;
pub mod linalg;
pub mod opexpr;
pub mod registry;
pub mod report;
pub mod weyl;
mod error;

pub use error::{Error, Result};

//! The two-dimensional reduction: the gauge-rotated operator, its algebraic
//! form, the integrals and their cubic algebra.

pub mod cubic;
mod integrals;
mod named;
pub mod parity;
mod pipeline;

pub use integrals::*;
pub use named::*;
pub use pipeline::*;

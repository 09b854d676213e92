//! Differential operators over the coefficient ring: composition,
//! commutators, gauge rotations and changes of chart.

mod chart;
mod diffop;
mod gauge;
mod spec;

pub use chart::{change_variables, project_angular};
pub use diffop::{DerivIndex, DiffOp};
pub use gauge::{conjugate, GaugeData};
pub use spec::{VariableSpec, MAX_SPACE};

//! Toda chain integrator with its Eisenhart lift and the symmetric-space lift
//! on `SO(n)\SL(n,R)`, plus Killing-tensor extraction and cross-checks between
//! the three descriptions.

// Negated comparisons are deliberate: NaN must fail positivity gates.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod eisenhart;
pub mod error;
pub mod findings;
pub mod integrate;
pub mod killing;
pub mod linalg;
pub mod oplift;
pub mod sampling;
pub mod toda;
pub mod trajectory;

pub use error::{Error, Result};
pub use integrate::{IntegratorConfig, Method};
pub use linalg::SquareMatrix;
pub use toda::{PhaseState, TodaSystem};
pub use trajectory::{Formulation, Monitor, MonitorSeries, Trajectory};

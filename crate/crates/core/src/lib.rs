//! Conservative finite difference schemes for the modified Korteweg–de Vries
//! equation `u_t + u²u_x + u_xxx = 0` on periodic domains.
//!
//! Four one-parameter families preserve mass together with either energy
//! (`EC8`, `EC10`) or momentum (`MC8`, `MC10`); the narrow box and
//! multisymplectic box schemes are included as mass-preserving baselines.
//! All schemes are implicit one-step methods advanced by Newton's method.

pub mod analysis;
pub mod banded;
pub mod error;
pub mod grid;
pub mod scalar;
pub mod schemes;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction, TwoLevelField};
pub use schemes::{ConservationLawEval, Law, SchemeFamily, SchemeSpec};
pub use solver::{NewtonConfig, Predictor, Trajectory};

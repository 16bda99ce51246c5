//! Achievable rate-distortion regions for state-dependent two-user
//! multiple-access channels with generalized feedback, where each
//! transmitter also estimates its channel state.
//!
//! The crate evaluates single-letter information terms of a coding scheme,
//! the resulting rate regions, optimal symbol-wise state estimators, and
//! verifies the rate-splitting projection by exact Fourier-Motzkin
//! elimination.

pub mod channel;
pub mod error;
pub mod estimator;
pub mod fme;
pub mod frontier;
pub mod io;
pub mod kernel;
pub mod mcsim;
pub mod prob;
pub mod region;
pub mod scheme;

pub use channel::{names, ChannelSpec, DistortionTable, User, UserDistortion};
pub use error::{Error, Result};
pub use kernel::Kernel;
pub use prob::{Alphabet, Diagnostics, JointDistribution, Variable};
pub use scheme::{assemble_joint, constant_v_scheme, Example2SchemeParams, SchemeSpec};

//! Infrared-photon decoherence of a charged particle in a two-path
//! interferometer.
//!
//! The crate splits the point-particle current into leading soft, sub-leading
//! soft and hard pieces, evaluates the decoherence functional for each
//! combination by quadrature, and checks the results against closed forms.

pub mod constants;
pub mod currents;
pub mod decoherence;
pub mod error;
pub mod experiment;
pub mod kinematics;
pub mod numerics;
pub mod validation;
pub mod whichpath;

pub use error::{Error, Result};

//! Which-path quantities derived from the decoherence functional.

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this `Gamma` the linearized distinguishability is a fair guide.
pub const LINEAR_REGIME: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhichPathSummary {
    pub gamma: f64,
    /// `|<R|L>| = e^{-Gamma}`.
    pub overlap: f64,
    /// Trace distance `sqrt(1 - e^{-2 Gamma})`.
    pub distinguishability: f64,
    pub visibility_bound: f64,
    /// Best path-guessing probability `(1 + D) / 2`.
    pub guess_bound: f64,
    /// `D ~ Gamma`. Reported for comparison only.
    pub linearized_distinguishability: f64,
    pub linear_regime: bool,
}

pub fn summarize(gamma: f64) -> Result<WhichPathSummary> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "decoherence functional must be non-negative",
        });
    }
    let overlap = (-gamma).exp();
    // expm1 keeps D accurate when Gamma is tiny.
    let distinguishability = (-(-2.0 * gamma).exp_m1()).sqrt();
    Ok(WhichPathSummary {
        gamma,
        overlap,
        distinguishability,
        visibility_bound: overlap,
        guess_bound: 0.5 * (1.0 + distinguishability),
        linearized_distinguishability: gamma,
        linear_regime: gamma < LINEAR_REGIME,
    })
}

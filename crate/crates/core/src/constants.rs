//! Physical and mathematical constants (natural units, hbar = c = 1).

/// Euler-Mascheroni constant, 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Fine-structure constant used by the slit estimators.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035_999;

/// Fine-structure constant used for the reference `e^2 = 4 pi / 137.036`.
pub const FINE_STRUCTURE_ROUNDED: f64 = 1.0 / 137.036;

/// Squared coupling `e^2 = 4 pi alpha Q^2` in Heaviside-Lorentz natural units.
pub fn coupling_squared(alpha: f64, charge_number: f64) -> f64 {
    4.0 * std::f64::consts::PI * alpha * charge_number * charge_number
}

/// `e = sqrt(4 pi alpha) Q`.
pub fn coupling(alpha: f64, charge_number: f64) -> f64 {
    (4.0 * std::f64::consts::PI * alpha).sqrt() * charge_number
}

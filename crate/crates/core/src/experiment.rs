//! Order-of-magnitude estimators for table-top setups: an electron double
//! slit and a polarizable particle near a dielectric mirror.
//!
//! Everything is in natural units. These are estimates with explicit regime
//! flags, not precision predictions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::FINE_STRUCTURE;
use crate::error::{Error, Result};
use crate::numerics::bessel_k2;

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn default_alpha() -> f64 {
    FINE_STRUCTURE
}

/// Double-slit plate and screen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitGeometry {
    /// Plate thickness.
    pub a_o: f64,
    /// Slit width.
    pub b_o: f64,
    /// Slit separation.
    pub d_o: f64,
    /// Slit to screen distance.
    pub l_o: f64,
    pub v_over_c: f64,
    /// Charge in units of the elementary charge.
    pub charge_number: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl SlitGeometry {
    pub fn new(a_o: f64, b_o: f64, d_o: f64, l_o: f64, v_over_c: f64, charge_number: f64) -> Result<Self> {
        let s = Self {
            a_o,
            b_o,
            d_o,
            l_o,
            v_over_c,
            charge_number,
            alpha: FINE_STRUCTURE,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("a_o", self.a_o)?;
        positive("b_o", self.b_o)?;
        positive("d_o", self.d_o)?;
        positive("l_o", self.l_o)?;
        positive("alpha", self.alpha)?;
        if !(self.v_over_c > 0.0 && self.v_over_c < 1.0) {
            return Err(Error::Superluminal {
                speed: self.v_over_c,
            });
        }
        if !self.charge_number.is_finite() {
            return Err(Error::InvalidParameter {
                name: "charge_number",
                value: self.charge_number,
                reason: "must be finite",
            });
        }
        if !(self.l_o > self.a_o) {
            return Err(Error::InvalidParameter {
                name: "l_o",
                value: self.l_o,
                reason: "screen must lie beyond the plate thickness",
            });
        }
        Ok(())
    }

    /// `L_o / a_o`, the role played by `Omega tau`.
    pub fn ratio(&self) -> f64 {
        self.l_o / self.a_o
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlitPath {
    /// Through the slit at `-d_o / 2`.
    A,
    /// Through the slit at `+d_o / 2`.
    B,
}

/// Transverse acceleration `(v^2 / ell_o)(z_f +- d_o / 2)` needed to reach
/// screen point `z_f`. `ell_o` is the deflection length scale and is left to
/// the caller.
pub fn slit_acceleration(s: &SlitGeometry, z_f: f64, path: SlitPath, ell_o: f64) -> Result<f64> {
    positive("ell_o", ell_o)?;
    let offset = match path {
        SlitPath::A => 0.5 * s.d_o,
        SlitPath::B => -0.5 * s.d_o,
    };
    Ok(s.v_over_c * s.v_over_c / ell_o * (z_f + offset))
}

/// `Q^2 (16 alpha / 3 pi) v^2 ln(L_o / a_o)`.
pub fn gamma_dressed_2slit(s: &SlitGeometry) -> f64 {
    let q2 = s.charge_number * s.charge_number;
    q2 * 16.0 * s.alpha / (3.0 * PI) * s.v_over_c * s.v_over_c * s.ratio().ln()
}

/// The hard-sector slit estimate in three normalizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardSlitEstimate {
    /// `Q^2 (8 alpha / 3 pi) [2 ln r + r^2 / 2]` with no velocity factor.
    pub printed: f64,
    /// `printed * v^2`: the `(2 e^2 / 3 pi^2) v^2` normalization the
    /// quadrature supports.
    pub with_velocity: f64,
    /// `printed * v^2 / 2`: the `(e^2 / 3 pi^2) v^2` normalization.
    pub with_velocity_alt: f64,
    /// The printed form lacks the `v^2` the functional requires.
    pub missing_velocity_factor: bool,
}

impl HardSlitEstimate {
    /// `printed / with_velocity_alt = 2 (c / v)^2`.
    pub fn printed_to_alt_ratio(&self) -> f64 {
        self.printed / self.with_velocity_alt
    }
}

pub fn gamma_hard_2slit(s: &SlitGeometry) -> HardSlitEstimate {
    let r = s.ratio();
    let q2 = s.charge_number * s.charge_number;
    let printed = q2 * 8.0 * s.alpha / (3.0 * PI) * (2.0 * r.ln() + 0.5 * r * r);
    let v2 = s.v_over_c * s.v_over_c;
    HardSlitEstimate {
        printed,
        with_velocity: printed * v2,
        with_velocity_alt: 0.5 * printed * v2,
        missing_velocity_factor: true,
    }
}

/// Polarizable sphere near a flat dielectric mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleMirror {
    /// Particle radius.
    pub r_o: f64,
    /// Closest distance to the surface.
    pub z_o: f64,
    /// Dielectric constant of the particle.
    pub epsilon: f64,
    /// Van der Waals strength.
    pub g_o: f64,
    /// Surface corrugation wavenumber.
    pub q: f64,
    /// Lateral coordinate.
    pub x_o: f64,
    /// Short-range barrier height inside the mirror.
    pub u_o: f64,
}

impl ParticleMirror {
    /// `epsilon = 1` is admitted as the vacuum-matched limit.
    pub fn new(r_o: f64, z_o: f64, epsilon: f64, g_o: f64, q: f64, x_o: f64, u_o: f64) -> Result<Self> {
        let p = Self {
            r_o,
            z_o,
            epsilon,
            g_o,
            q,
            x_o,
            u_o,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("r_o", self.r_o)?;
        positive("z_o", self.z_o)?;
        if !(self.epsilon >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: self.epsilon,
                reason: "dielectric constant must be at least 1",
            });
        }
        for (name, value) in [("g_o", self.g_o), ("q", self.q), ("x_o", self.x_o), ("u_o", self.u_o)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    /// Hard-wall term `U_o theta(-Z_o)`; zero outside the mirror.
    fn barrier(&self) -> f64 {
        if self.z_o < 0.0 {
            self.u_o
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VdwRegime {
    /// `Z_o >> r_o`, retarded tail.
    Far,
    /// `Z_o << r_o`.
    Near,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VdwEstimate {
    pub value: f64,
    /// The geometry sits on the wrong side of `Z_o = r_o` for the regime.
    pub regime_mismatch: bool,
}

/// `(1/3 - 5/pi^2) pi^3 / 720`, negative.
pub fn vdw_near_coefficient() -> f64 {
    (1.0 / 3.0 - 5.0 / (PI * PI)) * PI.powi(3) / 720.0
}

/// Asymptotic van der Waals potential. A regime mismatch is flagged, not
/// rejected, since both forms are asymptotic anyway.
pub fn vdw_potential(p: &ParticleMirror, regime: VdwRegime) -> VdwEstimate {
    let (value, regime_mismatch) = match regime {
        VdwRegime::Far => (
            p.barrier() - 9.0 / (16.0 * PI) * p.r_o.powi(3) / (p.r_o + p.z_o).powi(4),
            !(p.z_o > p.r_o),
        ),
        VdwRegime::Near => (p.barrier() + vdw_near_coefficient() / p.z_o, !(p.z_o < p.r_o)),
    };
    VdwEstimate {
        value,
        regime_mismatch,
    }
}

/// Coupling of the particle to a surface corrugation of wavenumber `q`:
/// `-(sqrt 2 pi^2 / 3) r^3 g (q / Z)^2 K_2(q Z) cos(q X)`.
pub fn surface_coupling(p: &ParticleMirror) -> Result<f64> {
    let qz = p.q * p.z_o;
    if !(qz > 0.0) {
        return Err(Error::Domain {
            function: "surface_coupling",
            x: qz,
        });
    }
    let k2 = bessel_k2(qz)?;
    let prefactor = 2f64.sqrt() * PI * PI / 3.0;
    Ok(-prefactor * p.r_o.powi(3) * p.g_o * (p.q / p.z_o).powi(2) * k2 * (p.q * p.x_o).cos())
}

/// Rayleigh rate `(8 pi / 3) ((eps - 1)/(eps + 2))^2 r^6 |q|^4`.
pub fn rayleigh_rate(p: &ParticleMirror, q_mag: f64) -> Result<f64> {
    positive("q_mag", q_mag)?;
    if p.epsilon == -2.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: p.epsilon,
            reason: "Clausius-Mossotti factor has a pole at -2",
        });
    }
    let cm = if p.epsilon.is_infinite() {
        1.0
    } else {
        (p.epsilon - 1.0) / (p.epsilon + 2.0)
    };
    Ok(8.0 * PI / 3.0 * cm * cm * p.r_o.powi(6) * q_mag.powi(4))
}

//! Decoherence functionals of the interferometer.
//!
//! In the dipole form every piece of the current difference is a scalar
//! `c(omega)` times the velocity bracket `B(q)`, and `B` scales as `1/omega`.
//! The functional therefore factorizes exactly:
//!
//! ```text
//! Gamma = 1/(4 (2 pi)^3) * int d omega |c(omega)|^2 / omega * I_n
//! ```
//!
//! with `I_n` the sphere integral of the transverse bilinear of `B` at unit
//! frequency. Both factors are evaluated by quadrature from the current
//! code; the closed forms live in [`ClosedForms`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::currents::{vertex_coefficients, vertex_times, velocity_bracket, DipoleCoefficients};
use crate::error::{Error, Result};
use crate::kinematics::{ComplexFourVector, InterferometerGeometry, PhotonMomentum};
use crate::numerics::special::{atanh_over_x_minus_one, cin};
use crate::numerics::{freq_integrate, sphere_integrate, Estimate, QuadratureSpec};

/// `1 / (4 (2 pi)^3)`: phase-space measure times the one-half of `Gamma`.
pub const PREFACTOR: f64 = 1.0 / (32.0 * PI * PI * PI);

/// Frequency window and optional bath temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSet {
    pub lambda_ir: f64,
    pub omega_uv: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl CutoffSet {
    pub fn new(lambda_ir: f64, omega_uv: f64, beta: Option<f64>) -> Result<Self> {
        let cut = Self {
            lambda_ir,
            omega_uv,
            beta,
        };
        cut.validate()?;
        Ok(cut)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_ir >= 0.0) || !self.lambda_ir.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda_ir",
                value: self.lambda_ir,
                reason: "infrared cutoff must be non-negative",
            });
        }
        if !(self.omega_uv > self.lambda_ir) || !self.omega_uv.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega_uv",
                value: self.omega_uv,
                reason: "ultraviolet cutoff must exceed the infrared cutoff",
            });
        }
        if let Some(beta) = self.beta {
            if !(beta > 0.0) || beta.is_nan() {
                return Err(Error::InvalidParameter {
                    name: "beta",
                    value: beta,
                    reason: "inverse temperature must be positive",
                });
            }
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda_ir: f64) -> Result<Self> {
        Self::new(lambda_ir, self.omega_uv, self.beta)
    }

    /// `coth(beta omega / 2)`, or 1 at zero temperature.
    pub fn thermal_weight(&self, omega: f64) -> f64 {
        match self.beta {
            None => 1.0,
            Some(beta) => {
                let x = 0.5 * beta * omega;
                if x > 20.0 {
                    // tanh(20) rounds to 1 within 1e-17.
                    1.0
                } else {
                    1.0 / x.tanh()
                }
            }
        }
    }
}

/// Named functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Full,
    Dressed,
    Sub,
    Hard,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Full, Variant::Dressed, Variant::Sub, Variant::Hard];

    pub fn selection(self) -> CurrentSelection {
        match self {
            Variant::Full => CurrentSelection::FULL,
            Variant::Dressed => CurrentSelection::DRESSED,
            Variant::Sub => CurrentSelection::SUB,
            Variant::Hard => CurrentSelection::HARD,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Dressed => "dressed",
            Variant::Sub => "sub",
            Variant::Hard => "hard",
        }
    }
}

/// Which pieces of the current difference couple to the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurrentSelection {
    pub div: bool,
    pub sub: bool,
    pub hard: bool,
}

impl CurrentSelection {
    pub const FULL: Self = Self {
        div: true,
        sub: true,
        hard: true,
    };
    /// Dressing removes the leading soft current and nothing else.
    pub const DRESSED: Self = Self {
        div: false,
        sub: true,
        hard: true,
    };
    pub const SUB: Self = Self {
        div: false,
        sub: true,
        hard: false,
    };
    pub const HARD: Self = Self {
        div: false,
        sub: false,
        hard: true,
    };

    pub fn combine(&self, c: &DipoleCoefficients) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        if self.div {
            total += c.div;
        }
        if self.sub {
            total += c.sub;
        }
        if self.hard {
            total += c.hard;
        }
        total
    }
}

/// Transverse bilinear `P_jk dj^j conj(dj^k)` with `P = 1 - n n`.
pub fn gamma_kernel(dj: &ComplexFourVector, q: &PhotonMomentum) -> f64 {
    let n = q.n_hat();
    let s = dj.spatial();
    let total: f64 = s.iter().map(|c| c.norm_sqr()).sum();
    let along = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
    // Cauchy-Schwarz keeps this non-negative up to rounding.
    (total - along.norm_sqr()).max(0.0)
}

/// Sphere integral of `omega^2 * kernel(B)`, independent of `omega`.
pub fn angular_integral(g: &InterferometerGeometry, spec: &QuadratureSpec) -> Result<Estimate> {
    if g.l == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    sphere_integrate(
        |n| {
            // Unit frequency; the directions come from the sphere rule so
            // they are unit vectors by construction.
            let q = PhotonMomentum::new(1.0, n).expect("sphere node is a unit vector");
            let b = velocity_bracket(g, &q).to_complex();
            gamma_kernel(&b, &q)
        },
        spec,
    )
}

fn frequency_integral<F>(
    g: &InterferometerGeometry,
    cut: &CutoffSet,
    spec: &QuadratureSpec,
    weight: F,
) -> Result<Estimate>
where
    F: Fn(&DipoleCoefficients) -> f64 + Sync,
{
    let vertices = vertex_times(g);
    let charge = g.charge;
    freq_integrate(
        |omega| {
            let c = vertex_coefficients(&vertices, charge, omega);
            weight(&c) * cut.thermal_weight(omega) / omega
        },
        cut.lambda_ir,
        cut.omega_uv,
        g.tau,
        spec,
    )
}

/// Decoherence functional for any selection of current pieces.
pub fn gamma_functional(
    g: &InterferometerGeometry,
    cut: &CutoffSet,
    spec: &QuadratureSpec,
    selection: CurrentSelection,
) -> Result<Estimate> {
    cut.validate()?;
    if selection.div && cut.lambda_ir == 0.0 {
        return Err(Error::InfraredDivergence);
    }
    let angular = angular_integral(g, spec)?;
    if angular.value == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let freq = frequency_integral(g, cut, spec, |c| selection.combine(c).norm_sqr())?;
    Ok(freq.product(&angular).scaled(PREFACTOR))
}

/// Undressed functional. Diverges as `lambda_ir -> 0`, so zero is rejected.
pub fn gamma_full(g: &InterferometerGeometry, cut: &CutoffSet, spec: &QuadratureSpec) -> Result<Estimate> {
    gamma_functional(g, cut, spec, CurrentSelection::FULL)
}

pub fn gamma_dressed(g: &InterferometerGeometry, cut: &CutoffSet, spec: &QuadratureSpec) -> Result<Estimate> {
    gamma_functional(g, cut, spec, CurrentSelection::DRESSED)
}

pub fn gamma_sub(g: &InterferometerGeometry, cut: &CutoffSet, spec: &QuadratureSpec) -> Result<Estimate> {
    gamma_functional(g, cut, spec, CurrentSelection::SUB)
}

pub fn gamma_hard(g: &InterferometerGeometry, cut: &CutoffSet, spec: &QuadratureSpec) -> Result<Estimate> {
    gamma_functional(g, cut, spec, CurrentSelection::HARD)
}

pub fn gamma_variant(
    g: &InterferometerGeometry,
    cut: &CutoffSet,
    spec: &QuadratureSpec,
    variant: Variant,
) -> Result<Estimate> {
    gamma_functional(g, cut, spec, variant.selection())
}

/// Interference term between the sub-leading and hard pieces, so that
/// `dressed = sub + hard + cross`. May be negative.
pub fn gamma_cross(g: &InterferometerGeometry, cut: &CutoffSet, spec: &QuadratureSpec) -> Result<Estimate> {
    cut.validate()?;
    let angular = angular_integral(g, spec)?;
    if angular.value == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let freq = frequency_integral(g, cut, spec, |c| 2.0 * (c.sub * c.hard.conj()).re)?;
    Ok(freq.product(&angular).scaled(PREFACTOR))
}

/// Analytic values for the three-vertex geometry at zero temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForms {
    pub relative_speed: f64,
    /// `8 pi [atanh(v12)/v12 - 1]`.
    pub angular_exact: f64,
    /// `(16 pi / 3) v^2`.
    pub angular_small_v: f64,
    /// `int (5 - 4 cos omega tau) / omega`; absent when `lambda_ir = 0`.
    pub freq_full: Option<f64>,
    /// `int 2 (1 - cos omega tau) / omega`.
    pub freq_dressed: f64,
    /// Leading logarithm `2 ln(Omega tau)` of the above.
    pub freq_dressed_log: f64,
    /// `int omega tau^2`.
    pub freq_sub: f64,
    /// `int (2 - 2 cos x - 2 x sin x + x^2) / omega`, `x = omega tau`.
    pub freq_hard: f64,
    pub gamma_full: Option<f64>,
    pub gamma_dressed: f64,
    pub gamma_sub: f64,
    pub gamma_hard: f64,
    /// `4 e^2 v^2 ln(Omega tau) / (3 pi^2)`.
    pub dressed_asymptote: f64,
    /// `e^2 Omega^2 l^2 / (3 pi^2)`.
    pub sub_asymptote: f64,
    /// `(2 e^2 / 3 pi^2) v^2 [2 ln(Omega tau) + (Omega tau)^2 / 2]`.
    pub hard_asymptote: f64,
    /// Same with the `e^2 / 3 pi^2` prefactor, half of `hard_asymptote`.
    pub hard_asymptote_alt: f64,
    /// Coefficient of `ln(1/lambda)` in the undressed functional.
    pub divergence_coefficient: f64,
}

/// `8 pi [atanh(u)/u - 1]` for relative speed `u`.
pub fn angular_closed_form(relative_speed: f64) -> Result<f64> {
    Ok(8.0 * PI * atanh_over_x_minus_one(relative_speed)?)
}

pub fn closed_forms(g: &InterferometerGeometry, cut: &CutoffSet) -> Result<ClosedForms> {
    let e2 = g.charge * g.charge;
    let v = g.v;
    let a = cut.lambda_ir * g.tau;
    let b = cut.omega_uv * g.tau;
    let relative_speed = g.relative_speed();
    let angular_exact = angular_closed_form(relative_speed)?;
    let angular_small_v = 16.0 * PI / 3.0 * v * v;

    let dressed_cin = cin(b) - cin(a);
    let freq_full = (a > 0.0).then(|| (b / a).ln() + 4.0 * dressed_cin);
    let freq_dressed = 2.0 * dressed_cin;
    let freq_sub = 0.5 * (b * b - a * a);
    let freq_hard = 2.0 * dressed_cin + 2.0 * (b.cos() - a.cos()) + freq_sub;

    let scale = e2 * angular_exact / (8.0 * PI * PI * PI);
    let log_b = b.ln();
    let pi2 = PI * PI;
    Ok(ClosedForms {
        relative_speed,
        angular_exact,
        angular_small_v,
        freq_full,
        freq_dressed,
        freq_dressed_log: 2.0 * log_b,
        freq_sub,
        freq_hard,
        gamma_full: freq_full.map(|f| 0.25 * scale * f),
        gamma_dressed: scale * freq_dressed,
        gamma_sub: scale * freq_sub,
        gamma_hard: scale * freq_hard,
        dressed_asymptote: 4.0 * e2 * v * v * log_b / (3.0 * pi2),
        sub_asymptote: e2 * (cut.omega_uv * g.l).powi(2) / (3.0 * pi2),
        hard_asymptote: 2.0 * e2 / (3.0 * pi2) * v * v * (2.0 * log_b + 0.5 * b * b),
        hard_asymptote_alt: e2 / (3.0 * pi2) * v * v * (2.0 * log_b + 0.5 * b * b),
        divergence_coefficient: PREFACTOR * e2 * angular_exact,
    })
}

/// Least-squares fit `Gamma = a + b ln(1/lambda)` over a geometric ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Set when `r_squared < 1 - 1e-6`.
    pub poor_fit: bool,
    pub lambdas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub converged: bool,
}

/// Rungs of the ladder `lambda_k = lambda_ir / 2^k`.
pub const LADDER_RUNGS: usize = 9;

/// Fits the `ln(1/lambda)` coefficient of the undressed functional.
pub fn divergence_coefficient(
    g: &InterferometerGeometry,
    cut: &CutoffSet,
    spec: &QuadratureSpec,
) -> Result<DivergenceFit> {
    divergence_fit(g, cut, spec, CurrentSelection::FULL)
}

/// Same fit for any selection. Each rung adds the integral over
/// `[lambda_{k+1}, lambda_k]` to the previous one.
pub fn divergence_fit(
    g: &InterferometerGeometry,
    cut: &CutoffSet,
    spec: &QuadratureSpec,
    selection: CurrentSelection,
) -> Result<DivergenceFit> {
    cut.validate()?;
    if cut.lambda_ir == 0.0 {
        return Err(Error::InvalidParameter {
            name: "lambda_ir",
            value: 0.0,
            reason: "the divergence fit needs a positive infrared cutoff",
        });
    }
    let lambdas: Vec<f64> = (0..LADDER_RUNGS)
        .map(|k| cut.lambda_ir / f64::powi(2.0, k as i32))
        .collect();
    let mut gammas = Vec::with_capacity(LADDER_RUNGS);
    let mut total = gamma_functional(g, cut, spec, selection)?;
    let mut converged = total.converged;
    gammas.push(total.value);
    let angular = angular_integral(g, spec)?;
    for pair in lambdas.windows(2) {
        let rung = CutoffSet::new(pair[1], pair[0], cut.beta)?;
        let piece = frequency_integral(g, &rung, spec, |c| selection.combine(c).norm_sqr())?
            .product(&angular)
            .scaled(PREFACTOR);
        converged &= piece.converged;
        total.value += piece.value;
        gammas.push(total.value);
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| -l.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &gammas);
    Ok(DivergenceFit {
        slope,
        intercept,
        r_squared,
        poor_fit: !(r_squared >= 1.0 - 1e-6),
        lambdas,
        gammas,
        converged,
    })
}

/// Ordinary least squares `y = intercept + slope x`; returns `(slope, intercept, R^2)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r_squared)
}

/// Quadrature and closed-form values for a set of variants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoherenceReport {
    pub gamma_full: Option<Estimate>,
    pub gamma_dressed: Option<Estimate>,
    pub gamma_sub: Option<Estimate>,
    pub gamma_hard: Option<Estimate>,
    pub angular: Estimate,
    pub closed: ClosedForms,
}

impl DecoherenceReport {
    pub fn compute(
        g: &InterferometerGeometry,
        cut: &CutoffSet,
        spec: &QuadratureSpec,
        variants: &[Variant],
    ) -> Result<Self> {
        let run = |variant: Variant| -> Result<Option<Estimate>> {
            if variants.contains(&variant) {
                gamma_variant(g, cut, spec, variant).map(Some)
            } else {
                Ok(None)
            }
        };
        Ok(Self {
            gamma_full: run(Variant::Full)?,
            gamma_dressed: run(Variant::Dressed)?,
            gamma_sub: run(Variant::Sub)?,
            gamma_hard: run(Variant::Hard)?,
            angular: angular_integral(g, spec)?,
            closed: closed_forms(g, cut)?,
        })
    }

    pub fn get(&self, variant: Variant) -> Option<&Estimate> {
        match variant {
            Variant::Full => self.gamma_full.as_ref(),
            Variant::Dressed => self.gamma_dressed.as_ref(),
            Variant::Sub => self.gamma_sub.as_ref(),
            Variant::Hard => self.gamma_hard.as_ref(),
        }
    }

    pub fn converged(&self) -> bool {
        Variant::ALL
            .iter()
            .filter_map(|v| self.get(*v))
            .all(|e| e.converged)
    }

    /// Largest error gauge over the computed variants.
    pub fn max_error(&self) -> f64 {
        Variant::ALL
            .iter()
            .filter_map(|v| self.get(*v))
            .map(|e| e.error)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{coupling, FINE_STRUCTURE_ROUNDED};
    use crate::currents::{delta_current, delta_current_parts, CurrentMode};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn geometry(v: f64, tau: f64) -> InterferometerGeometry {
        let e = coupling(FINE_STRUCTURE_ROUNDED, 1.0);
        InterferometerGeometry::new(v * tau, tau, e).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn kernel_examples() {
        let q = PhotonMomentum::new(2.0, [0.0, 0.0, 1.0]).unwrap();
        let c = Complex64::new(0.3, -0.4);
        let z = Complex64::new(0.0, 0.0);
        let transverse = ComplexFourVector::new(z, c, z, z);
        assert!((gamma_kernel(&transverse, &q) - 0.25).abs() < 1e-15);
        let longitudinal = ComplexFourVector::new(c, z, z, c);
        assert_eq!(gamma_kernel(&longitudinal, &q), 0.0);
    }

    #[test]
    fn kernel_gauge_invariant() {
        let g = geometry(0.2, 1.0);
        let q = PhotonMomentum::along(1.3, [0.2, 0.5, -0.7]).unwrap();
        let dj = delta_current(&g, &q, CurrentMode::Exact);
        let shift = Complex64::new(0.7, -1.9);
        let shifted = dj + q.four_vector() * shift;
        let a = gamma_kernel(&dj, &q);
        assert!(rel(gamma_kernel(&shifted, &q), a) < 1e-12);
    }

    #[test]
    fn angular_matches_closed_form() {
        for v in [0.01, 0.1, 0.5] {
            let g = geometry(v, 1.0);
            let num = angular_integral(&g, &spec()).unwrap();
            let exact = angular_closed_form(g.relative_speed()).unwrap();
            assert!(rel(num.value, exact) < 1e-9, "v = {v}: {} vs {exact}", num.value);
        }
    }

    #[test]
    fn factorization_matches_direct_bilinear() {
        // Sphere integral of the actual current bilinear at a few frequencies.
        let g = geometry(0.05, 1.0);
        let angular = angular_integral(&g, &spec()).unwrap().value;
        for omega in [0.3, 2.0, 9.0] {
            let direct = sphere_integrate(
                |n| {
                    let q = PhotonMomentum::new(omega, n).unwrap();
                    gamma_kernel(&delta_current_parts(&g, &q).dressed(), &q)
                },
                &spec(),
            )
            .unwrap()
            .value;
            let c = crate::currents::dipole_coefficients(&g, omega);
            let factored = CurrentSelection::DRESSED.combine(&c).norm_sqr() * angular / (omega * omega);
            assert!(rel(direct, factored) < 1e-10);
        }
    }

    #[test]
    fn closed_form_values() {
        let g = geometry(0.1, 1.0);
        assert!(rel(g.relative_speed(), 0.141_067_359_796_658_844) < 1e-14);
        let g = geometry(0.01, 1.0);
        let cut = CutoffSet::new(0.0, 1e4, None).unwrap();
        let c = closed_forms(&g, &cut).unwrap();
        assert!(rel(c.angular_exact, 0.001_675_633_376_657_892_54) < 1e-10);
        assert!(rel(c.angular_small_v, 0.001_675_516_081_914_556_39) < 1e-12);
        assert!(rel(c.gamma_sub, 30.973_094_127_379_8) < 1e-10);
        assert!(rel(c.sub_asymptote, 30.970_926_003_268_3) < 1e-10);
        assert!((c.hard_asymptote / c.hard_asymptote_alt - 2.0).abs() < 1e-15);
        assert!(c.freq_full.is_none() && c.gamma_full.is_none());
        let g0 = InterferometerGeometry::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(closed_forms(&g0, &cut).unwrap().angular_exact, 0.0);
    }

    #[test]
    fn small_v_angular_limit() {
        let mut last = f64::INFINITY;
        for v in [0.2, 0.1, 0.05, 0.025] {
            let c = closed_forms(&geometry(v, 1.0), &CutoffSet::new(0.0, 1.0, None).unwrap()).unwrap();
            let dev = (c.angular_exact / c.angular_small_v - 1.0).abs();
            assert!(dev < v * v && dev < last);
            last = dev;
        }
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let g = geometry(0.05, 2.0);
        for (lambda, omega) in [(0.0, 50.0), (0.01, 50.0), (0.3, 7.0)] {
            let cut = CutoffSet::new(lambda, omega, None).unwrap();
            let c = closed_forms(&g, &cut).unwrap();
            let pairs = [
                (gamma_dressed(&g, &cut, &spec()).unwrap(), c.gamma_dressed),
                (gamma_sub(&g, &cut, &spec()).unwrap(), c.gamma_sub),
                (gamma_hard(&g, &cut, &spec()).unwrap(), c.gamma_hard),
            ];
            for (num, closed) in pairs {
                assert!(num.converged);
                assert!(rel(num.value, closed) < 1e-8, "{} vs {closed}", num.value);
            }
            if let Some(full) = c.gamma_full {
                assert!(rel(gamma_full(&g, &cut, &spec()).unwrap().value, full) < 1e-8);
            }
        }
    }

    #[test]
    fn full_rejects_zero_cutoff() {
        let g = geometry(0.01, 1.0);
        let cut = CutoffSet::new(0.0, 10.0, None).unwrap();
        assert_eq!(gamma_full(&g, &cut, &spec()), Err(Error::InfraredDivergence));
        assert!(gamma_dressed(&g, &cut, &spec()).is_ok());
    }

    #[test]
    fn zero_separation_vanishes() {
        let g = InterferometerGeometry::new(0.0, 1.0, 1.0).unwrap();
        let cut = CutoffSet::new(0.1, 10.0, None).unwrap();
        for v in Variant::ALL {
            assert_eq!(gamma_variant(&g, &cut, &spec(), v).unwrap().value, 0.0);
        }
    }

    #[test]
    fn dressing_is_dropping_div() {
        let g = geometry(0.02, 1.0);
        let cut = CutoffSet::new(0.01, 30.0, Some(3.0)).unwrap();
        let no_div = CurrentSelection {
            div: false,
            ..CurrentSelection::FULL
        };
        let a = gamma_functional(&g, &cut, &spec(), no_div).unwrap();
        let b = gamma_dressed(&g, &cut, &spec()).unwrap();
        assert_eq!(a, b);
        assert!(gamma_full(&g, &cut, &spec()).unwrap().value >= b.value);
    }

    #[test]
    fn cross_term_completes_dressed() {
        let g = geometry(0.03, 1.0);
        let cut = CutoffSet::new(0.0, 40.0, None).unwrap();
        let s = spec();
        let dressed = gamma_dressed(&g, &cut, &s).unwrap().value;
        let parts = gamma_sub(&g, &cut, &s).unwrap().value
            + gamma_hard(&g, &cut, &s).unwrap().value
            + gamma_cross(&g, &cut, &s).unwrap().value;
        assert!(rel(parts, dressed) < 1e-8);
    }

    #[test]
    fn thermal_ladder_and_cold_limit() {
        let g = geometry(0.01, 1.0);
        let cold = CutoffSet::new(0.0, 100.0, None).unwrap();
        let t0 = gamma_dressed(&g, &cold, &spec()).unwrap().value;
        let frozen = CutoffSet::new(0.0, 100.0, Some(1e9)).unwrap();
        assert!(rel(gamma_dressed(&g, &frozen, &spec()).unwrap().value, t0) < 1e-6);
        let mut last = f64::INFINITY;
        for beta in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let cut = CutoffSet::new(0.0, 100.0, Some(beta)).unwrap();
            let value = gamma_dressed(&g, &cut, &spec()).unwrap().value;
            assert!(value <= last && value >= t0 * (1.0 - 1e-9));
            last = value;
        }
    }

    #[test]
    fn divergence_fit_coefficients() {
        let g = geometry(0.01, 1.0);
        let cut = CutoffSet::new(1e-3, 20.0, None).unwrap();
        let fit = divergence_coefficient(&g, &cut, &spec()).unwrap();
        let oracle = closed_forms(&g, &cut).unwrap().divergence_coefficient;
        assert!(rel(fit.slope, oracle) < 1e-3, "{} vs {oracle}", fit.slope);
        assert!(!fit.poor_fit);
        let dressed = divergence_fit(&g, &cut, &spec(), CurrentSelection::DRESSED).unwrap();
        assert!(dressed.slope.abs() <= 1e-4 * g.charge.powi(2) * g.v * g.v);
        let half = divergence_coefficient(&geometry(0.005, 1.0), &cut, &spec()).unwrap();
        assert!((fit.slope / half.slope - 4.0).abs() < 0.04);
    }

    #[test]
    fn halving_lambda_adds_log_two() {
        let g = geometry(0.01, 1.0);
        let s = spec();
        let at = |l| gamma_full(&g, &CutoffSet::new(l, 10.0, None).unwrap(), &s).unwrap().value;
        let step = at(5e-4) - at(1e-3);
        let oracle = closed_forms(&g, &CutoffSet::new(1e-3, 10.0, None).unwrap()).unwrap().divergence_coefficient
            * 2f64.ln();
        assert!(rel(step, oracle) < 5e-3);
    }

    #[test]
    fn cutoff_validation() {
        assert!(CutoffSet::new(-1.0, 1.0, None).is_err());
        assert!(CutoffSet::new(2.0, 1.0, None).is_err());
        assert!(CutoffSet::new(0.0, 1.0, Some(0.0)).is_err());
        assert!(CutoffSet::new(0.0, 1.0, Some(1.0)).is_ok());
    }

    #[test]
    fn linear_fit_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.5 * x).collect();
        let (m, c, r2) = linear_fit(&xs, &ys);
        assert!((m + 0.5).abs() < 1e-14 && (c - 2.5).abs() < 1e-14 && (r2 - 1.0).abs() < 1e-14);
    }
}

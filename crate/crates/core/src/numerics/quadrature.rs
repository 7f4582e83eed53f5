//! Gauss-Legendre based quadrature on the unit sphere and over frequency.
//!
//! Every routine evaluates its rule twice (base grid and doubled grid) and
//! returns the doubled-grid value together with the difference as an error
//! gauge. Sums are accumulated pairwise in a fixed order so results do not
//! depend on the thread count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes per frequency panel.
pub const PANEL_ORDER: usize = 12;
/// Upper bound on base-grid frequency panels.
pub const MAX_PANELS: usize = 40_000_000;
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub panels_per_period: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_theta: 48,
            n_phi: 96,
            panels_per_period: 4,
            abs_tol: 1e-300,
            rel_tol: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value: usize, reason| {
            Err(Error::InvalidParameter {
                name,
                value: value as f64,
                reason,
            })
        };
        if self.n_theta < 8 {
            return bad("n_theta", self.n_theta, "must be at least 8");
        }
        if self.n_phi < 16 {
            return bad("n_phi", self.n_phi, "must be at least 16");
        }
        if self.panels_per_period < 4 {
            return bad("panels_per_period", self.panels_per_period, "must be at least 4");
        }
        for (name, value) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "tolerance must be positive",
                });
            }
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature value with its grid-doubling error gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            converged: true,
        }
    }

    fn from_pair(coarse: f64, fine: f64, spec: &QuadratureSpec) -> Self {
        let error = (fine - coarse).abs();
        Self {
            value: fine,
            error,
            converged: error <= spec.tolerance_for(fine),
        }
    }

    /// Product of two independent estimates with first-order error propagation.
    pub fn product(&self, other: &Estimate) -> Estimate {
        Estimate {
            value: self.value * other.value,
            error: self.value.abs() * other.error + other.value.abs() * self.error,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(&self, factor: f64) -> Estimate {
        Estimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
            converged: self.converged,
        }
    }
}

/// Sum with pairwise (cascade) accumulation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// `oint dS^2(n) f(n)` on a Gauss-Legendre (in `cos theta`) by trapezoid
/// (in `phi`) product grid, then again with both sizes doubled.
pub fn sphere_integrate<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    spec.validate()?;
    let coarse = sphere_rule(&f, spec.n_theta, spec.n_phi);
    let fine = sphere_rule(&f, 2 * spec.n_theta, 2 * spec.n_phi);
    Ok(Estimate::from_pair(coarse, fine, spec))
}

fn sphere_rule<F>(f: &F, n_theta: usize, n_phi: usize) -> f64
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    let rule = GaussLegendre::new(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let trig: Vec<(f64, f64)> = (0..n_phi).map(|j| (j as f64 * dphi).sin_cos()).collect();
    let rows: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&mu, &w)| {
            let st = (1.0 - mu * mu).max(0.0).sqrt();
            let ring: Vec<f64> = trig.iter().map(|&(sp, cp)| f([st * cp, st * sp, mu])).collect();
            w * dphi * pairwise_sum(&ring)
        })
        .collect();
    pairwise_sum(&rows)
}

/// Panel layout for a frequency interval: geometric panels toward a positive
/// lower limit (for `1/omega`-type integrands), then uniform panels of
/// width `2 pi / (tau * panels_per_period)`.
struct PanelLayout {
    graded: Vec<(f64, f64)>,
    uniform_start: f64,
    width: f64,
    n_uniform: usize,
    hi: f64,
}

impl PanelLayout {
    fn new(lo: f64, hi: f64, tau: f64, panels_per_period: usize) -> Result<Self> {
        let width = 2.0 * PI / (tau * panels_per_period as f64);
        let mut graded = Vec::new();
        let mut edge = lo;
        if lo > 0.0 {
            while edge < width && edge < hi {
                let next = (2.0 * edge).min(hi);
                graded.push((edge, next));
                edge = next;
            }
        }
        let span = (hi - edge).max(0.0);
        let n_uniform = (span / width).ceil() as usize;
        let total = n_uniform + graded.len();
        if total > MAX_PANELS {
            return Err(Error::TooManyPanels {
                panels: total,
                limit: MAX_PANELS,
            });
        }
        Ok(Self {
            graded,
            uniform_start: edge,
            width,
            n_uniform,
            hi,
        })
    }

    fn len(&self) -> usize {
        self.graded.len() + self.n_uniform
    }

    fn panel(&self, k: usize) -> (f64, f64) {
        if k < self.graded.len() {
            return self.graded[k];
        }
        let j = (k - self.graded.len()) as f64;
        let a = self.uniform_start + j * self.width;
        let b = (self.uniform_start + (j + 1.0) * self.width).min(self.hi);
        (a, b)
    }
}

fn panel_rule<G>(g: &G, layout: &PanelLayout, rule: &GaussLegendre, split: usize) -> f64
where
    G: Fn(f64) -> f64 + Sync,
{
    let n = layout.len();
    let chunks: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(n);
            let mut pieces = Vec::with_capacity((end - c * CHUNK) * split);
            for k in c * CHUNK..end {
                let (a, b) = layout.panel(k);
                let h = (b - a) / split as f64;
                for s in 0..split {
                    let lo = a + s as f64 * h;
                    let hi = if s + 1 == split { b } else { a + (s + 1) as f64 * h };
                    pieces.push(rule.integrate(lo, hi, g));
                }
            }
            pairwise_sum(&pieces)
        })
        .collect();
    pairwise_sum(&chunks)
}

/// `int_lo^hi g(omega) d omega` with panels aligned to the oscillation
/// period `2 pi / tau`. Gauss-Legendre nodes are interior, so `g` is never
/// evaluated at `lo = 0`.
pub fn freq_integrate<G>(g: G, lo: f64, hi: f64, tau: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    G: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    if !(lo >= 0.0) || !lo.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lo",
            value: lo,
            reason: "lower frequency limit must be non-negative",
        });
    }
    if !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            name: "hi",
            value: hi,
            reason: "upper frequency limit must exceed the lower one",
        });
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "oscillation time scale must be positive",
        });
    }
    let layout = PanelLayout::new(lo, hi, tau, spec.panels_per_period)?;
    let rule = GaussLegendre::new(PANEL_ORDER);
    let coarse = panel_rule(&g, &layout, &rule, 1);
    let fine = panel_rule(&g, &layout, &rule, 2);
    Ok(Estimate::from_pair(coarse, fine, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{cin, cosine_integral};

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::new(7);
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        // Degree 13 is the highest exact degree.
        let got = rule.integrate(0.0, 1.0, |x| x.powi(13));
        assert!((got - 1.0 / 14.0).abs() < 1e-15);
        let rule = GaussLegendre::new(96);
        assert!((rule.integrate(0.0, PI, f64::sin) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_constant_and_odd() {
        let spec = QuadratureSpec::default();
        let area = sphere_integrate(|_| 1.0, &spec).unwrap();
        assert!((area.value - 4.0 * PI).abs() < 1e-13);
        let odd = sphere_integrate(|n| n[2], &spec).unwrap();
        assert!(odd.value.abs() < 1e-14);
        let odd_x = sphere_integrate(|n| n[0] * n[1] * n[1], &spec).unwrap();
        assert!(odd_x.value.abs() < 1e-14);
    }

    #[test]
    fn sphere_angular_identity_half_speed() {
        let spec = QuadratureSpec::default();
        let want = 13.805_569_180_892_810_645_7;
        for dir in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.6, 0.0, 0.8]] {
            let v = dir.map(|c| 0.5 * c);
            let est =
                sphere_integrate(|n| 1.0 / (1.0 - n[0] * v[0] - n[1] * v[1] - n[2] * v[2]), &spec)
                    .unwrap();
            assert!(((est.value - want) / want).abs() < 1e-12, "{dir:?}: {}", est.value);
            assert!(est.converged);
        }
    }

    #[test]
    fn freq_polynomial() {
        let spec = QuadratureSpec::default();
        let tau = 3.0;
        let omega_max = 7.0;
        let est = freq_integrate(|w| w * tau * tau, 0.0, omega_max, tau, &spec).unwrap();
        let want = 0.5 * omega_max * omega_max * tau * tau;
        assert!(((est.value - want) / want).abs() < 1e-12);
        let zero = freq_integrate(|_| 0.0, 0.0, 1.0, 1.0, &spec).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(zero.converged);
    }

    #[test]
    fn freq_cosine_integral_identity() {
        let spec = QuadratureSpec::default();
        let tau = 1.0;
        let est = freq_integrate(
            |w| 2.0 * crate::numerics::special::one_minus_cos(w * tau) / w,
            0.0,
            10.0,
            tau,
            &spec,
        )
        .unwrap();
        let want = 2.0 * (crate::constants::EULER_GAMMA + 10.0_f64.ln() - cosine_integral(10.0).unwrap());
        assert!((want - 5.850_514_381_800_067_8).abs() < 1e-13);
        assert!(((est.value - want) / want).abs() < 1e-12);
    }

    #[test]
    fn freq_graded_log_integral() {
        // int_lambda^1 dw / w = ln(1/lambda) with panels graded toward lambda.
        let spec = QuadratureSpec::default();
        for lambda in [1e-3, 1e-7, 1e-12] {
            let est = freq_integrate(|w| 1.0 / w, lambda, 1.0, 1.0, &spec).unwrap();
            let want = -f64::ln(lambda);
            assert!(((est.value - want) / want).abs() < 1e-13, "{lambda}");
        }
        let diff = freq_integrate(|w| crate::numerics::special::one_minus_cos(w) / w, 0.5, 50.0, 1.0, &spec)
            .unwrap();
        let want = cin(50.0) - cin(0.5);
        assert!((diff.value - want).abs() < 1e-12);
    }

    #[test]
    fn freq_rejects_bad_interval() {
        let spec = QuadratureSpec::default();
        assert!(freq_integrate(|w| w, 1.0, 1.0, 1.0, &spec).is_err());
        assert!(freq_integrate(|w| w, -1.0, 1.0, 1.0, &spec).is_err());
        assert!(freq_integrate(|w| w, 0.0, 1e12, 1e3, &spec).is_err());
    }

    #[test]
    fn spec_validation() {
        let mut spec = QuadratureSpec::default();
        assert!(spec.validate().is_ok());
        spec.n_theta = 4;
        assert!(spec.validate().is_err());
        let spec = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn nonconvergence_is_flagged() {
        // Sharply peaked integrand on a coarse grid.
        let spec = QuadratureSpec {
            n_theta: 8,
            n_phi: 16,
            ..QuadratureSpec::default()
        };
        let est = sphere_integrate(|n| 1.0 / (1.0 - 0.999 * n[2]), &spec).unwrap();
        assert!(!est.converged);
        assert!(est.error > 0.0);
    }
}

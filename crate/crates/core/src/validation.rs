//! The acceptance suite: eleven named checks with pinned tolerances.
//!
//! Shared by the `acceptance` test target and the command-line `check`
//! subcommand. Check identifiers are stable so CI can grep for them.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::constants::{coupling, EULER_GAMMA, FINE_STRUCTURE_ROUNDED};
use crate::currents::{current_fourier, endpoint_soft_expansion, soft_decompose};
use crate::decoherence::{
    closed_forms, divergence_fit, gamma_variant, linear_fit, CurrentSelection, CutoffSet, Variant,
};
use crate::error::Result;
use crate::experiment::{
    gamma_dressed_2slit, rayleigh_rate, surface_coupling, ParticleMirror, SlitGeometry,
};
use crate::kinematics::{
    four_velocity, ComplexFourVector, FourVector, InterferometerGeometry, PhotonMomentum, Worldline,
};
use crate::numerics::special::{atanh_over_x, one_minus_cos};
use crate::numerics::{
    bessel_k0, bessel_k1, bessel_k2, cosine_integral, freq_integrate, sphere_integrate, QuadratureSpec,
};
use crate::whichpath::summarize;

/// How a check contracts `q` with a current. `EuclideanFault` is the
/// negative control: it drops the metric signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Contraction {
    #[default]
    Minkowski,
    EuclideanFault,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub quadrature: QuadratureSpec,
    pub contraction: Contraction,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            quadrature: QuadratureSpec::default(),
            contraction: Contraction::Minkowski,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(id: &'static str, title: &'static str, result: Result<(bool, String)>) -> Self {
        let (passed, detail) = match result {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        Self {
            id,
            title,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {:<24} {}: {}", self.id, self.title, self.detail)
    }
}

type CheckFn = fn(&SuiteOptions) -> Result<(bool, String)>;

/// `(id, title, check)` in suite order.
pub const CHECKS: [(&str, &str, CheckFn); 11] = [
    ("angular_identity", "sphere quadrature vs (4pi/v) atanh v", angular_identity),
    ("frequency_identity", "panel quadrature vs cosine integral", frequency_identity),
    ("dressed_asymptote", "dressed functional vs log law", dressed_asymptote),
    ("subleading_law", "sub-leading functional vs (Omega l)^2 law", subleading_law),
    ("hard_adjudication", "hard functional normalization", hard_adjudication),
    ("conservation_scaling", "current conservation and soft scaling", conservation_scaling),
    ("boundary_soft_theorem", "endpoint soft expansion residual", boundary_soft_theorem),
    ("ir_divergence", "ln(1/lambda) coefficient", ir_divergence),
    ("duality", "D^2 + V^2 = 1", duality),
    ("finite_temperature", "thermal ordering and cold limit", finite_temperature),
    ("experiment_estimators", "slit and mirror estimators", experiment_estimators),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

pub fn run_check(id: &str, options: &SuiteOptions) -> Option<CheckOutcome> {
    CHECKS
        .iter()
        .find(|c| c.0 == id)
        .map(|(id, title, f)| CheckOutcome::from_result(id, title, f(options)))
}

pub fn run_suite(options: &SuiteOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(id, title, f)| CheckOutcome::from_result(id, title, f(options)))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn reference_coupling() -> f64 {
    coupling(FINE_STRUCTURE_ROUNDED, 1.0)
}

fn geometry(v: f64, tau: f64) -> Result<InterferometerGeometry> {
    InterferometerGeometry::new(v * tau, tau, reference_coupling())
}

fn angular_identity(o: &SuiteOptions) -> Result<(bool, String)> {
    let d = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let mut worst: f64 = 0.0;
    for v in [0.1, 0.3, 0.6, 0.9] {
        let num = sphere_integrate(
            |n| 1.0 / (1.0 - v * (n[0] * d[0] + n[1] * d[1] + n[2] * d[2])),
            &o.quadrature,
        )?;
        let exact = 4.0 * PI * atanh_over_x(v)?;
        worst = worst.max(rel(num.value, exact));
    }
    Ok((worst <= 1e-8, format!("max rel err {worst:.3e} (tol 1e-8)")))
}

fn frequency_identity(o: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for x in [1.0, 10.0, 1e3, 1e6] {
        let num = freq_integrate(|w| 2.0 * one_minus_cos(w) / w, 0.0, x, 1.0, &o.quadrature)?;
        let exact = 2.0 * (EULER_GAMMA + x.ln() - cosine_integral(x)?);
        worst = worst.max(rel(num.value, exact));
    }
    Ok((worst <= 1e-8, format!("max rel err {worst:.3e} (tol 1e-8)")))
}

fn dressed_asymptote(o: &SuiteOptions) -> Result<(bool, String)> {
    let g = geometry(0.01, 1.0)?;
    let mut deviations = Vec::new();
    let mut worst_closed: f64 = 0.0;
    let mut last_ratio = 0.0;
    for omega_tau in [1e3, 1e4, 1e5, 1e6] {
        let cut = CutoffSet::new(0.0, omega_tau, None)?;
        let num = gamma_variant(&g, &cut, &o.quadrature, Variant::Dressed)?;
        let closed = closed_forms(&g, &cut)?;
        last_ratio = num.value / closed.dressed_asymptote;
        deviations.push((last_ratio - 1.0).abs());
        worst_closed = worst_closed.max(rel(num.value, closed.gamma_dressed));
    }
    let monotone = deviations.windows(2).all(|w| w[1] < w[0]);
    let in_band = (0.94..=1.06).contains(&last_ratio);
    Ok((
        in_band && monotone && worst_closed <= 1e-6,
        format!(
            "ratio at 1e6 {last_ratio:.5} (band [0.94, 1.06]), deviations {} monotone={monotone}, closed-form rel err {worst_closed:.3e} (tol 1e-6)",
            deviations.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>().join("/")
        ),
    ))
}

fn subleading_law(o: &SuiteOptions) -> Result<(bool, String)> {
    let omega = 100.0;
    let sub = |l: f64, tau: f64| -> Result<(f64, f64)> {
        let g = InterferometerGeometry::new(l, tau, reference_coupling())?;
        let cut = CutoffSet::new(0.0, omega, None)?;
        let value = gamma_variant(&g, &cut, &o.quadrature, Variant::Sub)?.value;
        let c = closed_forms(&g, &cut)?;
        Ok((value, c.angular_exact / c.angular_small_v))
    };

    let mut law_ok = true;
    let mut law_detail = Vec::new();
    for v in [0.01, 0.05] {
        let g = geometry(v, 1.0)?;
        let cut = CutoffSet::new(0.0, omega, None)?;
        let (value, _) = sub(g.l, 1.0)?;
        let err = rel(value, closed_forms(&g, &cut)?.sub_asymptote);
        law_ok &= err <= 2.0 * v * v;
        law_detail.push(format!("v={v}: {err:.2e} (tol {:.0e})", 2.0 * v * v));
    }

    let ls = [0.0025, 0.005, 0.01, 0.02];
    let mut logs = Vec::new();
    for l in ls {
        logs.push(sub(l, 1.0)?.0.ln());
    }
    let xs: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
    let (exponent, _, _) = linear_fit(&xs, &logs);
    let exponent_ok = (exponent - 2.0).abs() <= 0.01;

    // At fixed (Omega, l) only the exact angular factor depends on tau, and
    // only at O(v^2). Removing it must leave tau-independence to quadrature
    // accuracy.
    let l = 0.01;
    let (a, corr_a) = sub(l, 1.0)?;
    let (b, corr_b) = sub(l, 2.0)?;
    let raw = rel(b, a);
    let reduced = rel(b / corr_b, a / corr_a);
    let tau_ok = raw <= 2.0 * l * l && reduced <= 1e-8;

    Ok((
        law_ok && exponent_ok && tau_ok,
        format!(
            "law {}; l-exponent {exponent:.5} (2 +- 0.01); tau 1->2 raw {raw:.2e} (O(v^2) tol {:.0e}), angular-reduced {reduced:.2e} (tol 1e-8)",
            law_detail.join(", "),
            2.0 * l * l
        ),
    ))
}

fn hard_adjudication(o: &SuiteOptions) -> Result<(bool, String)> {
    let g = geometry(0.01, 1.0)?;
    let cut = CutoffSet::new(0.0, 1e3, None)?;
    let num = gamma_variant(&g, &cut, &o.quadrature, Variant::Hard)?.value;
    let c = closed_forms(&g, &cut)?;
    let two_e2 = num / c.hard_asymptote;
    let factor = num / c.hard_asymptote_alt;
    Ok((
        (two_e2 - 1.0).abs() <= 0.01 && (factor - 2.0).abs() <= 0.02,
        format!(
            "numerical / (2e^2/3pi^2) form {two_e2:.5} (1 +- 0.01); numerical / (e^2/3pi^2) form {factor:.5} (2 +- 0.02)"
        ),
    ))
}

fn random_worldline(rng: &mut StdRng, legs: usize) -> Result<Worldline> {
    let start = FourVector::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    let mut pieces = Vec::with_capacity(legs);
    for _ in 0..legs {
        let v = random_unit(rng).map(|c| c * rng.gen_range(0.0..0.9));
        pieces.push((four_velocity(v)?, rng.gen_range(0.2..1.5)));
    }
    Worldline::from_legs(start, &pieces, 0.0, rng.gen_range(0.1..2.0))
}

fn random_unit(rng: &mut StdRng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.map(|c| c / n);
        }
    }
}

fn contract(q: &FourVector, j: &ComplexFourVector, how: Contraction) -> f64 {
    match how {
        Contraction::Minkowski => j.dot_real(q).norm(),
        Contraction::EuclideanFault => {
            let c = j.components();
            let k = q.components();
            (0..4).map(|a| c[a] * k[a]).sum::<num_complex::Complex64>().norm()
        }
    }
}

fn euclid(j: &ComplexFourVector) -> f64 {
    j.components().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn conservation_scaling(o: &SuiteOptions) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(o.seed);
    let mut worst: f64 = 0.0;
    let mut worst_raw: f64 = 0.0;
    for _ in 0..1000 {
        let legs = rng.gen_range(2..=4);
        let w = random_worldline(&mut rng, legs)?;
        let omega = 10f64.powf(rng.gen_range(-3.0..3.0));
        let q = PhotonMomentum::new(omega, random_unit(&mut rng))?;
        // Contract with q / omega = (1, n): the bound is then independent
        // of the frequency unit.
        let q_unit = q.four_vector().scale(1.0 / omega);
        let t = soft_decompose(&w, &q);
        for j in [current_fourier(&w, &q), t.div, t.sub, t.hard] {
            let norm = euclid(&j);
            let ratio = contract(&q_unit, &j, o.contraction) / norm;
            worst = worst.max(ratio);
            worst_raw = worst_raw.max(ratio * omega);
        }
    }
    let conserved = worst <= 1e-12;

    // Scaling exponents on one worldline whose endpoint velocities differ.
    let w = loop {
        let w = random_worldline(&mut rng, 3)?;
        if (w.final_velocity() - w.initial_velocity()).euclid_norm() > 0.3 {
            break w;
        }
    };
    let n_hat = random_unit(&mut rng);
    let omegas: Vec<f64> = (0..9).map(|k| 1e-8 * 10f64.powf(0.5 * k as f64)).collect();
    let mut logs = [Vec::new(), Vec::new(), Vec::new()];
    for &omega in &omegas {
        let t = soft_decompose(&w, &PhotonMomentum::new(omega, n_hat)?);
        logs[0].push(euclid(&t.div).ln());
        logs[1].push(euclid(&t.sub).ln());
        logs[2].push(euclid(&t.hard).ln());
    }
    let xs: Vec<f64> = omegas.iter().map(|w| w.ln()).collect();
    let slopes: Vec<f64> = logs.iter().map(|ys| linear_fit(&xs, ys).0).collect();
    let scaling = slopes
        .iter()
        .zip([-1.0, 0.0, 1.0])
        .all(|(s, want)| (s - want).abs() <= 0.01);
    Ok((
        conserved && scaling,
        format!(
            "max |q.j|/(omega |j|) {worst:.2e} over 1000 draws, omega in [1e-3, 1e3] (tol 1e-12; unscaled |q.j|/|j| {worst_raw:.2e}); exponents div {:.4} sub {:.4} hard {:.4} (-1/0/+1 within 0.01)",
            slopes[0], slopes[1], slopes[2]
        ),
    ))
}

fn boundary_soft_theorem(o: &SuiteOptions) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(o.seed ^ 0x5eed);
    let omegas: Vec<f64> = (0..5).map(|k| 1e-4 * 10f64.powf(0.5 * k as f64)).collect();
    let xs: Vec<f64> = omegas.iter().map(|w| w.ln()).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w = random_worldline(&mut rng, 3)?;
        let n_hat = random_unit(&mut rng);
        let mut ys = Vec::with_capacity(omegas.len());
        for &omega in &omegas {
            let q = PhotonMomentum::new(omega, n_hat)?;
            // For real kinematics j(-q) is the complex conjugate of j(q).
            let lhs = current_fourier(&w, &q).conj() * num_complex::Complex64::new(0.0, 1.0);
            let rhs = endpoint_soft_expansion(&w, &q)?;
            ys.push(euclid(&(lhs - rhs)).ln());
        }
        worst = worst.max((linear_fit(&xs, &ys).0 - 1.0).abs());
    }
    Ok((
        worst <= 0.02,
        format!("max |exponent - 1| {worst:.4} over 20 worldlines (tol 0.02)"),
    ))
}

fn ir_divergence(o: &SuiteOptions) -> Result<(bool, String)> {
    let g = geometry(0.01, 1.0)?;
    let cut = CutoffSet::new(1e-3, 100.0, None)?;
    let oracle = closed_forms(&g, &cut)?.divergence_coefficient;
    let full = divergence_fit(&g, &cut, &o.quadrature, CurrentSelection::FULL)?;
    let dressed = divergence_fit(&g, &cut, &o.quadrature, CurrentSelection::DRESSED)?;
    let err = rel(full.slope, oracle);
    let bound = 1e-4 * g.charge * g.charge * g.v * g.v;
    Ok((
        err <= 1e-3 && dressed.slope.abs() <= bound,
        format!(
            "full slope rel err {err:.2e} (tol 1e-3, R^2 {:.9}); dressed |b| {:.2e} (tol {bound:.2e})",
            full.r_squared,
            dressed.slope.abs()
        ),
    ))
}

fn duality(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..=2000 {
        let s = summarize(k as f64 * 0.01)?;
        worst = worst.max((s.distinguishability.powi(2) + s.visibility_bound.powi(2) - 1.0).abs());
    }
    Ok((worst <= 1e-12, format!("max |D^2 + V^2 - 1| {worst:.2e} on [0, 20] (tol 1e-12)")))
}

fn finite_temperature(o: &SuiteOptions) -> Result<(bool, String)> {
    let g = geometry(0.01, 1.0)?;
    let betas = [0.01, 0.1, 1.0, 10.0, 100.0, 1e3];
    let mut ordered = true;
    let mut worst_cold: f64 = 0.0;
    for variant in Variant::ALL {
        let lambda = if variant == Variant::Full { 1e-3 } else { 0.0 };
        let at = |beta: Option<f64>| -> Result<f64> {
            let cut = CutoffSet::new(lambda, 100.0, beta)?;
            Ok(gamma_variant(&g, &cut, &o.quadrature, variant)?.value)
        };
        let mut last = f64::INFINITY;
        for beta in betas {
            let value = at(Some(beta))?;
            ordered &= value <= last;
            last = value;
        }
        worst_cold = worst_cold.max(rel(at(Some(1e12))?, at(None)?));
    }
    Ok((
        ordered && worst_cold <= 1e-6,
        format!("non-increasing in beta over 6 rungs x 4 variants: {ordered}; beta=1e12 vs T=0 rel {worst_cold:.2e} (tol 1e-6)"),
    ))
}

fn experiment_estimators(_: &SuiteOptions) -> Result<(bool, String)> {
    let slit = SlitGeometry::new(1.0, 0.1, 1e-3, 1e4, 0.01, 1.0)?;
    let slit_err = rel(gamma_dressed_2slit(&slit), 1.141_011_088_827_916_32e-5);

    let mut mirror = ParticleMirror::new(0.7, 1.3, 4.0, 1.1, 1.0, 0.2, 0.0)?;
    let mut scaling: f64 = 0.0;
    for q in [0.3, 1.0, 2.5] {
        let base = rayleigh_rate(&mirror, q)?;
        scaling = scaling.max(rel(rayleigh_rate(&mirror, 2.0 * q)? / base, 16.0));
        scaling = scaling.max(rel(rayleigh_rate(&mirror, 3.0 * q)? / base, 81.0));
    }
    let mut recurrence: f64 = 0.0;
    for qz in [0.5, 1.0, 3.0, 10.0] {
        mirror.q = qz / mirror.z_o;
        let k2 = bessel_k0(qz)? + 2.0 / qz * bessel_k1(qz)?;
        let want = -(2f64.sqrt() * PI * PI / 3.0)
            * mirror.r_o.powi(3)
            * mirror.g_o
            * (mirror.q / mirror.z_o).powi(2)
            * k2
            * (mirror.q * mirror.x_o).cos();
        recurrence = recurrence.max(rel(surface_coupling(&mirror)?, want));
    }
    let k2_ref = rel(bessel_k2(1.0)?, 1.624_838_898_635_177_482_81);
    recurrence = recurrence.max(k2_ref);
    Ok((
        slit_err <= 1e-3 && scaling <= 1e-10 && recurrence <= 1e-10,
        format!(
            "slit rel err {slit_err:.2e} (tol 1e-3); |q|^4 scaling {scaling:.2e} (tol 1e-10); K2 recurrence {recurrence:.2e} (tol 1e-10)"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_stable() {
        let ids = check_ids();
        assert_eq!(ids.len(), 11);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 11);
        assert_eq!(ids[5], "conservation_scaling");
    }

    #[test]
    fn metric_fault_breaks_conservation() {
        let options = SuiteOptions {
            contraction: Contraction::EuclideanFault,
            ..SuiteOptions::default()
        };
        let outcome = run_check("conservation_scaling", &options).unwrap();
        assert!(!outcome.passed);
        assert!(outcome.line().starts_with("[FAIL] conservation_scaling"));
    }

    #[test]
    fn unknown_id() {
        assert!(run_check("nope", &SuiteOptions::default()).is_none());
    }
}

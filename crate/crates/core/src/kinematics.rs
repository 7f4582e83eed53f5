//! Minkowski algebra, piecewise-linear worldlines and the square two-path
//! interferometer.
//!
//! Natural units (hbar = c = 1) and the mostly-negative signature
//! `(+, -, -, -)` are used throughout.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the unit-norm check for four-velocities.
pub const VELOCITY_NORM_TOL: f64 = 1e-12;
/// Per-component tolerance for worldline continuity.
pub const CONTINUITY_TOL: f64 = 1e-12;
/// Tolerance on `|n| = 1` for photon directions.
pub const DIRECTION_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn from_parts(t: f64, spatial: [f64; 3]) -> Self {
        Self::new(t, spatial[0], spatial[1], spatial[2])
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn components(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm of the four components, used for relative tolerances.
    pub fn euclid_norm(&self) -> f64 {
        self.components().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn to_complex(&self) -> ComplexFourVector {
        ComplexFourVector::from_real(self)
    }

    /// Boost along `z` with the given rapidity.
    pub fn boost_z(&self, rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        Self::new(
            ch * self.t + sh * self.z,
            self.x,
            self.y,
            sh * self.t + ch * self.z,
        )
    }
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.t + rhs.t, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.t - rhs.t, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for FourVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for FourVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// `a.t b.t - a.x b.x - a.y b.y - a.z b.z`.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z
}

/// Complex four-vector with the same layout as [`FourVector`]; used for
/// momentum-space currents. Contractions never conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexFourVector {
    pub t: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl ComplexFourVector {
    pub const ZERO: ComplexFourVector = ComplexFourVector {
        t: Complex64::new(0.0, 0.0),
        x: Complex64::new(0.0, 0.0),
        y: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub const fn new(t: Complex64, x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { t, x, y, z }
    }

    pub fn from_real(v: &FourVector) -> Self {
        Self::new(v.t.into(), v.x.into(), v.y.into(), v.z.into())
    }

    pub fn components(&self) -> [Complex64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn spatial(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot_real(&self, other: &FourVector) -> Complex64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    pub fn dot(&self, other: &ComplexFourVector) -> Complex64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    pub fn conj(&self) -> Self {
        Self::new(self.t.conj(), self.x.conj(), self.y.conj(), self.z.conj())
    }

    /// `sqrt(sum |c_a|^2)`.
    pub fn norm(&self) -> f64 {
        self.components()
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn max_abs_diff(&self, other: &ComplexFourVector) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for ComplexFourVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.t + rhs.t, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for ComplexFourVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.t - rhs.t, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<Complex64> for ComplexFourVector {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for FourVector {
    type Output = ComplexFourVector;
    fn mul(self, rhs: Complex64) -> ComplexFourVector {
        ComplexFourVector::from_real(&self).scale(rhs)
    }
}

/// Null photon momentum `q = omega (1, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMomentum {
    omega: f64,
    n_hat: [f64; 3],
}

impl PhotonMomentum {
    /// Requires `omega > 0` and `|n_hat| = 1`.
    pub fn new(omega: f64, n_hat: [f64; 3]) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::NonPositiveFrequency { omega });
        }
        let norm = n_hat.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > DIRECTION_NORM_TOL {
            return Err(Error::NotUnitDirection(n_hat));
        }
        Ok(Self { omega, n_hat })
    }

    /// Normalizes `direction` before construction.
    pub fn along(omega: f64, direction: [f64; 3]) -> Result<Self> {
        let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::NotUnitDirection(direction));
        }
        Self::new(omega, direction.map(|c| c / norm))
    }

    /// Spherical angles: `theta` from `+z`, `phi` from `+x`.
    pub fn from_angles(omega: f64, theta: f64, phi: f64) -> Result<Self> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::along(omega, [st * cp, st * sp, ct])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n_hat(&self) -> [f64; 3] {
        self.n_hat
    }

    pub fn four_vector(&self) -> FourVector {
        let [nx, ny, nz] = self.n_hat;
        FourVector::new(self.omega, self.omega * nx, self.omega * ny, self.omega * nz)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.n_hat)
    }
}

/// `gamma (1, v3)`; rejects `|v3| >= 1`.
pub fn four_velocity(v3: [f64; 3]) -> Result<FourVector> {
    let speed_sq: f64 = v3.iter().map(|c| c * c).sum();
    if !(speed_sq < 1.0) {
        return Err(Error::Superluminal {
            speed: speed_sq.sqrt(),
        });
    }
    let gamma = 1.0 / (1.0 - speed_sq).sqrt();
    Ok(FourVector::from_parts(gamma, v3.map(|c| gamma * c)))
}

fn check_unit_velocity(u: &FourVector) -> Result<()> {
    let norm = u.norm_sq();
    if (norm - 1.0).abs() > VELOCITY_NORM_TOL || !(u.t > 0.0) {
        return Err(Error::NotUnitVelocity { norm, t: u.t });
    }
    Ok(())
}

/// Straight piece of worldline: `X(s) = start_event + velocity * (s - s0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldlineSegment {
    start_event: FourVector,
    velocity: FourVector,
    duration: f64,
}

impl WorldlineSegment {
    pub fn new(start_event: FourVector, velocity: FourVector, duration: f64) -> Result<Self> {
        check_unit_velocity(&velocity)?;
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::InvalidParameter {
                name: "duration",
                value: duration,
                reason: "segment proper time must be positive",
            });
        }
        Ok(Self {
            start_event,
            velocity,
            duration,
        })
    }

    pub fn start_event(&self) -> FourVector {
        self.start_event
    }

    pub fn velocity(&self) -> FourVector {
        self.velocity
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn end_event(&self) -> FourVector {
        self.start_event + self.velocity * self.duration
    }

    /// Position after proper time `ds` into the segment.
    pub fn event_at(&self, ds: f64) -> FourVector {
        self.start_event + self.velocity * ds
    }
}

/// A velocity change at a single event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub event: FourVector,
    pub before: FourVector,
    pub after: FourVector,
}

/// Piecewise-linear trajectory of a point charge.
///
/// The velocities just outside the proper-time window default to those of
/// the first and last segments. Setting a different entry or exit velocity
/// places a kink exactly at `s_i` or `s_f`; this is how a particle that
/// arrives with one velocity and is deflected at the first event is
/// represented.
#[derive(Debug, Clone, PartialEq)]
pub struct Worldline {
    segments: Vec<WorldlineSegment>,
    s_i: f64,
    charge: f64,
    entry_velocity: Option<FourVector>,
    exit_velocity: Option<FourVector>,
}

impl Worldline {
    pub fn new(segments: Vec<WorldlineSegment>, s_i: f64, charge: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyWorldline);
        }
        for (index, pair) in segments.windows(2).enumerate() {
            let end = pair[0].end_event();
            let start = pair[1].start_event();
            let gap = (end - start)
                .components()
                .iter()
                .fold(0.0_f64, |m, c| m.max(c.abs()));
            if gap > CONTINUITY_TOL {
                return Err(Error::Discontinuous { index });
            }
        }
        Ok(Self {
            segments,
            s_i,
            charge,
            entry_velocity: None,
            exit_velocity: None,
        })
    }

    /// Chains segments from `start` with the given `(velocity, duration)` legs.
    pub fn from_legs(
        start: FourVector,
        legs: &[(FourVector, f64)],
        s_i: f64,
        charge: f64,
    ) -> Result<Self> {
        let mut segments = Vec::with_capacity(legs.len());
        let mut event = start;
        for &(velocity, duration) in legs {
            let segment = WorldlineSegment::new(event, velocity, duration)?;
            event = segment.end_event();
            segments.push(segment);
        }
        Self::new(segments, s_i, charge)
    }

    pub fn with_entry_velocity(mut self, velocity: FourVector) -> Result<Self> {
        check_unit_velocity(&velocity)?;
        self.entry_velocity = Some(velocity);
        Ok(self)
    }

    pub fn with_exit_velocity(mut self, velocity: FourVector) -> Result<Self> {
        check_unit_velocity(&velocity)?;
        self.exit_velocity = Some(velocity);
        Ok(self)
    }

    pub fn segments(&self) -> &[WorldlineSegment] {
        &self.segments
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn s_i(&self) -> f64 {
        self.s_i
    }

    pub fn s_f(&self) -> f64 {
        self.s_i + self.proper_duration()
    }

    pub fn proper_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn initial_event(&self) -> FourVector {
        self.segments[0].start_event
    }

    pub fn final_event(&self) -> FourVector {
        self.segments[self.segments.len() - 1].end_event()
    }

    /// Velocity just before `s_i`.
    pub fn initial_velocity(&self) -> FourVector {
        self.entry_velocity.unwrap_or(self.segments[0].velocity)
    }

    /// Velocity just after `s_f`.
    pub fn final_velocity(&self) -> FourVector {
        self.exit_velocity
            .unwrap_or(self.segments[self.segments.len() - 1].velocity)
    }

    /// All events where the velocity jumps, in proper-time order, including
    /// boundary kinks from entry/exit velocities.
    pub fn kinks(&self) -> Vec<Kink> {
        let mut kinks = Vec::with_capacity(self.segments.len() + 1);
        let first = &self.segments[0];
        if let Some(entry) = self.entry_velocity {
            if entry != first.velocity {
                kinks.push(Kink {
                    event: first.start_event,
                    before: entry,
                    after: first.velocity,
                });
            }
        }
        for pair in self.segments.windows(2) {
            if pair[0].velocity != pair[1].velocity {
                kinks.push(Kink {
                    event: pair[1].start_event,
                    before: pair[0].velocity,
                    after: pair[1].velocity,
                });
            }
        }
        let last = &self.segments[self.segments.len() - 1];
        if let Some(exit) = self.exit_velocity {
            if exit != last.velocity {
                kinks.push(Kink {
                    event: last.end_event(),
                    before: last.velocity,
                    after: exit,
                });
            }
        }
        kinks
    }

    /// Position at proper time `s` (clamped to the window).
    pub fn event_at(&self, s: f64) -> FourVector {
        let mut remaining = (s - self.s_i).max(0.0);
        for segment in &self.segments {
            if remaining <= segment.duration {
                return segment.event_at(remaining);
            }
            remaining -= segment.duration;
        }
        self.final_event()
    }
}

/// Whether the arrival at the detector is treated as a radiating vertex.
///
/// The three-vertex form (`Excluded`) is the default. `Included` makes both
/// branches stop at the detector, which adds a fourth kink there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorVertex {
    #[default]
    Excluded,
    Included,
}

/// The square interferometer: split at `x_i`, mirrors at `x_l`/`x_r`,
/// recombination at the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerGeometry {
    pub l: f64,
    pub tau: f64,
    pub v: f64,
    pub gamma: f64,
    pub charge: f64,
    pub x_i: FourVector,
    pub x_l: FourVector,
    pub x_r: FourVector,
    pub x_d: FourVector,
    /// Along `+y`.
    pub xdot_1: FourVector,
    /// Along `+x`.
    pub xdot_2: FourVector,
    pub detector_vertex: DetectorVertex,
}

impl InterferometerGeometry {
    /// `l = 0` is accepted and gives the degenerate zero-separation geometry.
    pub fn new(l: f64, tau: f64, charge: f64) -> Result<Self> {
        if !(l >= 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameter {
                name: "l",
                value: l,
                reason: "side length must be non-negative",
            });
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: "transit time must be positive",
            });
        }
        if !charge.is_finite() {
            return Err(Error::InvalidParameter {
                name: "charge",
                value: charge,
                reason: "charge must be finite",
            });
        }
        let v = l / tau;
        if !(v < 1.0) {
            return Err(Error::Superluminal { speed: v });
        }
        let xdot_1 = four_velocity([0.0, v, 0.0])?;
        let xdot_2 = four_velocity([v, 0.0, 0.0])?;
        Ok(Self {
            l,
            tau,
            v,
            gamma: xdot_1.t,
            charge,
            x_i: FourVector::ZERO,
            x_l: FourVector::new(tau, 0.0, l, 0.0),
            x_r: FourVector::new(tau, l, 0.0, 0.0),
            x_d: FourVector::new(2.0 * tau, l, l, 0.0),
            xdot_1,
            xdot_2,
            detector_vertex: DetectorVertex::Excluded,
        })
    }

    pub fn with_detector_vertex(mut self, detector_vertex: DetectorVertex) -> Self {
        self.detector_vertex = detector_vertex;
        self
    }

    /// Proper time per side, `tau / gamma`.
    pub fn leg_proper_time(&self) -> f64 {
        self.tau / self.gamma
    }

    /// Relative speed of the two leg velocities, `sqrt(1 - 1/(X1.X2)^2)`,
    /// evaluated as `v sqrt(2 - v^2)` to avoid cancellation.
    pub fn relative_speed(&self) -> f64 {
        self.v * (2.0 - self.v * self.v).sqrt()
    }

    /// Left and right branch worldlines. Both enter along `+x` with
    /// `xdot_2`; the left branch is kicked into `+y` at `x_i`.
    pub fn worldlines(&self) -> Result<(Worldline, Worldline)> {
        let ds = self.leg_proper_time();
        let left = Worldline::from_legs(
            self.x_i,
            &[(self.xdot_1, ds), (self.xdot_2, ds)],
            0.0,
            self.charge,
        )?
        .with_entry_velocity(self.xdot_2)?;
        let right = Worldline::from_legs(
            self.x_i,
            &[(self.xdot_2, ds), (self.xdot_1, ds)],
            0.0,
            self.charge,
        )?
        .with_entry_velocity(self.xdot_2)?;
        match self.detector_vertex {
            DetectorVertex::Excluded => Ok((left, right)),
            DetectorVertex::Included => {
                let rest = FourVector::new(1.0, 0.0, 0.0, 0.0);
                Ok((
                    left.with_exit_velocity(rest)?,
                    right.with_exit_velocity(rest)?,
                ))
            }
        }
    }
}

/// Builds the geometry and its two branch worldlines.
pub fn build_interferometer(
    l: f64,
    tau: f64,
    charge: f64,
) -> Result<(InterferometerGeometry, Worldline, Worldline)> {
    let geometry = InterferometerGeometry::new(l, tau, charge)?;
    let (left, right) = geometry.worldlines()?;
    Ok((geometry, left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn timelike_unit_and_null() {
        let t = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&t, &t), 1.0);
        let q = PhotonMomentum::along(2.0, [0.3, -0.4, 0.5]).unwrap().four_vector();
        assert!(q.norm_sq().abs() < 1e-14 * 4.0);
    }

    #[test]
    fn dot_is_boost_invariant() {
        let a = FourVector::new(1.3, 0.2, -0.7, 0.4);
        let b = FourVector::new(-0.5, 1.1, 0.3, 2.0);
        // Boost applied as an explicit matrix product.
        let (ch, sh) = (0.3_f64.cosh(), 0.3_f64.sinh());
        let boost = |v: &FourVector| {
            let m = [
                [ch, 0.0, 0.0, sh],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [sh, 0.0, 0.0, ch],
            ];
            let c = v.components();
            let r: Vec<f64> = m
                .iter()
                .map(|row| row.iter().zip(c.iter()).map(|(x, y)| x * y).sum())
                .collect();
            FourVector::new(r[0], r[1], r[2], r[3])
        };
        let before = minkowski_dot(&a, &b);
        let after = minkowski_dot(&boost(&a), &boost(&b));
        assert!(close(before, after, 1e-12));
        assert!(close(after, minkowski_dot(&a.boost_z(0.3), &b.boost_z(0.3)), 1e-12));
    }

    #[test]
    fn four_velocity_examples() {
        assert_eq!(four_velocity([0.0; 3]).unwrap(), FourVector::new(1.0, 0.0, 0.0, 0.0));
        let u = four_velocity([0.6, 0.0, 0.0]).unwrap();
        assert!(close(u.t, 1.25, 1e-15) && close(u.x, 0.75, 1e-15));
        assert!(close(u.norm_sq(), 1.0, 1e-12));
        assert!(matches!(
            four_velocity([1.0, 0.0, 0.0]),
            Err(Error::Superluminal { .. })
        ));
        assert!(four_velocity([0.8, 0.7, 0.0]).is_err());
    }

    #[test]
    fn photon_rejects_bad_input() {
        assert!(PhotonMomentum::new(0.0, [0.0, 0.0, 1.0]).is_err());
        assert!(PhotonMomentum::new(1.0, [0.0, 0.0, 1.1]).is_err());
    }

    #[test]
    fn interferometer_geometry() {
        let (g, left, right) = build_interferometer(1.0, 10.0, 1.0).unwrap();
        assert!(close(g.v, 0.1, 1e-15));
        let d = FourVector::new(20.0, 1.0, 1.0, 0.0);
        for w in [&left, &right] {
            let end = w.final_event();
            assert!((end - d).euclid_norm() < 1e-12);
            assert!(w.initial_event().euclid_norm() < 1e-15);
            for s in w.segments() {
                assert!(close(s.duration(), 10.0 / g.gamma, 1e-12));
            }
        }
        let total = 2.0 * g.tau / g.gamma;
        assert!(close(left.proper_duration(), total, 1e-12));
        assert!(close(right.proper_duration(), total, 1e-12));
        assert!(close(left.s_f() - left.s_i(), total, 1e-12));
        assert_eq!(left.segments()[1].start_event(), left.segments()[0].end_event());
        assert!((left.segments()[0].end_event() - g.x_l).euclid_norm() < 1e-12);
        assert!((right.segments()[0].end_event() - g.x_r).euclid_norm() < 1e-12);
    }

    #[test]
    fn interferometer_kinks() {
        let (_, left, right) = build_interferometer(1.0, 10.0, 1.0).unwrap();
        assert_eq!(left.kinks().len(), 2);
        assert_eq!(right.kinks().len(), 1);
        let g = InterferometerGeometry::new(1.0, 10.0, 1.0)
            .unwrap()
            .with_detector_vertex(DetectorVertex::Included);
        let (l2, r2) = g.worldlines().unwrap();
        assert_eq!(l2.kinks().len(), 3);
        assert_eq!(r2.kinks().len(), 2);
    }

    #[test]
    fn rejects_superluminal_and_discontinuous() {
        assert!(matches!(
            build_interferometer(2.0, 1.0, 1.0),
            Err(Error::Superluminal { .. })
        ));
        assert!(build_interferometer(1.0, 1.0, 1.0).is_err());
        let rest = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let a = WorldlineSegment::new(FourVector::ZERO, rest, 1.0).unwrap();
        let b = WorldlineSegment::new(FourVector::new(1.0, 0.1, 0.0, 0.0), rest, 1.0).unwrap();
        assert_eq!(
            Worldline::new(vec![a, b], 0.0, 1.0),
            Err(Error::Discontinuous { index: 0 })
        );
        assert!(WorldlineSegment::new(FourVector::ZERO, FourVector::new(1.0, 0.5, 0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn relative_speed_matches_dot() {
        let g = InterferometerGeometry::new(1.0, 10.0, 1.0).unwrap();
        let d = g.xdot_1.dot(&g.xdot_2);
        let direct = (1.0 - 1.0 / (d * d)).sqrt();
        assert!(close(g.relative_speed(), direct, 1e-12));
        assert!(close(g.relative_speed(), 0.141_067_359_796_658_84, 1e-15));
    }
}

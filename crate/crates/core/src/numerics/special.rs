//! Special functions: cosine integral, `atanh(x)/x`, and `K_0`, `K_1`, `K_2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};

const SERIES_CUTOFF_CI: f64 = 4.0;
const MAX_ITER: usize = 500;

/// Entire cosine integral `Cin(x) = int_0^x (1 - cos t)/t dt`.
///
/// Valid for any real `x` (even function). Accurate near zero where the
/// `gamma + ln x - Ci(x)` form cancels.
pub fn cin(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_CUTOFF_CI {
        cin_series(ax)
    } else {
        EULER_GAMMA + ax.ln() - ci_continued_fraction(ax)
    }
}

fn cin_series(x: f64) -> f64 {
    // sum_{k>=1} (-1)^{k+1} x^{2k} / (2k (2k)!)
    let x2 = x * x;
    let mut power_over_fact = 1.0; // x^{2k} / (2k)!
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        power_over_fact *= x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
        let term = power_over_fact / (2.0 * kf);
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        if term <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Ci(x) = -int_x^inf cos t / t dt` for `x > 0`.
///
/// Power series below `x = 4`; above, the Lentz-evaluated continued fraction
/// of `E_1(ix)`, which reproduces the asymptotic behaviour to full precision.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "cosine_integral",
            x,
        });
    }
    if x <= SERIES_CUTOFF_CI {
        Ok(EULER_GAMMA + x.ln() - cin_series(x))
    } else {
        Ok(ci_continued_fraction(x))
    }
}

fn ci_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..MAX_ITER {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    // E_1(ix) = e^{-ix} h, and Ci(x) = -Re E_1(ix).
    -(h * Complex64::new(x.cos(), -x.sin())).re
}

/// `atanh(x) / x` on `[0, 1)`, with the `x -> 0` limit 1.
pub fn atanh_over_x(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            function: "atanh_over_x",
            x,
        });
    }
    if x < 1e-4 {
        let x2 = x * x;
        Ok(1.0 + x2 * (1.0 / 3.0 + x2 / 5.0))
    } else {
        Ok(x.atanh() / x)
    }
}

/// `atanh(x)/x - 1` on `[0, 1)` without cancellation at small `x`.
pub fn atanh_over_x_minus_one(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            function: "atanh_over_x_minus_one",
            x,
        });
    }
    if x < 0.1 {
        // sum_{k>=1} x^{2k} / (2k + 1)
        let x2 = x * x;
        let mut power = 1.0;
        let mut sum = 0.0;
        for k in 1..64 {
            power *= x2;
            let term = power / (2 * k + 1) as f64;
            sum += term;
            if term <= f64::EPSILON * 0.25 * sum {
                break;
            }
        }
        Ok(sum)
    } else {
        Ok(x.atanh() / x - 1.0)
    }
}

/// `1 - cos x`, evaluated as `2 sin^2(x/2)`.
pub fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// `x - sin x` without cancellation for small `x`.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // x^3/3! - x^5/5! + ...
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        loop {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// `e^{i phi} - 1 - i phi`, the phase remainder beyond first order.
pub fn phase_remainder(phi: f64) -> Complex64 {
    Complex64::new(-one_minus_cos(phi), -x_minus_sin(phi))
}

/// `e^{i phi} - 1`.
pub fn phase_minus_one(phi: f64) -> Complex64 {
    Complex64::new(-one_minus_cos(phi), phi.sin())
}

fn bessel_k01_series(x: f64) -> (f64, f64) {
    // A&S 9.6.13 and 9.6.11 with n = 1.
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    let mut term0 = 1.0; // y^k / (k!)^2
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut k0_tail = 0.0;

    let mut term1 = 1.0; // y^k / (k! (k+1)!)
    let mut i1_sum = 1.0;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    let mut k1_tail = -2.0 * EULER_GAMMA + 1.0;

    for k in 1..MAX_ITER {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        term0 *= y / (kf * kf);
        i0 += term0;
        k0_tail += term0 * harmonic;

        term1 *= y / (kf * (kf + 1.0));
        i1_sum += term1;
        k1_tail += term1 * (-2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0));

        if term0 * (1.0 + harmonic) < f64::EPSILON * 1e-2 * i0
            && term1 * (2.0 + 2.0 * harmonic) < f64::EPSILON * 1e-2 * i1_sum
        {
            break;
        }
    }
    let i1 = 0.5 * x * i1_sum;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail;
    (k0, k1)
}

fn bessel_k01_continued_fraction(x: f64) -> (f64, f64) {
    // Steed's method for the second continued fraction (order 0).
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn bessel_k01(x: f64, function: &'static str) -> Result<(f64, f64)> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain { function, x });
    }
    if x.is_infinite() {
        return Ok((0.0, 0.0));
    }
    Ok(if x <= 2.0 {
        bessel_k01_series(x)
    } else {
        bessel_k01_continued_fraction(x)
    })
}

pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k01(x, "bessel_k0").map(|(k0, _)| k0)
}

pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k01(x, "bessel_k1").map(|(_, k1)| k1)
}

/// `K_2(x) = K_0(x) + 2 K_1(x) / x`.
///
/// Relative accuracy is held to 1e-10 on `[1e-3, 50]`. Below `1e-3` the
/// value behaves like `2/x^2` and is still finite down to roughly
/// `x = 1e-154`, where `x^2` underflows and the result becomes infinite.
pub fn bessel_k2(x: f64) -> Result<f64> {
    let (k0, k1) = bessel_k01(x, "bessel_k2")?;
    Ok(k0 + 2.0 * k1 / x)
}

//! Split kernels of the parametrized normal- and tangential-derivative
//! operators.
//!
//! With `d = z(t) - z(s)`, `r = |d|` and the unnormalized frame
//! `n = (z2', -z1')`, `n_perp = (z1', z2')` at `t`:
//!
//! ```text
//! k(t,s) = (i kappa / 2) n . (z(s) - z(t)) H1(kappa r) / r
//!        = k1 ln(4 sin^2((t-s)/2)) + k2
//! h(t,s) = (i kappa / 2) n_perp . (z(s) - z(t)) H1(kappa r) / r
//!        = h1 cot((s-t)/2) + h2 ln(4 sin^2((t-s)/2)) + h3
//! ```
//!
//! with `k1 = (kappa/2pi) n.d J1(kappa r)/r`, `h2 = (kappa/2pi) n_perp.d J1(kappa r)/r`,
//! `h1 = (1/pi) n_perp.(z(s)-z(t)) tan((s-t)/2) / r^2` and
//! `h1_tilde = cot((s-t)/2) (h1 - 1/2pi)`.

use crate::error::{Error, Result};
use crate::geometry::{dot, sub, BoundaryCurve, CurvePoint};
use crate::specfun::{Bessel01, ComplexValue};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_PI, PI, TAU};

/// Homogeneous isotropic medium with unit mass density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub kappa_p: f64,
    pub kappa_s: f64,
}

impl ElasticMedium {
    pub fn new(lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        let finite = lambda.is_finite() && mu.is_finite() && omega.is_finite();
        if !finite || mu <= 0.0 || lambda + mu <= 0.0 || omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need mu > 0, lambda + mu > 0, omega > 0 (lambda = {lambda}, mu = {mu}, omega = {omega})"
            )));
        }
        Ok(ElasticMedium {
            lambda,
            mu,
            omega,
            kappa_p: omega / (lambda + 2.0 * mu).sqrt(),
            kappa_s: omega / mu.sqrt(),
        })
    }

    pub fn wavenumber(&self, wave: Wave) -> f64 {
        match wave {
            Wave::P => self.kappa_p,
            Wave::S => self.kappa_s,
        }
    }
}

/// Compressional (`P`) or shear (`S`) wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wave {
    P,
    S,
}

/// Split of the normal-derivative kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSplit {
    pub k1: ComplexValue,
    pub k2: ComplexValue,
}

/// Split of the tangential-derivative kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSplit {
    pub h1: f64,
    pub h2: ComplexValue,
    pub h3: ComplexValue,
    pub h1_tilde: ComplexValue,
}

/// Both splits at one parameter pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitKernels {
    pub k: KSplit,
    pub h: HSplit,
}

/// Split kernels at `(t, s)`.
pub fn kernel_k(medium: &ElasticMedium, curve: &BoundaryCurve, sigma: Wave, t: f64, s: f64) -> KSplit {
    split(medium.wavenumber(sigma), &curve.eval(t), &curve.eval(s), t, s).k
}

/// Split kernels at `(t, s)`.
pub fn kernel_h(medium: &ElasticMedium, curve: &BoundaryCurve, sigma: Wave, t: f64, s: f64) -> HSplit {
    split(medium.wavenumber(sigma), &curve.eval(t), &curve.eval(s), t, s).h
}

/// `(t - s)` reduced to `(-pi, pi]`; zero exactly on the diagonal.
#[inline]
fn reduced_difference(t: f64, s: f64) -> f64 {
    let d = t - s;
    d - TAU * (d / TAU).round()
}

/// Kernel splits for wavenumber `kappa` between the precomputed points
/// `a = z(t)` and `b = z(s)`.
pub fn split(kappa: f64, a: &CurvePoint, b: &CurvePoint, t: f64, s: f64) -> SplitKernels {
    let diff = reduced_difference(t, s);
    if diff == 0.0 {
        let speed2 = dot(a.dz, a.dz);
        let k2 = dot(a.normal(), a.ddz) / (TAU * speed2);
        return SplitKernels {
            k: KSplit {
                k1: Complex64::new(0.0, 0.0),
                k2: Complex64::new(k2, 0.0),
            },
            h: HSplit {
                h1: 0.5 * FRAC_1_PI,
                h2: Complex64::new(0.0, 0.0),
                h3: Complex64::new(0.0, 0.0),
                // continuous extension: h1_tilde(t, t+eps) -> e1(t), not zero
                h1_tilde: Complex64::new(h1_tilde_diagonal(a), 0.0),
            },
        };
    }
    let d = sub(a.z, b.z);
    let r2 = dot(d, d);
    let r = r2.sqrt();
    let bessel = Bessel01::eval(kappa * r);
    let n_dot = dot(a.normal(), d);
    let np_dot = dot(a.tangent(), d);

    let half = 0.5 * diff;
    let log_factor = (4.0 * half.sin().powi(2)).ln();
    // cot((s - t)/2) = -cot((t - s)/2)
    let cot_st = -half.cos() / half.sin();

    // (i kappa/2) X . (z(s) - z(t)) H1 / r = -(i kappa/2) X.d H1 / r
    let i_half_kappa = Complex64::new(0.0, -0.5 * kappa);
    let k_full = i_half_kappa * bessel.h1() * (n_dot / r);
    let h_full = i_half_kappa * bessel.h1() * (np_dot / r);

    let j1_over_r = kappa * bessel.j1 / (TAU * r);
    let k1 = Complex64::new(j1_over_r * n_dot, 0.0);
    let h2 = Complex64::new(j1_over_r * np_dot, 0.0);

    // h1 cot((s-t)/2) stays finite where h1 alone blows up (s - t = pi)
    let h1_cot = -FRAC_1_PI * np_dot / r2;
    let h1 = h1_cot / cot_st;
    let h1_tilde = h1_cot - cot_st / TAU;

    SplitKernels {
        k: KSplit {
            k1,
            k2: k_full - k1 * log_factor,
        },
        h: HSplit {
            h1,
            h2,
            h3: h_full - h1_cot - h2 * log_factor,
            h1_tilde: Complex64::new(h1_tilde, 0.0),
        },
    }
}

/// Unsplit kernels `(k, h)` from the direct Hankel formula.
pub fn unsplit(kappa: f64, a: &CurvePoint, b: &CurvePoint) -> (ComplexValue, ComplexValue) {
    let d = sub(b.z, a.z);
    let r = dot(d, d).sqrt();
    let h1 = Bessel01::eval(kappa * r).h1();
    let c = Complex64::new(0.0, 0.5 * kappa) * h1 / r;
    (c * dot(a.normal(), d), c * dot(a.tangent(), d))
}

/// `e1(t) = -(z'.z'')/(2pi |z'|^2)`, the diagonal limit of `h1_tilde`.
pub fn h1_tilde_diagonal(p: &CurvePoint) -> f64 {
    -dot(p.dz, p.ddz) / (TAU * dot(p.dz, p.dz))
}

/// `1/(2pi)`, the diagonal value of `h1`.
pub const H1_DIAGONAL: f64 = 0.5 / PI;

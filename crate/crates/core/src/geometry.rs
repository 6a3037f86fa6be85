//! Boundary curves, their analytic derivatives, the graded-mesh substitution
//! for corner domains, and collocation nodes.

use crate::error::{Error, Result};
use std::f64::consts::{PI, SQRT_2, TAU};

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Position and first two parameter derivatives of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub z: Vec2,
    pub dz: Vec2,
    pub ddz: Vec2,
}

impl CurvePoint {
    /// Unnormalized normal `(z2', -z1')`, outward for counterclockwise curves.
    #[inline]
    pub fn normal(&self) -> Vec2 {
        [self.dz[1], -self.dz[0]]
    }

    /// Unnormalized tangent `(z1', z2')`.
    #[inline]
    pub fn tangent(&self) -> Vec2 {
        self.dz
    }

    #[inline]
    pub fn speed(&self) -> f64 {
        norm(self.dz)
    }
}

/// Unnormalized normal/tangent pair at a parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub n: Vec2,
    pub n_perp: Vec2,
    pub speed: f64,
}

/// Star-shaped curve `r(t) (cos t, sin t)` with
/// `r(t) = a0 + sum_k (a_k cos kt + b_k sin kt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierShape {
    pub name: String,
    pub a0: f64,
    /// `(a_k, b_k)` for k = 1, 2, ...
    pub coefficients: Vec<(f64, f64)>,
}

impl FourierShape {
    pub fn new(name: impl Into<String>, a0: f64, coefficients: Vec<(f64, f64)>) -> Result<Self> {
        let shape = FourierShape {
            name: name.into(),
            a0,
            coefficients,
        };
        if !a0.is_finite() || shape.coefficients.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "custom shape '{}' has non-finite coefficients",
                shape.name
            )));
        }
        // A positive radius keeps the curve simple and counterclockwise.
        let min_radius = (0..1024)
            .map(|i| shape.radius(TAU * i as f64 / 1024.0)[0])
            .fold(f64::INFINITY, f64::min);
        if min_radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "custom shape '{}' has non-positive radius (min {min_radius})",
                shape.name
            )));
        }
        Ok(shape)
    }

    fn radius(&self, t: f64) -> [f64; 3] {
        let mut r = [self.a0, 0.0, 0.0];
        for (k, &(a, b)) in self.coefficients.iter().enumerate() {
            let m = (k + 1) as f64;
            let (s, c) = (m * t).sin_cos();
            r[0] += a * c + b * s;
            r[1] += m * (b * c - a * s);
            r[2] -= m * m * (a * c + b * s);
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Apple,
    Peach,
    Drop,
    Heart,
    Circle { radius: f64 },
    Custom(FourierShape),
}

impl Shape {
    pub fn name(&self) -> &str {
        match self {
            Shape::Apple => "apple",
            Shape::Peach => "peach",
            Shape::Drop => "drop",
            Shape::Heart => "heart",
            Shape::Circle { .. } => "circle",
            Shape::Custom(f) => &f.name,
        }
    }

    /// Shapes with a corner at `t = 0`.
    pub fn has_corner(&self) -> bool {
        matches!(self, Shape::Drop | Shape::Heart)
    }

    /// Point source location used for manufactured solutions on this shape.
    pub fn default_source(&self) -> Vec2 {
        match self {
            Shape::Heart => [-0.5, 0.2],
            _ => [0.1, 0.2],
        }
    }

    fn eval(&self, t: f64) -> CurvePoint {
        match self {
            Shape::Apple => radial(t, apple_radius(t)),
            Shape::Peach => radial(t, peach_radius(t)),
            Shape::Circle { radius } => radial(t, [*radius, 0.0, 0.0]),
            Shape::Custom(f) => radial(t, f.radius(t)),
            Shape::Drop => {
                let t = t.rem_euclid(TAU);
                let (sh, ch) = (0.5 * t).sin_cos();
                let (s, c) = t.sin_cos();
                CurvePoint {
                    z: [2.0 * sh - 1.0, -s],
                    dz: [ch, -c],
                    ddz: [-0.5 * sh, s],
                }
            }
            Shape::Heart => {
                let t = t.rem_euclid(TAU);
                let (s3, c3) = (1.5 * t).sin_cos();
                let (s, c) = t.sin_cos();
                CurvePoint {
                    z: [1.5 * s3, s],
                    dz: [2.25 * c3, c],
                    ddz: [-3.375 * s3, -s],
                }
            }
        }
    }
}

/// `r(t) (cos t, sin t)` given `[r, r', r'']`.
fn radial(t: f64, r: [f64; 3]) -> CurvePoint {
    let (s, c) = t.sin_cos();
    let [r0, r1, r2] = r;
    CurvePoint {
        z: [r0 * c, r0 * s],
        dz: [r1 * c - r0 * s, r1 * s + r0 * c],
        ddz: [(r2 - r0) * c - 2.0 * r1 * s, (r2 - r0) * s + 2.0 * r1 * c],
    }
}

/// r(t) = 0.55 (1 + 0.9 cos t + 0.1 sin 2t) / (1 + 0.75 cos t)
fn apple_radius(t: f64) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    let (s2, c2) = (2.0 * t).sin_cos();
    let num = 0.55 * (1.0 + 0.9 * c + 0.1 * s2);
    let dnum = 0.55 * (-0.9 * s + 0.2 * c2);
    let ddnum = 0.55 * (-0.9 * c - 0.4 * s2);
    let den = 1.0 + 0.75 * c;
    let dden = -0.75 * s;
    let ddden = -0.75 * c;
    let r = num / den;
    let dr = (dnum - r * dden) / den;
    let ddr = (ddnum - 2.0 * dr * dden - r * ddden) / den;
    [r, dr, ddr]
}

/// r(t) = 0.22 (cos^2 t sqrt(1 - sin t) + 2). With q = sqrt(1 - sin t) the
/// bracketed term is g = (1 + sin t) q^3, g' = -(1/2) cos t q (1 + 5 sin t),
/// g'' = -(1/4) q (9 - 8 sin t - 25 sin^2 t). The curve is only C^2: g'' has
/// a kink at t = pi/2 where q vanishes.
fn peach_radius(t: f64) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    // 1 - sin t = 2 sin^2(pi/4 - t/2), without cancellation near t = pi/2
    let q = SQRT_2 * (0.25 * PI - 0.5 * t).sin().abs();
    let g = (1.0 + s) * q * q * q;
    let dg = -0.5 * c * q * (1.0 + 5.0 * s);
    let ddg = -0.25 * q * (9.0 - 8.0 * s - 25.0 * s * s);
    [0.22 * (g + 2.0), 0.22 * dg, 0.22 * ddg]
}

/// Value and first two derivatives of the graded-mesh substitution `w(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedMap {
    pub w: f64,
    pub dw: f64,
    pub ddw: f64,
}

/// Graded-mesh substitution `w(s) = 2 pi v(s)^p / (v(s)^p + v(2 pi - s)^p)`
/// with the cubic `v(s) = (1/p - 1/2) ((pi - s)/pi)^3 + (s - pi)/(p pi) + 1/2`.
/// Clusters parameters near the corner at `s = 0 = 2 pi`.
pub fn graded_map(p: f64, s: f64) -> GradedMap {
    let cubic = |s: f64| -> [f64; 3] {
        let a = 1.0 / p - 0.5;
        let x = (PI - s) / PI;
        [
            a * x * x * x + (s - PI) / (p * PI) + 0.5,
            -3.0 * a * x * x / PI + 1.0 / (p * PI),
            6.0 * a * x / (PI * PI),
        ]
    };
    let [v, dv, ddv] = cubic(s);
    let [u, du, ddu] = cubic(TAU - s);
    // a = v^p, b = u^p with u = v(2 pi - s); derivatives in s
    let pow = |base: f64, e: f64| if base == 0.0 && e > 0.0 { 0.0 } else { base.powf(e) };
    let a = pow(v, p);
    let da = p * pow(v, p - 1.0) * dv;
    let dda = p * (p - 1.0) * pow(v, p - 2.0) * dv * dv + p * pow(v, p - 1.0) * ddv;
    let b = pow(u, p);
    let db = -p * pow(u, p - 1.0) * du;
    let ddb = p * (p - 1.0) * pow(u, p - 2.0) * du * du + p * pow(u, p - 1.0) * ddu;
    let sum = a + b;
    let num = da * b - a * db;
    GradedMap {
        w: TAU * a / sum,
        dw: TAU * num / (sum * sum),
        ddw: TAU * ((dda * b - a * ddb) * sum - 2.0 * num * (da + db)) / (sum * sum * sum),
    }
}

/// A closed boundary curve, optionally composed with the graded-mesh
/// substitution `t = w(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    shape: Shape,
    grading: Option<f64>,
}

impl BoundaryCurve {
    pub fn new(shape: Shape) -> Result<Self> {
        if let Shape::Circle { radius } = shape {
            if !(radius.is_finite() && radius > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "circle radius must be positive, got {radius}"
                )));
            }
        }
        Ok(BoundaryCurve {
            shape,
            grading: None,
        })
    }

    /// Composes the curve with the graded map of exponent `p >= 2`.
    pub fn with_grading(mut self, p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "grading exponent must be >= 2, got {p}"
            )));
        }
        self.grading = Some(p);
        Ok(self)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn grading(&self) -> Option<f64> {
        self.grading
    }

    /// Position and derivatives at parameter `t`; graded curves apply the
    /// chain rule `z~' = z'(w) w'`, `z~'' = z''(w) w'^2 + z'(w) w''`.
    pub fn eval(&self, t: f64) -> CurvePoint {
        match self.grading {
            None => self.shape.eval(t),
            Some(p) => {
                let g = graded_map(p, t.rem_euclid(TAU));
                let base = self.shape.eval(g.w);
                let dw2 = g.dw * g.dw;
                CurvePoint {
                    z: base.z,
                    dz: [base.dz[0] * g.dw, base.dz[1] * g.dw],
                    ddz: [
                        base.ddz[0] * dw2 + base.dz[0] * g.ddw,
                        base.ddz[1] * dw2 + base.dz[1] * g.ddw,
                    ],
                }
            }
        }
    }

    pub fn frame(&self, t: f64) -> Result<Frame> {
        frame_of(&self.eval(t), t)
    }

    /// Signed enclosed area by the trapezoidal rule on `m` points; positive
    /// for counterclockwise orientation.
    pub fn signed_area(&self, m: usize) -> f64 {
        let h = TAU / m as f64;
        (0..m)
            .map(|i| {
                let p = self.shape.eval(h * (i as f64 + 0.5));
                0.5 * (p.z[0] * p.dz[1] - p.z[1] * p.dz[0])
            })
            .sum::<f64>()
            * h
    }

    /// Winding number of the curve around `x`, from the boundary integral of
    /// the angle increment (trapezoid on `m` points, exact to rounding for
    /// points not close to the curve).
    pub fn winding_number(&self, x: Vec2, m: usize) -> f64 {
        let h = TAU / m as f64;
        (0..m)
            .map(|i| {
                let p = self.shape.eval(h * (i as f64 + 0.5));
                let d = sub(p.z, x);
                (d[0] * p.dz[1] - d[1] * p.dz[0]) / dot(d, d)
            })
            .sum::<f64>()
            * h
            / TAU
    }

    /// Distance from `x` to the curve sampled at `m` parameter values.
    pub fn distance_to(&self, x: Vec2, m: usize) -> f64 {
        (0..m)
            .map(|i| norm(sub(self.shape.eval(TAU * i as f64 / m as f64).z, x)))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn frame_of(p: &CurvePoint, t: f64) -> Result<Frame> {
    let speed = p.speed();
    if !(speed >= 1e-14) {
        return Err(Error::DegenerateParametrization { t, speed });
    }
    Ok(Frame {
        n: p.normal(),
        n_perp: p.tangent(),
        speed,
    })
}

/// `2n` equidistant parameters `pi j / n`, offset by `pi / (2n)` when
/// `shifted` so that no node falls on the corner parameter 0.
pub fn collocation_nodes(n: usize, shifted: bool) -> Vec<f64> {
    let h = PI / n as f64;
    let offset = if shifted { 0.5 * h } else { 0.0 };
    (0..2 * n).map(|j| j as f64 * h + offset).collect()
}

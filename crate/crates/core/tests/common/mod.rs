//! Checks shared by the property suite and the acceptance harness. Each
//! returns the worst error it measured so callers can apply their own
//! tolerance.
#![allow(dead_code)]

use elastic_bie::fields::FieldEvaluator;
use elastic_bie::geometry::{BoundaryCurve, Shape};
use elastic_bie::kernels::{split, unsplit, ElasticMedium};
use elastic_bie::quadrature::{cauchy_weights, log_weights, sinlog_weights, trapezoid};
use elastic_bie::specfun::{bessel_j, bessel_y, Order};
use elastic_bie::system::{assemble, boundary_rhs, Incident};
use elastic_bie::verify::reference_fields;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

pub fn table_medium(omega: f64) -> ElasticMedium {
    ElasticMedium::new(3.88, 2.56, omega).unwrap()
}

fn fourier_mode(n: usize, m: i64) -> Vec<Complex64> {
    (0..2 * n)
        .map(|j| Complex64::from_polar(1.0, m as f64 * PI * j as f64 / n as f64))
        .collect()
}

/// Small deterministic sequence in [0, 2pi) for evaluation points.
pub fn sample_points(count: usize) -> Vec<f64> {
    (0..count).map(|k| (0.7548776662466927 * (k as f64 + 1.0)).fract() * TAU).collect()
}

/// Log rule on `e^{i m s}` against `-2pi/|m| e^{i m t}` (and 0 for m = 0).
pub fn log_exactness(n: usize, ts: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for m in -(n as i64 - 1)..n as i64 {
        let f = fourier_mode(n, m);
        for &t in ts {
            let got = log_weights(n, t).apply(&f);
            let want = if m == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(TAU / m.abs() as f64, m as f64 * t) * -1.0
            };
            worst = worst.max((got - want).norm());
        }
    }
    worst
}

/// Discrete `H1 f = sum U_j f_j + (i/2pi) int f` against `i sign(m) f(t)`
/// (`i` for m = 0).
pub fn h1_eigenvalues(n: usize, ts: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for m in -(n as i64 - 1)..n as i64 {
        let f = fourier_mode(n, m);
        let mean = Complex64::new(0.0, 1.0 / TAU) * trapezoid(&f);
        let zeta = if m == 0 { 1.0 } else { m.signum() as f64 };
        for &t in ts {
            let got = cauchy_weights(n, t).apply(&f) + mean;
            let want = Complex64::new(0.0, zeta) * Complex64::from_polar(1.0, m as f64 * t);
            worst = worst.max((got - want).norm());
        }
    }
    worst
}

/// Discrete `H2 f = (1/4pi) sum V_j f_j + (i/2pi) int f` against the
/// eigenvalues `(i/4)(1/|m-1| - 1/|m+1|)`, `-(i/8) sign m` for `|m| = 1`, `i`
/// for `m = 0`.
pub fn h2_eigenvalues(n: usize, ts: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for m in -(n as i64 - 1)..n as i64 {
        let f = fourier_mode(n, m);
        let mean = Complex64::new(0.0, 1.0 / TAU) * trapezoid(&f);
        let xi = match m.abs() {
            0 => Complex64::new(0.0, 1.0),
            1 => Complex64::new(0.0, -0.125 * m.signum() as f64),
            _ => Complex64::new(0.0, 0.25 * (1.0 / (m - 1).abs() as f64 - 1.0 / (m + 1).abs() as f64)),
        };
        for &t in ts {
            let got = sinlog_weights(n, t).apply(&f) / (2.0 * TAU) + mean;
            let want = xi * Complex64::from_polar(1.0, m as f64 * t);
            worst = worst.max((got - want).norm());
        }
    }
    worst
}

/// `V_j(s_i) - R_j(s_i) sin(s_i - s_j)` over all node pairs.
pub fn reduced_identity(n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 * n {
        let t = PI * i as f64 / n as f64;
        let (r, v) = (log_weights(n, t), sinlog_weights(n, t));
        for j in 0..2 * n {
            let s = PI * j as f64 / n as f64;
            worst = worst.max((v.values[j] - r.values[j] * (t - s).sin()).abs());
        }
    }
    worst
}

/// Relative error of the split reconstruction against the direct kernels.
pub fn kernel_reconstruction(shape: Shape, kappa: f64, pairs: &[(f64, f64)]) -> f64 {
    let c = BoundaryCurve::new(shape).unwrap();
    let mut worst = 0.0f64;
    for &(t, s) in pairs {
        let (a, b) = (c.eval(t), c.eval(s));
        let sp = split(kappa, &a, &b, t, s);
        let (k, h) = unsplit(kappa, &a, &b);
        let log = (4.0 * (0.5 * (t - s)).sin().powi(2)).ln();
        let cot = 1.0 / (0.5 * (s - t)).tan();
        let k_rec = sp.k.k1 * log + sp.k.k2;
        let h_rec = sp.h.h2 * log + sp.h.h3 + sp.h.h1 * cot;
        worst = worst.max((k_rec - k).norm() / k.norm().max(1e-300));
        worst = worst.max((h_rec - h).norm() / h.norm().max(1e-300));
    }
    worst
}

/// Relative deviation of `J1 Y0 - J0 Y1` from `2/(pi x)`.
pub fn wronskian(xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| {
            let j0 = bessel_j(Order::Zero, x).unwrap();
            let j1 = bessel_j(Order::One, x).unwrap();
            let y0 = bessel_y(Order::Zero, x).unwrap();
            let y1 = bessel_y(Order::One, x).unwrap();
            let w = 2.0 / (PI * x);
            ((j1 * y0 - j0 * y1) - w).abs() / w
        })
        .fold(0.0, f64::max)
}

/// Analytic gradients of the point-source potentials against central
/// differences (step `1e-6`), relative to the gradient size.
pub fn reference_gradient_fd(points: &[[f64; 2]]) -> f64 {
    let m = table_medium(PI);
    let xbar = [0.1, 0.2];
    let h = 1e-6;
    let mut worst = 0.0f64;
    for &x in points {
        let r = reference_fields(&m, xbar, x).unwrap();
        for c in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[c] += h;
            xm[c] -= h;
            let (p, q) = (reference_fields(&m, xbar, xp).unwrap(), reference_fields(&m, xbar, xm).unwrap());
            let dphi = (p.phi - q.phi) / (2.0 * h);
            let dpsi = (p.psi - q.psi) / (2.0 * h);
            worst = worst.max((dphi - r.grad_phi[c]).norm()).max((dpsi - r.grad_psi[c]).norm());
        }
    }
    worst
}

/// Gradient of the computed potentials against central differences (step
/// `1e-5`) for an apple plane-wave solution.
pub fn field_gradient_fd(points: &[[f64; 2]]) -> f64 {
    let m = table_medium(PI);
    let c = BoundaryCurve::new(Shape::Apple).unwrap();
    let sys = assemble(&m, &c, 32, false).unwrap();
    let rhs = boundary_rhs(&Incident::PlaneP { theta: 0.4, amplitude: 1.0 }, &m, &c, &sys.nodes).unwrap();
    let sol = sys.solve(&rhs).unwrap();
    let eval = FieldEvaluator::new(&sol, &m, &c).unwrap();
    let h = 1e-5;
    let mut worst = 0.0f64;
    for &x in points {
        let s = eval.sample(x).unwrap();
        for k in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let (p, q) = (eval.sample(xp).unwrap(), eval.sample(xm).unwrap());
            worst = worst
                .max(((p.phi - q.phi) / (2.0 * h) - s.grad_phi[k]).norm())
                .max(((p.psi - q.psi) / (2.0 * h) - s.grad_psi[k]).norm());
        }
    }
    worst
}

/// Decay exponent of `|v(r xhat) - (e^{i kp r} vp_inf + e^{i ks r} vs_inf)/sqrt(r)|`
/// fitted over `r = 100, 200, 400` (least squares in log-log), for an apple
/// hit by a plane P-wave.
pub fn far_field_decay_slope() -> f64 {
    let m = table_medium(PI);
    let c = BoundaryCurve::new(Shape::Apple).unwrap();
    let sys = assemble(&m, &c, 64, false).unwrap();
    let rhs = boundary_rhs(&Incident::PlaneP { theta: 0.0, amplitude: 1.0 }, &m, &c, &sys.nodes).unwrap();
    let sol = sys.solve(&rhs).unwrap();
    let eval = FieldEvaluator::new(&sol, &m, &c).unwrap();
    let xhat = [0.6, 0.8];
    let ff = eval.far_field(xhat).unwrap();
    let pts: Vec<(f64, f64)> = [100.0f64, 200.0, 400.0]
        .iter()
        .map(|&r| {
            let v = eval.displacement([r * xhat[0], r * xhat[1]]).unwrap();
            let ep = Complex64::from_polar(1.0 / r.sqrt(), m.kappa_p * r);
            let es = Complex64::from_polar(1.0 / r.sqrt(), m.kappa_s * r);
            let res = ((0..2).map(|k| (v[k] - ep * ff.vp_inf[k] - es * ff.vs_inf[k]).norm_sqr()).sum::<f64>()).sqrt();
            (r.ln(), res.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Near-diagonal convergence of the split kernels to their diagonal values;
/// returns the gaps at `eps = 1e-4` and whether they shrank monotonically
/// over `eps = 1e-2, 1e-3, 1e-4`.
pub fn diagonal_limits(shape: Shape, kappa: f64, t: f64) -> (f64, bool) {
    let c = BoundaryCurve::new(shape).unwrap();
    let a = c.eval(t);
    let diag = split(kappa, &a, &a, t, t);
    let mut prev = [f64::INFINITY; 4];
    let mut monotone = true;
    for eps in [1e-2, 1e-3, 1e-4] {
        let b = c.eval(t + eps);
        let s = split(kappa, &a, &b, t, t + eps);
        let gaps = [
            (s.h.h1 - diag.h.h1).abs(),
            (s.h.h1_tilde - diag.h.h1_tilde).norm(),
            s.h.h3.norm(),
            (s.k.k2 - diag.k.k2).norm() + s.k.k1.norm(),
        ];
        monotone &= gaps.iter().zip(&prev).all(|(g, p)| g < p);
        prev = gaps;
    }
    (prev.iter().copied().fold(0.0, f64::max), monotone)
}

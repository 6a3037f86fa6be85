//! Assembly and dense solution of the collocation system for the densities
//! `phi_l = (g_l o z)|z'|` at the `2n` nodes.
//!
//! Row block one enforces the normal condition, row block two the tangential
//! one:
//!
//! ```text
//! w1_i = -phi1_i + sum_j Xp_ij phi1_j + sum_j Ys_ij phi2_j
//! w2_i =  phi2_i + sum_j Yp_ij phi1_j - sum_j Xs_ij phi2_j
//! ```

use crate::error::{Error, Result};
use crate::geometry::{frame_of, sub, BoundaryCurve, CurvePoint, Vec2};
use crate::kernels::{split, ElasticMedium, SplitKernels};
use crate::quadrature::OffsetWeights;
use crate::specfun::Bessel01;
use faer::linalg::lu::partial_pivoting::{factor, solve};
use faer::{dyn_stack::MemBuffer, dyn_stack::MemStack, Conj, Mat, MatRef, Par};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Residual bound accepted by [`Factorization::solve`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Condition estimates above this are reported as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Incident wave or manufactured point-source data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incident {
    /// Compressional plane wave `d e^{i kp d.x}`, `d = (cos theta, sin theta)`.
    PlaneP { theta: f64, amplitude: f64 },
    /// Shear plane wave `d_perp e^{i ks d.x}`, `d_perp = (-sin theta, cos theta)`.
    PlaneS { theta: f64, amplitude: f64 },
    /// Scattered potentials `H0(kp |x - x0|)`, `H0(ks |x - x0|)` with `x0`
    /// inside the obstacle.
    PointSource { source: Vec2 },
}

/// Right-hand side `w_l = 2 f_l |z'|` at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub w1: Vec<Complex64>,
    pub w2: Vec<Complex64>,
}

/// Node values of the two densities.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySolution {
    pub nodes: Vec<f64>,
    pub phi1: Vec<Complex64>,
    pub phi2: Vec<Complex64>,
    pub condition: f64,
}

impl DensitySolution {
    pub fn n(&self) -> usize {
        self.nodes.len() / 2
    }
}

/// The assembled `4n x 4n` matrix and the nodes it was built on.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub matrix: Mat<Complex64>,
}

/// Curve samples at the collocation nodes.
pub(crate) fn sample_curve(curve: &BoundaryCurve, nodes: &[f64]) -> Result<Vec<CurvePoint>> {
    nodes
        .iter()
        .map(|&t| {
            let p = curve.eval(t);
            frame_of(&p, t)?;
            Ok(p)
        })
        .collect()
}

pub fn assemble(medium: &ElasticMedium, curve: &BoundaryCurve, n: usize, shifted: bool) -> Result<DiscreteSystem> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("need n >= 4, got {n}")));
    }
    let nodes = crate::geometry::collocation_nodes(n, shifted);
    let points = sample_curve(curve, &nodes)?;
    let weights = OffsetWeights::new(n);
    let m = 2 * n;
    let h = PI / n as f64;
    let mut a = Mat::<Complex64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let k = weights.index(i, j);
            let (r, u) = (weights.log[k], weights.cauchy[k]);
            let p = split(medium.kappa_p, &points[i], &points[j], nodes[i], nodes[j]);
            let s = split(medium.kappa_s, &points[i], &points[j], nodes[i], nodes[j]);
            let (xp, yp) = (x_weight(&p, r, h), y_weight(&p, r, u, h));
            let (xs, ys) = (x_weight(&s, r, h), y_weight(&s, r, u, h));
            let delta = if i == j { 1.0 } else { 0.0 };
            a[(i, j)] = xp - delta;
            a[(i, m + j)] = ys;
            a[(m + i, j)] = yp;
            a[(m + i, m + j)] = -xs + delta;
        }
    }
    Ok(DiscreteSystem { n, nodes, matrix: a })
}

#[inline]
fn x_weight(s: &SplitKernels, r: f64, h: f64) -> Complex64 {
    s.k.k1 * r + s.k.k2 * h
}

#[inline]
fn y_weight(s: &SplitKernels, r: f64, u: f64, h: f64) -> Complex64 {
    s.h.h2 * r + (s.h.h3 + s.h.h1_tilde) * h + u
}

/// LU factors of a system together with its condition estimate.
pub struct Factorization<'a> {
    system: &'a DiscreteSystem,
    lu: Mat<Complex64>,
    perm: Vec<usize>,
    perm_inv: Vec<usize>,
    condition: f64,
}

impl DiscreteSystem {
    /// Factors a copy of the matrix with partial pivoting and estimates the
    /// one-norm condition number.
    pub fn factor(&self) -> Result<Factorization<'_>> {
        let dim = self.matrix.nrows();
        let mut lu = self.matrix.clone();
        let mut perm = vec![0usize; dim];
        let mut perm_inv = vec![0usize; dim];
        let mut mem = MemBuffer::new(factor::lu_in_place_scratch::<usize, Complex64>(
            dim,
            dim,
            Par::Seq,
            Default::default(),
        ));
        factor::lu_in_place(
            lu.as_mut(),
            &mut perm,
            &mut perm_inv,
            Par::Seq,
            MemStack::new(&mut mem),
            Default::default(),
        );
        let mut f = Factorization {
            system: self,
            lu,
            perm,
            perm_inv,
            condition: f64::INFINITY,
        };
        let inverse_norm = f.inverse_one_norm();
        let condition = one_norm(self.matrix.as_ref()) * inverse_norm;
        log::debug!("n = {}: condition estimate {condition:.3e}", self.n);
        if !condition.is_finite() || condition > SINGULAR_CONDITION {
            return Err(Error::SingularSystem { condition });
        }
        f.condition = condition;
        Ok(f)
    }

    /// Factors and solves in one step.
    pub fn solve(&self, rhs: &BoundaryData) -> Result<DensitySolution> {
        self.factor()?.solve(rhs)
    }
}

fn one_norm(a: MatRef<'_, Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl Factorization<'_> {
    pub fn condition(&self) -> f64 {
        self.condition
    }

    fn apply_inverse(&self, x: &mut Mat<Complex64>, adjoint: bool) {
        let dim = self.lu.nrows();
        let perm = unsafe { faer::perm::PermRef::new_unchecked(&self.perm, &self.perm_inv, dim) };
        let lu = self.lu.as_ref();
        let mut mem = MemBuffer::new(solve::solve_in_place_scratch::<usize, Complex64>(dim, x.ncols(), Par::Seq));
        let stack = MemStack::new(&mut mem);
        if adjoint {
            solve::solve_transpose_in_place_with_conj(lu, lu, perm, Conj::Yes, x.as_mut(), Par::Seq, stack);
        } else {
            solve::solve_in_place_with_conj(lu, lu, perm, Conj::No, x.as_mut(), Par::Seq, stack);
        }
    }

    /// Hager's estimate of `||A^{-1}||_1` (Higham's variant, at most five
    /// iterations).
    fn inverse_one_norm(&self) -> f64 {
        let dim = self.lu.nrows();
        let mut x = Mat::<Complex64>::from_fn(dim, 1, |_, _| Complex64::new(1.0 / dim as f64, 0.0));
        let mut estimate = 0.0;
        let mut last = usize::MAX;
        for _ in 0..5 {
            self.apply_inverse(&mut x, false);
            let norm: f64 = (0..dim).map(|i| x[(i, 0)].norm()).sum();
            if !norm.is_finite() {
                return f64::INFINITY;
            }
            if norm <= estimate {
                break;
            }
            estimate = norm;
            for i in 0..dim {
                let v = x[(i, 0)];
                let a = v.norm();
                x[(i, 0)] = if a == 0.0 { Complex64::new(1.0, 0.0) } else { v / a };
            }
            self.apply_inverse(&mut x, true);
            let (jmax, _) = (0..dim)
                .map(|i| (i, x[(i, 0)].norm()))
                .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            if jmax == last {
                break;
            }
            last = jmax;
            x = Mat::<Complex64>::zeros(dim, 1);
            x[(jmax, 0)] = Complex64::new(1.0, 0.0);
        }
        // alternating-sign test vector guards against underestimates
        let mut y = Mat::<Complex64>::from_fn(dim, 1, |i, _| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * (1.0 + i as f64 / (dim as f64 - 1.0).max(1.0)), 0.0)
        });
        self.apply_inverse(&mut y, false);
        let alt: f64 = (0..dim).map(|i| y[(i, 0)].norm()).sum::<f64>() * 2.0 / (3.0 * dim as f64);
        estimate.max(alt)
    }

    /// Solves for the densities and checks the relative residual.
    pub fn solve(&self, rhs: &BoundaryData) -> Result<DensitySolution> {
        let m = 2 * self.system.n;
        for len in [rhs.w1.len(), rhs.w2.len()] {
            if len != m {
                return Err(Error::DimensionMismatch { expected: m, found: len });
            }
        }
        let w = Mat::<Complex64>::from_fn(2 * m, 1, |i, _| if i < m { rhs.w1[i] } else { rhs.w2[i - m] });
        let mut x = w.clone();
        self.apply_inverse(&mut x, false);
        let residual = &self.system.matrix * &x - &w;
        let scale = (0..2 * m).map(|i| w[(i, 0)].norm()).fold(0.0, f64::max);
        let res = (0..2 * m).map(|i| residual[(i, 0)].norm()).fold(0.0, f64::max);
        if !res.is_finite() || res > RESIDUAL_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            if scale == 0.0 && res == 0.0 {
                // zero data, zero solution
            } else {
                log::warn!("relative residual {:.3e} exceeds tolerance", res / scale);
                return Err(Error::SingularSystem { condition: self.condition });
            }
        }
        Ok(DensitySolution {
            nodes: self.system.nodes.clone(),
            phi1: (0..m).map(|i| x[(i, 0)]).collect(),
            phi2: (m..2 * m).map(|i| x[(i, 0)]).collect(),
            condition: self.condition,
        })
    }
}

/// Boundary data `w_l = 2 f_l |z'|` for the given incidence.
pub fn boundary_rhs(incident: &Incident, medium: &ElasticMedium, curve: &BoundaryCurve, nodes: &[f64]) -> Result<BoundaryData> {
    if let Incident::PointSource { source } = incident {
        check_source_inside(curve, *source)?;
    }
    let mut w1 = Vec::with_capacity(nodes.len());
    let mut w2 = Vec::with_capacity(nodes.len());
    for &t in nodes {
        let p = curve.eval(t);
        let f = frame_of(&p, t)?;
        let (n, np) = (f.n, f.n_perp);
        let (a, b) = match *incident {
            Incident::PlaneP { theta, amplitude } => {
                let d = [theta.cos(), theta.sin()];
                let u = plane(medium.kappa_p, d, d, amplitude, p.z);
                (-dotc(n, u), -dotc(np, u))
            }
            Incident::PlaneS { theta, amplitude } => {
                let d = [theta.cos(), theta.sin()];
                let u = plane(medium.kappa_s, d, [-d[1], d[0]], amplitude, p.z);
                (-dotc(n, u), -dotc(np, u))
            }
            Incident::PointSource { source } => {
                let gp = hankel_gradient(medium.kappa_p, sub(p.z, source));
                let gs = hankel_gradient(medium.kappa_s, sub(p.z, source));
                (dotc(n, gp) + dotc(np, gs), dotc(np, gp) - dotc(n, gs))
            }
        };
        // the unnormalized frame already carries the factor |z'|
        w1.push(2.0 * a);
        w2.push(2.0 * b);
    }
    Ok(BoundaryData { w1, w2 })
}

/// Rejects sources outside or within `1e-6` of the curve.
pub fn check_source_inside(curve: &BoundaryCurve, source: Vec2) -> Result<()> {
    let inside = curve.winding_number(source, 4096).abs() > 0.5;
    if !inside || curve.distance_to(source, 4096) <= 1e-6 {
        return Err(Error::SourceNotInside { x: source[0], y: source[1] });
    }
    Ok(())
}

fn plane(kappa: f64, d: Vec2, polarization: Vec2, amplitude: f64, x: Vec2) -> [Complex64; 2] {
    let e = Complex64::from_polar(amplitude, kappa * (d[0] * x[0] + d[1] * x[1]));
    [e * polarization[0], e * polarization[1]]
}

#[inline]
fn dotc(a: Vec2, u: [Complex64; 2]) -> Complex64 {
    u[0] * a[0] + u[1] * a[1]
}

/// `grad H0(kappa |d|) = -kappa H1(kappa |d|) d / |d|`.
pub(crate) fn hankel_gradient(kappa: f64, d: Vec2) -> [Complex64; 2] {
    let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let c = -kappa * Bessel01::eval(kappa * r).h1() / r;
    [c * d[0], c * d[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    fn medium() -> ElasticMedium {
        ElasticMedium::new(3.88, 2.56, PI).unwrap()
    }

    #[test]
    fn diagonal_of_first_block() {
        let c = BoundaryCurve::new(Shape::Apple).unwrap();
        let m = medium();
        let n = 8;
        let sys = assemble(&m, &c, n, false).unwrap();
        for i in 0..2 * n {
            let t = sys.nodes[i];
            let p = c.eval(t);
            let k2 = split(m.kappa_p, &p, &p, t, t).k.k2;
            let expect = k2 * (PI / n as f64) - 1.0;
            assert!((sys.matrix[(i, i)] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn solve_recovers_known_vector_and_zero() {
        let c = BoundaryCurve::new(Shape::Peach).unwrap();
        let sys = assemble(&medium(), &c, 8, false).unwrap();
        let dim = 32;
        let x = Mat::<Complex64>::from_fn(dim, 1, |i, _| Complex64::new((i as f64 * 0.7).sin(), (i as f64).cos()));
        let w = &sys.matrix * &x;
        let rhs = BoundaryData {
            w1: (0..16).map(|i| w[(i, 0)]).collect(),
            w2: (16..32).map(|i| w[(i, 0)]).collect(),
        };
        let sol = sys.solve(&rhs).unwrap();
        for i in 0..16 {
            assert!((sol.phi1[i] - x[(i, 0)]).norm() < 1e-11);
            assert!((sol.phi2[i] - x[(16 + i, 0)]).norm() < 1e-11);
        }
        assert!(sol.condition >= 1.0);
        let zero = BoundaryData {
            w1: vec![Complex64::new(0.0, 0.0); 16],
            w2: vec![Complex64::new(0.0, 0.0); 16],
        };
        let z = sys.solve(&zero).unwrap();
        assert!(z.phi1.iter().chain(&z.phi2).all(|v| v.norm() == 0.0));
        let short = BoundaryData { w1: vec![], w2: vec![] };
        assert!(matches!(sys.solve(&short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn plane_wave_traces() {
        let m = medium();
        let c = BoundaryCurve::new(Shape::Circle { radius: 1.0 }).unwrap();
        // at t = pi/2: z = (0,1), n = (0,-1)... use t = 0 with translated phase
        let p = boundary_rhs(&Incident::PlaneP { theta: 0.0, amplitude: 1.0 }, &m, &c, &[0.0]).unwrap();
        let phase = Complex64::from_polar(1.0, m.kappa_p);
        assert!((p.w1[0] + 2.0 * phase).norm() < 1e-15);
        assert!(p.w2[0].norm() < 1e-15);
        let s = boundary_rhs(&Incident::PlaneS { theta: 0.0, amplitude: 1.0 }, &m, &c, &[0.0]).unwrap();
        let phase = Complex64::from_polar(1.0, m.kappa_s);
        assert!(s.w1[0].norm() < 1e-15);
        assert!((s.w2[0] + 2.0 * phase).norm() < 1e-15);
    }

    #[test]
    fn source_must_be_inside() {
        let c = BoundaryCurve::new(Shape::Apple).unwrap();
        let m = medium();
        let out = Incident::PointSource { source: [5.0, 0.0] };
        assert!(matches!(boundary_rhs(&out, &m, &c, &[0.0]), Err(Error::SourceNotInside { .. })));
        let inside = Incident::PointSource { source: [0.1, 0.2] };
        assert!(boundary_rhs(&inside, &m, &c, &[0.0, 1.0]).is_ok());
    }
}

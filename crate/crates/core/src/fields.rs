//! Potentials, displacement and far-field patterns generated by a density
//! solution, all evaluated with the trapezoidal rule over the nodes.

use crate::error::{Error, Result};
use crate::geometry::{norm, sub, BoundaryCurve, CurvePoint, Vec2};
use crate::kernels::ElasticMedium;
use crate::specfun::Bessel01;
use crate::system::{sample_curve, DensitySolution};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// Far-field data in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarField {
    pub direction: Vec2,
    pub phi_inf: Complex64,
    pub psi_inf: Complex64,
    /// `i kp phi_inf x`
    pub vp_inf: [Complex64; 2],
    /// `-i ks psi_inf x_perp`
    pub vs_inf: [Complex64; 2],
}

/// Potentials and their gradients at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub phi: Complex64,
    pub psi: Complex64,
    pub grad_phi: [Complex64; 2],
    pub grad_psi: [Complex64; 2],
}

impl FieldSample {
    /// `v = grad phi + (d2 psi, -d1 psi)`.
    pub fn displacement(&self) -> [Complex64; 2] {
        [self.grad_phi[0] + self.grad_psi[1], self.grad_phi[1] - self.grad_psi[0]]
    }
}

/// A density solution bound to its curve samples for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FieldEvaluator<'a> {
    solution: &'a DensitySolution,
    medium: ElasticMedium,
    points: Vec<CurvePoint>,
    /// `3 x` the larger chord to a neighbouring node, per node.
    radii: Vec<f64>,
}

impl<'a> FieldEvaluator<'a> {
    pub fn new(solution: &'a DensitySolution, medium: &ElasticMedium, curve: &BoundaryCurve) -> Result<Self> {
        let m = solution.nodes.len();
        if solution.phi1.len() != m || solution.phi2.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: solution.phi1.len().min(solution.phi2.len()),
            });
        }
        let points = sample_curve(curve, &solution.nodes)?;
        let gaps: Vec<f64> = (0..m)
            .map(|j| norm(sub(points[(j + 1) % m].z, points[j].z)))
            .collect();
        let radii = (0..m).map(|j| 3.0 * gaps[j].max(gaps[(j + m - 1) % m])).collect();
        Ok(FieldEvaluator {
            solution,
            medium: *medium,
            points,
            radii,
        })
    }

    /// Whether `x` lies within three local node spacings of some node, where
    /// the trapezoidal sums lose accuracy.
    pub fn is_excluded(&self, x: Vec2) -> bool {
        self.violation(x).is_some()
    }

    fn violation(&self, x: Vec2) -> Option<(f64, f64)> {
        self.points
            .iter()
            .zip(&self.radii)
            .map(|(p, &r)| (norm(sub(x, p.z)), r))
            .find(|&(d, r)| !(d > r))
    }

    fn check(&self, x: Vec2) -> Result<()> {
        match self.violation(x) {
            Some((distance, threshold)) => Err(Error::NearBoundary {
                x: x[0],
                y: x[1],
                distance,
                threshold,
            }),
            None => Ok(()),
        }
    }

    /// Potentials and gradients at `x`.
    pub fn sample(&self, x: Vec2) -> Result<FieldSample> {
        self.check(x)?;
        let h = PI / self.solution.n() as f64;
        let (kp, ks) = (self.medium.kappa_p, self.medium.kappa_s);
        let zero = Complex64::new(0.0, 0.0);
        let mut out = FieldSample {
            phi: zero,
            psi: zero,
            grad_phi: [zero; 2],
            grad_psi: [zero; 2],
        };
        let quarter_i = Complex64::new(0.0, 0.25);
        for (j, p) in self.points.iter().enumerate() {
            let d = sub(x, p.z);
            let r = norm(d);
            let bp = Bessel01::eval(kp * r);
            let bs = Bessel01::eval(ks * r);
            let (f1, f2) = (self.solution.phi1[j], self.solution.phi2[j]);
            out.phi += bp.h0() * f1;
            out.psi += bs.h0() * f2;
            let gp = -kp * bp.h1() * f1 / r;
            let gs = -ks * bs.h1() * f2 / r;
            for c in 0..2 {
                out.grad_phi[c] += gp * d[c];
                out.grad_psi[c] += gs * d[c];
            }
        }
        let scale = quarter_i * h;
        out.phi *= scale;
        out.psi *= scale;
        for c in 0..2 {
            out.grad_phi[c] *= scale;
            out.grad_psi[c] *= scale;
        }
        Ok(out)
    }

    pub fn potentials(&self, x: Vec2) -> Result<(Complex64, Complex64)> {
        let s = self.sample(x)?;
        Ok((s.phi, s.psi))
    }

    pub fn displacement(&self, x: Vec2) -> Result<[Complex64; 2]> {
        Ok(self.sample(x)?.displacement())
    }

    /// Far-field patterns in direction `xhat`.
    pub fn far_field(&self, xhat: Vec2) -> Result<FarField> {
        let len = norm(xhat);
        if !((len - 1.0).abs() <= 1e-12) {
            return Err(Error::NonUnitDirection { norm: len });
        }
        let h = PI / self.solution.n() as f64;
        let (kp, ks) = (self.medium.kappa_p, self.medium.kappa_s);
        let mut sp = Complex64::new(0.0, 0.0);
        let mut ss = Complex64::new(0.0, 0.0);
        for (j, p) in self.points.iter().enumerate() {
            let proj = xhat[0] * p.z[0] + xhat[1] * p.z[1];
            sp += Complex64::from_polar(1.0, -kp * proj) * self.solution.phi1[j];
            ss += Complex64::from_polar(1.0, -ks * proj) * self.solution.phi2[j];
        }
        let phi_inf = gamma(kp) * sp * h;
        let psi_inf = gamma(ks) * ss * h;
        let ip = Complex64::new(0.0, kp) * phi_inf;
        let is = Complex64::new(0.0, -ks) * psi_inf;
        Ok(FarField {
            direction: xhat,
            phi_inf,
            psi_inf,
            vp_inf: [ip * xhat[0], ip * xhat[1]],
            vs_inf: [is * -xhat[1], is * xhat[0]],
        })
    }
}

/// `e^{i pi/4} / sqrt(8 kappa pi)`.
pub fn gamma(kappa: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (8.0 * kappa * PI).sqrt(), FRAC_PI_4)
}

pub fn eval_potentials(
    solution: &DensitySolution,
    medium: &ElasticMedium,
    curve: &BoundaryCurve,
    x: Vec2,
) -> Result<(Complex64, Complex64)> {
    FieldEvaluator::new(solution, medium, curve)?.potentials(x)
}

pub fn eval_displacement(
    solution: &DensitySolution,
    medium: &ElasticMedium,
    curve: &BoundaryCurve,
    x: Vec2,
) -> Result<[Complex64; 2]> {
    FieldEvaluator::new(solution, medium, curve)?.displacement(x)
}

pub fn far_field(solution: &DensitySolution, medium: &ElasticMedium, curve: &BoundaryCurve, xhat: Vec2) -> Result<FarField> {
    FieldEvaluator::new(solution, medium, curve)?.far_field(xhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{collocation_nodes, Shape};

    fn zero_solution(n: usize) -> DensitySolution {
        DensitySolution {
            nodes: collocation_nodes(n, false),
            phi1: vec![Complex64::new(0.0, 0.0); 2 * n],
            phi2: vec![Complex64::new(0.0, 0.0); 2 * n],
            condition: 1.0,
        }
    }

    #[test]
    fn zero_densities_give_zero_fields() {
        let m = ElasticMedium::new(3.88, 2.56, PI).unwrap();
        let c = BoundaryCurve::new(Shape::Apple).unwrap();
        let s = zero_solution(8);
        let e = FieldEvaluator::new(&s, &m, &c).unwrap();
        let (p, q) = e.potentials([3.0, 0.0]).unwrap();
        assert_eq!((p.norm(), q.norm()), (0.0, 0.0));
        let ff = e.far_field([0.0, 1.0]).unwrap();
        assert_eq!(ff.phi_inf.norm() + ff.psi_inf.norm(), 0.0);
        assert!(matches!(e.far_field([1.0, 1.0]), Err(Error::NonUnitDirection { .. })));
        assert!(matches!(e.potentials(c.eval(0.3).z), Err(Error::NearBoundary { .. })));
    }

    #[test]
    fn far_field_polarization() {
        let m = ElasticMedium::new(3.88, 2.56, PI).unwrap();
        let c = BoundaryCurve::new(Shape::Circle { radius: 1.0 }).unwrap();
        let mut s = zero_solution(8);
        for (j, t) in s.nodes.clone().iter().enumerate() {
            s.phi1[j] = Complex64::new(t.cos(), 0.3);
            s.phi2[j] = Complex64::new(1.0, t.sin());
        }
        let x = [0.6, 0.8];
        let ff = far_field(&s, &m, &c, x).unwrap();
        let xp = [-0.8, 0.6];
        assert!((ff.vp_inf[0] * xp[0] + ff.vp_inf[1] * xp[1]).norm() < 1e-16);
        assert!((ff.vs_inf[0] * x[0] + ff.vs_inf[1] * x[1]).norm() < 1e-16);
    }
}

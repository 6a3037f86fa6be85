//! Manufactured solutions, the discrete L2 error on the observation circle
//! and convergence studies.

use crate::error::{Error, Result};
use crate::fields::FieldEvaluator;
use crate::geometry::{norm, sub, BoundaryCurve, Shape, Vec2};
use crate::kernels::ElasticMedium;
use crate::specfun::Bessel01;
use crate::system::{assemble, boundary_rhs, DensitySolution, Incident};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

/// Exact point-source potentials and gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceFields {
    pub phi: Complex64,
    pub psi: Complex64,
    pub grad_phi: [Complex64; 2],
    pub grad_psi: [Complex64; 2],
}

/// `phi* = H0(kp |x - xbar|)`, `psi* = H0(ks |x - xbar|)` and their gradients.
pub fn reference_fields(medium: &ElasticMedium, xbar: Vec2, x: Vec2) -> Result<ReferenceFields> {
    let d = sub(x, xbar);
    let r = norm(d);
    if r == 0.0 {
        return Err(Error::CoincidentSource);
    }
    let bp = Bessel01::eval(medium.kappa_p * r);
    let bs = Bessel01::eval(medium.kappa_s * r);
    let gp = -medium.kappa_p * bp.h1() / r;
    let gs = -medium.kappa_s * bs.h1() / r;
    Ok(ReferenceFields {
        phi: bp.h0(),
        psi: bs.h0(),
        grad_phi: [gp * d[0], gp * d[1]],
        grad_psi: [gs * d[0], gs * d[1]],
    })
}

/// `sqrt((2 pi R / len) sum |a - b|^2)` for samples at `len` equispaced
/// points of the circle of radius `radius`.
pub fn l2_error(numeric: &[Complex64], reference: &[Complex64], radius: f64) -> Result<f64> {
    if numeric.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            found: numeric.len(),
        });
    }
    if numeric.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = numeric.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok((2.0 * PI * radius / numeric.len() as f64 * sum).sqrt())
}

/// The `2 count` observation points `radius (cos(pi i / count), sin(pi i / count))`.
pub fn observation_points(radius: f64, count: usize) -> Vec<Vec2> {
    (0..2 * count)
        .map(|i| {
            let t = PI * i as f64 / count as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect()
}

/// Parameters of one convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub shape: Shape,
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub incident: Incident,
    pub n_values: Vec<usize>,
    /// Graded-mesh exponent; `None` uses the plain parametrization.
    pub grading: Option<f64>,
    pub shifted: bool,
    pub obs_radius: f64,
    pub obs_count: usize,
    /// Reference resolution for incidences without an exact solution.
    pub ref_n: usize,
}

impl StudyConfig {
    /// Point-source study on `shape` with the medium used throughout the
    /// tables (`lambda = 3.88`, `mu = 2.56`); corner shapes get `p = 2` and
    /// shifted nodes.
    pub fn manufactured(shape: Shape, omega: f64, n_values: Vec<usize>) -> Self {
        let corner = shape.has_corner();
        StudyConfig {
            incident: Incident::PointSource {
                source: shape.default_source(),
            },
            shape,
            lambda: 3.88,
            mu: 2.56,
            omega,
            n_values,
            grading: corner.then_some(2.0),
            shifted: corner,
            obs_radius: 3.0,
            obs_count: 16,
            ref_n: 4096,
        }
    }

    pub fn medium(&self) -> Result<ElasticMedium> {
        ElasticMedium::new(self.lambda, self.mu, self.omega)
    }

    pub fn curve(&self) -> Result<BoundaryCurve> {
        let c = BoundaryCurve::new(self.shape.clone())?;
        match self.grading {
            Some(p) => c.with_grading(p),
            None => Ok(c),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidParameter("empty list of n".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("n values must be strictly increasing".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 4) {
            return Err(Error::InvalidParameter(format!("need n >= 4, got {n}")));
        }
        if self.obs_count == 0 {
            return Err(Error::InvalidParameter("observation count must be positive".into()));
        }
        let curve = self.curve()?;
        self.medium()?;
        let r = self.obs_radius;
        let outside = r.is_finite()
            && observation_points(r, self.obs_count)
                .iter()
                .all(|&x| curve.winding_number(x, 2048).abs() < 0.5);
        if !outside {
            return Err(Error::InvalidParameter(format!(
                "observation circle of radius {r} must lie outside the obstacle"
            )));
        }
        if let Incident::PointSource { source } = self.incident {
            crate::system::check_source_inside(&curve, source)?;
        }
        if !self.is_manufactured() && self.ref_n < 4 {
            return Err(Error::InvalidParameter(format!("reference n must be >= 4, got {}", self.ref_n)));
        }
        Ok(())
    }

    fn is_manufactured(&self) -> bool {
        matches!(self.incident, Incident::PointSource { .. })
    }

    /// Solves at resolution `n`.
    pub fn solve(&self, n: usize) -> Result<DensitySolution> {
        let medium = self.medium()?;
        let curve = self.curve()?;
        let system = assemble(&medium, &curve, n, self.shifted)?;
        let rhs = boundary_rhs(&self.incident, &medium, &curve, &system.nodes)?;
        system.solve(&rhs)
    }

    /// Potentials at the observation points from a solution at resolution `n`.
    fn observe(&self, solution: &DensitySolution) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let medium = self.medium()?;
        let curve = self.curve()?;
        let eval = FieldEvaluator::new(solution, &medium, &curve)?;
        let mut phi = Vec::new();
        let mut psi = Vec::new();
        for x in observation_points(self.obs_radius, self.obs_count) {
            let (a, b) = eval.potentials(x)?;
            phi.push(a);
            psi.push(b);
        }
        Ok((phi, psi))
    }

    /// Reference potentials at the observation points: exact for point
    /// sources, the `ref_n` solution otherwise.
    pub fn reference(&self) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        match self.incident {
            Incident::PointSource { source } => {
                let medium = self.medium()?;
                let mut phi = Vec::new();
                let mut psi = Vec::new();
                for x in observation_points(self.obs_radius, self.obs_count) {
                    let r = reference_fields(&medium, source, x)?;
                    phi.push(r.phi);
                    psi.push(r.psi);
                }
                Ok((phi, psi))
            }
            _ => self.observe(&self.solve(self.ref_n)?),
        }
    }
}

/// Errors at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub err_phi: f64,
    pub err_psi: f64,
    pub cond_estimate: f64,
    pub wall_time: Duration,
}

/// Runs every resolution of the study. A failure at one `n` is reported in
/// its slot without stopping the others; a failure of the reference aborts.
pub fn run_study(config: &StudyConfig) -> Result<Vec<Result<ErrorReport>>> {
    config.validate()?;
    let (ref_phi, ref_psi) = config.reference()?;
    Ok(config
        .n_values
        .iter()
        .map(|&n| {
            let start = Instant::now();
            let solution = config.solve(n)?;
            let (phi, psi) = config.observe(&solution)?;
            let report = ErrorReport {
                n,
                err_phi: l2_error(&phi, &ref_phi, config.obs_radius)?,
                err_psi: l2_error(&psi, &ref_psi, config.obs_radius)?,
                cond_estimate: solution.condition,
                wall_time: start.elapsed(),
            };
            log::info!(
                "n = {n}: err_phi {:.4e}, err_psi {:.4e}, cond {:.3e}",
                report.err_phi,
                report.err_psi,
                report.cond_estimate
            );
            Ok(report)
        })
        .collect())
}

//! C ABI for the elastic scattering solver.
//!
//! Problems and solutions are opaque heap handles created by `eb_*_new` /
//! `eb_solve` and released with the matching `eb_*_free`. Every function
//! returns an [`EbStatus`]; on failure a description is available from
//! [`eb_last_error`] on the same thread.

use elastic_bie::fields::FieldEvaluator;
use elastic_bie::geometry::{BoundaryCurve, Shape};
use elastic_bie::kernels::ElasticMedium;
use elastic_bie::system::{assemble, boundary_rhs, DensitySolution, Incident};
use elastic_bie::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularSystem = 3,
    NearBoundary = 4,
    SourceNotInside = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbShape {
    Apple = 0,
    Peach = 1,
    Drop = 2,
    Heart = 3,
    UnitCircle = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbWave {
    Compressional = 0,
    Shear = 1,
}

/// Obstacle, medium, incidence and discretization options.
pub struct EbProblem {
    shape: Shape,
    medium: ElasticMedium,
    incident: Incident,
    grading: Option<f64>,
    shifted: bool,
}

/// Densities of a solved problem bound to its curve and medium.
pub struct EbSolution {
    solution: DensitySolution,
    curve: BoundaryCurve,
    medium: ElasticMedium,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EbStatus {
    match e {
        Error::SingularSystem { .. } | Error::DegenerateParametrization { .. } => EbStatus::SingularSystem,
        Error::NearBoundary { .. } => EbStatus::NearBoundary,
        Error::SourceNotInside { .. } => EbStatus::SourceNotInside,
        _ => EbStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (EbStatus, String)>) -> EbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EbStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EbStatus::Internal
        }
    }
}

fn lib(e: Error) -> (EbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EbStatus, String) {
    (EbStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn eb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a problem with the default point-source data for `shape`
/// (grading `p = 2` with shifted nodes for the drop and heart).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn eb_problem_new(
    shape: EbShape,
    lambda: f64,
    mu: f64,
    omega: f64,
    out: *mut *mut EbProblem,
) -> EbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let shape = match shape {
            EbShape::Apple => Shape::Apple,
            EbShape::Peach => Shape::Peach,
            EbShape::Drop => Shape::Drop,
            EbShape::Heart => Shape::Heart,
            EbShape::UnitCircle => Shape::Circle { radius: 1.0 },
        };
        let medium = ElasticMedium::new(lambda, mu, omega).map_err(lib)?;
        let corner = shape.has_corner();
        let problem = EbProblem {
            incident: Incident::PointSource {
                source: shape.default_source(),
            },
            shape,
            medium,
            grading: corner.then_some(2.0),
            shifted: corner,
        };
        *out = Box::into_raw(Box::new(problem));
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle from [`eb_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eb_problem_free(problem: *mut EbProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Switches to plane-wave incidence at angle `theta`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn eb_problem_set_plane_wave(
    problem: *mut EbProblem,
    wave: EbWave,
    theta: f64,
    amplitude: f64,
) -> EbStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| null("problem"))?;
        if !theta.is_finite() || !amplitude.is_finite() {
            return Err((EbStatus::InvalidArgument, "non-finite angle or amplitude".into()));
        }
        p.incident = match wave {
            EbWave::Compressional => Incident::PlaneP { theta, amplitude },
            EbWave::Shear => Incident::PlaneS { theta, amplitude },
        };
        Ok(())
    })
}

/// Switches to manufactured point-source data with source `(x, y)`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn eb_problem_set_point_source(problem: *mut EbProblem, x: f64, y: f64) -> EbStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| null("problem"))?;
        let curve = BoundaryCurve::new(p.shape.clone()).map_err(lib)?;
        elastic_bie::system::check_source_inside(&curve, [x, y]).map_err(lib)?;
        p.incident = Incident::PointSource { source: [x, y] };
        Ok(())
    })
}

/// Sets the graded-mesh exponent (`0` disables grading) and node shift.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn eb_problem_set_grading(problem: *mut EbProblem, p: f64, shifted: bool) -> EbStatus {
    guard(|| {
        let problem = problem.as_mut().ok_or_else(|| null("problem"))?;
        let grading = (p != 0.0).then_some(p);
        if let Some(p) = grading {
            BoundaryCurve::new(problem.shape.clone())
                .and_then(|c| c.with_grading(p))
                .map_err(lib)?;
        }
        problem.grading = grading;
        problem.shifted = shifted;
        Ok(())
    })
}

/// Assembles and solves with `2n` nodes.
///
/// # Safety
/// `problem` must be a live handle and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn eb_solve(problem: *const EbProblem, n: usize, out: *mut *mut EbSolution) -> EbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut curve = BoundaryCurve::new(p.shape.clone()).map_err(lib)?;
        if let Some(g) = p.grading {
            curve = curve.with_grading(g).map_err(lib)?;
        }
        let system = assemble(&p.medium, &curve, n, p.shifted).map_err(lib)?;
        let rhs = boundary_rhs(&p.incident, &p.medium, &curve, &system.nodes).map_err(lib)?;
        let solution = system.solve(&rhs).map_err(lib)?;
        *out = Box::into_raw(Box::new(EbSolution {
            solution,
            curve,
            medium: p.medium,
        }));
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a handle from [`eb_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eb_solution_free(solution: *mut EbSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Condition estimate of the solved system.
///
/// # Safety
/// `solution` must be a live handle, `out` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn eb_solution_condition(solution: *const EbSolution, out: *mut f64) -> EbStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.solution.condition;
        Ok(())
    })
}

/// Writes `phi_re, phi_im, psi_re, psi_im` at `(x, y)` to `out[0..4]`.
///
/// # Safety
/// `solution` must be a live handle, `out` valid for four doubles.
#[no_mangle]
pub unsafe extern "C" fn eb_solution_potentials(solution: *const EbSolution, x: f64, y: f64, out: *mut f64) -> EbStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let eval = FieldEvaluator::new(&s.solution, &s.medium, &s.curve).map_err(lib)?;
        let (phi, psi) = eval.potentials([x, y]).map_err(lib)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[phi.re, phi.im, psi.re, psi.im]);
        Ok(())
    })
}

/// Writes `v1_re, v1_im, v2_re, v2_im` at `(x, y)` to `out[0..4]`.
///
/// # Safety
/// `solution` must be a live handle, `out` valid for four doubles.
#[no_mangle]
pub unsafe extern "C" fn eb_solution_displacement(solution: *const EbSolution, x: f64, y: f64, out: *mut f64) -> EbStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let eval = FieldEvaluator::new(&s.solution, &s.medium, &s.curve).map_err(lib)?;
        let v = eval.displacement([x, y]).map_err(lib)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[v[0].re, v[0].im, v[1].re, v[1].im]);
        Ok(())
    })
}

/// Writes `phi_inf_re, phi_inf_im, psi_inf_re, psi_inf_im` in direction
/// `(cos theta, sin theta)` to `out[0..4]`.
///
/// # Safety
/// `solution` must be a live handle, `out` valid for four doubles.
#[no_mangle]
pub unsafe extern "C" fn eb_solution_far_field(solution: *const EbSolution, theta: f64, out: *mut f64) -> EbStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let eval = FieldEvaluator::new(&s.solution, &s.medium, &s.curve).map_err(lib)?;
        let f = eval.far_field([theta.cos(), theta.sin()]).map_err(lib)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[f.phi_inf.re, f.phi_inf.im, f.psi_inf.re, f.psi_inf.im]);
        Ok(())
    })
}

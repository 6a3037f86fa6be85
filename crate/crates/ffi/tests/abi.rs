use elastic_bie_ffi::*;
use std::ffi::CStr;
use std::path::Path;
use std::ptr;

const PI: f64 = std::f64::consts::PI;

fn hankel0(x: f64) -> (f64, f64) {
    let h = elastic_bie::specfun::hankel1(elastic_bie::specfun::Order::Zero, x).unwrap();
    (h.re, h.im)
}

#[test]
fn apple_point_source_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(eb_problem_new(EbShape::Apple, 3.88, 2.56, PI, &mut p), EbStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(eb_solve(p, 32, &mut s), EbStatus::Ok);
        let mut out = [0.0; 4];
        assert_eq!(eb_solution_potentials(s, 3.0, 0.0, out.as_mut_ptr()), EbStatus::Ok);
        // exact scattered potential H0(kp |x - (0.1, 0.2)|)
        let r = ((2.9f64).powi(2) + 0.04).sqrt();
        let (re, im) = hankel0(PI / 9.0f64.sqrt() * r);
        assert!((out[0] - re).abs() < 1e-6 && (out[1] - im).abs() < 1e-6, "{out:?}");
        let mut cond = 0.0;
        assert_eq!(eb_solution_condition(s, &mut cond), EbStatus::Ok);
        assert!(cond > 1.0);
        assert_eq!(eb_solution_displacement(s, 0.0, 3.5, out.as_mut_ptr()), EbStatus::Ok);
        assert!(out.iter().all(|v| v.is_finite()));
        assert_eq!(eb_solution_far_field(s, 0.3, out.as_mut_ptr()), EbStatus::Ok);
        let edge = elastic_bie::geometry::BoundaryCurve::new(elastic_bie::geometry::Shape::Apple)
            .unwrap()
            .eval(0.7)
            .z;
        assert_eq!(eb_solution_potentials(s, edge[0], edge[1], out.as_mut_ptr()), EbStatus::NearBoundary);
        assert!(!CStr::from_ptr(eb_last_error()).to_bytes().is_empty());
        eb_solution_free(s);
        eb_problem_free(p);
    }
}

#[test]
fn argument_errors() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(eb_problem_new(EbShape::Peach, 1.0, -1.0, 1.0, &mut p), EbStatus::InvalidArgument);
        assert!(p.is_null());
        assert_eq!(eb_problem_new(EbShape::Peach, 1.0, 1.0, 1.0, ptr::null_mut()), EbStatus::NullPointer);
        assert_eq!(eb_problem_new(EbShape::Drop, 3.88, 2.56, PI, &mut p), EbStatus::Ok);
        assert_eq!(eb_problem_set_point_source(p, 4.0, 0.0), EbStatus::SourceNotInside);
        assert_eq!(eb_problem_set_grading(p, 1.0, true), EbStatus::InvalidArgument);
        assert_eq!(eb_problem_set_plane_wave(p, EbWave::Shear, 0.5, 1.0), EbStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(eb_solve(p, 2, &mut s), EbStatus::InvalidArgument);
        assert_eq!(eb_solve(ptr::null(), 16, &mut s), EbStatus::NullPointer);
        assert_eq!(eb_solve(p, 16, &mut s), EbStatus::Ok);
        let mut out = [0.0; 4];
        assert_eq!(eb_solution_far_field(s, 1.0, out.as_mut_ptr()), EbStatus::Ok);
        assert!(out.iter().any(|v| *v != 0.0));
        eb_solution_free(s);
        eb_problem_free(p);
        eb_problem_free(ptr::null_mut());
        eb_solution_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/elastic_bie.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "eb_problem_new",
        "eb_problem_free",
        "eb_problem_set_plane_wave",
        "eb_problem_set_point_source",
        "eb_problem_set_grading",
        "eb_solve",
        "eb_solution_free",
        "eb_solution_potentials",
        "eb_solution_displacement",
        "eb_solution_far_field",
        "eb_solution_condition",
        "eb_last_error",
        "EB_STATUS_SINGULAR_SYSTEM",
        "typedef struct EbProblem EbProblem",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // the header must be valid C when a compiler is available
    if let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

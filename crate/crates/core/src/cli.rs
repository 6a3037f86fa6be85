//! Command-line front end: flags and `key = value` config files resolved
//! into run settings, and the `solve`, `study` and `farfield` commands.

use crate::error::Error;
use crate::fields::FieldEvaluator;
use crate::geometry::{FourierShape, Shape, Vec2};
use crate::system::Incident;
use crate::verify::{observation_points, run_study, StudyConfig};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "elastic-bie", version, about = "Elastic scattering by a rigid 2D obstacle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve once and sample potentials and displacement on a grid.
    Solve(RunArgs),
    /// Convergence study over a list of resolutions.
    Study(RunArgs),
    /// Solve once and tabulate far-field patterns.
    Farfield(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Study(_) => "study",
            Command::Farfield(_) => "farfield",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Solve(a) | Command::Study(a) | Command::Farfield(a) => a,
        }
    }
}

/// Flags shared by all commands. Each may also be given in the config file
/// under the same name without dashes; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// apple, peach, drop, heart, circle[:R] or fourier:a0,a1,b1,a2,b2,...
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// plane-p, plane-s or point-source
    #[arg(long)]
    pub incident: Option<String>,
    /// Incidence angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Plane-wave amplitude.
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long = "source-x", allow_hyphen_values = true)]
    pub source_x: Option<f64>,
    #[arg(long = "source-y", allow_hyphen_values = true)]
    pub source_y: Option<f64>,
    /// Resolution; repeat (or comma-separate) for studies.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Graded-mesh exponent (0 disables grading).
    #[arg(long = "grading-p")]
    pub grading_p: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub shifted: Option<bool>,
    #[arg(long = "obs-radius")]
    pub obs_radius: Option<f64>,
    #[arg(long = "obs-count")]
    pub obs_count: Option<usize>,
    #[arg(long = "ref-n")]
    pub ref_n: Option<usize>,
    /// Number of far-field directions.
    #[arg(long)]
    pub directions: Option<usize>,
    /// Field grid `xmin,xmax,ymin,ymax,nx,ny`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Sample the field on the observation circle instead of the grid.
    #[arg(long = "grid-circle", num_args = 0..=1, default_missing_value = "true")]
    pub grid_circle: Option<bool>,
    /// Write `wall_ms` as 0 so reruns are byte-identical.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub deterministic: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularSystem { .. } | Error::DegenerateParametrization { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Rectangular sampling grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    fn points(&self) -> Vec<Vec2> {
        let step = |(a, b): (f64, f64), k: usize, m: usize| {
            if m == 1 {
                a
            } else {
                a + (b - a) * k as f64 / (m - 1) as f64
            }
        };
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                pts.push([step(self.x, i, self.nx), step(self.y, j, self.ny)]);
            }
        }
        pts
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: &'static str,
    pub study: StudyConfig,
    pub directions: usize,
    pub grid: Grid,
    pub grid_circle: bool,
    pub deterministic: bool,
    pub out: PathBuf,
}

/// Parses a config file: `key = value` lines, `#` comments, blank lines.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", no + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!("config line {}: unknown key '{key}'", no + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "shape",
    "omega",
    "lambda",
    "mu",
    "incident",
    "theta",
    "amplitude",
    "source-x",
    "source-y",
    "n",
    "grading-p",
    "shifted",
    "obs-radius",
    "obs-count",
    "ref-n",
    "directions",
    "grid",
    "grid-circle",
    "deterministic",
    "out",
];

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::usage(format!("invalid value '{v}' for {key}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|s| parse_value(key, s.trim())).collect()
}

pub fn parse_shape(spec: &str) -> Result<Shape, CliError> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    let shape = match (head, rest) {
        ("apple", None) => Shape::Apple,
        ("peach", None) => Shape::Peach,
        ("drop", None) => Shape::Drop,
        ("heart", None) => Shape::Heart,
        ("circle", None) => Shape::Circle { radius: 1.0 },
        ("circle", Some(r)) => Shape::Circle {
            radius: parse_value("shape", r)?,
        },
        ("fourier", Some(list)) => {
            let c = parse_list("shape", list)?;
            let pairs = c[1..].chunks(2).map(|p| (p[0], p.get(1).copied().unwrap_or(0.0))).collect();
            Shape::Custom(FourierShape::new("fourier", c[0], pairs)?)
        }
        _ => return Err(CliError::usage(format!("unknown shape '{spec}'"))),
    };
    Ok(shape)
}

fn parse_grid(spec: &str) -> Result<Grid, CliError> {
    let v = parse_list("grid", spec)?;
    if v.len() != 6 || v[4] < 1.0 || v[5] < 1.0 || v[4].fract() != 0.0 || v[5].fract() != 0.0 {
        return Err(CliError::usage(format!(
            "grid must be xmin,xmax,ymin,ymax,nx,ny with nx, ny >= 1, got '{spec}'"
        )));
    }
    Ok(Grid {
        x: (v[0], v[1]),
        y: (v[2], v[3]),
        nx: v[4] as usize,
        ny: v[5] as usize,
    })
}

/// Merges flags over the config file and fills defaults.
pub fn resolve(command: &Command) -> Result<RunManifest, CliError> {
    let args = command.args();
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    macro_rules! pick {
        ($field:expr, $key:literal, $default:expr) => {
            match $field.clone() {
                Some(v) => v,
                None => match cfg.remove($key) {
                    Some(s) => parse_value($key, &s)?,
                    None => $default,
                },
            }
        };
    }
    let shape_spec: String = pick!(args.shape, "shape", "apple".to_string());
    let shape = parse_shape(&shape_spec)?;
    let corner = shape.has_corner();
    let omega: f64 = pick!(args.omega, "omega", PI);
    let lambda: f64 = pick!(args.lambda, "lambda", 3.88);
    let mu: f64 = pick!(args.mu, "mu", 2.56);
    let incident_kind: String = pick!(args.incident, "incident", "point-source".to_string());
    let theta: f64 = pick!(args.theta, "theta", 0.0);
    let amplitude: f64 = pick!(args.amplitude, "amplitude", 1.0);
    let source = shape.default_source();
    let sx: f64 = pick!(args.source_x, "source-x", source[0]);
    let sy: f64 = pick!(args.source_y, "source-y", source[1]);
    let incident = match incident_kind.as_str() {
        "plane-p" => Incident::PlaneP { theta, amplitude },
        "plane-s" => Incident::PlaneS { theta, amplitude },
        "point-source" => Incident::PointSource { source: [sx, sy] },
        other => return Err(CliError::usage(format!("unknown incident '{other}'"))),
    };
    let mut n_values = args.n.clone();
    if n_values.is_empty() {
        n_values = match cfg.remove("n") {
            Some(s) => s
                .split(',')
                .map(|v| parse_value::<usize>("n", v.trim()))
                .collect::<Result<_, _>>()?,
            None if command.name() == "study" => vec![],
            None => vec![64],
        };
    }
    if n_values.is_empty() {
        return Err(CliError::usage("no resolutions given (use --n)"));
    }
    if command.name() != "study" && n_values.len() != 1 {
        return Err(CliError::usage(format!("{} takes exactly one --n", command.name())));
    }
    let grading_p: f64 = pick!(args.grading_p, "grading-p", if corner { 2.0 } else { 0.0 });
    let grading = (grading_p != 0.0).then_some(grading_p);
    let shifted: bool = pick!(args.shifted, "shifted", corner);
    let obs_radius: f64 = pick!(args.obs_radius, "obs-radius", 3.0);
    let obs_count: usize = pick!(args.obs_count, "obs-count", 16);
    let ref_n: usize = pick!(args.ref_n, "ref-n", 4096);
    let directions: usize = pick!(args.directions, "directions", 64);
    let grid_spec: String = pick!(args.grid, "grid", "-4,4,-4,4,41,41".to_string());
    let grid = parse_grid(&grid_spec)?;
    let grid_circle: bool = pick!(args.grid_circle, "grid-circle", false);
    let deterministic: bool = pick!(args.deterministic, "deterministic", false);
    let out: PathBuf = pick!(args.out, "out", PathBuf::from("."));
    if directions == 0 {
        return Err(CliError::usage("direction count must be positive"));
    }
    let study = StudyConfig {
        shape,
        lambda,
        mu,
        omega,
        incident,
        n_values,
        grading,
        shifted,
        obs_radius,
        obs_count,
        ref_n,
    };
    let manifest = RunManifest {
        command: command.name(),
        study,
        directions,
        grid,
        grid_circle,
        deterministic,
        out,
    };
    if command.name() == "study" {
        manifest.study.validate()?;
    } else {
        manifest.study.medium()?;
        let curve = manifest.study.curve()?;
        if let Incident::PointSource { source } = manifest.study.incident {
            crate::system::check_source_inside(&curve, source)?;
        }
        if manifest.study.n_values[0] < 4 {
            return Err(CliError::usage("need n >= 4"));
        }
    }
    Ok(manifest)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

/// Resolved settings as a config file that reproduces the run.
pub fn manifest_text(m: &RunManifest) -> String {
    let s = &m.study;
    let mut t = String::new();
    let _ = writeln!(t, "# elastic-bie {}", m.command);
    let shape = match &s.shape {
        Shape::Circle { radius } => format!("circle:{radius:?}"),
        Shape::Custom(f) => {
            let mut v = vec![f.a0];
            for (a, b) in &f.coefficients {
                v.extend([*a, *b]);
            }
            format!("fourier:{}", v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","))
        }
        other => other.name().to_string(),
    };
    let _ = writeln!(t, "shape = {shape}");
    let _ = writeln!(t, "omega = {:?}\nlambda = {:?}\nmu = {:?}", s.omega, s.lambda, s.mu);
    match s.incident {
        Incident::PlaneP { theta, amplitude } | Incident::PlaneS { theta, amplitude } => {
            let kind = if matches!(s.incident, Incident::PlaneP { .. }) { "plane-p" } else { "plane-s" };
            let _ = writeln!(t, "incident = {kind}\ntheta = {theta:?}\namplitude = {amplitude:?}");
        }
        Incident::PointSource { source } => {
            let _ = writeln!(t, "incident = point-source\nsource-x = {:?}\nsource-y = {:?}", source[0], source[1]);
        }
    }
    let ns: Vec<String> = s.n_values.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(t, "n = {}", ns.join(","));
    let _ = writeln!(t, "grading-p = {:?}\nshifted = {}", s.grading.unwrap_or(0.0), s.shifted);
    let _ = writeln!(t, "obs-radius = {:?}\nobs-count = {}\nref-n = {}", s.obs_radius, s.obs_count, s.ref_n);
    let g = m.grid;
    let _ = writeln!(t, "directions = {}", m.directions);
    let _ = writeln!(t, "grid = {:?},{:?},{:?},{:?},{},{}", g.x.0, g.x.1, g.y.0, g.y.1, g.nx, g.ny);
    let _ = writeln!(t, "grid-circle = {}\ndeterministic = {}", m.grid_circle, m.deterministic);
    t
}

pub fn cmd_study(m: &RunManifest) -> Result<(), CliError> {
    let reports = run_study(&m.study)?;
    let mut csv = String::from("n,err_phi,err_psi,cond_estimate,wall_ms\n");
    let mut failure: Option<CliError> = None;
    let mut failed = 0;
    for (n, r) in m.study.n_values.iter().zip(reports) {
        match r {
            Ok(r) => {
                let ms = if m.deterministic { 0.0 } else { r.wall_time.as_secs_f64() * 1e3 };
                let _ = writeln!(csv, "{},{:.6e},{:.6e},{:.6e},{:.3}", r.n, r.err_phi, r.err_psi, r.cond_estimate, ms);
            }
            Err(e) => {
                eprintln!("n = {n}: {e}");
                failed += 1;
                failure.get_or_insert(CliError::from(e));
            }
        }
    }
    write_file(&m.out, "study.csv", &csv)?;
    write_file(&m.out, "run.cfg", &manifest_text(m))?;
    match failure {
        Some(mut e) => {
            e.message = format!("{failed} of {} resolutions failed", m.study.n_values.len());
            Err(e)
        }
        None => Ok(()),
    }
}

pub fn cmd_farfield(m: &RunManifest) -> Result<(), CliError> {
    let n = m.study.n_values[0];
    let solution = m.study.solve(n)?;
    let medium = m.study.medium()?;
    let curve = m.study.curve()?;
    let eval = FieldEvaluator::new(&solution, &medium, &curve)?;
    let mut csv = String::from("theta,phi_inf_re,phi_inf_im,psi_inf_re,psi_inf_im\n");
    for k in 0..m.directions {
        let theta = TAU * k as f64 / m.directions as f64;
        let f = eval.far_field([theta.cos(), theta.sin()])?;
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            theta, f.phi_inf.re, f.phi_inf.im, f.psi_inf.re, f.psi_inf.im
        );
    }
    write_file(&m.out, "farfield.csv", &csv)?;
    write_file(&m.out, "run.cfg", &manifest_text(m))
}

pub fn cmd_solve(m: &RunManifest) -> Result<(), CliError> {
    let n = m.study.n_values[0];
    let solution = m.study.solve(n)?;
    let medium = m.study.medium()?;
    let curve = m.study.curve()?;
    let eval = FieldEvaluator::new(&solution, &medium, &curve)?;
    let points = if m.grid_circle {
        observation_points(m.study.obs_radius, m.study.obs_count)
    } else {
        m.grid.points()
    };
    let mut csv = String::from("x,y,phi_re,phi_im,psi_re,psi_im,v1_re,v1_im,v2_re,v2_im,excluded\n");
    let mut excluded = 0;
    for x in &points {
        let inside = curve.winding_number(*x, 2048).abs() > 0.5;
        let sample = if inside { None } else { eval.sample(*x).ok() };
        let _ = write!(csv, "{:.16e},{:.16e}", x[0], x[1]);
        match sample {
            Some(s) => {
                let v = s.displacement();
                for c in [s.phi, s.psi, v[0], v[1]] {
                    let _ = write!(csv, ",{:.16e},{:.16e}", c.re, c.im);
                }
                csv.push_str(",0\n");
            }
            None => {
                excluded += 1;
                csv.push_str(&",0".repeat(8));
                csv.push_str(",1\n");
            }
        }
    }
    if excluded == points.len() {
        log::warn!("every grid point lies inside the obstacle or its exclusion zone");
    }
    write_file(&m.out, "field.csv", &csv)?;
    write_file(&m.out, "run.cfg", &manifest_text(m))
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = resolve(&cli.command).and_then(|m| match cli.command {
        Command::Solve(_) => cmd_solve(&m),
        Command::Study(_) => cmd_study(&m),
        Command::Farfield(_) => cmd_farfield(&m),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let m = parse_config("# comment\nshape = peach\n\nomega=3.5e0 # trailing\nsource_x = 0.1\n").unwrap();
        assert_eq!(m["shape"], "peach");
        assert_eq!(m["omega"], "3.5e0");
        assert_eq!(m["source-x"], "0.1");
        assert!(parse_config("nonsense").is_err());
        assert!(parse_config("colour = red").is_err());
    }

    #[test]
    fn shapes_and_grids() {
        assert_eq!(parse_shape("drop").unwrap(), Shape::Drop);
        assert_eq!(parse_shape("circle:2").unwrap(), Shape::Circle { radius: 2.0 });
        assert!(matches!(parse_shape("fourier:1,0.1,0,0,0.05").unwrap(), Shape::Custom(_)));
        assert!(parse_shape("fourier:0.1,1").is_err());
        assert!(parse_shape("blob").is_err());
        let g = parse_grid("-1,1,-2,2,3,2").unwrap();
        assert_eq!(g.points(), vec![[-1.0, -2.0], [0.0, -2.0], [1.0, -2.0], [-1.0, 2.0], [0.0, 2.0], [1.0, 2.0]]);
        assert!(parse_grid("0,1,0,1,0,3").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "shape = peach\nomega = 2\nn = 8,16\n").unwrap();
        let cli = Cli::try_parse_from(["elastic-bie", "study", "--config", path.to_str().unwrap(), "--omega", "3"]).unwrap();
        let m = resolve(&cli.command).unwrap();
        assert_eq!(m.study.shape, Shape::Peach);
        assert_eq!(m.study.omega, 3.0);
        assert_eq!(m.study.n_values, vec![8, 16]);
        // the written manifest resolves to the same settings
        std::fs::write(&path, manifest_text(&m)).unwrap();
        let again = Cli::try_parse_from(["elastic-bie", "study", "--config", path.to_str().unwrap()]).unwrap();
        assert_eq!(resolve(&again.command).unwrap(), m);
    }

    #[test]
    fn corner_defaults() {
        let cli = Cli::try_parse_from(["elastic-bie", "study", "--shape", "heart", "--n", "16"]).unwrap();
        let m = resolve(&cli.command).unwrap();
        assert_eq!(m.study.grading, Some(2.0));
        assert!(m.study.shifted);
        assert_eq!(m.study.incident, Incident::PointSource { source: [-0.5, 0.2] });
    }
}

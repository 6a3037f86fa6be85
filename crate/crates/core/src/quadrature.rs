//! Interpolatory quadrature on the `2n` equidistant nodes `pi j / n` for the
//! logarithmic, Cauchy and log-times-sine kernels, and the trapezoidal rule.
//!
//! Each weight integrates the trigonometric Lagrange basis function of node
//! `j` against the singular kernel, so the rules are exact on the
//! interpolation space spanned by `1, cos mt, sin mt (m < n), cos nt`.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Quadrature weights for one evaluation parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub values: Vec<f64>,
    pub target: f64,
}

impl WeightRow {
    fn build(n: usize, t: f64, weight: impl Fn(f64) -> f64) -> Self {
        assert!(n >= 2, "quadrature needs n >= 2, got {n}");
        let h = PI / n as f64;
        WeightRow {
            values: (0..2 * n).map(|j| weight(t - j as f64 * h)).collect(),
            target: t,
        }
    }

    /// `sum_j values[j] f_j`.
    pub fn apply(&self, samples: &[Complex64]) -> Complex64 {
        assert_eq!(samples.len(), self.values.len());
        self.values.iter().zip(samples).map(|(w, f)| f * *w).sum()
    }
}

/// `R_j(t)`: weights for `int_0^{2pi} ln(4 sin^2((t - s)/2)) f(s) ds`.
pub fn log_weights(n: usize, t: f64) -> WeightRow {
    WeightRow::build(n, t, |d| log_weight(n, d))
}

/// `U_j(t)`: weights for the principal value
/// `(1/2pi) int_0^{2pi} cot((s - t)/2) f(s) ds`.
pub fn cauchy_weights(n: usize, t: f64) -> WeightRow {
    WeightRow::build(n, t, |d| cauchy_weight(n, d))
}

/// `V_j(t)`: weights for `int_0^{2pi} ln(4 sin^2((t - s)/2)) sin(t - s) f(s) ds`.
pub fn sinlog_weights(n: usize, t: f64) -> WeightRow {
    WeightRow::build(n, t, |d| sinlog_weight(n, d))
}

/// Periodic trapezoidal rule `(pi/n) sum f_j` on `2n` samples.
pub fn trapezoid(samples: &[Complex64]) -> Complex64 {
    assert!(
        !samples.is_empty() && samples.len() % 2 == 0,
        "trapezoid needs 2n samples, got {}",
        samples.len()
    );
    let n = samples.len() / 2;
    samples.iter().sum::<Complex64>() * (PI / n as f64)
}

/// Log weight as a function of `d = t - s_j`.
fn log_weight(n: usize, d: f64) -> f64 {
    let nf = n as f64;
    let sum: f64 = (1..n).map(|m| (m as f64 * d).cos() / m as f64).sum();
    -2.0 * PI / nf * sum - PI / (nf * nf) * (nf * d).cos()
}

/// Cauchy weight as a function of `d = t - s_j`; the removable singularity at
/// `d = 0 (mod 2pi)` takes its limit value 0.
fn cauchy_weight(n: usize, d: f64) -> f64 {
    let nf = n as f64;
    // b = s_j - t reduced to (-pi, pi]
    let b = -d - (2.0 * PI) * ((-d) / (2.0 * PI)).round();
    if b == 0.0 {
        return 0.0;
    }
    let half = 0.5 * b;
    // 1 - cos(nb) = 2 sin^2(nb/2), cot(b/2) = cos/sin
    let sn = (0.5 * nf * b).sin();
    sn * sn * half.cos() / (nf * half.sin())
}

/// Log-sine weight as a function of `d = t - s_j`.
fn sinlog_weight(n: usize, d: f64) -> f64 {
    let nf = n as f64;
    let sum: f64 = (2..n)
        .map(|m| {
            let m = m as f64;
            (m * d).sin() / (m * m - 1.0)
        })
        .sum();
    PI / (2.0 * nf) * d.sin() - 2.0 * PI / nf * sum - PI / (nf * (nf * nf - 1.0)) * (nf * d).sin()
}

/// Log and Cauchy weights for node targets, indexed by the node offset
/// `(i - j) mod 2n`. Node-to-node weights depend only on the offset, for
/// both the unshifted and the shifted node sets.
#[derive(Debug, Clone)]
pub struct OffsetWeights {
    pub n: usize,
    pub log: Vec<f64>,
    pub cauchy: Vec<f64>,
}

impl OffsetWeights {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let two_n = 2 * n;
        let nf = n as f64;
        // cos(pi k / n) for k in 0..2n; cos(m d pi / n) = table[(m d) mod 2n]
        let cos_table: Vec<f64> = (0..two_n).map(|k| (PI * k as f64 / nf).cos()).collect();
        let log = (0..two_n)
            .map(|offset| {
                let sum: f64 = (1..n)
                    .map(|m| cos_table[(m * offset) % two_n] / m as f64)
                    .sum();
                let alternating = if offset % 2 == 0 { 1.0 } else { -1.0 };
                -2.0 * PI / nf * sum - PI / (nf * nf) * alternating
            })
            .collect();
        let cauchy = (0..two_n)
            .map(|offset| {
                if offset % 2 == 0 {
                    0.0
                } else {
                    cauchy_weight(n, PI * offset as f64 / nf)
                }
            })
            .collect();
        OffsetWeights { n, log, cauchy }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i + 2 * self.n - j) % (2 * self.n)
    }
}

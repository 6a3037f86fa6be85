//! Bessel functions of the first and second kind and Hankel functions of the
//! first kind, orders 0 and 1, for real non-negative arguments.
//!
//! Below [`SERIES_CROSSOVER`] the ascending series are summed in double-double
//! arithmetic, which keeps the alternating-sign cancellation out of the final
//! double result. Above it the Hankel asymptotic expansion is used; at the
//! crossover its smallest term is already below double-precision roundoff.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

/// Complex value returned by the Hankel functions.
pub type ComplexValue = Complex64;

/// Argument at which evaluation switches from the ascending series to the
/// asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 20.0;

/// Euler-Mascheroni constant, 0.57721566490153286060651209..., as a
/// double-double pair.
const EULER_GAMMA: Dd = Dd {
    hi: 0.5772156649015329,
    lo: -4.942915152430645e-18,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Zero,
    One,
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(Order::Zero),
            1 => Ok(Order::One),
            _ => Err(Error::InvalidParameter(format!(
                "Bessel order {order} is not supported (only 0 and 1)"
            ))),
        }
    }
}

/// `J_order(x)` for `x >= 0`.
pub fn bessel_j(order: Order, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain {
            function: "bessel_j",
            x,
        });
    }
    if x == 0.0 {
        return Ok(match order {
            Order::Zero => 1.0,
            Order::One => 0.0,
        });
    }
    let b = Bessel01::eval(x);
    Ok(match order {
        Order::Zero => b.j0,
        Order::One => b.j1,
    })
}

/// `Y_order(x)` for `x > 0`.
pub fn bessel_y(order: Order, x: f64) -> Result<f64> {
    check_positive("bessel_y", x)?;
    let b = Bessel01::eval(x);
    Ok(match order {
        Order::Zero => b.y0,
        Order::One => b.y1,
    })
}

/// `H^(1)_order(x) = J_order(x) + i Y_order(x)` for `x > 0`.
pub fn hankel1(order: Order, x: f64) -> Result<ComplexValue> {
    check_positive("hankel1", x)?;
    let b = Bessel01::eval(x);
    Ok(match order {
        Order::Zero => b.h0(),
        Order::One => b.h1(),
    })
}

/// `(H^(1)_0(x), H^(1)_1(x))` from a single evaluation.
pub fn hankel1_01(x: f64) -> Result<(ComplexValue, ComplexValue)> {
    check_positive("hankel1", x)?;
    let b = Bessel01::eval(x);
    Ok((b.h0(), b.h1()))
}

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { function, x })
    }
}

/// J0, J1, Y0 and Y1 at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Bessel01 {
    /// Evaluates all four functions. `x` must be finite and positive; this is
    /// the unchecked hot path used by kernel assembly.
    pub fn eval(x: f64) -> Self {
        debug_assert!(x > 0.0 && x.is_finite());
        if x < SERIES_CROSSOVER {
            ascending_series(x)
        } else {
            hankel_asymptotic(x)
        }
    }

    #[inline]
    pub fn h0(&self) -> ComplexValue {
        Complex64::new(self.j0, self.y0)
    }

    #[inline]
    pub fn h1(&self) -> ComplexValue {
        Complex64::new(self.j1, self.y1)
    }
}

fn ascending_series(x: f64) -> Bessel01 {
    // u = x^2 / 4, exact as a double-double
    let u = Dd::from_prod(x, x).scale(0.25);
    let neg_u = u.neg();
    let tiny = 1e-34;

    // J0 = sum t_k, t_k = (-u)^k / (k!)^2
    // Y0 = (2/pi) [ (ln(x/2) + gamma) J0 - sum_{k>=1} H_k t_k ]
    let mut t = Dd::ONE;
    let mut j0 = Dd::ONE;
    let mut harmonic = Dd::ZERO;
    let mut y0_sum = Dd::ZERO;
    let mut k = 1.0;
    loop {
        t = t.mul(neg_u).div_f64(k * k);
        harmonic = harmonic.add(Dd::ONE.div_f64(k));
        j0 = j0.add(t);
        y0_sum = y0_sum.add(harmonic.mul(t));
        if t.hi.abs() < tiny && k > 1.0 {
            break;
        }
        k += 1.0;
    }

    // J1 = (x/2) sum s_k, s_k = (-u)^k / (k! (k+1)!)
    // Y1 = -2/(pi x) + (2/pi)(ln(x/2) + gamma) J1 - (1/pi)(x/2) sum (H_k + H_{k+1}) s_k
    let mut s = Dd::ONE;
    let mut j1_sum = Dd::ONE;
    let mut h_k1 = Dd::ONE;
    let mut y1_sum = Dd::ONE;
    let mut k = 1.0;
    loop {
        s = s.mul(neg_u).div_f64(k * (k + 1.0));
        let h_k = h_k1;
        h_k1 = h_k1.add(Dd::ONE.div_f64(k + 1.0));
        j1_sum = j1_sum.add(s);
        y1_sum = y1_sum.add(h_k.add(h_k1).mul(s));
        if s.hi.abs() < tiny && k > 1.0 {
            break;
        }
        k += 1.0;
    }
    let half_x = Dd::from_f64(x).scale(0.5);
    let j1 = j1_sum.mul(half_x);

    let log_term = Dd::from_f64((0.5 * x).ln()).add(EULER_GAMMA);
    let y0 = log_term.mul(j0).sub(y0_sum).to_f64() * FRAC_2_PI;
    let y1 = -FRAC_2_PI / x + FRAC_2_PI * log_term.mul(j1).to_f64()
        - y1_sum.mul(half_x).to_f64() / PI;

    Bessel01 {
        j0: j0.to_f64(),
        j1: j1.to_f64(),
        y0,
        y1,
    }
}

/// Modulus/phase form J + iY = sqrt(2/(pi x)) (P + iQ) exp(i chi) with
/// chi = x - (nu/2 + 1/4) pi.
fn hankel_asymptotic(x: f64) -> Bessel01 {
    let (p0, q0) = asymptotic_pq(0.0, x);
    let (p1, q1) = asymptotic_pq(1.0, x);
    let (sx, cx) = x.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    // chi0 = x - pi/4, chi1 = x - 3 pi/4; expanded to avoid rounding pi/4 into x
    let (c0, s0) = ((cx + sx) * FRAC_1_SQRT_2, (sx - cx) * FRAC_1_SQRT_2);
    let (c1, s1) = ((sx - cx) * FRAC_1_SQRT_2, -(sx + cx) * FRAC_1_SQRT_2);
    Bessel01 {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

fn asymptotic_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        term = next;
        // signs: P has (-1)^{k/2} on even k, Q has (-1)^{(k-1)/2} on odd k
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        k += 1;
    }
    (p, q)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    fn from_f64(a: f64) -> Self {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    /// Multiplication by a power of two.
    #[inline]
    fn scale(self, f: f64) -> Self {
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    #[inline]
    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    fn add(self, b: Dd) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    #[inline]
    fn sub(self, b: Dd) -> Self {
        self.add(b.neg())
    }

    #[inline]
    fn mul(self, b: Dd) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }

    #[inline]
    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let q2 = (s + (e - p2 + self.lo)) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

//! Special functions and quadrature.
//!
//! Everything here is a pure function of its arguments. Series that can
//! leave floating-point range at large index are also offered in log form.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Modified Hermite polynomial `(-i)^m H_m(ix)`, which is real for every `m`.
///
/// Evaluated with the real recurrence `M_{m+1} = 2x M_m + 2m M_{m-1}`.
pub fn modified_hermite(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..m {
        let next = 2.0 * x * cur + 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[n]` with the normalized Hermite functions
/// `exp(-x^2/2) H_n(x) / sqrt(sqrt(pi) 2^n n!)` for `n = 0..out.len()`.
///
/// The recurrence runs on the functions without the Gaussian factor and
/// rescales whenever the magnitude grows large, so neither the polynomial
/// nor the Gaussian over- or underflows on its own.
pub fn hermite_functions(x: f64, out: &mut [f64]) {
    const BIG: f64 = 1e200;
    let n = out.len();
    if n == 0 {
        return;
    }
    // Values are stored as out[k] * exp(log_scale[k]); log_scale is
    // non-decreasing, so only the running scale needs tracking.
    let mut scales = Vec::with_capacity(n);
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    out[0] = cur;
    scales.push(log_scale);
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            log_scale += BIG.ln();
        }
        out[k + 1] = cur;
        scales.push(log_scale);
    }
    for (v, s) in out.iter_mut().zip(scales) {
        *v = if *v == 0.0 { 0.0 } else { *v * s.exp() };
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)` as an explicit product.
///
/// No Gamma ratios: a non-positive integer `a` with `k` past its root gives
/// an exact zero.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).map(|i| a + i as f64).product()
}

/// A real number stored as `sign * exp(ln_abs)`.
///
/// Zero is `sign == 0` with `ln_abs == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { ln_abs: 0.0, sign: 1 };

    pub fn value(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }
}

/// `(a)_k` in log-magnitude/sign form, for products that overflow.
pub fn log_pochhammer(a: f64, k: usize) -> LogValue {
    let mut acc = LogValue::ONE;
    for i in 0..k {
        let f = a + i as f64;
        if f == 0.0 {
            return LogValue::ZERO;
        }
        acc.ln_abs += f.abs().ln();
        if f < 0.0 {
            acc.sign = -acc.sign;
        }
    }
    acc
}

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b.fract() == 0.0
}

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 100_000;

/// Generalized hypergeometric function `1F3(a; b1, b2, b3; x)` by direct
/// summation.
///
/// Summation stops once three consecutive terms are each below `1e-16`
/// times the partial sum; one small term is not enough because a factor
/// `b_i + n` near zero can make a single term dip.
pub fn hyp1f3(a: f64, b1: f64, b2: f64, b3: f64, x: f64) -> Result<f64> {
    for b in [b1, b2, b3] {
        if is_nonpositive_integer(b) {
            return Err(Error::ParameterPole(b));
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= x * (a + nf) / ((nf + 1.0) * (b1 + nf) * (b2 + nf) * (b3 + nf));
        sum += term;
        if !sum.is_finite() {
            return Err(Error::NoConvergence(n));
        }
        if term.abs() < SERIES_REL_TOL * sum.abs() || term == 0.0 {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(SERIES_MAX_TERMS))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule over a symmetric interval `[-L, L]`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub half_width: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Panel order used by [`Quadrature::for_max_index`].
pub const DEFAULT_PANEL_ORDER: usize = 20;

impl Quadrature {
    /// `panels` equal panels of `order` points each on `[-half_width, half_width]`.
    pub fn new(half_width: f64, panels: usize, order: usize) -> Self {
        assert!(half_width > 0.0 && panels > 0);
        let rule = GaussLegendre::new(order);
        let h = 2.0 * half_width / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = -half_width + (p as f64 + 0.5) * h;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + 0.5 * h * t);
                weights.push(0.5 * h * w);
            }
        }
        Quadrature { half_width, nodes, weights }
    }

    /// Rule adequate for products of oscillator-type eigenfunctions with
    /// index up to `nu_max`: `L = max(12, sqrt(2 nu_max + 1) + 8)`, unit-width
    /// panels of order 20.
    pub fn for_max_index(nu_max: usize) -> Self {
        let half_width = (((2 * nu_max + 1) as f64).sqrt() + 8.0).max(12.0);
        let panels = (2.0 * half_width).ceil() as usize;
        Self::new(half_width, panels, DEFAULT_PANEL_ORDER)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Weighted inner product of two functions already sampled at the nodes.
    pub fn dot(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights.iter().zip(f.iter().zip(g)).map(|(w, (a, b))| w * a * b).sum()
    }
}

/// `∫ f dx` over the symmetric domain appropriate for eigenfunctions up to
/// index `nu_max`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, nu_max: usize) -> f64 {
    Quadrature::for_max_index(nu_max).integrate(f)
}

/// `ln(n!)` by summation; exact enough for the index ranges used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

//! Potentials, spectra and position eigenfunctions of the harmonic oscillator
//! `(0)`, its shifted copy `(+)`, and the rationally extended partner `(-)`.
//!
//! The partner eigenfunctions are built from the type-III Hermite exceptional
//! polynomials `y_k`, which skip degrees 1 and 2.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::specfun::{hermite, hermite_functions, ln_factorial, modified_hermite, Quadrature};

/// Which Hamiltonian an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemTag {
    /// `-d²/dx² + x²`, energies `2ν + 1`.
    Zero,
    /// `-d²/dx² + x² + 5`, energies `2(ν + 3)`.
    Plus,
    /// The deformed partner, energies `2(ν + 3)` for `ν ∈ {-3, 0, 1, 2, ...}`.
    Minus,
}

impl SystemTag {
    fn name(self) -> &'static str {
        match self {
            SystemTag::Zero => "(0)",
            SystemTag::Plus => "(+)",
            SystemTag::Minus => "(-)",
        }
    }

    pub fn is_valid_index(self, nu: i64) -> bool {
        match self {
            SystemTag::Zero | SystemTag::Plus => nu >= 0,
            SystemTag::Minus => nu == -3 || nu >= 0,
        }
    }

    pub fn check_index(self, nu: i64) -> Result<()> {
        if self.is_valid_index(nu) {
            Ok(())
        } else {
            Err(Error::BadIndex { system: self.name(), index: nu })
        }
    }
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Constant added to [`potential_minus`] in the `(-)` Hamiltonian, so that
/// `-ψ'' + (V(x) + 5) ψ = E ψ` with the ground state at `E = 0`.
pub const MINUS_HAMILTONIAN_OFFSET: f64 = 5.0;

/// `x² + 16(4x² - 2)/(4x² + 2)² - 2`: a harmonic well with a deep, narrow dip
/// at the origin.
pub fn potential_minus(x: f64) -> f64 {
    let h2 = 4.0 * x * x + 2.0;
    x * x + 16.0 * (4.0 * x * x - 2.0) / (h2 * h2) - 2.0
}

pub fn energy(system: SystemTag, nu: i64) -> Result<f64> {
    system.check_index(nu)?;
    Ok(match system {
        SystemTag::Zero => 2.0 * nu as f64 + 1.0,
        SystemTag::Plus | SystemTag::Minus => 2.0 * (nu as f64 + 3.0),
    })
}

/// Hermite exceptional polynomial `y_k` for `k = 0` or `k >= 3`.
pub fn eop_polynomial(k: usize, x: f64) -> Result<f64> {
    match k {
        0 => Ok(1.0),
        1 | 2 => Err(Error::BadIndex { system: "EOP", index: k as i64 }),
        _ => {
            let nu = k - 3;
            Ok(-modified_hermite(2, x) * hermite(nu + 1, x) - 4.0 * modified_hermite(1, x) * hermite(nu, x))
        }
    }
}

/// Normalized eigenfunction of the `(0)`/`(+)` oscillator.
pub fn eigenfunction_plus(nu: i64, x: f64) -> Result<f64> {
    SystemTag::Plus.check_index(nu)?;
    let mut buf = vec![0.0; nu as usize + 1];
    hermite_functions(x, &mut buf);
    Ok(buf[nu as usize])
}

/// Normalized eigenfunction `ψ_ν^(-)` of the deformed partner.
pub fn eigenfunction_minus(nu: i64, x: f64) -> Result<f64> {
    SystemTag::Minus.check_index(nu)?;
    if nu == -3 {
        return Ok(minus_ground(x));
    }
    let n = nu as usize;
    let mut buf = vec![0.0; n + 2];
    hermite_functions(x, &mut buf);
    Ok(minus_from_hermite_functions(n, x, buf[n], buf[n + 1]))
}

fn minus_ground(x: f64) -> f64 {
    (8.0 / PI.sqrt()).sqrt() * (-0.5 * x * x).exp() / modified_hermite(2, x)
}

/// `ψ_ν^(-)` for `ν >= 0` written through the normalized Hermite functions
/// `φ_ν`, `φ_{ν+1}`:
/// `ψ_ν = -sqrt((ν+1)/(ν+3)) φ_{ν+1} - 8x φ_ν / (sqrt(2(ν+3)) (4x²+2))`.
/// Exact rewrite of the polynomial form that never builds `2^ν ν!`.
fn minus_from_hermite_functions(nu: usize, x: f64, phi_nu: f64, phi_next: f64) -> f64 {
    let n = nu as f64;
    let h2 = modified_hermite(2, x);
    -((n + 1.0) / (n + 3.0)).sqrt() * phi_next - 8.0 * x * phi_nu / ((2.0 * (n + 3.0)).sqrt() * h2)
}

/// `ψ_ν^(-)` straight from the polynomial definition, normalization in log
/// space. Valid while `H_ν(x)` stays in range (moderate `ν` and `|x|`).
pub fn eigenfunction_minus_direct(nu: i64, x: f64) -> Result<f64> {
    SystemTag::Minus.check_index(nu)?;
    if nu == -3 {
        return Ok(minus_ground(x) * eop_polynomial(0, x)?);
    }
    let n = nu as usize;
    let ln_norm = 0.5 * (0.5 * PI.ln() + (n + 1) as f64 * 2f64.ln() + ((n + 3) as f64).ln() + ln_factorial(n));
    let y = eop_polynomial(n + 3, x)?;
    Ok(y * (-0.5 * x * x - ln_norm).exp() / modified_hermite(2, x))
}

/// Fills `out[j]` with `ψ^(+)_j(x)` for `j = 0..out.len()`.
pub fn plus_functions(x: f64, out: &mut [f64]) {
    hermite_functions(x, out);
}

/// Fills `out` with the `(-)` eigenfunctions at `x`, ordered by physical
/// index `-3, 0, 1, ..., out.len() - 2`.
pub fn minus_functions(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = minus_ground(x);
    if n == 1 {
        return;
    }
    let mut phi = vec![0.0; n];
    hermite_functions(x, &mut phi);
    for nu in 0..n - 1 {
        out[nu + 1] = minus_from_hermite_functions(nu, x, phi[nu], phi[nu + 1]);
    }
}

/// Gram matrix `⟨ψ_m|ψ_n⟩` over the eigenfunctions of `system` up to index
/// `nu_max` (for `(-)` the list starts at `-3`), by Gauss-Legendre quadrature.
pub fn gram_matrix(system: SystemTag, nu_max: usize) -> Vec<Vec<f64>> {
    let quad = Quadrature::for_max_index(nu_max + 1);
    let n = match system {
        SystemTag::Minus => nu_max + 2,
        _ => nu_max + 1,
    };
    let mut samples = vec![vec![0.0; quad.nodes.len()]; n];
    let mut row = vec![0.0; n];
    for (i, &x) in quad.nodes.iter().enumerate() {
        match system {
            SystemTag::Minus => minus_functions(x, &mut row),
            _ => hermite_functions(x, &mut row),
        }
        for (s, v) in samples.iter_mut().zip(&row) {
            s[i] = *v;
        }
    }
    (0..n).map(|m| (0..n).map(|k| quad.dot(&samples[m], &samples[k])).collect()).collect()
}

/// Largest entry of `|G - I|` for [`gram_matrix`].
pub fn orthonormality_error(system: SystemTag, nu_max: usize) -> f64 {
    let g = gram_matrix(system, nu_max);
    let mut worst: f64 = 0.0;
    for (m, row) in g.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            worst = worst.max((v - if m == k { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// Uniformly spaced sample points `x_min + i (x_max - x_min)/(n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for SpatialGrid {
    /// `[-20, 20]` with 4001 points.
    fn default() -> Self {
        SpatialGrid { x_min: -20.0, x_max: 20.0, n_points: 4001 }
    }
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidGrid(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        Ok(SpatialGrid { x_min, x_max, n_points })
    }

    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            return self.x_max;
        }
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Trapezoid rule over the grid samples.
    pub fn trapezoid(&self, samples: &[f64]) -> f64 {
        assert_eq!(samples.len(), self.n_points);
        let inner: f64 = samples[1..samples.len() - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (samples[0] + samples[samples.len() - 1]))
    }
}

//! Time evolution, position densities and energy expectations.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coherent::{c_parameters, cat_state, CatSpec, CoherentSpec, Truncation};
use crate::error::Result;
use crate::ladder::{Basis, CoefficientVector, LadderKind, Mu, Polar};
use crate::specfun::hyp1f3;
use crate::spectrum::{minus_functions, plus_functions, SpatialGrid};

/// Weight allowed to be dropped from either end of an expansion before the
/// basis sum for a density is evaluated.
pub const DENSITY_DROP_TOL: f64 = 1e-24;

/// Strict local maxima below this height are not counted as wavepackets.
pub const PEAK_THRESHOLD: f64 = 0.02;

/// Minimum distance between counted peaks.
pub const PEAK_MIN_SEPARATION: f64 = 0.5;

/// Default number of time samples per period.
pub const SAMPLES_PER_PERIOD: usize = 64;

/// `e^{-iHt}`: each phase advances by `-E_ν t`.
pub fn evolve(coeffs: &CoefficientVector, t: f64) -> CoefficientVector {
    let basis = coeffs.basis();
    coeffs.map_entries(|k, p| if p.is_zero() { p } else { Polar::new(p.log_mag, p.phase - basis.energy(k) * t) })
}

/// `Σ_k |a_k|² E_ν(k)`.
pub fn energy_expectation(coeffs: &CoefficientVector) -> f64 {
    let basis = coeffs.basis();
    coeffs.weights().iter().enumerate().map(|(k, w)| w * basis.energy(k)).sum()
}

/// Evaluates the basis functions of `basis` with ladder index `k ∈ range` at `x`.
fn basis_row(basis: Basis, range: &std::ops::Range<usize>, x: f64, out: &mut Vec<f64>) {
    out.clear();
    if range.is_empty() {
        return;
    }
    let top = basis.physical_index(range.end - 1);
    match basis {
        Basis::Plus => {
            let mut all = vec![0.0; top as usize + 1];
            plus_functions(x, &mut all);
            out.extend_from_slice(&all[range.clone()]);
        }
        Basis::Minus(_) => {
            // slot 0 is ν = -3, slot ν + 1 is ν >= 0
            let mut all = vec![0.0; (top + 2).max(1) as usize];
            minus_functions(x, &mut all);
            out.extend(range.clone().map(|k| {
                let nu = basis.physical_index(k);
                all[if nu == -3 { 0 } else { nu as usize + 1 }]
            }));
        }
    }
}

/// Complex amplitudes `a_k e^{-iE_k t}` over the significant range.
fn phased(coeffs: &CoefficientVector, range: &std::ops::Range<usize>, t: f64) -> Vec<Complex64> {
    let basis = coeffs.basis();
    range
        .clone()
        .map(|k| {
            let p = coeffs.entries()[k];
            if p.is_zero() {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(p.log_mag.exp(), p.phase - basis.energy(k) * t)
            }
        })
        .collect()
}

fn densities_at(coeffs: &CoefficientVector, xs: &[f64], times: &[f64]) -> (Vec<Vec<f64>>, f64) {
    let range = coeffs.significant_range(DENSITY_DROP_TOL);
    let kept: f64 = coeffs.weights()[range.clone()].iter().sum();
    let dropped = (coeffs.norm_sqr() - kept).max(0.0);
    let amps: Vec<Vec<Complex64>> = times.iter().map(|&t| phased(coeffs, &range, t)).collect();
    let basis = coeffs.basis();
    // per-x rows over time
    let by_x: Vec<Vec<f64>> = xs
        .par_iter()
        .map_init(Vec::new, |row, &x| {
            basis_row(basis, &range, x, row);
            amps.iter()
                .map(|a| a.iter().zip(row.iter()).map(|(c, psi)| c * psi).sum::<Complex64>().norm_sqr())
                .collect()
        })
        .collect();
    let by_t = (0..times.len()).map(|j| by_x.iter().map(|r| r[j]).collect()).collect();
    (by_t, dropped)
}

/// `ρ(x, t) = |Σ_k ψ_ν(k)(x) a_k e^{-iE_ν t}|²` on the grid.
pub fn density(coeffs: &CoefficientVector, grid: &SpatialGrid, t: f64) -> Vec<f64> {
    densities_at(coeffs, &grid.points(), &[t]).0.remove(0)
}

/// `ρ(x, t)` at a single point for several times.
pub fn density_trace(coeffs: &CoefficientVector, x: f64, times: &[f64]) -> Vec<f64> {
    densities_at(coeffs, &[x], times).0.into_iter().map(|r| r[0]).collect()
}

/// `ρ(x_i, t_j)`, stored one row per time.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub grid: SpatialGrid,
    pub times: Vec<f64>,
    rows: Vec<Vec<f64>>,
    /// Expansion weight left out of the basis sum.
    pub dropped_weight: f64,
}

impl DensityField {
    /// Density over the grid at `times[j]`.
    pub fn at_time(&self, j: usize) -> &[f64] {
        &self.rows[j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `∫ρ dx` at each time (trapezoid rule on the grid).
    pub fn norms(&self) -> Vec<f64> {
        self.rows.iter().map(|r| self.grid.trapezoid(r)).collect()
    }

    /// Largest `|1 - ∫ρ dx|` over the sampled times.
    pub fn max_norm_deficit(&self) -> f64 {
        self.norms().iter().map(|n| (1.0 - n).abs()).fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.rows.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    /// `x,t,rho` rows, all `x` for the first time, then the next time, with
    /// 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,t,rho")?;
        let xs = self.grid.points();
        for (t, row) in self.times.iter().zip(&self.rows) {
            for (x, rho) in xs.iter().zip(row) {
                writeln!(out, "{x:.16e},{t:.16e},{rho:.16e}")?;
            }
        }
        Ok(())
    }
}

pub fn density_field(coeffs: &CoefficientVector, grid: &SpatialGrid, times: &[f64]) -> DensityField {
    let (rows, dropped_weight) = densities_at(coeffs, &grid.points(), times);
    DensityField { grid: *grid, times: times.to_vec(), rows, dropped_weight }
}

/// `n` equally spaced times covering `[0, period)`.
pub fn one_period(period: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| period * j as f64 / n as f64).collect()
}

/// Symmetric grid reaching past the classical turning point of the highest
/// significantly populated level, and at least `[-20, 20]`. Spacing is at
/// most 0.01.
pub fn covering_grid(coeffs: &CoefficientVector) -> SpatialGrid {
    let range = coeffs.significant_range(1e-12);
    let e_hi = coeffs.basis().energy(range.end.max(1) - 1);
    let half = (e_hi.sqrt() + 6.0).max(20.0).ceil();
    let n = (2.0 * half / 0.01).round() as usize + 1;
    SpatialGrid::symmetric(half, n).expect("positive width")
}

/// Strict local maxima above `threshold`, thinned so that no two kept peaks
/// are closer than `min_sep` (the higher one wins).
pub fn find_peaks(grid: &SpatialGrid, values: &[f64], threshold: f64, min_sep: f64) -> Vec<(f64, f64)> {
    let mut cand: Vec<usize> = (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > threshold && values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect();
    cand.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut kept: Vec<usize> = Vec::new();
    for i in cand {
        if kept.iter().all(|&j| (grid.point(i) - grid.point(j)).abs() >= min_sep) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| (grid.point(i), values[i])).collect()
}

/// Peaks with the default threshold and separation.
pub fn count_peaks(grid: &SpatialGrid, values: &[f64]) -> usize {
    find_peaks(grid, values, PEAK_THRESHOLD, PEAK_MIN_SEPARATION).len()
}

/// The two closed forms for `⟨H⟩` in `|z, c(μ)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergy {
    /// Numerator `1F3(2; b1+1, b2+1, b3+1; x)`, as obtained by shifting the
    /// summation index in `Σ k |a_k|²`.
    pub shifted: f64,
    /// Numerator `1F3(2; b1, b2, b3; x)` with unshifted lower parameters.
    pub printed: f64,
}

/// `6 + 2μ + (3|z|²/4) / ((μ+2)(μ+1)(μ+6)) · 1F3(2; ·; x) / 1F3(1; b; x)`,
/// `x = |z|²/216`, for both choices of the numerator's lower parameters.
pub fn energy_closed_form_c(z_abs: f64, mu: Mu) -> Result<ClosedFormEnergy> {
    let m = mu.value() as f64;
    let [b1, b2, b3] = c_parameters(mu);
    let x = z_abs * z_abs / 216.0;
    let den = hyp1f3(1.0, b1, b2, b3, x)?;
    let prefactor = 0.75 * z_abs * z_abs / ((m + 2.0) * (m + 1.0) * (m + 6.0));
    let shifted = hyp1f3(2.0, b1 + 1.0, b2 + 1.0, b3 + 1.0, x)?;
    let printed = hyp1f3(2.0, b1, b2, b3, x)?;
    Ok(ClosedFormEnergy {
        shifted: 6.0 + 2.0 * m + prefactor * shifted / den,
        printed: 6.0 + 2.0 * m + prefactor * printed / den,
    })
}

/// Closed-form `⟨H⟩(|z|)`: `6 + |z|²` for `a`, `6 + 2μ + 3|z|²` for `c̃(μ)`,
/// and the shifted-parameter form for `c(μ)`.
pub fn energy_closed_form(ladder: LadderKind, z_abs: f64) -> Result<f64> {
    let r2 = z_abs * z_abs;
    Ok(match ladder {
        LadderKind::A => 6.0 + r2,
        LadderKind::CTilde(mu) => 6.0 + 2.0 * mu.value() as f64 + 3.0 * r2,
        LadderKind::C(mu) => energy_closed_form_c(z_abs, mu)?.shifted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub z_abs: f64,
    pub energy: f64,
    pub closed_form: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCurve {
    pub ladder: LadderKind,
    pub samples: Vec<EnergySample>,
}

impl EnergyCurve {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "z_abs,energy,closed_form")?;
        for s in &self.samples {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", s.z_abs, s.energy, s.closed_form)?;
        }
        Ok(())
    }

    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].energy >= w[0].energy)
    }
}

/// `⟨H⟩` from coefficient sums for real `z = |z|` over the given magnitudes.
pub fn energy_curve(ladder: LadderKind, z_abs: &[f64], trunc: Truncation) -> Result<EnergyCurve> {
    let samples = z_abs
        .iter()
        .map(|&r| {
            let v = CoherentSpec::new(ladder, Complex64::new(r, 0.0)).coefficients(trunc)?;
            Ok(EnergySample { z_abs: r, energy: energy_expectation(&v), closed_form: energy_closed_form(ladder, r)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyCurve { ladder, samples })
}

/// Cat-state density together with `ρ(0, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatDensityReport {
    pub field: DensityField,
    /// `(t, ρ(0, t))` for every sampled time.
    pub origin_trace: Vec<(f64, f64)>,
}

impl CatDensityReport {
    pub fn max_origin_density(&self) -> f64 {
        self.origin_trace.iter().map(|&(_, r)| r).fold(0.0, f64::max)
    }

    pub fn write_origin_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,rho_at_0")?;
        for (t, r) in &self.origin_trace {
            writeln!(out, "{t:.16e},{r:.16e}")?;
        }
        Ok(())
    }
}

pub fn cat_density_report(
    spec: CatSpec,
    grid: &SpatialGrid,
    times: &[f64],
    trunc: Truncation,
) -> Result<CatDensityReport> {
    let state = cat_state(spec, trunc)?;
    let field = density_field(&state, grid, times);
    let origin = density_trace(&state, 0.0, times);
    Ok(CatDensityReport { field, origin_trace: times.iter().copied().zip(origin).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{coherent_a, coherent_c, coherent_ctilde};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn z(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn evolve_identity_at_zero() {
        let v = coherent_c(z(2.0), Mu::One, Truncation::default()).unwrap();
        let e = evolve(&v, 0.0);
        for (a, b) in v.entries().iter().zip(e.entries()) {
            assert_eq!(a.log_mag, b.log_mag);
            assert!((a.phase - b.phase).abs() < 1e-15);
        }
    }

    #[test]
    fn evolve_rotates_eigenvalue() {
        let t = 0.37;
        for ladder in LadderKind::all() {
            let w = ladder.step_energy();
            let v = CoherentSpec::new(ladder, z(3.0)).coefficients(Truncation::default()).unwrap();
            let moved = evolve(&v, t).to_complex();
            let direct = CoherentSpec::new(ladder, z(3.0) * Complex64::from_polar(1.0, -w * t))
                .coefficients(Truncation::default())
                .unwrap()
                .to_complex();
            // equal up to one global phase
            let g = moved[0] / direct[0];
            assert_relative_eq!(g.norm(), 1.0, epsilon = 1e-12);
            for (a, b) in moved.iter().zip(&direct) {
                assert!((a - g * b).norm() < 1e-12, "{ladder}");
            }
        }
    }

    #[test]
    fn energy_examples() {
        let a = coherent_a(z(15.0), Truncation::default()).unwrap();
        assert_relative_eq!(energy_expectation(&a), 231.0, max_relative = 1e-10);
        let ct = coherent_ctilde(z(15.0), Mu::MinusThree, Truncation::default()).unwrap();
        assert_relative_eq!(energy_expectation(&ct), 675.0, max_relative = 1e-10);
        for mu in Mu::ALL {
            let c0 = coherent_c(z(0.0), mu, Truncation::default()).unwrap();
            assert_eq!(energy_expectation(&c0), 6.0 + 2.0 * mu.value() as f64);
        }
    }

    #[test]
    fn evolution_preserves_energy() {
        let v = coherent_ctilde(z(4.0), Mu::Two, Truncation::default()).unwrap();
        assert_eq!(energy_expectation(&evolve(&v, 1.234)), energy_expectation(&v));
    }

    #[test]
    fn closed_form_c_small_z() {
        for mu in Mu::ALL {
            let cf = energy_closed_form_c(0.0, mu).unwrap();
            assert_eq!(cf.shifted, 6.0 + 2.0 * mu.value() as f64);
        }
        // leading correction for mu = 1 is |z|²/56
        let r = 1e-3;
        let cf = energy_closed_form_c(r, Mu::One).unwrap();
        assert_relative_eq!(cf.shifted - 8.0, r * r / 56.0, max_relative = 1e-5);
        assert_relative_eq!(cf.printed - 8.0, r * r / 56.0, max_relative = 1e-5);
    }

    #[test]
    fn closed_form_c_matches_coefficient_sum() {
        let v = coherent_c(z(15.0), Mu::MinusThree, Truncation::default()).unwrap();
        let cf = energy_closed_form_c(15.0, Mu::MinusThree).unwrap();
        assert_relative_eq!(energy_expectation(&v), cf.shifted, max_relative = 1e-8);
        assert!((energy_expectation(&v) - cf.printed).abs() / cf.shifted > 1e-4);
    }

    #[test]
    fn gaussian_law_for_a() {
        let grid = SpatialGrid::symmetric(10.0, 801).unwrap();
        let v = coherent_a(z(2.0), Truncation::default()).unwrap();
        for &t in &[0.0, 0.4, 1.1] {
            let rho = density(&v, &grid, t);
            for (x, r) in grid.points().iter().zip(&rho) {
                let g = (-(x - 2.0 * (2.0 * t).cos()).powi(2)).exp() / PI.sqrt();
                assert!((r - g).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_z_density_is_static_ground_state() {
        let grid = SpatialGrid::symmetric(6.0, 121).unwrap();
        let v = coherent_c(z(0.0), Mu::MinusThree, Truncation::default()).unwrap();
        let f = density_field(&v, &grid, &[0.0, 0.3, 0.9]);
        for (i, x) in grid.points().iter().enumerate() {
            let psi = crate::spectrum::eigenfunction_minus(-3, *x).unwrap();
            for j in 0..3 {
                assert!((f.at_time(j)[i] - psi * psi).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn peak_finder() {
        let grid = SpatialGrid::symmetric(10.0, 2001).unwrap();
        let vals: Vec<f64> = grid
            .points()
            .iter()
            .map(|x| (-(x - 3.0).powi(2)).exp() + 0.5 * (-(x + 4.0).powi(2)).exp() + 0.01 * (-(x * x)).exp())
            .collect();
        let peaks = find_peaks(&grid, &vals, PEAK_THRESHOLD, PEAK_MIN_SEPARATION);
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0].0 + 4.0).abs() < 0.02 && (peaks[1].0 - 3.0).abs() < 0.02);
        // ripples closer than the separation are thinned
        let ripple: Vec<f64> =
            grid.points().iter().map(|x| (-(x * x) / 4.0).exp() * (1.0 + 0.1 * (20.0 * x).cos())).collect();
        let kept = find_peaks(&grid, &ripple, PEAK_THRESHOLD, PEAK_MIN_SEPARATION);
        assert!(kept.windows(2).all(|w| w[1].0 - w[0].0 >= PEAK_MIN_SEPARATION));
        assert!(kept.iter().any(|p| p.0.abs() < 1e-9));
        assert!(kept.len() < 20);
    }

    #[test]
    fn density_csv_layout() {
        let grid = SpatialGrid::symmetric(1.0, 3).unwrap();
        let v = coherent_a(z(0.5), Truncation::default()).unwrap();
        let f = density_field(&v, &grid, &[0.0, 0.5]);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,t,rho");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("-1.0000000000000000e0,0.0000000000000000e0,"));
        assert!(lines[4].starts_with("-1.0000000000000000e0,5.0000000000000000e-1,"));
    }
}

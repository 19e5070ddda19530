//! Barut-Girardello coherent states of `a`, `c(μ)` and `c̃(μ)`, and the even
//! and odd cat states built from them.
//!
//! Every family has coefficients proportional to `z^k / d_k` with a real
//! `d_k`, so they are generated from the ratio `a_{k+1}/a_k` in log-polar
//! form and truncated adaptively once the remaining tail is negligible.

use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ladder::{Basis, CoefficientVector, LadderKind, Mu, Polar};
use crate::specfun::{hyp1f3, log_pochhammer, LogValue};

/// Adaptive truncation policy for coefficient series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Stop once the estimated tail weight falls below this fraction of the
    /// accumulated weight.
    pub tail_tol: f64,
    /// Hard cap on the number of retained entries.
    pub k_max: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { tail_tol: 1e-28, k_max: 5000 }
    }
}

/// A coherent state request: the family and the eigenvalue `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    pub ladder: LadderKind,
    pub z: Complex64,
}

impl CoherentSpec {
    pub fn new(ladder: LadderKind, z: Complex64) -> Self {
        CoherentSpec { ladder, z }
    }

    pub fn coefficients(&self, trunc: Truncation) -> Result<CoefficientVector> {
        match self.ladder {
            LadderKind::A => coherent_a(self.z, trunc),
            LadderKind::C(mu) => coherent_c(self.z, mu, trunc),
            LadderKind::CTilde(mu) => coherent_ctilde(self.z, mu, trunc),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn keeps(self, k: usize) -> bool {
        match self {
            Parity::Even => k.is_multiple_of(2),
            Parity::Odd => k % 2 == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSpec {
    pub base: CoherentSpec,
    pub parity: Parity,
}

/// Lower parameters `((μ+2)/3, (μ+1)/3, (μ+6)/3)` shared by the `c(μ)`
/// normalization and its overlap.
pub fn c_parameters(mu: Mu) -> [f64; 3] {
    let m = mu.value() as f64;
    [(m + 2.0) / 3.0, (m + 1.0) / 3.0, (m + 6.0) / 3.0]
}

/// `D_k^(μ) = (-1)^k 6^{3k/2} [(b1)_k (b2)_k (b3)_k]^{1/2}` in log form.
pub fn d_k(mu: Mu, k: usize) -> LogValue {
    let prod = c_parameters(mu).map(|b| log_pochhammer(b, k));
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    debug_assert!(prod.iter().map(|p| p.sign).product::<i8>() == 1);
    LogValue { ln_abs: 1.5 * k as f64 * 6f64.ln() + 0.5 * prod.iter().map(|p| p.ln_abs).sum::<f64>(), sign }
}

/// `F^(μ)(|z|) = 1F3(1; b1, b2, b3; |z|²/216)`.
pub fn c_normalization(z_abs: f64, mu: Mu) -> Result<f64> {
    let [b1, b2, b3] = c_parameters(mu);
    hyp1f3(1.0, b1, b2, b3, z_abs * z_abs / 216.0)
}

/// `Σ_k |z|^{2k} / |D_k|²` summed term by term with `D_k` from [`d_k`].
pub fn c_normalization_termwise(z_abs: f64, mu: Mu, trunc: Truncation) -> Result<f64> {
    let mut sum = 0.0;
    for k in 0..trunc.k_max {
        let ln_term = 2.0 * (k as f64 * z_abs.ln() - d_k(mu, k).ln_abs);
        let term = if k == 0 { 1.0 } else { ln_term.exp() };
        sum += term;
        if k > 0 && (term < trunc.tail_tol * sum || z_abs == 0.0) {
            return Ok(sum);
        }
    }
    Err(Error::TruncationCap(trunc.k_max))
}

/// Generates `a_k / a_0` for `k = 0..K` from the step ratio, stopping once
/// the geometric tail bound drops below `trunc.tail_tol` of the total.
///
/// `log_step(k)` is `ln |a_{k+1} / a_k|` and must be eventually decreasing;
/// `phase_step` is the constant phase advance per step.
fn ratio_series<F>(z: Complex64, log_step: F, phase_step: f64, trunc: Truncation) -> Result<(Vec<Polar>, f64)>
where
    F: Fn(usize) -> f64,
{
    let mut entries = vec![Polar::new(0.0, 0.0)];
    if z.norm() == 0.0 {
        return Ok((entries, 0.0));
    }
    // running log of the accumulated weight Σ |a_k/a_0|²
    let mut ln_total = 0.0f64;
    let mut ln_mag = 0.0;
    let mut phase = 0.0;
    loop {
        let k = entries.len() - 1;
        let step = log_step(k);
        // ratio of consecutive weights beyond k
        let r = (2.0 * step).exp();
        if r < 1.0 {
            let ln_tail = 2.0 * ln_mag + (r / (1.0 - r)).ln();
            if ln_tail - ln_total < trunc.tail_tol.ln() {
                return Ok((entries, (ln_tail - ln_total).exp()));
            }
        }
        if entries.len() >= trunc.k_max {
            return Err(Error::TruncationCap(trunc.k_max));
        }
        ln_mag += step;
        phase += phase_step;
        entries.push(Polar::new(ln_mag, phase));
        ln_total = log_add_exp(ln_total, 2.0 * ln_mag);
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

fn shift_and_renormalize(entries: &mut [Polar]) {
    let ln_total = entries.iter().fold(f64::NEG_INFINITY, |acc, p| log_add_exp(acc, 2.0 * p.log_mag));
    for p in entries.iter_mut() {
        if !p.is_zero() {
            p.log_mag -= 0.5 * ln_total;
        }
    }
}

/// `|z, a⟩ = e^{-|z|²/4} Σ_ν (z/√2)^ν / sqrt(ν!) |ν(+)⟩`, renormalized after
/// truncation.
pub fn coherent_a(z: Complex64, trunc: Truncation) -> Result<CoefficientVector> {
    oscillator_like(LadderKind::A, z, trunc)
}

/// Same coefficients as [`coherent_a`], laid on the ladder `{μ + 3k}`.
pub fn coherent_ctilde(z: Complex64, mu: Mu, trunc: Truncation) -> Result<CoefficientVector> {
    oscillator_like(LadderKind::CTilde(mu), z, trunc)
}

fn oscillator_like(ladder: LadderKind, z: Complex64, trunc: Truncation) -> Result<CoefficientVector> {
    let r = z.norm();
    let (mut entries, tail) = ratio_series(z, |k| (r / (2.0 * (k as f64 + 1.0)).sqrt()).ln(), z.arg(), trunc)?;
    for p in entries.iter_mut() {
        p.log_mag -= r * r / 4.0;
    }
    shift_and_renormalize(&mut entries);
    Ok(CoefficientVector::new(ladder, entries).with_tail_weight(tail))
}

/// `|z, c(μ)⟩ = F^{-1/2} Σ_k z^k / D_k |μ + 3k⟩`.
///
/// The prefactor comes from the `1F3` series; if that overflows, the sum of
/// the retained weights is used instead.
pub fn coherent_c(z: Complex64, mu: Mu, trunc: Truncation) -> Result<CoefficientVector> {
    let [b1, b2, b3] = c_parameters(mu);
    let r = z.norm();
    let log_step = |k: usize| {
        let kf = k as f64;
        r.ln() - 0.5 * (216.0 * (kf + b1) * (kf + b2) * (kf + b3)).ln()
    };
    let (mut entries, tail) = ratio_series(z, log_step, z.arg() + PI, trunc)?;
    match c_normalization(r, mu) {
        Ok(f) if f.is_finite() => {
            for p in entries.iter_mut() {
                p.log_mag -= 0.5 * f.ln();
            }
        }
        _ => shift_and_renormalize(&mut entries),
    }
    Ok(CoefficientVector::new(LadderKind::C(mu), entries).with_tail_weight(tail))
}

/// `‖α|ψ⟩ - z|ψ⟩‖` for the family's own annihilation operator `α`.
pub fn eigen_residual(state: &CoefficientVector, z: Complex64) -> Result<f64> {
    let lowered = state.ladder().lower(state)?.to_complex();
    let orig = state.to_complex();
    Ok(lowered.iter().zip(&orig).map(|(l, o)| (l - z * o).norm_sqr()).sum::<f64>().sqrt())
}

/// `D(|z|) = ⟨+z|-z⟩`: `e^{-|z|²}` for `a` and `c̃(μ)`, and
/// `1F3(1; b; -|z|²/216) / 1F3(1; b; |z|²/216)` for `c(μ)`.
pub fn overlap_d(z_abs: f64, ladder: LadderKind) -> Result<f64> {
    match ladder {
        LadderKind::A | LadderKind::CTilde(_) => Ok((-z_abs * z_abs).exp()),
        LadderKind::C(mu) => {
            let [b1, b2, b3] = c_parameters(mu);
            let x = z_abs * z_abs / 216.0;
            Ok(hyp1f3(1.0, b1, b2, b3, -x)? / hyp1f3(1.0, b1, b2, b3, x)?)
        }
    }
}

/// `⟨+z|-z⟩` from explicitly constructed coefficient vectors.
pub fn overlap_from_coefficients(z_abs: f64, ladder: LadderKind, trunc: Truncation) -> Result<f64> {
    let z = Complex64::new(z_abs, 0.0);
    let plus = CoherentSpec::new(ladder, z).coefficients(trunc)?;
    let minus = CoherentSpec::new(ladder, -z).coefficients(trunc)?;
    Ok(plus.inner(&minus)?.re)
}

/// `(|+z⟩ ± |-z⟩) / sqrt(2(1 ± D))`.
///
/// Since `a_k(-z) = (-1)^k a_k(z)`, the sum keeps `2 a_k` on the entries of
/// matching parity; the normalization is taken from those retained weights,
/// which equal `(1 ± D)/2` without the cancellation in `1 - D` at small `z`.
pub fn cat_state(spec: CatSpec, trunc: Truncation) -> Result<CoefficientVector> {
    if spec.parity == Parity::Odd && spec.base.z.norm() == 0.0 {
        return Err(Error::DegenerateCat);
    }
    let base = spec.base.coefficients(trunc)?;
    let mut entries: Vec<Polar> =
        base.entries().iter().enumerate().map(|(k, p)| if spec.parity.keeps(k) { *p } else { Polar::ZERO }).collect();
    shift_and_renormalize(&mut entries);
    Ok(CoefficientVector::new(base.ladder(), entries).with_tail_weight(base.tail_weight()))
}

/// Writes `k,nu,log_mag,phase` rows with 17 significant digits.
pub fn write_coefficients_csv<W: Write>(v: &CoefficientVector, mut out: W) -> io::Result<()> {
    writeln!(out, "k,nu,log_mag,phase")?;
    for (k, p) in v.entries().iter().enumerate() {
        writeln!(out, "{},{},{:.16e},{:.16e}", k, v.physical_index(k), p.log_mag, p.phase)?;
    }
    Ok(())
}

/// Reads the format written by [`write_coefficients_csv`].
pub fn read_coefficients_csv<R: BufRead>(ladder: LadderKind, input: R) -> Result<CoefficientVector> {
    let bad = Error::Parse;
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "k,nu,log_mag,phase" => {}
        _ => return Err(bad("missing coefficient header".into())),
    }
    let basis: Basis = ladder.basis();
    let mut entries = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line.map_err(|e| bad(e.to_string()))?;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(bad(format!("row {row}: expected 4 fields")));
        }
        let k: usize = f[0].parse().map_err(|_| bad(format!("row {row}: bad k")))?;
        let nu: i64 = f[1].parse().map_err(|_| bad(format!("row {row}: bad nu")))?;
        if k != row || nu != basis.physical_index(k) {
            return Err(bad(format!("row {row}: index does not match {basis}")));
        }
        let log_mag: f64 = f[2].parse().map_err(|_| bad(format!("row {row}: bad log_mag")))?;
        let phase: f64 = f[3].parse().map_err(|_| bad(format!("row {row}: bad phase")))?;
        entries.push(Polar { log_mag, phase });
    }
    Ok(CoefficientVector::new(ladder, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_z_gives_lowest_weight() {
        for ladder in LadderKind::all() {
            let v = CoherentSpec::new(ladder, c(0.0, 0.0)).coefficients(Truncation::default()).unwrap();
            assert_eq!(v.len(), 1);
            assert_eq!(v.to_complex()[0], c(1.0, 0.0));
        }
    }

    #[test]
    fn coherent_a_is_poisson() {
        let v = coherent_a(c(2.0, 0.0), Truncation::default()).unwrap();
        let a = v.to_complex();
        assert_relative_eq!((a[1] / a[0]).re, 2f64.sqrt(), epsilon = 1e-13);
        let w = v.weights();
        let mean: f64 = w.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert_relative_eq!(mean, 2.0, epsilon = 1e-12);
        // Poisson pmf with mean 2
        let mut pmf = (-2.0f64).exp();
        for (k, p) in w.iter().take(15).enumerate() {
            if k > 0 {
                pmf *= 2.0 / k as f64;
            }
            assert_relative_eq!(*p, pmf, max_relative = 1e-12);
        }
    }

    #[test]
    fn coherent_c_first_ratio() {
        let z = c(1.3, -0.4);
        let v = coherent_c(z, Mu::MinusThree, Truncation::default()).unwrap();
        let a = v.to_complex();
        let expect = -z / 48f64.sqrt();
        assert!((a[1] / a[0] - expect).norm() < 1e-13);
        assert_relative_eq!(d_k(Mu::MinusThree, 1).value(), -48f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn coherent_c_matches_d_k_formula() {
        let z = c(4.0, 2.5);
        for mu in Mu::ALL {
            let v = coherent_c(z, mu, Truncation::default()).unwrap();
            let f = c_normalization(z.norm(), mu).unwrap();
            for (k, a) in v.to_complex().iter().enumerate().take(12) {
                let d = d_k(mu, k).value();
                let expect = z.powu(k as u32) / d / f.sqrt();
                assert!((a - expect).norm() <= 1e-12 * expect.norm().max(1e-300), "mu={mu} k={k}");
            }
        }
    }

    #[test]
    fn ctilde_truncation_depth_at_15() {
        let v = coherent_ctilde(c(15.0, 0.0), Mu::MinusThree, Truncation::default()).unwrap();
        assert!(v.len() >= 230, "K = {}", v.len());
        let w = v.weights();
        let peak = w.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
        assert!((peak as f64 - 112.5).abs() <= 1.0);
    }

    #[test]
    fn normalized() {
        for ladder in LadderKind::all() {
            for &r in &[0.5, 1.0, 15.0] {
                let v = CoherentSpec::new(ladder, c(r, 0.3)).coefficients(Truncation::default()).unwrap();
                assert!((v.norm_sqr() - 1.0).abs() <= 1e-10, "{ladder} r={r}");
            }
        }
    }

    #[test]
    fn termwise_normalization_matches_hypergeometric() {
        for mu in Mu::ALL {
            for &r in &[1.0, 15.0, 100.0] {
                let a = c_normalization_termwise(r, mu, Truncation::default()).unwrap();
                let b = c_normalization(r, mu).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn overlap_examples() {
        for ladder in LadderKind::all() {
            assert_eq!(overlap_d(0.0, ladder).unwrap(), 1.0);
        }
        assert_relative_eq!(overlap_d(15.0, LadderKind::A).unwrap(), (-225f64).exp());
        assert!((overlap_d(15.0, LadderKind::A).unwrap() - 1.9219e-98).abs() < 0.0001e-98);
        for mu in Mu::ALL {
            for &r in &[1.0, 5.0, 15.0] {
                let series = overlap_d(r, LadderKind::C(mu)).unwrap();
                let sum = overlap_from_coefficients(r, LadderKind::C(mu), Truncation::default()).unwrap();
                assert!((series - sum).abs() <= 1e-10, "mu={mu} r={r}: {series} vs {sum}");
            }
        }
    }

    #[test]
    fn cat_examples() {
        let z = c(1.5, 0.0);
        let base = coherent_a(z, Truncation::default()).unwrap();
        let d = overlap_d(1.5, LadderKind::A).unwrap();
        let spec = |parity| CatSpec { base: CoherentSpec::new(LadderKind::A, z), parity };
        let even = cat_state(spec(Parity::Even), Truncation::default()).unwrap();
        let odd = cat_state(spec(Parity::Odd), Truncation::default()).unwrap();
        let scale = 2.0 / (2.0 * (1.0 + d)).sqrt();
        for (k, (e, b)) in even.to_complex().iter().zip(base.to_complex()).enumerate() {
            let expect = if k % 2 == 0 { b * scale } else { c(0.0, 0.0) };
            assert!((e - expect).norm() < 1e-13);
        }
        assert_eq!(even.inner(&odd).unwrap(), c(0.0, 0.0));
        assert!((odd.norm_sqr() - 1.0).abs() < 1e-12);
        let zero = CatSpec { base: CoherentSpec::new(LadderKind::C(Mu::One), c(0.0, 0.0)), parity: Parity::Odd };
        assert_eq!(cat_state(zero, Truncation::default()), Err(Error::DegenerateCat));
        let even0 = CatSpec { parity: Parity::Even, ..zero };
        assert_eq!(cat_state(even0, Truncation::default()).unwrap().to_complex(), vec![c(1.0, 0.0)]);
    }

    #[test]
    fn odd_cat_support() {
        let spec =
            CatSpec { base: CoherentSpec::new(LadderKind::C(Mu::MinusThree), c(15.0, 0.0)), parity: Parity::Odd };
        let v = cat_state(spec, Truncation::default()).unwrap();
        assert!(v.entries().iter().step_by(2).all(|p| p.is_zero()));
    }

    #[test]
    fn truncation_cap_is_reported() {
        let trunc = Truncation { k_max: 20, ..Truncation::default() };
        assert_eq!(coherent_ctilde(c(15.0, 0.0), Mu::One, trunc), Err(Error::TruncationCap(20)));
    }

    #[test]
    fn eigen_residuals() {
        for ladder in LadderKind::all() {
            for &r in &[1.0, 15.0] {
                let z = c(r, 0.0);
                let v = CoherentSpec::new(ladder, z).coefficients(Truncation::default()).unwrap();
                let res = eigen_residual(&v, z).unwrap();
                assert!(res <= 1e-10, "{ladder} z={r}: {res:e}");
            }
        }
        for mu in Mu::ALL {
            let z = c(100.0, 0.0);
            let v = coherent_c(z, mu, Truncation::default()).unwrap();
            assert!(eigen_residual(&v, z).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn csv_round_trip() {
        let v = coherent_c(c(3.0, 1.0), Mu::Two, Truncation::default()).unwrap();
        let mut buf = Vec::new();
        write_coefficients_csv(&v, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,nu,log_mag,phase\n0,2,"));
        let back = read_coefficients_csv(LadderKind::C(Mu::Two), &buf[..]).unwrap();
        assert_eq!(back.entries(), v.entries());

        let cat = cat_state(
            CatSpec { base: CoherentSpec::new(LadderKind::A, c(2.0, 0.0)), parity: Parity::Odd },
            Truncation::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_coefficients_csv(&cat, &mut buf).unwrap();
        let back = read_coefficients_csv(LadderKind::A, &buf[..]).unwrap();
        assert_eq!(back.entries(), cat.entries());
    }
}

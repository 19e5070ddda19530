//! Ladder operators acting on truncated expansions over an energy ladder.
//!
//! Three families are modelled:
//! * `a`, `a†` on the `(+)` oscillator, `a|ν⟩ = sqrt(2ν)|ν-1⟩`;
//! * `c`, `c†` on the `(-)` system, stepping the index by 3 and splitting
//!   it into three disjoint ladders `{μ + 3k}` with `μ ∈ {-3, 1, 2}`;
//! * the linearized `c̃`, `c̃†`, which act on each of those ladders like an
//!   ordinary oscillator: `c̃|κ,μ⟩ = sqrt(2κ)|κ-1,μ⟩`.
//!
//! Coefficients are kept as `(log |a_k|, arg a_k)` pairs so that states with
//! `|z|` in the hundreds never overflow.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::modified_hermite;
use crate::spectrum::{eigenfunction_minus, energy, SystemTag};

/// Lowest weight of one of the three `c` ladders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mu {
    MinusThree,
    One,
    Two,
}

impl Mu {
    pub const ALL: [Mu; 3] = [Mu::MinusThree, Mu::One, Mu::Two];

    pub fn value(self) -> i64 {
        match self {
            Mu::MinusThree => -3,
            Mu::One => 1,
            Mu::Two => 2,
        }
    }

    /// Which ladder a valid `(-)` index belongs to.
    pub fn of_index(nu: i64) -> Result<Mu> {
        SystemTag::Minus.check_index(nu)?;
        Ok(match nu.rem_euclid(3) {
            0 => Mu::MinusThree,
            1 => Mu::One,
            _ => Mu::Two,
        })
    }
}

impl TryFrom<i64> for Mu {
    type Error = Error;

    fn try_from(v: i64) -> Result<Mu> {
        match v {
            -3 => Ok(Mu::MinusThree),
            1 => Ok(Mu::One),
            2 => Ok(Mu::Two),
            _ => Err(Error::BadMu(v)),
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Basis a coefficient vector is expanded over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `|ν(+)⟩`, `ν = k`.
    Plus,
    /// `|μ + 3k (-)⟩`.
    Minus(Mu),
}

impl Basis {
    pub fn physical_index(self, k: usize) -> i64 {
        match self {
            Basis::Plus => k as i64,
            Basis::Minus(mu) => mu.value() + 3 * k as i64,
        }
    }

    pub fn system(self) -> SystemTag {
        match self {
            Basis::Plus => SystemTag::Plus,
            Basis::Minus(_) => SystemTag::Minus,
        }
    }

    pub fn energy(self, k: usize) -> f64 {
        energy(self.system(), self.physical_index(k)).expect("ladder indices are always valid")
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Plus => f.write_str("(+) ladder"),
            Basis::Minus(mu) => write!(f, "(-) ladder mu={mu}"),
        }
    }
}

/// Which annihilation operator defines a family of states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    A,
    C(Mu),
    CTilde(Mu),
}

impl LadderKind {
    /// `a`, then `c(μ)` and `c̃(μ)` for each lowest weight.
    pub fn all() -> Vec<LadderKind> {
        let mut v = vec![LadderKind::A];
        v.extend(Mu::ALL.iter().map(|&m| LadderKind::C(m)));
        v.extend(Mu::ALL.iter().map(|&m| LadderKind::CTilde(m)));
        v
    }

    pub fn basis(self) -> Basis {
        match self {
            LadderKind::A => Basis::Plus,
            LadderKind::C(mu) | LadderKind::CTilde(mu) => Basis::Minus(mu),
        }
    }

    pub fn mu(self) -> Option<Mu> {
        match self {
            LadderKind::A => None,
            LadderKind::C(mu) | LadderKind::CTilde(mu) => Some(mu),
        }
    }

    /// Energy gap between neighbouring ladder rungs: 2 for `a`, 6 otherwise.
    pub fn step_energy(self) -> f64 {
        match self {
            LadderKind::A => 2.0,
            _ => 6.0,
        }
    }

    /// Density period of the coherent states, `2π / step_energy`.
    pub fn period(self) -> f64 {
        2.0 * PI / self.step_energy()
    }

    /// Short file-name friendly label, e.g. `a`, `c_m3`, `ctilde_2`.
    pub fn label(self) -> String {
        let mu = |m: Mu| match m {
            Mu::MinusThree => "m3".to_string(),
            other => other.value().to_string(),
        };
        match self {
            LadderKind::A => "a".into(),
            LadderKind::C(m) => format!("c_{}", mu(m)),
            LadderKind::CTilde(m) => format!("ctilde_{}", mu(m)),
        }
    }

    /// Applies this family's annihilation operator.
    pub fn lower(self, v: &CoefficientVector) -> Result<CoefficientVector> {
        match self {
            LadderKind::A => lower_a(v),
            LadderKind::C(mu) => lower_c(v, mu),
            LadderKind::CTilde(mu) => lower_ctilde(v, mu),
        }
    }

    pub fn raise(self, v: &CoefficientVector) -> Result<CoefficientVector> {
        match self {
            LadderKind::A => raise_a(v),
            LadderKind::C(mu) => raise_c(v, mu),
            LadderKind::CTilde(mu) => raise_ctilde(v, mu),
        }
    }
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderKind::A => f.write_str("a"),
            LadderKind::C(m) => write!(f, "c({m})"),
            LadderKind::CTilde(m) => write!(f, "ctilde({m})"),
        }
    }
}

/// One coefficient as `exp(log_mag) * exp(i phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub log_mag: f64,
    pub phase: f64,
}

impl Polar {
    pub const ZERO: Polar = Polar { log_mag: f64::NEG_INFINITY, phase: 0.0 };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        Polar { log_mag, phase: wrap_phase(phase) }
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            Polar::ZERO
        } else {
            Polar::new(c.norm().ln(), c.arg())
        }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_mag.exp(), self.phase)
        }
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// `|a|²`.
    pub fn weight(self) -> f64 {
        (2.0 * self.log_mag).exp()
    }

    /// Multiplies by a real factor, keeping exact zeros exact.
    pub fn scale(self, factor: f64) -> Polar {
        if factor == 0.0 || self.is_zero() {
            return Polar::ZERO;
        }
        let phase = if factor < 0.0 { self.phase + PI } else { self.phase };
        Polar::new(self.log_mag + factor.abs().ln(), phase)
    }
}

/// Maps a phase into `(-π, π]`.
pub fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Truncated expansion `Σ_k a_k |physical_index(k)⟩` over one ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    ladder: LadderKind,
    entries: Vec<Polar>,
    tail_weight: f64,
}

impl CoefficientVector {
    pub fn new(ladder: LadderKind, entries: Vec<Polar>) -> Self {
        CoefficientVector { ladder, entries, tail_weight: 0.0 }
    }

    /// Records the estimated weight discarded beyond the last entry.
    pub fn with_tail_weight(mut self, tail_weight: f64) -> Self {
        self.tail_weight = tail_weight;
        self
    }

    pub fn from_complex(ladder: LadderKind, amps: &[Complex64]) -> Self {
        Self::new(ladder, amps.iter().map(|&c| Polar::from_complex(c)).collect())
    }

    /// `|k⟩` on the given ladder, padded with zeros to `len` entries.
    pub fn basis_vector(ladder: LadderKind, k: usize, len: usize) -> Self {
        assert!(k < len);
        let mut entries = vec![Polar::ZERO; len];
        entries[k] = Polar::new(0.0, 0.0);
        Self::new(ladder, entries)
    }

    pub fn ladder(&self) -> LadderKind {
        self.ladder
    }

    pub fn basis(&self) -> Basis {
        self.ladder.basis()
    }

    pub fn entries(&self) -> &[Polar] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tail_weight(&self) -> f64 {
        self.tail_weight
    }

    pub fn physical_index(&self, k: usize) -> i64 {
        self.basis().physical_index(k)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.entries.iter().map(|p| p.to_complex()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|p| p.weight()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|p| p.weight()).sum()
    }

    /// `⟨self|other⟩`. Vectors on different `(-)` ladders are orthogonal;
    /// a `(+)` vector and a `(-)` vector live in different spaces.
    pub fn inner(&self, other: &CoefficientVector) -> Result<Complex64> {
        match (self.basis(), other.basis()) {
            (a, b) if a == b => {
                Ok(self.entries.iter().zip(&other.entries).map(|(p, q)| p.to_complex().conj() * q.to_complex()).sum())
            }
            (Basis::Minus(_), Basis::Minus(_)) => Ok(Complex64::new(0.0, 0.0)),
            (a, b) => Err(Error::LadderMismatch { op: format!("inner product with {b}"), basis: a.to_string() }),
        }
    }

    /// Same coefficients reinterpreted as a state of another family on the
    /// same basis.
    pub fn relabel(&self, ladder: LadderKind) -> Result<Self> {
        if ladder.basis() != self.basis() {
            return Err(Error::LadderMismatch { op: ladder.to_string(), basis: self.basis().to_string() });
        }
        Ok(CoefficientVector { ladder, ..self.clone() })
    }

    /// Applies `f(k, entry)` to every entry, keeping ladder and tail weight.
    pub fn map_entries<F: Fn(usize, Polar) -> Polar>(&self, f: F) -> Self {
        let entries = self.entries.iter().enumerate().map(|(k, &p)| f(k, p)).collect();
        CoefficientVector { entries, ..self.clone() }
    }

    /// Index range `lo..hi` outside of which the combined weight is at most
    /// `tol`, trimming the smallest end first.
    pub fn significant_range(&self, tol: f64) -> std::ops::Range<usize> {
        let w = self.weights();
        let (mut lo, mut hi) = (0, w.len());
        let mut dropped = 0.0;
        while lo < hi {
            let next = w[lo].min(w[hi - 1]);
            if dropped + next > tol {
                break;
            }
            dropped += next;
            if w[lo] <= w[hi - 1] {
                lo += 1;
            } else {
                hi -= 1;
            }
        }
        lo..hi
    }

    fn check_basis(&self, op: &str, basis: Basis) -> Result<()> {
        if self.basis() == basis {
            Ok(())
        } else {
            Err(Error::LadderMismatch { op: op.to_string(), basis: self.basis().to_string() })
        }
    }

    /// `out_k = element(k + 1) * in_{k+1}`; the top entry becomes zero.
    fn shift_down<F: Fn(usize) -> f64>(&self, element: F) -> Self {
        let mut entries = vec![Polar::ZERO; self.entries.len()];
        for (k, (out, p)) in entries.iter_mut().zip(self.entries.iter().skip(1)).enumerate() {
            *out = p.scale(element(k + 1));
        }
        CoefficientVector { ladder: self.ladder, entries, tail_weight: 0.0 }
    }

    /// `out_{k+1} = element(k) * in_k`; grows by one entry so nothing is lost.
    fn shift_up<F: Fn(usize) -> f64>(&self, element: F) -> Self {
        let n = self.entries.len();
        let mut entries = vec![Polar::ZERO; n + 1];
        for k in 0..n {
            entries[k + 1] = self.entries[k].scale(element(k));
        }
        CoefficientVector { ladder: self.ladder, entries, tail_weight: 0.0 }
    }
}

/// `⟨ν-1|a|ν⟩ = sqrt(2ν)`.
pub fn a_lower_element(nu: i64) -> f64 {
    (2.0 * nu as f64).sqrt()
}

/// `⟨ν+1|a†|ν⟩ = sqrt(2(ν+1))`.
pub fn a_raise_element(nu: i64) -> f64 {
    (2.0 * (nu as f64 + 1.0)).sqrt()
}

/// `⟨ν-3|c|ν⟩ = -[2(ν-1) 2(ν-2) 2(ν+3)]^{1/2}`, exactly zero at the three
/// lowest weights.
pub fn c_lower_element(nu: i64) -> f64 {
    let p = 8 * (nu - 1) * (nu - 2) * (nu + 3);
    if p == 0 {
        0.0
    } else {
        -(p as f64).sqrt()
    }
}

/// `⟨ν+3|c†|ν⟩ = -[2(ν+2) 2(ν+1) 2(ν+6)]^{1/2}`.
pub fn c_raise_element(nu: i64) -> f64 {
    let p = 8 * (nu + 2) * (nu + 1) * (nu + 6);
    if p == 0 {
        0.0
    } else {
        -(p as f64).sqrt()
    }
}

pub fn lower_a(v: &CoefficientVector) -> Result<CoefficientVector> {
    v.check_basis("a", Basis::Plus)?;
    Ok(v.shift_down(|k| a_lower_element(k as i64)))
}

pub fn raise_a(v: &CoefficientVector) -> Result<CoefficientVector> {
    v.check_basis("a†", Basis::Plus)?;
    Ok(v.shift_up(|k| a_raise_element(k as i64)))
}

pub fn lower_c(v: &CoefficientVector, mu: Mu) -> Result<CoefficientVector> {
    let basis = Basis::Minus(mu);
    v.check_basis("c", basis)?;
    Ok(v.shift_down(|k| c_lower_element(basis.physical_index(k))))
}

pub fn raise_c(v: &CoefficientVector, mu: Mu) -> Result<CoefficientVector> {
    let basis = Basis::Minus(mu);
    v.check_basis("c†", basis)?;
    Ok(v.shift_up(|k| c_raise_element(basis.physical_index(k))))
}

/// `c̃|κ,μ⟩ = sqrt(2κ)|κ-1,μ⟩`, zero at `κ = 0`.
pub fn lower_ctilde(v: &CoefficientVector, mu: Mu) -> Result<CoefficientVector> {
    v.check_basis("c̃", Basis::Minus(mu))?;
    Ok(v.shift_down(|k| (2.0 * k as f64).sqrt()))
}

pub fn raise_ctilde(v: &CoefficientVector, mu: Mu) -> Result<CoefficientVector> {
    v.check_basis("c̃†", Basis::Minus(mu))?;
    Ok(v.shift_up(|k| (2.0 * (k as f64 + 1.0)).sqrt()))
}

/// `Q(x) = x (x - 8)(x - 10)`.
pub fn q_polynomial(x: f64) -> f64 {
    x * (x - 8.0) * (x - 10.0)
}

/// Eigenvalue of `[c, c†] = Q(H + 6) - Q(H)` on `|ν(-)⟩`.
pub fn commutator_cc_dagger_eigenvalue(nu: i64) -> Result<f64> {
    let e = energy(SystemTag::Minus, nu)?;
    Ok(q_polynomial(e + 6.0) - q_polynomial(e))
}

/// `⟨ν|[c, c†]|ν⟩` assembled from the matrix elements
/// `c_lower(ν+3) c_raise(ν) - c_raise(ν-3) c_lower(ν)`.
pub fn commutator_from_elements(nu: i64) -> Result<f64> {
    SystemTag::Minus.check_index(nu)?;
    let up = c_raise_element(nu) * c_lower_element(nu + 3);
    let lowered = c_lower_element(nu);
    let down = if lowered == 0.0 { 0.0 } else { lowered * c_raise_element(nu - 3) };
    Ok(up - down)
}

/// Radius around the origin excluded from differential checks; the
/// intermediate functions of the supercharge chain carry a `1/x` pole.
pub const SINGULAR_EXCLUSION: f64 = 0.25;

/// Finite-difference step used by [`apply_c_differential`].
pub const FD_STEP: f64 = 1e-3;

/// `d/dx log M_m(x) = 2m M_{m-1}(x) / M_m(x)` for the modified Hermite
/// polynomials.
fn log_derivative(m: usize, x: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        2.0 * m as f64 * modified_hermite(m - 1, x) / modified_hermite(m, x)
    }
}

fn central_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) + f(x + 3.0 * h))
        / (60.0 * h)
}

/// `g = f' + W f`.
fn first_order<F, W>(f: F, w: W) -> impl Fn(f64) -> f64
where
    F: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    move |x| central_derivative(&f, x, FD_STEP) + w(x) * f(x)
}

/// Applies `c` to `ψ_ν^(-)` as a product of first-order differential
/// operators and samples the result at `points`.
///
/// The chain is `c = -A₂ A₁ A` with
/// `A = d/dx + x + M₂'/M₂` (annihilates the `(-)` ground state and maps the
/// `(-)` system onto the `(+)` oscillator), `A₁ = d/dx + x + M₀'/M₀ - M₁'/M₁`
/// and `A₂ = d/dx + x + M₁'/M₁ - M₂'/M₂`. The overall sign matches the
/// matrix elements of [`c_lower_element`] for `ν >= 3`. Derivatives use
/// 7-point central differences with step [`FD_STEP`].
pub fn apply_c_differential(nu: i64, points: &[f64]) -> Result<Vec<f64>> {
    SystemTag::Minus.check_index(nu)?;
    if let Some(&x) = points.iter().find(|x| x.abs() < SINGULAR_EXCLUSION) {
        return Err(Error::SingularRegion(x, SINGULAR_EXCLUSION));
    }
    let psi = move |x: f64| eigenfunction_minus(nu, x).expect("index checked");
    let w0 = |x: f64| x + log_derivative(2, x);
    let w1 = |x: f64| x + log_derivative(0, x) - log_derivative(1, x);
    let w2 = |x: f64| x + log_derivative(1, x) - log_derivative(2, x);
    let chain = first_order(first_order(first_order(psi, w0), w1), w2);
    Ok(points.iter().map(|&x| -chain(x)).collect())
}

/// Compares [`apply_c_differential`] with the matrix action
/// `c|ν⟩ = c_lower_element(ν) |ν-3⟩` on `points`.
///
/// Returns the relative L2 error `‖Dψ - c_ν ψ_{ν-3}‖ / ‖c_ν ψ_{ν-3}‖`, or for
/// the zero modes (`ν ∈ {-3, 1, 2}`) the ratio `‖Dψ‖ / ‖ψ_ν‖`.
pub fn c_differential_error(nu: i64, points: &[f64]) -> Result<f64> {
    let applied = apply_c_differential(nu, points)?;
    let element = c_lower_element(nu);
    let l2 = |v: &mut dyn Iterator<Item = f64>| v.map(|a| a * a).sum::<f64>().sqrt();
    if element == 0.0 {
        let num = l2(&mut applied.iter().copied());
        let den = l2(&mut points.iter().map(|&x| eigenfunction_minus(nu, x).unwrap()));
        return Ok(num / den);
    }
    let target: Vec<f64> = points.iter().map(|&x| element * eigenfunction_minus(nu - 3, x).unwrap()).collect();
    let num = l2(&mut applied.iter().zip(&target).map(|(a, b)| a - b));
    let den = l2(&mut target.iter().copied());
    Ok(num / den)
}

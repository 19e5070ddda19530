//! Rationally extended harmonic oscillator built on the type-III Hermite
//! exceptional polynomials: spectra, ladder operators `a`, `c`, `c̃`, their
//! Barut-Girardello coherent states and cat states, and the time-dependent
//! position densities of those states.

pub mod cli;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod ladder;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};

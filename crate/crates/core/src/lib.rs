//! Exact bound states of the modified Kratzer and rotationally corrected
//! Morse potentials under position-dependent effective mass, obtained by a
//! point canonical transformation and certified by an independent
//! finite-difference eigensolver.
//!
//! Units: ħ = m₀ = 1 unless a parameter bundle says otherwise.
//!
//! * [`specfun`]: Laguerre polynomials, `log_gamma`, adaptive quadrature.
//! * [`reference`]: constant-mass closed forms in the mapped coordinate `y`.
//! * [`mass_profiles`]: the mass distributions `m(x)` and `y = f(x)`.
//! * [`pct`]: target potentials, transformed wavefunctions, printed-formula audit.
//! * [`oracle`]: finite-difference discretizations and eigensolver.

pub mod error;
pub mod mass_profiles;
pub mod oracle;
pub mod pct;
pub mod reference;
pub mod specfun;

pub use error::{Error, Result};
pub use mass_profiles::MassProfile;
pub use pct::{CorrectionSign, Placement, TargetProblem};
pub use reference::{BoundState, KratzerParams, MorseParams, Provenance, Reference, Wavefunction};

use serde::Serialize;

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Deterministic 12-significant-digit rendering used by every output format.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

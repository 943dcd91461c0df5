//! Point canonical transformation from a constant-mass reference problem in
//! `y` to the BenDaniel–Duke position-dependent-mass problem in `x`.
//!
//! With `y = f(x)`, `f'² = m`, the PDM equation
//! `-(s/2) (ψ'/m)' + Ṽ ψ = E ψ` is solved by `ψ = m^{1/4} φ(f(x))` with
//!
//! ```text
//! Ṽ(x) = V(f(x)) + s/(8m) [ m''/m - (7/4)(m'/m)² ]
//! ```
//!
//! and the same energies as the reference problem.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mass_profiles::MassProfile;
use crate::oracle::{self, ConstantMassProblem, Grid, OracleProblem};
use crate::reference::{morse_printed_index_state, BoundState, MassWeight, Reference, Wavefunction};
use crate::specfun::{integrate_interval, integrate_split};
use crate::Interval;

/// Affine placement of the mapped coordinate: `y = offset + orientation · f(x)`.
///
/// Any such choice keeps `(dy/dx)² = m`; it is needed when the image of
/// `f` does not cover the reference domain (exponential profile).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Placement {
    pub orientation: f64,
    pub offset: f64,
}

impl Placement {
    pub const IDENTITY: Placement = Placement { orientation: 1.0, offset: 0.0 };

    pub fn apply(&self, f: f64) -> f64 {
        self.offset + self.orientation * f
    }

    /// Inverse of [`Placement::apply`].
    pub fn unapply(&self, y: f64) -> f64 {
        (y - self.offset) * self.orientation
    }

    pub fn is_reflected(&self) -> bool {
        self.orientation < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionSign {
    #[default]
    Plus,
    /// The sign printed in the generic target-potential formula. Only used
    /// as a negative control: it does not preserve the spectrum.
    Minus,
}

impl CorrectionSign {
    fn factor(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// A (reference potential × mass profile) composition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetProblem {
    pub reference: Reference,
    pub profile: MassProfile,
    pub placement: Placement,
    pub correction_sign: CorrectionSign,
}

/// Relative level at which the Morse wavefunctions are considered to have
/// vanished against the repulsive wall; sets the offset of the reflected
/// exponential placement.
const MORSE_WALL_THRESHOLD: f64 = 1e-16;

impl TargetProblem {
    /// Composition with the default placement: identity, except for the
    /// exponential profile, whose image `(-∞, 0)` is reflected onto
    /// `(offset, ∞)`. The offset is 0 for Kratzer and sits beyond the
    /// repulsive wall for Morse.
    pub fn new(reference: Reference, profile: MassProfile) -> Result<Self> {
        reference.validate()?;
        profile.validate()?;
        let placement = match (reference, profile) {
            (Reference::Kratzer(_), MassProfile::Exponential { .. }) => Placement { orientation: -1.0, offset: 0.0 },
            (Reference::Morse(p), MassProfile::Exponential { .. }) => {
                let offset = match p.bound_state_count() {
                    0 => 0.0,
                    count => {
                        let sup = reference.support(count - 1, MORSE_WALL_THRESHOLD)?;
                        sup.lo.min(0.0)
                    }
                };
                Placement { orientation: -1.0, offset }
            }
            _ => Placement::IDENTITY,
        };
        Self::with_placement(reference, profile, placement)
    }

    pub fn with_placement(reference: Reference, profile: MassProfile, placement: Placement) -> Result<Self> {
        if placement.orientation.abs() != 1.0 || !placement.offset.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "placement orientation must be ±1 and offset finite, got {placement:?}"
            )));
        }
        let tp = Self { reference, profile, placement, correction_sign: CorrectionSign::Plus };
        if tp.x_domain().is_empty() {
            return Err(Error::Composition(format!(
                "the mapped range of {profile} does not meet the {} domain",
                reference.name()
            )));
        }
        Ok(tp)
    }

    pub fn with_correction_sign(mut self, sign: CorrectionSign) -> Self {
        self.correction_sign = sign;
        self
    }

    /// Same composition for a different angular momentum, keeping the placement.
    pub fn with_ell(&self, ell: u32) -> Self {
        Self { reference: self.reference.with_ell(ell), ..*self }
    }

    pub fn y_of_x(&self, x: f64) -> f64 {
        self.placement.apply(self.profile.mapping_unchecked(x))
    }

    /// Pull-back of a mapped coordinate, ±∞ at the image ends.
    pub fn x_of_y(&self, y: f64) -> f64 {
        self.profile.inverse_extended(self.placement.unapply(y))
    }

    /// Range of `y` over the real x-axis.
    pub fn y_image(&self) -> Interval {
        let img = self.profile.image();
        let (a, b) = (self.placement.apply(img.lo), self.placement.apply(img.hi));
        Interval::new(a.min(b), a.max(b))
    }

    /// Reference domain ∩ mapped range, in `y`.
    pub fn y_domain(&self) -> Interval {
        self.y_image().intersect(&self.reference.domain())
    }

    pub fn x_domain(&self) -> Interval {
        let yd = self.y_domain();
        if yd.is_empty() {
            return Interval::new(f64::NAN, f64::NAN);
        }
        let (a, b) = (self.x_of_y(yd.lo), self.x_of_y(yd.hi));
        Interval::new(a.min(b), a.max(b))
    }

    pub fn mass(&self, x: f64) -> f64 {
        self.profile.mass_unchecked(x)
    }

    /// Mass-dependent part of the target potential,
    /// `± s/(8m) [m''/m - (7/4)(m'/m)²]`.
    pub fn correction(&self, x: f64) -> f64 {
        if self.profile.is_uniform() {
            return 0.0;
        }
        let s = self.reference.kinetic_scale();
        self.correction_sign.factor() * s / (8.0 * self.mass(x)) * self.profile.correction_bracket(x)
    }

    pub fn target_potential(&self, x: f64) -> Result<f64> {
        if !self.x_domain().contains(x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.reference.potential(self.y_of_x(x)) + self.correction(x))
    }

    /// Unchecked variant for operator assembly on validated grids.
    pub(crate) fn target_potential_unchecked(&self, x: f64) -> f64 {
        self.reference.potential(self.y_of_x(x)) + self.correction(x)
    }

    fn check_support(&self, state: &BoundState) -> Result<()> {
        let yd = self.y_domain();
        let refd = self.reference.domain();
        // the mapped range may stop short of the reference domain only where
        // the state has already decayed
        let sup = self.reference.support(state.n, 1e-10)?;
        if (yd.lo > refd.lo && sup.lo < yd.lo) || (yd.hi < refd.hi && sup.hi > yd.hi) {
            return Err(Error::Composition(format!(
                "state n={} is supported on y ∈ [{:.4}, {:.4}] but {} only reaches ({:.4}, {:.4})",
                state.n, sup.lo, sup.hi, self.profile, yd.lo, yd.hi
            )));
        }
        Ok(())
    }

    fn transform_with(&self, state: &BoundState, weight: MassWeight) -> Result<BoundState> {
        if !matches!(state.wavefunction, Wavefunction::Kratzer { .. } | Wavefunction::Morse { .. }) {
            return Err(Error::Composition("only analytic reference states can be transformed".into()));
        }
        self.check_support(state)?;
        Ok(BoundState {
            n: state.n,
            ell: state.ell,
            energy: state.energy,
            wavefunction: Wavefunction::Transformed {
                inner: Box::new(state.wavefunction.clone()),
                profile: self.profile,
                placement: self.placement,
                weight,
            },
            provenance: state.provenance,
        })
    }

    /// `ψ(x) = m(x)^{1/4} φ(f(x))`, same energy.
    pub fn transform_wavefunction(&self, state: &BoundState) -> Result<BoundState> {
        self.transform_with(state, MassWeight::QuarterPower)
    }

    /// `ψ(x) = φ(f(x)) / m(x)`, the printed wavefunction transformation.
    pub fn transform_wavefunction_printed(&self, state: &BoundState) -> Result<BoundState> {
        self.transform_with(state, MassWeight::InverseMass)
    }

    /// Analytic state `n` of the composition.
    pub fn bound_state(&self, n: usize) -> Result<BoundState> {
        self.transform_wavefunction(&self.reference.bound_state(n)?)
    }

    /// x-window containing states `0..=n_max` down to `threshold` of their
    /// peak. Where the reference domain has a finite edge that maps to a
    /// finite x (Kratzer origin), that edge is used as the boundary.
    pub fn window(&self, n_max: usize, threshold: f64) -> Result<Interval> {
        let mut sup: Option<Interval> = None;
        for n in 0..=n_max {
            let s = self.reference.support(n, threshold)?;
            sup = Some(sup.map_or(s, |acc| acc.hull(&s)));
        }
        let mut sup = sup.expect("n_max >= 0");
        let refd = self.reference.domain();
        if refd.lo.is_finite() && self.x_of_y(refd.lo).is_finite() {
            sup.lo = refd.lo;
        }
        let yd = self.y_domain();
        if (yd.lo > refd.lo && sup.lo < yd.lo) || (yd.hi < refd.hi && sup.hi > yd.hi) {
            return Err(Error::Composition(format!(
                "states up to n={n_max} need y ∈ [{:.4}, {:.4}] but {} only reaches ({:.4}, {:.4})",
                sup.lo, sup.hi, self.profile, yd.lo, yd.hi
            )));
        }
        let (a, b) = (self.x_of_y(sup.lo), self.x_of_y(sup.hi));
        let w = Interval::new(a.min(b), a.max(b));
        if !w.is_finite() {
            return Err(Error::Composition(format!("window {w:?} is not finite")));
        }
        Ok(w)
    }
}

/// `∫ ψ_m ψ_n dx` of the transformed states, by adaptive quadrature over
/// the x-domain.
pub fn overlap(tp: &TargetProblem, m: usize, n: usize) -> Result<f64> {
    let a = tp.bound_state(m)?;
    let b = tp.bound_state(n)?;
    let f = |x: f64| a.eval(x) * b.eval(x);
    let core = tp.window(m.max(n), 1e-12)?;
    let mut total = integrate_split(f, core.lo, core.hi, 64, 1e-14)?;
    let dom = tp.x_domain();
    if dom.lo < core.lo {
        total += integrate_interval(f, dom.lo, core.lo, 1e-15)?;
    }
    if dom.hi > core.hi {
        total += integrate_interval(f, core.hi, dom.hi, 1e-15)?;
    }
    Ok(total)
}

/// Closed-form target potentials printed for the six compositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PaperEquation {
    /// Kratzer × a²/(q+x²).
    Eq21,
    /// Kratzer × a²/(b+x²)².
    Eq26,
    /// Kratzer × e^{-qx}.
    Eq30,
    /// Morse × a²/(q+x²).
    Eq45,
    /// Morse × a²/(b+x²)².
    Eq47,
    /// Morse × e^{-qx}.
    Eq49,
}

impl fmt::Display for PaperEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl PaperEquation {
    pub const ALL: [PaperEquation; 6] = [Self::Eq21, Self::Eq26, Self::Eq30, Self::Eq45, Self::Eq47, Self::Eq49];

    pub fn label(&self) -> &'static str {
        match self {
            Self::Eq21 => "eq21",
            Self::Eq26 => "eq26",
            Self::Eq30 => "eq30",
            Self::Eq45 => "eq45",
            Self::Eq47 => "eq47",
            Self::Eq49 => "eq49",
        }
    }

    /// The printed formula that belongs to a composition, if any.
    pub fn for_composition(reference: &Reference, profile: &MassProfile) -> Option<Self> {
        match (reference, profile) {
            (Reference::Kratzer(_), MassProfile::Lorentzian { .. }) => Some(Self::Eq21),
            (Reference::Kratzer(_), MassProfile::SquaredLorentzian { .. }) => Some(Self::Eq26),
            (Reference::Kratzer(_), MassProfile::Exponential { .. }) => Some(Self::Eq30),
            (Reference::Morse(_), MassProfile::Lorentzian { .. }) => Some(Self::Eq45),
            (Reference::Morse(_), MassProfile::SquaredLorentzian { .. }) => Some(Self::Eq47),
            (Reference::Morse(_), MassProfile::Exponential { .. }) => Some(Self::Eq49),
            _ => None,
        }
    }
}

/// Literal transcription of a printed target potential, typos included.
///
/// `stray_q` is the value substituted for the `q` that appears in the
/// squared-Lorentzian Morse formula, where the profile has no `q`.
pub fn paper_closed_form_target(eq: PaperEquation, tp: &TargetProblem, x: f64, stray_q: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::OutOfDomain(x));
    }
    let mismatch = || {
        Error::Composition(format!(
            "{eq} does not describe {} × {}",
            tp.reference.name(),
            tp.profile.name()
        ))
    };
    match (eq, tp.reference, tp.profile) {
        (PaperEquation::Eq21, Reference::Kratzer(k), MassProfile::Lorentzian { a, q }) => {
            let l = a * (x + (q + x * x).sqrt()).ln();
            let r = (l - k.ye) / l;
            Ok(k.de * r * r - 1.0 / (8.0 * a * a) * (2.0 * q + x * x) / (q + x * x))
        }
        (PaperEquation::Eq26, Reference::Kratzer(k), MassProfile::SquaredLorentzian { a, b }) => {
            let t = a / b.sqrt() * (x / b.sqrt()).atan();
            let r = (t - k.ye) / t;
            Ok(k.de * r * r - (b + 2.0 * x * x) / (2.0 * a * a))
        }
        (PaperEquation::Eq30, Reference::Kratzer(k), MassProfile::Exponential { q }) => {
            let r = 1.0 + 0.5 * q * k.ye * (0.5 * q * x).exp();
            Ok(k.de * r * r + 9.0 / 128.0 * q.powi(4) * (-q * x).exp())
        }
        (PaperEquation::Eq45, Reference::Morse(p), MassProfile::Lorentzian { a, q }) => {
            let (d0, d1, d2) = p.pekeris();
            let g = p.gamma_rot();
            let base = x + (q + x * x).sqrt();
            let al = p.alpha();
            Ok((p.d + g * d1) / base.powf(2.0 * al * a) + (g * d1 - 2.0 * d2) / base.powf(al * a) + g * d0)
        }
        (PaperEquation::Eq47, Reference::Morse(p), MassProfile::SquaredLorentzian { a, b }) => {
            let (d0, d1, _) = p.pekeris();
            let g = p.gamma_rot();
            let phase = p.alpha() * a / b.sqrt() * (x / b.sqrt()).atan();
            Ok((p.d + g * d1) * (-2.0 * phase).exp() + (g * d1 - 2.0 * p.d) * (-phase).exp() + g * d0
                - (stray_q + 2.0 * x * x) / (2.0 * a * a))
        }
        (PaperEquation::Eq49, Reference::Morse(p), MassProfile::Exponential { q }) => {
            let (d0, d1, d2) = p.pekeris();
            let g = p.gamma_rot();
            let al = p.alpha();
            let e = (-0.5 * q * x).exp();
            let s1 = (2.0 * al / q * e).exp();
            let s2 = (4.0 * al / q * e).exp();
            Ok(p.d * (s2 - 2.0 * s1) + g * (d0 + d1 * s1 + d2 * s2))
        }
        _ => Err(mismatch()),
    }
}

/// The generic construction with the printed reference potential and the
/// printed (unreflected, unshifted) mapping `y = f(x)`: the quantity each
/// printed closed form claims to equal.
pub fn generic_printed_target(tp: &TargetProblem, x: f64) -> f64 {
    let y = tp.profile.mapping_unchecked(x);
    let plus = TargetProblem { correction_sign: CorrectionSign::Plus, ..*tp };
    tp.reference.printed_potential(y) + plus.correction(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Discrepant,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Consistent => "consistent",
            Self::Discrepant => "discrepant",
        })
    }
}

/// Deviation at or below which a printed formula is judged identical to
/// the generic construction.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub equation_id: PaperEquation,
    pub max_abs_deviation: f64,
    pub argmax_x: f64,
    pub sample_points: Vec<f64>,
    pub verdict: Verdict,
}

/// Residual of a Morse state built with a given Laguerre upper index under
/// the constant-mass operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexVariantResidual {
    pub variant: &'static str,
    pub n: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub records: Vec<AuditRecord>,
    pub index_variants: Vec<IndexVariantResidual>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOptions {
    /// Number of sample points (at least 50).
    pub samples: usize,
    /// Value substituted for the undefined `q` in the squared-Lorentzian
    /// Morse formula.
    pub stray_q: f64,
    /// Grid size for the Laguerre-index residual check.
    pub residual_points: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { samples: 64, stray_q: 1.0, residual_points: 4001 }
    }
}

fn audit_window(tp: &TargetProblem) -> Interval {
    // the inner part of the ground state, where both formulas are moderate
    if let Ok(w) = tp.window(0, 1e-6) {
        return w;
    }
    let d = tp.x_domain();
    let lo = if d.lo.is_finite() { d.lo } else { -5.0 };
    let hi = if d.hi.is_finite() { d.hi } else { lo.max(0.0) + 5.0 };
    Interval::new(lo, hi)
}

/// Compares the printed closed form of the composition (if any) against the
/// generic construction at `options.samples` interior points, and for Morse
/// references reports residuals of both Laguerre-index variants.
pub fn audit(tp: &TargetProblem, options: &AuditOptions) -> Result<Audit> {
    let mut records = Vec::new();
    if let Some(eq) = PaperEquation::for_composition(&tp.reference, &tp.profile) {
        let w = audit_window(tp);
        let samples = options.samples.max(50);
        let points: Vec<f64> = (0..samples)
            .map(|i| w.lo + w.width() * (i as f64 + 0.5) / samples as f64)
            .collect();
        let mut worst = (0.0f64, points[0]);
        for &x in &points {
            let printed = paper_closed_form_target(eq, tp, x, options.stray_q)?;
            let generic = generic_printed_target(tp, x);
            let dev = (printed - generic).abs();
            if !(dev <= worst.0) {
                worst = (if dev.is_nan() { f64::INFINITY } else { dev }, x);
            }
        }
        records.push(AuditRecord {
            equation_id: eq,
            max_abs_deviation: worst.0,
            argmax_x: worst.1,
            sample_points: points,
            verdict: if worst.0 <= AUDIT_TOLERANCE { Verdict::Consistent } else { Verdict::Discrepant },
        });
    }
    let mut index_variants = Vec::new();
    if let Reference::Morse(p) = tp.reference {
        let count = p.bound_state_count().min(3);
        for n in 0..count {
            let window = tp.reference.support(n, 1e-10)?;
            let problem = ConstantMassProblem::from_reference(tp.reference, window)?;
            let grid = Grid::new(window.lo, window.hi, options.residual_points)?;
            let op = problem.assemble(&grid)?;
            let nodes = grid.nodes();
            for (variant, state) in [
                ("index 2*eps1", tp.reference.bound_state(n)?),
                ("index 1+2*eps1 (printed)", morse_printed_index_state(&p, n)?),
            ] {
                let psi = state.wavefunction.sample(nodes.iter().copied());
                let residual = oracle::residual_norm(&op, &psi, state.energy)?;
                index_variants.push(IndexVariantResidual { variant, n, residual });
            }
        }
    }
    Ok(Audit { records, index_variants })
}

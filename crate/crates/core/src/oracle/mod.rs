//! Finite-difference oracle: second-order discretizations of the
//! constant-mass and position-dependent-mass Hamiltonians on uniform grids
//! with Dirichlet ends, a tridiagonal eigensolver, and convergence studies.

mod study;
pub mod tridiag;

pub use study::{convergence_study, richardson, VerificationRecord, VerificationReport};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pct::TargetProblem;
use crate::reference::{BoundState, MorseParams, Reference};
use crate::Interval;

/// Potentials beyond this magnitude are treated as singular.
const POTENTIAL_CEILING: f64 = 1e200;

/// Uniform grid `x_i = x_min + i h`, `i = 0..n_points`, with Dirichlet ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid { needed: 3, got: n_points });
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter(format!("grid bounds must be finite with x_min < x_max, got [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// All nodes including the two boundary nodes.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        let mut v: Vec<f64> = (0..self.n_points).map(|i| self.x_min + i as f64 * h).collect();
        v[self.n_points - 1] = self.x_max;
        v
    }

    pub fn interior(&self) -> Vec<f64> {
        let nodes = self.nodes();
        nodes[1..self.n_points - 1].to_vec()
    }
}

/// Symmetric tridiagonal operator on the interior nodes. `boundary_coupling`
/// holds the hopping to the two Dirichlet nodes, used when a residual is
/// taken with a full-length vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub boundary_coupling: [f64; 2],
    pub grid: Grid,
}

impl DiscreteOperator {
    /// True by construction; checks the stored shape.
    pub fn is_symmetric(&self) -> bool {
        self.off_diagonal.len() + 1 == self.diagonal.len()
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// `(Hψ)_i` at the interior nodes. `psi` may be interior-length or
    /// full-length (boundary values included).
    pub fn apply(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        let (inner, left, right) = if psi.len() == m {
            (psi, 0.0, 0.0)
        } else if psi.len() == m + 2 {
            (&psi[1..m + 1], psi[0], psi[m + 1])
        } else {
            return Err(Error::LengthMismatch { expected: m + 2, got: psi.len() });
        };
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut v = self.diagonal[i] * inner[i];
            v += if i > 0 { self.off_diagonal[i - 1] * inner[i - 1] } else { self.boundary_coupling[0] * left };
            v += if i + 1 < m { self.off_diagonal[i] * inner[i + 1] } else { self.boundary_coupling[1] * right };
            out.push(v);
        }
        Ok(out)
    }
}

fn checked_potential(v: f64, x: f64) -> Result<f64> {
    if !v.is_finite() || v.abs() > POTENTIAL_CEILING {
        return Err(Error::SingularPotential(x));
    }
    Ok(v)
}

/// `-(1/2μ) ψ'' + V ψ` with the three-point Laplacian.
pub fn discretize_constant_mass(potential: &dyn Fn(f64) -> f64, grid: &Grid, mu: f64) -> Result<DiscreteOperator> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mu}")));
    }
    let h = grid.h();
    let t = 1.0 / (2.0 * mu * h * h);
    let interior = grid.interior();
    let diagonal = interior
        .iter()
        .map(|&x| checked_potential(potential(x), x).map(|v| t + t + v))
        .collect::<Result<Vec<_>>>()?;
    let off_diagonal = vec![-t; interior.len() - 1];
    Ok(DiscreteOperator { diagonal, off_diagonal, boundary_coupling: [-t, -t], grid: *grid })
}

/// `-(s/2) (ψ'/m)' + Ṽ ψ` in conservative form, with the mass sampled at
/// the half-integer nodes. Uniform mass reproduces
/// [`discretize_constant_mass`] with `μ = 1/s` (bit-identically for `s = 1`).
pub fn discretize_pdm(tp: &TargetProblem, grid: &Grid) -> Result<DiscreteOperator> {
    let dom = tp.x_domain();
    if grid.x_min < dom.lo || grid.x_max > dom.hi {
        return Err(Error::OutOfDomain(if grid.x_min < dom.lo { grid.x_min } else { grid.x_max }));
    }
    let s = tp.reference.kinetic_scale();
    let h = grid.h();
    let nodes = grid.nodes();
    let n = nodes.len();
    let hop = (0..n - 1)
        .map(|i| {
            let xm = 0.5 * (nodes[i] + nodes[i + 1]);
            let m = tp.mass(xm);
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::NonPositiveMass { x: xm, mass: m });
            }
            Ok(s / (2.0 * h * h * m))
        })
        .collect::<Result<Vec<_>>>()?;
    let diagonal = (1..n - 1)
        .map(|i| {
            let x = nodes[i];
            checked_potential(tp.target_potential_unchecked(x), x).map(|v| hop[i - 1] + hop[i] + v)
        })
        .collect::<Result<Vec<_>>>()?;
    let off_diagonal = hop[1..n - 2].iter().map(|t| -t).collect();
    Ok(DiscreteOperator { diagonal, off_diagonal, boundary_coupling: [-hop[0], -hop[n - 2]], grid: *grid })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Interior values, `Σ v² h = 1`, first significant lobe positive.
    pub vector: Vec<f64>,
}

pub fn lowest_eigenvalues(op: &DiscreteOperator, k: usize) -> Result<Vec<f64>> {
    tridiag::lowest_eigenvalues(&op.diagonal, &op.off_diagonal, k)
}

pub fn lowest_eigenpairs(op: &DiscreteOperator, k: usize) -> Result<Vec<Eigenpair>> {
    let h = op.grid.h();
    lowest_eigenvalues(op, k)?
        .into_iter()
        .map(|value| {
            let mut v = tridiag::inverse_iteration(&op.diagonal, &op.off_diagonal, value)?;
            let scale = 1.0 / (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let first = v.iter().find(|x| x.abs() >= 1e-2 * vmax).copied().unwrap_or(1.0);
            let sign = if first < 0.0 { -scale } else { scale };
            v.iter_mut().for_each(|x| *x *= sign);
            Ok(Eigenpair { value, vector: v })
        })
        .collect()
}

/// `‖Hψ − Eψ‖ / ‖ψ‖` over the interior nodes.
pub fn residual_norm(op: &DiscreteOperator, psi: &[f64], energy: f64) -> Result<f64> {
    let hpsi = op.apply(psi)?;
    let inner = if psi.len() == op.dim() { psi } else { &psi[1..op.dim() + 1] };
    let num: f64 = hpsi.iter().zip(inner).map(|(a, b)| (a - energy * b).powi(2)).sum();
    let den: f64 = inner.iter().map(|b| b * b).sum();
    if den == 0.0 {
        return Err(Error::InvalidParameter("residual of a vanishing vector".into()));
    }
    Ok((num / den).sqrt())
}

/// A problem the oracle can discretize and compare against closed forms.
pub trait OracleProblem: Sync {
    fn label(&self) -> String;
    fn window(&self) -> Interval;
    fn ell(&self) -> u32;
    fn assemble(&self, grid: &Grid) -> Result<DiscreteOperator>;
    /// Energy the numerical eigenvalue is compared to.
    fn analytic_energy(&self, n: usize) -> Option<f64>;
    /// Whether [`OracleProblem::analytic_energy`] is the exact eigenvalue of
    /// the discretized continuum problem (as opposed to an approximation).
    fn energy_is_exact(&self) -> bool {
        true
    }
    fn analytic_state(&self, n: usize) -> Option<BoundState>;

    fn grid(&self, n_points: usize) -> Result<Grid> {
        let w = self.window();
        Grid::new(w.lo, w.hi, n_points)
    }
}

/// `-(1/2μ) d²/dy² + V(y)` on a window.
#[derive(Clone)]
pub struct ConstantMassProblem {
    label: String,
    potential: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    window: Interval,
    mu: f64,
    ell: u32,
    reference: Option<Reference>,
    exact: bool,
}

impl fmt::Debug for ConstantMassProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstantMassProblem")
            .field("label", &self.label)
            .field("window", &self.window)
            .field("mu", &self.mu)
            .field("ell", &self.ell)
            .field("reference", &self.reference)
            .finish()
    }
}

fn check_window(window: Interval, domain: Interval) -> Result<()> {
    if !window.is_finite() || window.is_empty() {
        return Err(Error::InvalidParameter(format!("window {window:?} must be finite and non-empty")));
    }
    if window.lo < domain.lo || window.hi > domain.hi {
        return Err(Error::OutOfDomain(if window.lo < domain.lo { window.lo } else { window.hi }));
    }
    Ok(())
}

impl ConstantMassProblem {
    pub fn new(
        label: impl Into<String>,
        potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
        window: Interval,
        mu: f64,
    ) -> Result<Self> {
        check_window(window, Interval::REAL_LINE)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mu}")));
        }
        Ok(Self { label: label.into(), potential: Arc::new(potential), window, mu, ell: 0, reference: None, exact: false })
    }

    /// The reference problem itself (`m = 1`, `μ = 1/s`) on `window`.
    pub fn from_reference(reference: Reference, window: Interval) -> Result<Self> {
        reference.validate()?;
        check_window(window, reference.domain())?;
        let r = reference;
        Ok(Self {
            label: format!("{}(l={})×uniform", r.name(), r.ell()),
            potential: Arc::new(move |y| r.potential(y)),
            window,
            mu: 1.0 / r.kinetic_scale(),
            ell: r.ell(),
            reference: Some(r),
            exact: true,
        })
    }

    /// Reference problem on a window covering states `0..=n_max` down to
    /// `threshold`; the Kratzer window starts at the origin.
    pub fn for_states(reference: Reference, n_max: usize, threshold: f64) -> Result<Self> {
        let mut w = reference.support(0, threshold)?;
        for n in 1..=n_max {
            w = w.hull(&reference.support(n, threshold)?);
        }
        if let Reference::Kratzer(_) = reference {
            w.lo = 0.0;
        }
        Self::from_reference(reference, w)
    }

    /// Morse well with the exact centrifugal term `γ/(1+y)²`; compared to
    /// the Pekeris closed form, which is only an approximation to it. The
    /// window must avoid the origin `y = -1` when `ℓ > 0`; at `ℓ = 0` the
    /// potential is regular on the whole line.
    pub fn morse_exact_centrifugal(p: MorseParams, window: Interval) -> Result<Self> {
        p.validate()?;
        let domain = if p.ell > 0 { Interval::new(-1.0, f64::INFINITY) } else { Interval::REAL_LINE };
        check_window(window, domain)?;
        Ok(Self {
            label: format!("morse-exact-centrifugal(l={})", p.ell),
            potential: Arc::new(move |y| p.exact_centrifugal_potential(y)),
            window,
            mu: 1.0 / p.kinetic_scale(),
            ell: p.ell,
            reference: Some(Reference::Morse(p)),
            exact: false,
        })
    }

    pub fn potential(&self, y: f64) -> f64 {
        (self.potential)(y)
    }
}

impl OracleProblem for ConstantMassProblem {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn window(&self) -> Interval {
        self.window
    }

    fn ell(&self) -> u32 {
        self.ell
    }

    fn assemble(&self, grid: &Grid) -> Result<DiscreteOperator> {
        discretize_constant_mass(&*self.potential, grid, self.mu)
    }

    fn analytic_energy(&self, n: usize) -> Option<f64> {
        self.reference.and_then(|r| r.energy(n).ok())
    }

    fn energy_is_exact(&self) -> bool {
        self.exact
    }

    fn analytic_state(&self, n: usize) -> Option<BoundState> {
        if !self.exact {
            return None;
        }
        self.reference.and_then(|r| r.bound_state(n).ok())
    }
}

/// A PCT composition discretized in the physical coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdmProblem {
    pub target: TargetProblem,
    window: Interval,
}

impl PdmProblem {
    /// Window covering states `0..=n_max` down to `threshold` of their peak.
    pub fn new(target: TargetProblem, n_max: usize, threshold: f64) -> Result<Self> {
        let window = target.window(n_max, threshold)?;
        Self::with_window(target, window)
    }

    pub fn with_window(target: TargetProblem, window: Interval) -> Result<Self> {
        let dom = target.x_domain();
        check_window(window, dom)?;
        Ok(Self { target, window })
    }
}

impl OracleProblem for PdmProblem {
    fn label(&self) -> String {
        format!("{}(l={})×{}", self.target.reference.name(), self.target.reference.ell(), self.target.profile)
    }

    fn window(&self) -> Interval {
        self.window
    }

    fn ell(&self) -> u32 {
        self.target.reference.ell()
    }

    fn assemble(&self, grid: &Grid) -> Result<DiscreteOperator> {
        discretize_pdm(&self.target, grid)
    }

    fn analytic_energy(&self, n: usize) -> Option<f64> {
        self.target.reference.energy(n).ok()
    }

    fn analytic_state(&self, n: usize) -> Option<BoundState> {
        self.target.bound_state(n).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass_profiles::MassProfile;
    use crate::reference::KratzerParams;
    use std::f64::consts::PI;

    #[test]
    fn particle_in_a_box() {
        let grid = Grid::new(0.0, PI, 2001).unwrap();
        let op = discretize_constant_mass(&|_| 0.0, &grid, 1.0).unwrap();
        let vals = lowest_eigenvalues(&op, 3).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 0.5 * ((k + 1) * (k + 1)) as f64;
            assert!((v - exact).abs() / exact < 1e-5, "{v} vs {exact}");
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let grid = Grid::new(-10.0, 10.0, 4001).unwrap();
        let op = discretize_constant_mass(&|x| 0.5 * x * x, &grid, 1.0).unwrap();
        let pairs = lowest_eigenpairs(&op, 4).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            assert!((p.value - (k as f64 + 0.5)).abs() < 1e-4);
            let norm: f64 = p.vector.iter().map(|v| v * v).sum::<f64>() * grid.h();
            assert!((norm - 1.0).abs() < 1e-12);
            let first = p.vector.iter().find(|v| v.abs() > 1e-3).unwrap();
            assert!(*first > 0.0);
            let r = residual_norm(&op, &p.vector, p.value).unwrap();
            assert!(r < 1e-8, "{r}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Grid::new(0.0, 1.0, 2), Err(Error::InvalidGrid { .. })));
        assert!(Grid::new(1.0, 0.0, 10).is_err());
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        assert_eq!(g.nodes().len(), 11);
        assert_eq!(g.interior().len(), 9);
        assert!((g.h() - 0.1).abs() < 1e-16);
    }

    #[test]
    fn uniform_pdm_is_bit_identical() {
        let r = Reference::Kratzer(KratzerParams::new(1.0, 1.0, 1).unwrap());
        let tp = TargetProblem::new(r, MassProfile::Uniform).unwrap();
        let grid = Grid::new(0.0, 40.0, 801).unwrap();
        let a = discretize_pdm(&tp, &grid).unwrap();
        let b = discretize_constant_mass(&|y| r.potential(y), &grid, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.is_symmetric());
    }

    #[test]
    fn residual_length_mismatch() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let op = discretize_constant_mass(&|_| 0.0, &grid, 1.0).unwrap();
        assert!(matches!(residual_norm(&op, &[1.0; 5], 0.0), Err(Error::LengthMismatch { .. })));
        assert!(residual_norm(&op, &[1.0; 9], 0.0).is_ok());
        assert!(residual_norm(&op, &[1.0; 11], 0.0).is_ok());
    }

    #[test]
    fn singular_potential_is_reported() {
        let grid = Grid::new(-1.0, 1.0, 11).unwrap();
        let r = discretize_constant_mass(&|x| 1.0 / (x * x), &grid, 1.0);
        assert!(matches!(r, Err(Error::SingularPotential(_))));
    }

    #[test]
    fn pdm_rejects_grids_outside_the_domain() {
        let r = Reference::Kratzer(KratzerParams::new(1.0, 1.0, 0).unwrap());
        let tp = TargetProblem::new(r, MassProfile::lorentzian(1.0, 1.0).unwrap()).unwrap();
        let grid = Grid::new(-1.0, 5.0, 101).unwrap();
        assert!(matches!(discretize_pdm(&tp, &grid), Err(Error::OutOfDomain(_))));
    }
}

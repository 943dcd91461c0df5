use rayon::prelude::*;
use serde::Serialize;

use super::{lowest_eigenvalues, residual_norm, OracleProblem};
use crate::error::{Error, Result};
use crate::{fmt_sig, Interval};

/// Observed orders outside this band are flagged.
pub const ORDER_BAND: (f64, f64) = (1.7, 2.3);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub n: usize,
    pub ell: u32,
    pub e_analytic: Option<f64>,
    /// Eigenvalue on the finest grid.
    pub e_numeric: f64,
    /// Richardson extrapolation from the two finest grids.
    pub e_extrapolated: f64,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub rel_err_extrapolated: Option<f64>,
    /// `‖Hψ − Eψ‖/‖ψ‖` of the analytic state on the finest grid.
    pub residual: Option<f64>,
    pub order: Option<f64>,
    pub order_flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub label: String,
    pub window: Interval,
    /// Ascending.
    pub resolutions: Vec<usize>,
    /// `eigenvalues[r][n]` for resolution `r`.
    pub eigenvalues: Vec<Vec<f64>>,
    pub records: Vec<VerificationRecord>,
}

pub const CSV_HEADER: &str = "n,ell,E_analytic,E_numeric,abs_err,rel_err,residual,order";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), fmt_sig)
}

impl VerificationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                r.ell,
                opt(r.e_analytic),
                fmt_sig(r.e_numeric),
                opt(r.abs_err),
                opt(r.rel_err),
                opt(r.residual),
                opt(r.order)
            ));
        }
        out
    }

    pub fn max_rel_err(&self) -> Option<f64> {
        self.records.iter().map(|r| r.rel_err).try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
    }

    pub fn max_rel_err_extrapolated(&self) -> Option<f64> {
        self.records.iter().map(|r| r.rel_err_extrapolated).try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
    }

    pub fn any_order_flagged(&self) -> bool {
        self.records.iter().any(|r| r.order_flagged)
    }
}

/// Second-order Richardson extrapolation using the actual spacing ratio.
pub fn richardson(coarse: f64, fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    let r2 = (h_coarse / h_fine).powi(2);
    fine + (fine - coarse) / (r2 - 1.0)
}

fn relative(err: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        err
    } else {
        err / reference.abs()
    }
}

/// Lowest `states` eigenvalues on each resolution (in parallel), errors
/// against the analytic energies, observed order and Richardson estimate.
pub fn convergence_study<P: OracleProblem + ?Sized>(
    problem: &P,
    resolutions: &[usize],
    states: usize,
) -> Result<VerificationReport> {
    let mut res = resolutions.to_vec();
    res.sort_unstable();
    res.dedup();
    if res.len() < 3 {
        return Err(Error::InsufficientResolutions { needed: 3, got: res.len() });
    }
    let grids = res.iter().map(|&n| problem.grid(n)).collect::<Result<Vec<_>>>()?;
    let eigenvalues = grids
        .par_iter()
        .map(|g| lowest_eigenvalues(&problem.assemble(g)?, states))
        .collect::<Result<Vec<_>>>()?;
    let finest = grids[grids.len() - 1];
    let op = problem.assemble(&finest)?;
    let nodes = finest.nodes();
    let hs: Vec<f64> = grids.iter().map(|g| g.h()).collect();
    let k = hs.len();

    let mut records = Vec::with_capacity(states);
    for n in 0..states {
        let e: Vec<f64> = eigenvalues.iter().map(|v| v[n]).collect();
        let (e1, e2, e3) = (e[k - 3], e[k - 2], e[k - 1]);
        let extrapolated = richardson(e2, e3, hs[k - 2], hs[k - 1]);
        let analytic = problem.analytic_energy(n);
        let exact = analytic.filter(|_| problem.energy_is_exact());
        let order = match exact {
            Some(ex) => {
                let (ec, ef) = ((e2 - ex).abs(), (e3 - ex).abs());
                let floor = 64.0 * f64::EPSILON * ex.abs().max(1.0);
                (ec > floor && ef > floor).then(|| (ec / ef).ln() / (hs[k - 2] / hs[k - 1]).ln())
            }
            None => {
                // three-grid estimate, assumes a constant refinement ratio
                let (d1, d2) = ((e1 - e2).abs(), (e2 - e3).abs());
                (d1 > 0.0 && d2 > 0.0).then(|| (d1 / d2).ln() / (hs[k - 2] / hs[k - 1]).ln())
            }
        };
        let residual = match (exact, problem.analytic_state(n)) {
            (Some(ex), Some(state)) => {
                let psi = state.wavefunction.sample(nodes.iter().copied());
                residual_norm(&op, &psi, ex).ok()
            }
            _ => None,
        };
        let abs_err = analytic.map(|a| (e3 - a).abs());
        records.push(VerificationRecord {
            n,
            ell: problem.ell(),
            e_analytic: analytic,
            e_numeric: e3,
            e_extrapolated: extrapolated,
            abs_err,
            rel_err: analytic.map(|a| relative((e3 - a).abs(), a)),
            rel_err_extrapolated: analytic.map(|a| relative((extrapolated - a).abs(), a)),
            residual,
            order,
            order_flagged: order.map_or(false, |p| !(ORDER_BAND.0..=ORDER_BAND.1).contains(&p)),
        });
    }
    Ok(VerificationReport {
        label: problem.label(),
        window: problem.window(),
        resolutions: res,
        eigenvalues,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ConstantMassProblem;

    #[test]
    fn richardson_removes_h_squared() {
        // E(h) = 1 + 3h²
        let e = |h: f64| 1.0 + 3.0 * h * h;
        assert!((richardson(e(0.2), e(0.1), 0.2, 0.1) - 1.0).abs() < 1e-14);
        assert!((richardson(e(0.3), e(0.1), 0.3, 0.1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn needs_three_resolutions() {
        let p = ConstantMassProblem::new("box", |_| 0.0, Interval::new(0.0, 1.0), 1.0).unwrap();
        let r = convergence_study(&p, &[100, 200, 200], 1);
        assert!(matches!(r, Err(Error::InsufficientResolutions { needed: 3, got: 2 })));
    }

    #[test]
    fn oscillator_order_without_reference() {
        let p = ConstantMassProblem::new("sho", |x| 0.5 * x * x, Interval::new(-10.0, 10.0), 1.0).unwrap();
        let rep = convergence_study(&p, &[501, 1001, 2001], 3).unwrap();
        for r in &rep.records {
            let p = r.order.unwrap();
            assert!((p - 2.0).abs() < 0.1, "order {p}");
            assert!((r.e_extrapolated - (r.n as f64 + 0.5)).abs() < 1e-7);
        }
        assert!(rep.to_csv().starts_with(CSV_HEADER));
    }
}

//! Symmetric tridiagonal eigensolver: Sturm-count bisection for the
//! eigenvalues and inverse iteration (pivoted tridiagonal LU) for vectors.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 300;
const INVERSE_ITERATIONS: usize = 4;

/// Number of eigenvalues strictly below `lambda`.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let e = off[i - 1];
        q = diag[i] - lambda - e * e / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

fn pivmin(off: &[f64]) -> f64 {
    let emax = off.iter().fold(1.0f64, |m, e| m.max(e * e));
    f64::MIN_POSITIVE * emax
}

/// The `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if k == 0 || k > n {
        return Err(Error::EigenCount { k, dim: n });
    }
    let (glo, ghi) = gershgorin(diag, off);
    let spread = (ghi - glo).max(ghi.abs()).max(glo.abs()).max(f64::MIN_POSITIVE);
    let (glo, ghi) = (glo - 1e-12 * spread, ghi + 1e-12 * spread);
    let piv = pivmin(off);
    let mut values = Vec::with_capacity(k);
    let mut floor = glo;
    for j in 0..k {
        let (mut lo, mut hi) = (floor, ghi);
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + piv || mid <= lo || mid >= hi {
                converged = true;
                break;
            }
            if sturm_count(diag, off, mid, piv) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::EigenConvergence(format!(
                "bisection for eigenvalue {j} stalled in [{lo}, {hi}]"
            )));
        }
        let value = 0.5 * (lo + hi);
        values.push(value);
        floor = lo;
    }
    Ok(values)
}

/// Pivoted LU of a general tridiagonal matrix (sub `dl`, diagonal `d`,
/// super `du`), solved in place against `rhs`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut dl = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for v in d.iter_mut() {
            if *v == 0.0 {
                *v = tiny;
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Eigenvector for an (accurate) eigenvalue by inverse iteration, unit
/// Euclidean norm.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let (glo, ghi) = gershgorin(diag, off);
    let norm = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * norm;
    let lu = TridiagLu::factor(diag, off, lambda, tiny);
    // deterministic, non-degenerate start vector
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i * 7919 % 101) as f64 / 101.0)).collect();
    for _ in 0..INVERSE_ITERATIONS {
        lu.solve(&mut v);
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !s.is_finite() || s == 0.0 {
            return Err(Error::EigenConvergence(format!("inverse iteration broke down at λ = {lambda}")));
        }
        v.iter_mut().for_each(|x| *x /= s);
    }
    Ok(v)
}

//! Diagnostics extracted from states and runs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field};
use crate::models::double_well;
use crate::stepper::RunReport;

/// Distance from `center` to the first sign change of `u` along the +x ray,
/// interpolated linearly between the two bracketing nodes.
pub fn zero_level_radius(u: &Field, center: (f64, f64)) -> Result<f64> {
    let spec = *u.spec();
    let n = spec.n_x();
    let h = spec.h_x();
    let (i, j0) = spec.nearest_node(center.0, center.1);
    let (x0, _) = spec.coords(i, j0);
    let steps = match spec.bc() {
        BoundaryCondition::Periodic => n / 2,
        BoundaryCondition::Neumann => n - 1 - j0,
    };
    for s in 0..steps {
        let (ja, jb) = ((j0 + s) % n, (j0 + s + 1) % n);
        let (va, vb) = (u.at(i, ja), u.at(i, jb));
        if (va < 0.0) != (vb < 0.0) {
            let xa = x0 + s as f64 * h;
            let cross = xa + h * va / (va - vb);
            return Ok((cross - center.0).abs());
        }
    }
    Err(Error::FrontVanished)
}

/// Front radii over time with finite-difference speeds.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FrontSeries {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    pub speeds: Vec<f64>,
}

impl FrontSeries {
    /// Speeds use central differences inside and one-sided ones at the ends.
    pub fn from_samples(times: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if times.len() != radii.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} times but {} radii",
                times.len(),
                radii.len()
            )));
        }
        let n = times.len();
        let speeds = (0..n)
            .map(|k| match (k, n) {
                (_, 1) => 0.0,
                (0, _) => (radii[1] - radii[0]) / (times[1] - times[0]),
                (k, n) if k == n - 1 => (radii[k] - radii[k - 1]) / (times[k] - times[k - 1]),
                (k, _) => (radii[k + 1] - radii[k - 1]) / (times[k + 1] - times[k - 1]),
            })
            .collect();
        Ok(Self {
            times,
            radii,
            speeds,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// First pair of consecutive samples between which `values` changes sign.
pub fn first_sign_change(times: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    times
        .windows(2)
        .zip(values.windows(2))
        .find(|(_, v)| (v[0] < 0.0) != (v[1] < 0.0))
        .map(|(t, _)| (t[0], t[1]))
}

/// Bracket `(t_lo, t_hi)` of the first sign change of the first component at
/// the grid node nearest `probe`.
///
/// Uses the per-step probe series when the run recorded one for that node,
/// otherwise the snapshots.
pub fn sign_crossing_time(report: &RunReport, probe: (f64, f64)) -> Result<(f64, f64)> {
    let spec = *report.final_state.spec();
    let node = spec.nearest_node(probe.0, probe.1);
    let no_crossing = || Error::NoSignCrossing {
        x: probe.0,
        y: probe.1,
    };
    if let Some(series) = report.probes.iter().find(|p| p.node == node) {
        return first_sign_change(&series.times, &series.values[0]).ok_or_else(no_crossing);
    }
    let times: Vec<f64> = report.snapshots.iter().map(|s| s.time).collect();
    let values: Vec<f64> = report
        .snapshots
        .iter()
        .map(|s| s.state.component(0).at(node.0, node.1))
        .collect();
    first_sign_change(&times, &values).ok_or_else(no_crossing)
}

/// `h² Σ [a/2 |∇⁺U|² + b W(U)]` with forward differences; across the boundary
/// they wrap on periodic grids and are dropped on Neumann grids.
pub fn discrete_energy(u: &Field, a: f64, b: f64) -> f64 {
    let spec = *u.spec();
    let n = spec.n_x();
    let h = spec.h_x();
    let periodic = spec.bc() == BoundaryCondition::Periodic;
    let v = u.as_slice();
    let mut grad2 = 0.0;
    let mut pot = 0.0;
    for i in 0..n {
        for j in 0..n {
            let c = v[i * n + j];
            pot += double_well::w(c);
            if j + 1 < n || periodic {
                let d = (v[i * n + (j + 1) % n] - c) / h;
                grad2 += d * d;
            }
            if i + 1 < n || periodic {
                let d = (v[((i + 1) % n) * n + j] - c) / h;
                grad2 += d * d;
            }
        }
    }
    h * h * (0.5 * a * grad2 + b * pot)
}

use serde::{Deserialize, Serialize};

use super::{check_shape, check_step, finish, positive, EquationModel};
use crate::error::Result;
use crate::grid::{Field, GridSpec, SystemField};
use crate::spectral::{LaplacianOperator, PrecondSymbol};

/// Two-species Schnakenberg kinetics with Neumann boundaries:
///
/// ```text
/// u_t = D₁Δu + κ(a − u + u²v)
/// v_t = D₂Δv + κ(b − u²v)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchnakenbergParams {
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub d1: f64,
    pub d2: f64,
}

impl SchnakenbergParams {
    pub fn validate(&self) -> Result<()> {
        positive("kappa", self.kappa)?;
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("d1", self.d1)?;
        positive("d2", self.d2)
    }

    /// Homogeneous steady state `(a + b, b / (a + b)²)`.
    pub fn equilibrium(&self) -> (f64, f64) {
        let s = self.a + self.b;
        (s, self.b / (s * s))
    }
}

#[derive(Debug, Clone)]
pub struct Schnakenberg {
    params: SchnakenbergParams,
    lap: LaplacianOperator,
}

impl Schnakenberg {
    pub fn new(params: SchnakenbergParams, spec: GridSpec) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            lap: LaplacianOperator::new(spec),
        })
    }

    pub fn params(&self) -> &SchnakenbergParams {
        &self.params
    }
}

impl EquationModel for Schnakenberg {
    fn name(&self) -> &'static str {
        "schnakenberg"
    }

    fn laplacian(&self) -> &LaplacianOperator {
        &self.lap
    }

    fn n_components(&self) -> usize {
        2
    }

    fn residual(&self, uv: &SystemField, prev: &SystemField, h_t: f64) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 2, &[uv, prev])?;
        let SchnakenbergParams { kappa, a, b, d1, d2 } = self.params;
        let (u, v) = (uv.component(0), uv.component(1));
        let (lu, lv) = (self.lap.apply_unchecked(u), self.lap.apply_unchecked(v));
        let (us, vs) = (u.as_slice(), v.as_slice());
        let (pu, pv) = (prev.component(0).as_slice(), prev.component(1).as_slice());
        let mut fu = Field::zeros(*self.spec());
        let mut fv = Field::zeros(*self.spec());
        {
            let (ou, ov) = (fu.as_mut_slice(), fv.as_mut_slice());
            let (lus, lvs) = (lu.as_slice(), lv.as_slice());
            for k in 0..ou.len() {
                let u2v = us[k] * us[k] * vs[k];
                ou[k] = us[k] - pu[k] - h_t * (d1 * lus[k] + kappa * (a - us[k] + u2v));
                ov[k] = vs[k] - pv[k] - h_t * (d2 * lvs[k] + kappa * (b - u2v));
            }
        }
        finish(self.name(), vec![fu, fv])
    }

    fn jacobian_transpose_apply(
        &self,
        uv: &SystemField,
        pq: &SystemField,
        h_t: f64,
    ) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 2, &[uv, pq])?;
        let SchnakenbergParams { kappa, d1, d2, .. } = self.params;
        let (us, vs) = (uv.component(0).as_slice(), uv.component(1).as_slice());
        let (p, q) = (pq.component(0), pq.component(1));
        let (lp, lq) = (self.lap.apply_unchecked(p), self.lap.apply_unchecked(q));
        let (ps, qs) = (p.as_slice(), q.as_slice());
        let (lps, lqs) = (lp.as_slice(), lq.as_slice());
        let mut ou = Field::zeros(*self.spec());
        let mut ov = Field::zeros(*self.spec());
        {
            let (a, b) = (ou.as_mut_slice(), ov.as_mut_slice());
            for k in 0..a.len() {
                let diff = ps[k] - qs[k];
                a[k] = ps[k] - h_t * (d1 * lps[k] + kappa * (-ps[k] + 2.0 * us[k] * vs[k] * diff));
                b[k] = qs[k] - h_t * (d2 * lqs[k] + kappa * us[k] * us[k] * diff);
            }
        }
        finish(self.name(), vec![ou, ov])
    }

    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        check_step(h_t)?;
        let SchnakenbergParams { d1, d2, .. } = self.params;
        Ok(vec![
            self.lap.symbol(|l| (1.0 - h_t * d1 * l).powi(2))?,
            self.lap.symbol(|l| (1.0 - h_t * d2 * l).powi(2))?,
        ])
    }
}

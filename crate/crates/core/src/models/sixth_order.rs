use serde::{Deserialize, Serialize};

use super::{check_shape, check_step, double_well, finish, positive, EquationModel};
use crate::error::Result;
use crate::grid::{Field, GridSpec, SystemField};
use crate::spectral::{LaplacianOperator, PrecondSymbol};

/// Functionalized Cahn-Hilliard flow
/// `∂u/∂t = Δ(ε²Δ − W″(u) + ε²)(ε²Δu − W′(u))` on a periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SixthOrderParams {
    pub epsilon: f64,
}

impl SixthOrderParams {
    pub fn validate(&self) -> Result<()> {
        positive("epsilon", self.epsilon)
    }
}

#[derive(Debug, Clone)]
pub struct SixthOrder {
    params: SixthOrderParams,
    lap: LaplacianOperator,
}

impl SixthOrder {
    pub fn new(params: SixthOrderParams, spec: GridSpec) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            lap: LaplacianOperator::new(spec),
        })
    }

    pub fn params(&self) -> &SixthOrderParams {
        &self.params
    }

    // ε² Lap x − W″(U) ⊙ x + ε² x
    fn modified_operator(&self, u: &[f64], x: &Field) -> Field {
        let e2 = self.params.epsilon.powi(2);
        let mut out = self.lap.apply_unchecked(x);
        let o = out.as_mut_slice();
        let xs = x.as_slice();
        for k in 0..o.len() {
            o[k] = e2 * o[k] - double_well::d2w(u[k]) * xs[k] + e2 * xs[k];
        }
        out
    }

    // chemical potential ε² Lap U − W′(U)
    fn potential(&self, u: &Field) -> Field {
        let e2 = self.params.epsilon.powi(2);
        self.lap
            .apply_unchecked(u)
            .zip_map(u, |l, v| e2 * l - double_well::dw(v))
    }
}

impl EquationModel for SixthOrder {
    fn name(&self) -> &'static str {
        "sixth-order"
    }

    fn laplacian(&self) -> &LaplacianOperator {
        &self.lap
    }

    fn n_components(&self) -> usize {
        1
    }

    fn residual(&self, u: &SystemField, u_prev: &SystemField, h_t: f64) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 1, &[u, u_prev])?;
        let u = u.component(0);
        let mu = self.potential(u);
        let m = self.modified_operator(u.as_slice(), &mu);
        let lm = self.lap.apply_unchecked(&m);
        let mut f = Field::zeros(*self.spec());
        let out = f.as_mut_slice();
        let (us, ps, ls) = (u.as_slice(), u_prev.component(0).as_slice(), lm.as_slice());
        for k in 0..out.len() {
            out[k] = us[k] - h_t * ls[k] - ps[k];
        }
        finish(self.name(), vec![f])
    }

    /// `P − h (ε²Lap − W″(U)) M(U) Lap P + h μ(U) ⊙ W‴(U) ⊙ Lap P`
    /// with `M(U) = ε²Lap − diag(W″(U)) + ε²I` and `μ = ε²Lap U − W′(U)`.
    fn jacobian_transpose_apply(
        &self,
        u: &SystemField,
        p: &SystemField,
        h_t: f64,
    ) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 1, &[u, p])?;
        let e2 = self.params.epsilon.powi(2);
        let u = u.component(0);
        let us = u.as_slice();
        let p = p.component(0);
        let q = self.lap.apply_unchecked(p);
        let w = self.modified_operator(us, &q);
        let lw = self.lap.apply_unchecked(&w);
        let mu = self.potential(u);
        let mut out = Field::zeros(*self.spec());
        let o = out.as_mut_slice();
        let (ps, qs, ws, lws, mus) = (p.as_slice(), q.as_slice(), w.as_slice(), lw.as_slice(), mu.as_slice());
        for k in 0..o.len() {
            let sym_part = e2 * lws[k] - double_well::d2w(us[k]) * ws[k];
            o[k] = ps[k] - h_t * sym_part + h_t * mus[k] * double_well::d3w(us[k]) * qs[k];
        }
        finish(self.name(), vec![out])
    }

    /// `G = (I − h ε² Lap (ε²Lap − (2 − ε²) I) Lap)²`, i.e. `W″(U)` frozen at 2.
    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        check_step(h_t)?;
        let e2 = self.params.epsilon.powi(2);
        Ok(vec![self
            .lap
            .symbol(|l| (1.0 - h_t * e2 * l * l * (e2 * l - (2.0 - e2))).powi(2))?])
    }
}

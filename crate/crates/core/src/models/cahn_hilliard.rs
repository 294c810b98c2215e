use serde::{Deserialize, Serialize};

use super::{check_shape, check_step, double_well, finish, positive, EquationModel};
use crate::error::Result;
use crate::grid::{Field, GridSpec, SystemField};
use crate::spectral::{LaplacianOperator, PrecondSymbol};

/// `∂u/∂t = −aΔ²u + bΔW′(u)` on a periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CahnHilliardParams {
    pub a: f64,
    pub b: f64,
}

impl CahnHilliardParams {
    pub fn validate(&self) -> Result<()> {
        positive("a", self.a)?;
        positive("b", self.b)
    }
}

#[derive(Debug, Clone)]
pub struct CahnHilliard {
    params: CahnHilliardParams,
    lap: LaplacianOperator,
}

impl CahnHilliard {
    pub fn new(params: CahnHilliardParams, spec: GridSpec) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            lap: LaplacianOperator::new(spec),
        })
    }

    pub fn params(&self) -> &CahnHilliardParams {
        &self.params
    }
}

impl EquationModel for CahnHilliard {
    fn name(&self) -> &'static str {
        "cahn-hilliard"
    }

    fn laplacian(&self) -> &LaplacianOperator {
        &self.lap
    }

    fn n_components(&self) -> usize {
        1
    }

    /// `F(U) = (I + a h Lap²) U − U_prev − h Lap(b W′(U))`
    fn residual(&self, u: &SystemField, u_prev: &SystemField, h_t: f64) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 1, &[u, u_prev])?;
        let (a, b) = (self.params.a, self.params.b);
        let u = u.component(0);
        // Lap(a h Lap U − h b W′(U)) in one pass over the inner term
        let lap_u = self.lap.apply_unchecked(u);
        let inner = lap_u.zip_map(u, |l, v| a * h_t * l - h_t * b * double_well::dw(v));
        let outer = self.lap.apply_unchecked(&inner);
        let mut f = Field::zeros(*self.spec());
        let out = f.as_mut_slice();
        let (us, ps, os) = (u.as_slice(), u_prev.component(0).as_slice(), outer.as_slice());
        for k in 0..out.len() {
            out[k] = us[k] + os[k] - ps[k];
        }
        finish(self.name(), vec![f])
    }

    /// `P + a h Lap² P − h b W″(U) ⊙ Lap P`
    fn jacobian_transpose_apply(
        &self,
        u: &SystemField,
        p: &SystemField,
        h_t: f64,
    ) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 1, &[u, p])?;
        let (a, b) = (self.params.a, self.params.b);
        let p = p.component(0);
        let lap_p = self.lap.apply_unchecked(p);
        let lap2_p = self.lap.apply_unchecked(&lap_p);
        let mut out = Field::zeros(*self.spec());
        let o = out.as_mut_slice();
        let us = u.component(0).as_slice();
        let (ps, l1, l2) = (p.as_slice(), lap_p.as_slice(), lap2_p.as_slice());
        for k in 0..o.len() {
            o[k] = ps[k] + a * h_t * l2[k] - h_t * b * double_well::d2w(us[k]) * l1[k];
        }
        finish(self.name(), vec![out])
    }

    /// `G = (I + a h Lap²)²`
    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        check_step(h_t)?;
        let a = self.params.a;
        Ok(vec![self.lap.symbol(|l| (1.0 + a * h_t * l * l).powi(2))?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryCondition;

    fn model() -> CahnHilliard {
        let g = GridSpec::new(2.0 * std::f64::consts::PI, 8, BoundaryCondition::Periodic).unwrap();
        CahnHilliard::new(CahnHilliardParams { a: 0.01, b: 1.0 }, g).unwrap()
    }

    #[test]
    fn mass_identity() {
        let m = model();
        let spec = *m.spec();
        let u = SystemField::single(Field::sample(spec, |x, y| (x - 2.0 * y).sin() + 0.3).unwrap());
        let p = SystemField::single(Field::sample(spec, |x, y| (x * y).cos()).unwrap());
        let f = m.residual(&u, &p, 0.05).unwrap();
        let want = u.component(0).total_mass() - p.component(0).total_mass();
        assert!((f.component(0).total_mass() - want).abs() < 1e-9);
    }

    #[test]
    fn symbol_is_at_least_one() {
        let s = model().precond_symbols(0.1).unwrap();
        assert!(s[0].values().iter().all(|g| *g >= 1.0));
    }
}

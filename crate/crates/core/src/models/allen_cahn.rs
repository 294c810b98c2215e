use serde::{Deserialize, Serialize};

use super::{check_shape, check_step, double_well, finish, positive, EquationModel};
use crate::error::Result;
use crate::grid::{Field, GridSpec, SystemField};
use crate::spectral::{LaplacianOperator, PrecondSymbol};

/// `∂u/∂t = aΔu − bW′(u)`. With `a = ε`, `b = 1/ε` the zero level set moves
/// by mean curvature with speed `ε κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllenCahnParams {
    pub a: f64,
    pub b: f64,
}

impl AllenCahnParams {
    pub fn validate(&self) -> Result<()> {
        positive("a", self.a)?;
        // b = 0 is the pure heat equation, used by the linear convergence checks
        if !(self.b.is_finite() && self.b >= 0.0) {
            return Err(crate::Error::param("b", "must be non-negative and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AllenCahn {
    params: AllenCahnParams,
    lap: LaplacianOperator,
}

impl AllenCahn {
    pub fn new(params: AllenCahnParams, spec: GridSpec) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            lap: LaplacianOperator::new(spec),
        })
    }

    pub fn params(&self) -> &AllenCahnParams {
        &self.params
    }
}

impl EquationModel for AllenCahn {
    fn name(&self) -> &'static str {
        "allen-cahn"
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
        let (a, b) = (self.params.a, self.params.b);
        let u = u.component(0);
        let lap = self.lap.apply_unchecked(u);
        let mut f = Field::zeros(*self.spec());
        let out = f.as_mut_slice();
        let (us, ps, ls) = (u.as_slice(), u_prev.component(0).as_slice(), lap.as_slice());
        for k in 0..out.len() {
            out[k] = us[k] - ps[k] - h_t * (a * ls[k] - b * double_well::dw(us[k]));
        }
        finish(self.name(), vec![f])
    }

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
        let lap = self.lap.apply_unchecked(p);
        let mut out = Field::zeros(*self.spec());
        let o = out.as_mut_slice();
        let (us, ps, ls) = (u.component(0).as_slice(), p.as_slice(), lap.as_slice());
        for k in 0..o.len() {
            o[k] = ps[k] - h_t * (a * ls[k] - b * double_well::d2w(us[k]) * ps[k]);
        }
        finish(self.name(), vec![out])
    }

    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        check_step(h_t)?;
        let a = self.params.a;
        Ok(vec![self.lap.symbol(|l| (1.0 - a * h_t * l).powi(2))?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryCondition;

    fn model(b: f64) -> AllenCahn {
        let g = GridSpec::new(1.0, 8, BoundaryCondition::Periodic).unwrap();
        AllenCahn::new(AllenCahnParams { a: 0.01, b }, g).unwrap()
    }

    #[test]
    fn ones_are_an_equilibrium() {
        let m = model(100.0);
        let u = SystemField::single(Field::constant(*m.spec(), 1.0));
        let f = m.residual(&u, &u, 1e-3).unwrap();
        assert_eq!(f.norm_sum(), 0.0);
    }

    #[test]
    fn symbol_limits() {
        let m = model(1.0);
        let s = m.precond_symbols(1e-300).unwrap();
        assert!(s[0].values().iter().all(|g| (g - 1.0).abs() < 1e-12));
        // zero mode
        let s = m.precond_symbols(0.1).unwrap();
        let zero = m.laplacian().eigenvalues().iter().position(|l| *l == 0.0).unwrap();
        assert_eq!(s[0].values()[zero], 1.0);
    }

    #[test]
    fn rejects_bad_params() {
        let g = GridSpec::new(1.0, 8, BoundaryCondition::Periodic).unwrap();
        assert!(AllenCahn::new(AllenCahnParams { a: 0.0, b: 1.0 }, g).is_err());
        assert!(AllenCahn::new(AllenCahnParams { a: 1.0, b: -1.0 }, g).is_err());
        assert!(model(1.0).precond_symbols(0.0).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let m = model(1.0);
        let u = SystemField::single(Field::constant(*m.spec(), 1e200));
        let p = SystemField::single(Field::constant(*m.spec(), 0.0));
        assert!(matches!(
            m.residual(&u, &p, 1e-3),
            Err(crate::Error::ModelBlowUp { .. })
        ));
    }
}

//! Reaction-diffusion models. Each one supplies the implicit one-step residual
//! `F(U)`, the action `∇F(U)ᵀ P` of its Jacobian transpose, and the symbol of
//! a preconditioner `G` that can be inverted with a fast transform.

mod allen_cahn;
mod cahn_hilliard;
mod presets;
mod schnakenberg;
mod sixth_order;
mod wolf_deer;

use serde::{Deserialize, Serialize};

pub use allen_cahn::{AllenCahn, AllenCahnParams};
pub use cahn_hilliard::{CahnHilliard, CahnHilliardParams};
pub use presets::{preset, preset_names, reference_initial_condition, InitialCondition, Preset};
pub use schnakenberg::{Schnakenberg, SchnakenbergParams};
pub use sixth_order::{SixthOrder, SixthOrderParams};
pub use wolf_deer::{WolfDeer, WolfDeerParams};

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec, SystemField};
use crate::spectral::{LaplacianOperator, PrecondSymbol};

/// Behaviour the inner solver needs from an equation.
pub trait EquationModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn laplacian(&self) -> &LaplacianOperator;

    fn spec(&self) -> &GridSpec {
        self.laplacian().spec()
    }

    fn n_components(&self) -> usize;

    /// `F(U)` of the implicit one-step scheme from `u_prev` with step `h_t`.
    fn residual(&self, u: &SystemField, u_prev: &SystemField, h_t: f64) -> Result<SystemField>;

    /// `∇F(U)ᵀ P`. `F` depends on `u_prev` only through a constant shift, so
    /// `u_prev` is not needed.
    fn jacobian_transpose_apply(
        &self,
        u: &SystemField,
        p: &SystemField,
        h_t: f64,
    ) -> Result<SystemField>;

    /// One preconditioner symbol per component.
    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>>;

    /// `G⁻¹ r`, block diagonal over components.
    fn precond_solve(&self, symbols: &[PrecondSymbol], r: &SystemField) -> Result<SystemField> {
        let comps = r
            .components()
            .iter()
            .zip(symbols)
            .map(|(c, s)| self.laplacian().precond_solve(s, c))
            .collect::<Result<Vec<_>>>()?;
        SystemField::new(comps)
    }
}

/// Parameters of every supported model, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelParams {
    AllenCahn(AllenCahnParams),
    CahnHilliard(CahnHilliardParams),
    SixthOrder(SixthOrderParams),
    Schnakenberg(SchnakenbergParams),
    WolfDeer(WolfDeerParams),
}

impl ModelParams {
    /// Boundary condition the model is posed with.
    pub fn bc(&self) -> BoundaryCondition {
        match self {
            ModelParams::AllenCahn(_)
            | ModelParams::CahnHilliard(_)
            | ModelParams::SixthOrder(_) => BoundaryCondition::Periodic,
            ModelParams::Schnakenberg(_) | ModelParams::WolfDeer(_) => BoundaryCondition::Neumann,
        }
    }

    pub fn n_components(&self) -> usize {
        match self {
            ModelParams::Schnakenberg(_) | ModelParams::WolfDeer(_) => 2,
            _ => 1,
        }
    }

    /// `(a, b)` of the energy `∫ a/2 |∇u|² + b W(u)` dissipated by the
    /// gradient-flow models, if any.
    pub fn energy_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            ModelParams::AllenCahn(p) => Some((p.a, p.b)),
            ModelParams::CahnHilliard(p) => Some((p.a, p.b)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::AllenCahn(p) => p.validate(),
            ModelParams::CahnHilliard(p) => p.validate(),
            ModelParams::SixthOrder(p) => p.validate(),
            ModelParams::Schnakenberg(p) => p.validate(),
            ModelParams::WolfDeer(p) => p.validate(),
        }
    }
}

/// Any of the concrete models behind one type.
#[derive(Debug, Clone)]
pub enum Model {
    AllenCahn(AllenCahn),
    CahnHilliard(CahnHilliard),
    SixthOrder(SixthOrder),
    Schnakenberg(Schnakenberg),
    WolfDeer(WolfDeer),
}

impl Model {
    pub fn new(params: &ModelParams, spec: GridSpec) -> Result<Self> {
        if spec.bc() != params.bc() {
            return Err(Error::InvalidGrid(format!(
                "this model needs a {} grid, got {}",
                params.bc(),
                spec.bc()
            )));
        }
        Ok(match params {
            ModelParams::AllenCahn(p) => Model::AllenCahn(AllenCahn::new(*p, spec)?),
            ModelParams::CahnHilliard(p) => Model::CahnHilliard(CahnHilliard::new(*p, spec)?),
            ModelParams::SixthOrder(p) => Model::SixthOrder(SixthOrder::new(*p, spec)?),
            ModelParams::Schnakenberg(p) => Model::Schnakenberg(Schnakenberg::new(*p, spec)?),
            ModelParams::WolfDeer(p) => Model::WolfDeer(WolfDeer::new(*p, spec)?),
        })
    }

    fn inner(&self) -> &dyn EquationModel {
        match self {
            Model::AllenCahn(m) => m,
            Model::CahnHilliard(m) => m,
            Model::SixthOrder(m) => m,
            Model::Schnakenberg(m) => m,
            Model::WolfDeer(m) => m,
        }
    }
}

impl EquationModel for Model {
    fn name(&self) -> &'static str {
        self.inner().name()
    }

    fn laplacian(&self) -> &LaplacianOperator {
        self.inner().laplacian()
    }

    fn n_components(&self) -> usize {
        self.inner().n_components()
    }

    fn residual(&self, u: &SystemField, u_prev: &SystemField, h_t: f64) -> Result<SystemField> {
        self.inner().residual(u, u_prev, h_t)
    }

    fn jacobian_transpose_apply(
        &self,
        u: &SystemField,
        p: &SystemField,
        h_t: f64,
    ) -> Result<SystemField> {
        self.inner().jacobian_transpose_apply(u, p, h_t)
    }

    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        self.inner().precond_symbols(h_t)
    }
}

pub(crate) fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be positive and finite, got {v}")))
    }
}

pub(crate) fn check_step(h_t: f64) -> Result<()> {
    positive("h_t", h_t)
}

/// Shape check shared by all models: `n` components on the model's grid.
pub(crate) fn check_shape(spec: &GridSpec, n: usize, fields: &[&SystemField]) -> Result<()> {
    for f in fields {
        if f.n_components() != n {
            return Err(Error::ShapeMismatch(format!(
                "model has {n} components, field has {}",
                f.n_components()
            )));
        }
        spec.ensure_same(f.spec())?;
    }
    Ok(())
}

/// Wraps model output, turning non-finite entries into a blow-up error.
pub(crate) fn finish(model: &'static str, comps: Vec<Field>) -> Result<SystemField> {
    if let Some(component) = comps.iter().position(|c| !c.is_finite()) {
        return Err(Error::ModelBlowUp { model, component });
    }
    SystemField::new(comps)
}

/// Double-well potential `W(u) = (u² - 1)² / 4` and its derivatives.
pub mod double_well {
    #[inline]
    pub fn w(u: f64) -> f64 {
        let s = u * u - 1.0;
        0.25 * s * s
    }

    #[inline]
    pub fn dw(u: f64) -> f64 {
        u * u * u - u
    }

    #[inline]
    pub fn d2w(u: f64) -> f64 {
        3.0 * u * u - 1.0
    }

    #[inline]
    pub fn d3w(u: f64) -> f64 {
        6.0 * u
    }
}

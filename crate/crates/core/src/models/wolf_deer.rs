use serde::{Deserialize, Serialize};

use super::{check_shape, check_step, finish, positive, EquationModel};
use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec, SystemField};
use crate::spectral::{
    gradient, gradient_transpose, midpoint_average, midpoint_average_transpose, EdgeAxis,
    LaplacianOperator, PrecondSymbol, QuadraticKernel,
};

/// Predator-prey system with nonlocal attraction and repulsion.
///
/// ```text
/// ∂ρ₁/∂t = DΔρ₁ + ∇·(ρ₁∇Φ₁) + Aρ₁(1 − ρ₁) − Bρ₁ρ₂/(1 + ρ₁)
/// ∂ρ₂/∂t = DΔρ₂ + ∇·(ρ₂∇Φ₂) + Bρ₁ρ₂/(1 + ρ₁) − Cρ₂
/// Φ₁ = w K(ρ₁ − ρ₂),  Φ₂ = w K(ρ₁ + ρ₂)
/// ```
///
/// `K` is convolution with `|x|²/2` and `w` is `kernel_weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WolfDeerParams {
    pub d: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default = "one")]
    pub kernel_weight: f64,
}

fn one() -> f64 {
    1.0
}

impl WolfDeerParams {
    pub fn validate(&self) -> Result<()> {
        positive("d", self.d)?;
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("c", self.c)?;
        if !(self.kernel_weight.is_finite() && self.kernel_weight >= 0.0) {
            return Err(Error::param("kernel_weight", "must be non-negative and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct WolfDeer {
    params: WolfDeerParams,
    lap: LaplacianOperator,
    kernel: QuadraticKernel,
}

const AXES: [EdgeAxis; 2] = [EdgeAxis::X, EdgeAxis::Y];

impl WolfDeer {
    pub fn new(params: WolfDeerParams, spec: GridSpec) -> Result<Self> {
        params.validate()?;
        if spec.bc() != BoundaryCondition::Neumann {
            return Err(Error::InvalidGrid("wolf-deer needs a Neumann grid".into()));
        }
        Ok(Self {
            params,
            lap: LaplacianOperator::new(spec),
            kernel: QuadraticKernel::new(spec),
        })
    }

    pub fn params(&self) -> &WolfDeerParams {
        &self.params
    }

    /// `(Φ₁, Φ₂)` for the given densities.
    pub fn potentials(&self, r1: &Field, r2: &Field) -> Result<(Field, Field)> {
        let w = self.params.kernel_weight;
        let (k1, k2) = self.kernel.apply_pair(r1, r2)?;
        Ok((k1.zip_map(&k2, |a, b| w * (a - b)), k1.zip_map(&k2, |a, b| w * (a + b))))
    }

    // Σ_d D_dᵀ(A_d ρ ⊙ D_d x)
    fn flux_divergence(&self, rho: &Field, x: &Field) -> Result<Field> {
        let spec = self.spec();
        let mut out = Field::zeros(*spec);
        for axis in AXES {
            let flux = midpoint_average(spec, rho, axis)?.mul(&gradient(spec, x, axis)?);
            out.axpy(1.0, &gradient_transpose(spec, &flux)?);
        }
        Ok(out)
    }

    // Σ_d A_dᵀ(D_d Φ ⊙ D_d p)
    fn drift_density_adjoint(&self, phi: &Field, p: &Field) -> Result<Field> {
        let spec = self.spec();
        let mut out = Field::zeros(*spec);
        for axis in AXES {
            let e = gradient(spec, phi, axis)?.mul(&gradient(spec, p, axis)?);
            out.axpy(1.0, &midpoint_average_transpose(spec, &e)?);
        }
        Ok(out)
    }
}

struct Reaction {
    r1: f64,
    r2: f64,
    // ∂R_i/∂ρ_j
    d11: f64,
    d12: f64,
    d21: f64,
    d22: f64,
}

#[inline]
fn reaction(p: &WolfDeerParams, x: f64, y: f64) -> Reaction {
    let s = 1.0 + x;
    let pred = p.b * x * y / s;
    Reaction {
        r1: p.a * x * (1.0 - x) - pred,
        r2: pred - p.c * y,
        d11: p.a * (1.0 - 2.0 * x) - p.b * y / (s * s),
        d12: -p.b * x / s,
        d21: p.b * y / (s * s),
        d22: p.b * x / s - p.c,
    }
}

impl EquationModel for WolfDeer {
    fn name(&self) -> &'static str {
        "wolf-deer"
    }

    fn laplacian(&self) -> &LaplacianOperator {
        &self.lap
    }

    fn n_components(&self) -> usize {
        2
    }

    fn residual(&self, rho: &SystemField, prev: &SystemField, h_t: f64) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 2, &[rho, prev])?;
        let d = self.params.d;
        let (r1, r2) = (rho.component(0), rho.component(1));
        let (phi1, phi2) = self.potentials(r1, r2)?;
        let div1 = self.flux_divergence(r1, &phi1)?;
        let div2 = self.flux_divergence(r2, &phi2)?;
        let (l1, l2) = (self.lap.apply_unchecked(r1), self.lap.apply_unchecked(r2));
        let mut f1 = Field::zeros(*self.spec());
        let mut f2 = Field::zeros(*self.spec());
        {
            let (o1, o2) = (f1.as_mut_slice(), f2.as_mut_slice());
            let (x, y) = (r1.as_slice(), r2.as_slice());
            let (px, py) = (prev.component(0).as_slice(), prev.component(1).as_slice());
            for k in 0..o1.len() {
                let r = reaction(&self.params, x[k], y[k]);
                o1[k] = x[k] - px[k] - h_t * (d * l1[k] - div1[k] + r.r1);
                o2[k] = y[k] - py[k] - h_t * (d * l2[k] - div2[k] + r.r2);
            }
        }
        finish(self.name(), vec![f1, f2])
    }

    fn jacobian_transpose_apply(
        &self,
        rho: &SystemField,
        pq: &SystemField,
        h_t: f64,
    ) -> Result<SystemField> {
        check_step(h_t)?;
        check_shape(self.spec(), 2, &[rho, pq])?;
        let d = self.params.d;
        let w = self.params.kernel_weight;
        let (r1, r2) = (rho.component(0), rho.component(1));
        let (p, q) = (pq.component(0), pq.component(1));
        let (phi1, phi2) = self.potentials(r1, r2)?;
        let t1 = self.drift_density_adjoint(&phi1, p)?;
        let t2 = self.drift_density_adjoint(&phi2, q)?;
        let x1 = self.flux_divergence(r1, p)?;
        let x2 = self.flux_divergence(r2, q)?;
        let (kx1, kx2) = self.kernel.apply_pair(&x1, &x2)?;
        let (lp, lq) = (self.lap.apply_unchecked(p), self.lap.apply_unchecked(q));
        let mut o1 = Field::zeros(*self.spec());
        let mut o2 = Field::zeros(*self.spec());
        {
            let (a1, a2) = (o1.as_mut_slice(), o2.as_mut_slice());
            let (x, y) = (r1.as_slice(), r2.as_slice());
            let (ps, qs) = (p.as_slice(), q.as_slice());
            for k in 0..a1.len() {
                let r = reaction(&self.params, x[k], y[k]);
                a1[k] = ps[k]
                    - h_t
                        * (d * lp[k] - t1[k] - w * (kx1[k] + kx2[k])
                            + r.d11 * ps[k]
                            + r.d21 * qs[k]);
                a2[k] = qs[k]
                    - h_t
                        * (d * lq[k] - t2[k] + w * (kx1[k] - kx2[k])
                            + r.d12 * ps[k]
                            + r.d22 * qs[k]);
            }
        }
        finish(self.name(), vec![o1, o2])
    }

    fn precond_symbols(&self, h_t: f64) -> Result<Vec<PrecondSymbol>> {
        check_step(h_t)?;
        let d = self.params.d;
        let s = self.lap.symbol(|l| (1.0 - h_t * d * l).powi(2))?;
        Ok(vec![s.clone(), s])
    }
}

//! G-prox primal-dual hybrid gradient solver for one implicit step.
//!
//! Starting from `U⁰ = U_prev`, `P⁰ = 0`:
//!
//! ```text
//! P⁺ = P + τ_p G⁻¹ F(U)
//! P̃  = P⁺ + ω (P⁺ − P)
//! U⁺ = U − τ_u ∇F(U)ᵀ P̃
//! ```
//!
//! until `‖F(U)‖ / h_t ≤ δ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Outcome, Result};
use crate::grid::SystemField;
use crate::models::EquationModel;
use crate::spectral::PrecondSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preconditioner {
    /// The model's transform-diagonal `G`.
    #[default]
    Spectral,
    /// `G = I`, the unpreconditioned iteration.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdhgParams {
    pub tau_u: f64,
    pub tau_p: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
    pub delta: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Declare divergence once the residual exceeds this multiple of the initial one.
    #[serde(default = "default_divergence_factor")]
    pub divergence_factor: f64,
    #[serde(default)]
    pub preconditioner: Preconditioner,
}

fn default_omega() -> f64 {
    1.0
}

fn default_max_iters() -> usize {
    5000
}

fn default_divergence_factor() -> f64 {
    1e4
}

impl PdhgParams {
    /// `τ_u = τ_p = tau`, all other settings at their defaults.
    pub fn new(tau: f64, delta: f64) -> Self {
        Self {
            tau_u: tau,
            tau_p: tau,
            omega: default_omega(),
            delta,
            max_iters: default_max_iters(),
            divergence_factor: default_divergence_factor(),
            preconditioner: Preconditioner::Spectral,
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_preconditioner(mut self, preconditioner: Preconditioner) -> Self {
        self.preconditioner = preconditioner;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive and finite, got {v}")))
            }
        };
        pos("tau_u", self.tau_u)?;
        pos("tau_p", self.tau_p)?;
        pos("delta", self.delta)?;
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::param("omega", "must be non-negative and finite"));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be at least 1"));
        }
        if !(self.divergence_factor.is_finite() && self.divergence_factor > 1.0) {
            return Err(Error::param("divergence_factor", "must be finite and > 1"));
        }
        Ok(())
    }
}

/// Residual history `‖F(Uᵏ)‖ / h_t` for `k = 0..=iterations`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StepTrace {
    pub residuals: Vec<f64>,
}

impl StepTrace {
    pub fn iterations(&self) -> usize {
        self.residuals.len().saturating_sub(1)
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone)]
pub struct StepSolution {
    pub u: SystemField,
    pub outcome: Outcome,
    pub iterations: usize,
    pub final_residual: f64,
    pub trace: StepTrace,
}

/// `‖F‖ / h_t`, summing the unweighted Euclidean norms of the components.
pub fn residual_norm(f: &SystemField, h_t: f64) -> f64 {
    f.norm_sum() / h_t
}

fn symbols<M: EquationModel + ?Sized>(
    model: &M,
    h_t: f64,
    which: Preconditioner,
) -> Result<Vec<PrecondSymbol>> {
    match which {
        Preconditioner::Spectral => model.precond_symbols(h_t),
        Preconditioner::Identity => {
            Ok(vec![PrecondSymbol::identity(model.spec().len()); model.n_components()])
        }
    }
}

/// Solves `F(U) = 0` for one step of size `h_t` from `u_prev`.
///
/// Non-convergence is reported through [`StepSolution::outcome`], not as an
/// error; errors are reserved for invalid input.
pub fn pdhg_step<M: EquationModel + ?Sized>(
    model: &M,
    u_prev: &SystemField,
    h_t: f64,
    params: &PdhgParams,
) -> Result<StepSolution> {
    params.validate()?;
    let g = symbols(model, h_t, params.preconditioner)?;
    let mut u = u_prev.clone();
    let mut p = SystemField::zeros(*model.spec(), model.n_components());
    let mut f = model.residual(&u, u_prev, h_t)?;
    let r0 = residual_norm(&f, h_t);
    let mut trace = StepTrace {
        residuals: vec![r0],
    };
    let done = |u, outcome, trace: StepTrace| {
        Ok(StepSolution {
            u,
            outcome,
            iterations: trace.iterations(),
            final_residual: trace.final_residual(),
            trace,
        })
    };
    if r0 <= params.delta {
        return done(u, Outcome::Converged, trace);
    }
    for _ in 0..params.max_iters {
        let step = model.precond_solve(&g, &f)?;
        let mut p_bar = p.clone();
        p.axpy(params.tau_p, &step);
        // P̃ = P⁺ + ω(P⁺ − P) = P⁺ + ω τ_p G⁻¹F
        p_bar.axpy(params.tau_p * (1.0 + params.omega), &step);
        let jt = match model.jacobian_transpose_apply(&u, &p_bar, h_t) {
            Ok(v) => v,
            Err(Error::ModelBlowUp { .. }) => {
                trace.residuals.push(f64::INFINITY);
                return done(u, Outcome::Diverged, trace);
            }
            Err(e) => return Err(e),
        };
        u.axpy(-params.tau_u, &jt);
        f = match model.residual(&u, u_prev, h_t) {
            Ok(v) => v,
            Err(Error::ModelBlowUp { .. }) => {
                trace.residuals.push(f64::INFINITY);
                return done(u, Outcome::Diverged, trace);
            }
            Err(e) => return Err(e),
        };
        let r = residual_norm(&f, h_t);
        trace.residuals.push(r);
        if !r.is_finite() || !u.is_finite() || r > params.divergence_factor * r0 {
            return done(u, Outcome::Diverged, trace);
        }
        if r <= params.delta {
            return done(u, Outcome::Converged, trace);
        }
    }
    done(u, Outcome::MaxIters, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundaryCondition, Field, GridSpec};
    use crate::models::{AllenCahn, AllenCahnParams};

    fn heat(n: usize) -> AllenCahn {
        let g = GridSpec::new(1.0, n, BoundaryCondition::Periodic).unwrap();
        AllenCahn::new(AllenCahnParams { a: 1.0, b: 0.0 }, g).unwrap()
    }

    #[test]
    fn already_converged_takes_zero_iterations() {
        let m = heat(8);
        let u0 = SystemField::single(Field::constant(*m.spec(), 0.3));
        let s = pdhg_step(&m, &u0, 1e-2, &PdhgParams::new(0.5, 1e-10)).unwrap();
        assert_eq!(s.outcome, Outcome::Converged);
        assert_eq!(s.iterations, 0);
        assert_eq!(s.trace.residuals.len(), 1);
    }

    #[test]
    fn exact_preconditioner_on_linear_problem_converges_fast() {
        let m = heat(16);
        let u0 = SystemField::single(
            Field::sample(*m.spec(), |x, y| (6.0 * x).sin() * (2.0 * y).cos()).unwrap(),
        );
        let s = pdhg_step(&m, &u0, 1e-3, &PdhgParams::new(1.0, 1e-10)).unwrap();
        assert_eq!(s.outcome, Outcome::Converged);
        assert!(s.iterations <= 3, "{}", s.iterations);
        assert_eq!(s.trace.residuals.len(), s.iterations + 1);
    }

    #[test]
    fn max_iters_reported() {
        let m = heat(8);
        let u0 = SystemField::single(Field::sample(*m.spec(), |x, _| x.sin()).unwrap());
        let p = PdhgParams::new(0.1, 1e-14).with_max_iters(3);
        let s = pdhg_step(&m, &u0, 1e-2, &p).unwrap();
        assert_eq!(s.outcome, Outcome::MaxIters);
        assert_eq!(s.iterations, 3);
    }

    #[test]
    fn oversized_step_diverges() {
        let m = heat(8);
        let u0 = SystemField::single(Field::sample(*m.spec(), |x, _| (2.0 * x).sin()).unwrap());
        let p = PdhgParams::new(50.0, 1e-12);
        let s = pdhg_step(&m, &u0, 1e-2, &p).unwrap();
        assert_eq!(s.outcome, Outcome::Diverged);
    }

    #[test]
    fn rejects_bad_params() {
        let m = heat(4);
        let u0 = SystemField::zeros(*m.spec(), 1);
        let p = PdhgParams::new(-1.0, 1e-8);
        assert!(matches!(
            pdhg_step(&m, &u0, 1e-2, &p),
            Err(Error::InvalidParameter { .. })
        ));
    }
}

//! Linear convergence rates of PDHG on `A U = b` with `A` symmetric and
//! nonsingular, and utilities for comparing them with measured traces.
//!
//! With eigenvalues `λ_k` of `A` (or of `AᵀG⁻¹A` in the preconditioned case),
//! the iteration matrix has spectral radius `max_k f(τ_u τ_p λ_k²)` where
//! `f(t) = √(1 − t)` on `[0, 1]` and `t − 1 + √(t² − t)` beyond. The optimum
//! over `τ_u τ_p` balances the two ends of the spectrum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible normalized step product `τ_u τ_p λ_max²`.
pub const ETA_MAX: f64 = 4.0 / 3.0;

pub fn rate_function(t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::param("t", format!("must be non-negative and finite, got {t}")));
    }
    Ok(if t <= 1.0 {
        (1.0 - t).sqrt()
    } else {
        t - 1.0 + (t * t - t).sqrt()
    })
}

/// `ρ(M) = max_k f(τ_u τ_p λ_k²)`.
pub fn spectral_radius_m(eigs: &[f64], tau_u: f64, tau_p: f64) -> Result<f64> {
    let tt = tau_u * tau_p;
    let mut rho: f64 = 0.0;
    for (k, &l) in eigs.iter().enumerate() {
        if l == 0.0 {
            return Err(Error::SingularOperator(k));
        }
        rho = rho.max(rate_function(tt * l * l)?);
    }
    Ok(rho)
}

/// Optimal normalized step product `η* ∈ [1, 4/3)`, the root of
/// `√(1 − η/κ²) = η − 1 + √(η² − η)`.
pub fn eta_star(kappa: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa < 1.0 {
        return Err(Error::param("kappa", format!("must be >= 1 and finite, got {kappa}")));
    }
    let k2 = kappa * kappa;
    let base = 0.75 * k2 + 1.5 - 0.25 / k2;
    let root = ((kappa - 1.0) * (3.0 * kappa + 1.0)).sqrt() * (base + 2.0 * kappa).sqrt();
    Ok(2.0 * k2 / (base + (kappa - 1.0) / (2.0 * kappa) * root))
}

/// Optimal rate `γ* = √(1 − η*/κ²)`.
pub fn gamma_star(kappa: f64) -> Result<f64> {
    let eta = eta_star(kappa)?;
    Ok((1.0 - eta / (kappa * kappa)).max(0.0).sqrt())
}

/// Condition number of `A = I − h_t λ Lap` for the periodic second-difference
/// Laplacian on `n_x` points of the unit interval. For even `n_x` this is
/// `1 + 4 λ n_x² h_t`.
pub fn heat_condition_number(lambda_coef: f64, n_x: usize, h_t: f64) -> Result<f64> {
    if n_x < 2 {
        return Err(Error::param("n_x", "must be at least 2"));
    }
    if !(lambda_coef >= 0.0 && h_t >= 0.0) {
        return Err(Error::param("lambda_coef", "coefficient and h_t must be non-negative"));
    }
    let n = n_x as f64;
    let top = if n_x.is_multiple_of(2) {
        4.0 * n * n
    } else {
        4.0 * n * n * (PI * (n_x / 2) as f64 / n).sin().powi(2)
    };
    Ok(1.0 + lambda_coef * h_t * top)
}

/// Geometric-mean contraction factor over the trailing half of a residual history.
pub fn fit_linear_rate(residuals: &[f64]) -> Result<f64> {
    if residuals.len() < 10 {
        return Err(Error::param("residuals", "need at least 10 entries"));
    }
    if let Some(bad) = residuals.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::param("residuals", format!("entries must be positive, got {bad}")));
    }
    let start = residuals.len() / 2;
    let tail = &residuals[start..];
    let steps = (tail.len() - 1) as f64;
    Ok(((tail[tail.len() - 1].ln() - tail[0].ln()) / steps).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePrediction {
    pub kappa: f64,
    pub eta_star: f64,
    pub gamma_star: f64,
    /// `η* / λ_max²`.
    pub tau_product_opt: f64,
}

impl RatePrediction {
    pub fn new(kappa: f64, lambda_max: f64) -> Result<Self> {
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(Error::param("lambda_max", "must be positive and finite"));
        }
        let eta = eta_star(kappa)?;
        Ok(Self {
            kappa,
            eta_star: eta,
            gamma_star: gamma_star(kappa)?,
            tau_product_opt: eta / (lambda_max * lambda_max),
        })
    }

    /// From the extreme absolute eigenvalues of `A`.
    pub fn from_eigenvalues(eigs: &[f64]) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (k, l) in eigs.iter().map(|l| l.abs()).enumerate() {
            if l == 0.0 {
                return Err(Error::SingularOperator(k));
            }
            lo = lo.min(l);
            hi = hi.max(l);
        }
        if eigs.is_empty() {
            return Err(Error::param("eigs", "must not be empty"));
        }
        Self::new(hi / lo, hi)
    }
}

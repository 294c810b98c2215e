//! Discrete Laplacians, the transforms that diagonalize them, and inversion of
//! preconditioners that are functions of the Laplacian.
//!
//! The Laplacian itself is always applied with the 5-point stencil. The
//! periodic stencil wraps; the Neumann stencil reflects the ghost node
//! (`U[i, -1] = U[i, 0]`), which gives the `-2/-3/-4` diagonal pattern and is
//! diagonalized by the DCT-II.

mod edges;
mod kernel;
mod transform;

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

pub use edges::{
    gradient, gradient_transpose, gradient_x_apply, gradient_x_transpose, gradient_y_apply,
    gradient_y_transpose, midpoint_average, midpoint_average_transpose, midpoint_average_x,
    midpoint_average_y, EdgeAxis, EdgeField,
};
pub use kernel::{quadratic_kernel_convolve, QuadraticKernel};

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec};
use transform::{Dct2, Fft2};

#[derive(Clone)]
enum Transform {
    Fourier(Fft2),
    Cosine(Dct2),
}

/// Transform-domain coefficients of a field.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    /// Unitary 2-D DFT, index `k * n + l` for row frequency `k`, column frequency `l`.
    Fourier(Vec<Complex64>),
    /// Orthonormal 2-D DCT-II, same indexing.
    Cosine(Vec<f64>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Fourier(c) => c.len(),
            Coefficients::Cosine(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn magnitude(&self, idx: usize) -> f64 {
        match self {
            Coefficients::Fourier(c) => c[idx].norm(),
            Coefficients::Cosine(c) => c[idx].abs(),
        }
    }

    /// Multiplies every coefficient by the matching real weight.
    pub fn scale_by(&mut self, weights: &[f64]) {
        match self {
            Coefficients::Fourier(c) => c.iter_mut().zip(weights).for_each(|(c, w)| *c *= *w),
            Coefficients::Cosine(c) => c.iter_mut().zip(weights).for_each(|(c, w)| *c *= *w),
        }
    }
}

/// Eigenvalue symbol of a symmetric positive-definite preconditioner `G` in
/// the transform basis of its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecondSymbol {
    g: Vec<f64>,
}

impl PrecondSymbol {
    pub fn new(g: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = g
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::IndefinitePreconditioner { index, value });
        }
        Ok(Self { g })
    }

    /// `G = I`.
    pub fn identity(len: usize) -> Self {
        Self { g: vec![1.0; len] }
    }

    pub fn values(&self) -> &[f64] {
        &self.g
    }
}

/// The 5-point Laplacian on a grid, together with its eigenvalues in the
/// matching transform basis.
#[derive(Clone)]
pub struct LaplacianOperator {
    spec: GridSpec,
    eigenvalues: Vec<f64>,
    prev: Vec<usize>,
    next: Vec<usize>,
    transform: Transform,
}

impl std::fmt::Debug for LaplacianOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplacianOperator")
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

impl LaplacianOperator {
    pub fn new(spec: GridSpec) -> Self {
        let n = spec.n_x();
        let h2 = spec.h_x() * spec.h_x();
        let (prev, next): (Vec<usize>, Vec<usize>) = match spec.bc() {
            BoundaryCondition::Periodic => (0..n).map(|j| ((j + n - 1) % n, (j + 1) % n)).unzip(),
            BoundaryCondition::Neumann => (0..n)
                .map(|j| (j.saturating_sub(1), (j + 1).min(n - 1)))
                .unzip(),
        };
        let denom = match spec.bc() {
            BoundaryCondition::Periodic => n as f64,
            BoundaryCondition::Neumann => 2.0 * n as f64,
        };
        let s2: Vec<f64> = (0..n)
            .map(|k| (PI * k as f64 / denom).sin().powi(2))
            .collect();
        let mut eigenvalues = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                eigenvalues.push(-4.0 / h2 * (s2[k] + s2[l]));
            }
        }
        let transform = match spec.bc() {
            BoundaryCondition::Periodic => Transform::Fourier(Fft2::new(n)),
            BoundaryCondition::Neumann => Transform::Cosine(Dct2::new(n)),
        };
        Self {
            spec,
            eigenvalues,
            prev,
            next,
            transform,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Laplacian eigenvalues, indexed like [`Coefficients`]. All are `≤ 0` and
    /// only the constant mode (index 0) is zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Stencil application on raw row-major slices.
    pub fn apply_slice(&self, v: &[f64], out: &mut [f64]) {
        let n = self.spec.n_x();
        let inv_h2 = 1.0 / (self.spec.h_x() * self.spec.h_x());
        for i in 0..n {
            let row = &v[i * n..(i + 1) * n];
            let up = &v[self.prev[i] * n..(self.prev[i] + 1) * n];
            let down = &v[self.next[i] * n..(self.next[i] + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for j in 0..n {
                let c = row[j];
                dst[j] = (up[j] + down[j] + row[self.prev[j]] + row[self.next[j]] - 4.0 * c) * inv_h2;
            }
        }
    }

    pub fn apply(&self, v: &Field) -> Result<Field> {
        self.spec.ensure_same(v.spec())?;
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &Field) -> Field {
        let mut out = Field::zeros(self.spec);
        self.apply_slice(v.as_slice(), out.as_mut_slice());
        out
    }

    pub fn transform_forward(&self, v: &Field) -> Result<Coefficients> {
        self.spec.ensure_same(v.spec())?;
        Ok(match &self.transform {
            Transform::Fourier(fft) => {
                let mut buf: Vec<Complex64> =
                    v.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft.forward(&mut buf);
                Coefficients::Fourier(buf)
            }
            Transform::Cosine(dct) => {
                let mut buf = v.as_slice().to_vec();
                dct.forward(&mut buf);
                Coefficients::Cosine(buf)
            }
        })
    }

    /// Inverse transform. For Fourier coefficients the imaginary part of the
    /// result is discarded (it vanishes for spectra of real fields).
    pub fn transform_inverse(&self, c: &Coefficients) -> Result<Field> {
        if c.len() != self.spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a grid of {} nodes",
                c.len(),
                self.spec.len()
            )));
        }
        let data = match (&self.transform, c) {
            (Transform::Fourier(fft), Coefficients::Fourier(c)) => {
                let mut buf = c.clone();
                fft.inverse(&mut buf);
                buf.into_iter().map(|z| z.re).collect()
            }
            (Transform::Cosine(dct), Coefficients::Cosine(c)) => {
                let mut buf = c.clone();
                dct.inverse(&mut buf);
                buf
            }
            _ => {
                return Err(Error::ShapeMismatch(
                    "coefficient kind does not match the grid's boundary condition".into(),
                ))
            }
        };
        Field::from_vec(self.spec, data)
    }

    /// Builds the symbol `g(λ)` of a preconditioner that is a function of the
    /// Laplacian.
    pub fn symbol(&self, f: impl Fn(f64) -> f64) -> Result<PrecondSymbol> {
        PrecondSymbol::new(self.eigenvalues.iter().map(|&l| f(l)).collect())
    }

    /// Multiplies `v` by the operator with the given transform-domain weights,
    /// i.e. computes `Q diag(w) Qᵀ v`.
    pub fn apply_multiplier(&self, weights: &[f64], v: &Field) -> Result<Field> {
        let mut c = self.transform_forward(v)?;
        c.scale_by(weights);
        self.transform_inverse(&c)
    }

    /// `G⁻¹ r` via forward transform, division by the symbol, inverse transform.
    pub fn precond_solve(&self, sym: &PrecondSymbol, r: &Field) -> Result<Field> {
        if sym.g.len() != self.spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "symbol has {} entries, grid has {} nodes",
                sym.g.len(),
                self.spec.len()
            )));
        }
        self.spec.ensure_same(r.spec())?;
        let mut c = self.transform_forward(r)?;
        match &mut c {
            Coefficients::Fourier(c) => c.iter_mut().zip(&sym.g).for_each(|(c, g)| *c /= *g),
            Coefficients::Cosine(c) => c.iter_mut().zip(&sym.g).for_each(|(c, g)| *c /= *g),
        }
        self.transform_inverse(&c)
    }
}

/// Free-function form of [`LaplacianOperator::apply`].
pub fn lap_apply(op: &LaplacianOperator, v: &Field) -> Result<Field> {
    op.apply(v)
}

/// Free-function form of [`LaplacianOperator::precond_solve`].
pub fn precond_solve(op: &LaplacianOperator, sym: &PrecondSymbol, r: &Field) -> Result<Field> {
    op.precond_solve(sym, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, bc: BoundaryCondition) -> GridSpec {
        GridSpec::new(1.0, n, bc).unwrap()
    }

    fn pseudo_random(spec: GridSpec, seed: u64) -> Field {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let data = (0..spec.len())
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect();
        Field::from_vec(spec, data).unwrap()
    }

    #[test]
    fn constant_in_kernel_both_bcs() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
            let op = LaplacianOperator::new(grid(9, bc));
            let out = op.apply(&Field::constant(*op.spec(), 2.5)).unwrap();
            assert!(out.as_slice().iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn periodic_sine_is_eigenvector() {
        let n = 32;
        let spec = grid(n, BoundaryCondition::Periodic);
        let op = LaplacianOperator::new(spec);
        let v = Field::sample(spec, |x, _| (2.0 * PI * x).sin()).unwrap();
        let lv = op.apply(&v).unwrap();
        let h = spec.h_x();
        let lambda = -4.0 / (h * h) * (PI / n as f64).sin().powi(2);
        let scale = lambda.abs();
        for (a, b) in lv.as_slice().iter().zip(v.as_slice()) {
            assert!((a - lambda * b).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn round_trip_and_zero_mode() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
            let spec = grid(12, bc);
            let op = LaplacianOperator::new(spec);
            let v = pseudo_random(spec, 3);
            let back = op.transform_inverse(&op.transform_forward(&v).unwrap()).unwrap();
            for (a, b) in back.as_slice().iter().zip(v.as_slice()) {
                assert!((a - b).abs() < 1e-12);
            }
            let c = op.transform_forward(&Field::constant(spec, 1.0)).unwrap();
            assert!(c.magnitude(0) > 1.0);
            assert!((1..c.len()).all(|k| c.magnitude(k) < 1e-12));
        }
    }

    #[test]
    fn transform_diagonalizes_laplacian() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
            let spec = grid(16, bc);
            let op = LaplacianOperator::new(spec);
            let v = pseudo_random(spec, 11);
            let lhs = op.transform_forward(&op.apply(&v).unwrap()).unwrap();
            let mut rhs = op.transform_forward(&v).unwrap();
            rhs.scale_by(op.eigenvalues());
            let scale = op.eigenvalues().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for k in 0..lhs.len() {
                let d = match (&lhs, &rhs) {
                    (Coefficients::Fourier(a), Coefficients::Fourier(b)) => (a[k] - b[k]).norm(),
                    (Coefficients::Cosine(a), Coefficients::Cosine(b)) => (a[k] - b[k]).abs(),
                    _ => unreachable!(),
                };
                assert!(d < 1e-11 * scale, "{bc}: mode {k} off by {d}");
            }
        }
    }

    #[test]
    fn eigenvalue_sign_structure() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
            let op = LaplacianOperator::new(grid(8, bc));
            assert!(op.eigenvalues().iter().all(|&l| l <= 0.0));
            assert_eq!(op.eigenvalues().iter().filter(|&&l| l == 0.0).count(), 1);
        }
    }

    #[test]
    fn identity_symbol_is_identity_map() {
        let spec = grid(8, BoundaryCondition::Neumann);
        let op = LaplacianOperator::new(spec);
        let v = pseudo_random(spec, 5);
        let out = op.precond_solve(&PrecondSymbol::identity(spec.len()), &v).unwrap();
        for (a, b) in out.as_slice().iter().zip(v.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn squared_shifted_laplacian_inverts() {
        let (ht, lam) = (1e-2, 0.7);
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
            let spec = grid(16, bc);
            let op = LaplacianOperator::new(spec);
            let sym = op.symbol(|l| (1.0 - ht * lam * l).powi(2)).unwrap();
            let r = pseudo_random(spec, 7);
            let y = op.precond_solve(&sym, &r).unwrap();
            let a = |f: &Field| {
                let mut out = f.clone();
                out.axpy(-ht * lam, &op.apply(f).unwrap());
                out
            };
            let back = a(&a(&y));
            for (p, q) in back.as_slice().iter().zip(r.as_slice()) {
                assert!((p - q).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn indefinite_symbol_rejected() {
        assert!(matches!(
            PrecondSymbol::new(vec![1.0, 0.0, 2.0]),
            Err(Error::IndefinitePreconditioner { index: 1, .. })
        ));
        assert!(PrecondSymbol::new(vec![1.0, -3.0]).is_err());
        assert!(PrecondSymbol::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn grid_mismatch_is_error() {
        let op = LaplacianOperator::new(grid(8, BoundaryCondition::Periodic));
        let other = Field::zeros(grid(8, BoundaryCondition::Neumann));
        assert!(matches!(op.apply(&other), Err(Error::GridMismatch { .. })));
    }
}

//! Square grids, scalar fields on them, and the handful of reductions the
//! solver needs (Euclidean norm, mass).
//!
//! Storage is row-major and 0-based: entry `(i, j)` lives at `i * n_x + j` and
//! sits at the physical point `x = x0 + j * h_x`, `y = y0 + i * h_x`.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    /// Torus; the duplicate boundary node is excluded, `h_x = L / n_x`.
    Periodic,
    /// Zero-flux with nodes on the boundary, `h_x = L / (n_x - 1)`.
    Neumann,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Periodic => f.write_str("periodic"),
            BoundaryCondition::Neumann => f.write_str("neumann"),
        }
    }
}

/// Geometry of an `n_x × n_x` grid over `[x0, x0 + L] × [y0, y0 + L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    side_length: f64,
    n_x: usize,
    h_x: f64,
    bc: BoundaryCondition,
    origin: (f64, f64),
}

impl GridSpec {
    pub fn new(side_length: f64, n_x: usize, bc: BoundaryCondition) -> Result<Self> {
        Self::with_origin(side_length, n_x, bc, (0.0, 0.0))
    }

    pub fn with_origin(
        side_length: f64,
        n_x: usize,
        bc: BoundaryCondition,
        origin: (f64, f64),
    ) -> Result<Self> {
        if n_x < 2 {
            return Err(Error::InvalidGrid(format!("n_x must be at least 2, got {n_x}")));
        }
        if !(side_length.is_finite() && side_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "side length must be positive and finite, got {side_length}"
            )));
        }
        if !(origin.0.is_finite() && origin.1.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        let h_x = match bc {
            BoundaryCondition::Periodic => side_length / n_x as f64,
            BoundaryCondition::Neumann => side_length / (n_x - 1) as f64,
        };
        Ok(Self {
            side_length,
            n_x,
            h_x,
            bc,
            origin,
        })
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn h_x(&self) -> f64 {
        self.h_x
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    /// Number of nodes, `n_x²`.
    pub fn len(&self) -> usize {
        self.n_x * self.n_x
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major linear index of node `(i, j)`.
    #[inline]
    pub fn linear_index(&self, i: usize, j: usize) -> usize {
        assert!(
            i < self.n_x && j < self.n_x,
            "grid index ({i}, {j}) out of range for n_x = {}",
            self.n_x
        );
        i * self.n_x + j
    }

    /// Inverse of [`linear_index`](Self::linear_index).
    #[inline]
    pub fn unindex(&self, l: usize) -> (usize, usize) {
        assert!(l < self.len(), "linear index {l} out of range");
        (l / self.n_x, l % self.n_x)
    }

    /// Physical coordinates `(x, y)` of node `(i, j)`.
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + j as f64 * self.h_x,
            self.origin.1 + i as f64 * self.h_x,
        )
    }

    /// Node closest to the physical point `(x, y)`, clamped to the grid.
    pub fn nearest_node(&self, x: f64, y: f64) -> (usize, usize) {
        let snap = |v: f64, o: f64| {
            let k = ((v - o) / self.h_x).round();
            k.clamp(0.0, (self.n_x - 1) as f64) as usize
        };
        (snap(y, self.origin.1), snap(x, self.origin.0))
    }

    pub(crate) fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} {} grid, L = {}, h_x = {}, origin = ({}, {})",
            self.n_x, self.n_x, self.bc, self.side_length, self.h_x, self.origin.0, self.origin.1
        )
    }
}

/// A real scalar on the nodes of a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    data: Vec<f64>,
    spec: GridSpec,
}

impl Field {
    pub fn zeros(spec: GridSpec) -> Self {
        Self::constant(spec, 0.0)
    }

    pub fn constant(spec: GridSpec, value: f64) -> Self {
        Self {
            data: vec![value; spec.len()],
            spec,
        }
    }

    pub fn from_vec(spec: GridSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "field data has {} entries, grid needs {}",
                data.len(),
                spec.len()
            )));
        }
        Ok(Self { data, spec })
    }

    /// Samples `f(x, y)` at every node.
    pub fn sample(spec: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = spec.n_x();
        let mut data = Vec::with_capacity(spec.len());
        for i in 0..n {
            for j in 0..n {
                let (x, y) = spec.coords(i, j);
                let value = f(x, y);
                if !value.is_finite() {
                    return Err(Error::NonFiniteSample { i, j, value });
                }
                data.push(value);
            }
        }
        Ok(Self { data, spec })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[self.spec.linear_index(i, j)]
    }

    /// Euclidean norm of the raw coefficient vector, no `h_x` weighting.
    pub fn l2_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `h_x² · Σ entries`.
    pub fn total_mass(&self) -> f64 {
        let h = self.spec.h_x();
        h * h * self.data.iter().sum::<f64>()
    }

    pub fn dot(&self, other: &Field) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &Field) {
        debug_assert_eq!(self.spec, other.spec);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    /// Pointwise map into a new field on the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            data: self.data.iter().map(|&v| f(v)).collect(),
            spec: self.spec,
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.spec, other.spec);
        Field {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            spec: self.spec,
        }
    }
}

impl Index<usize> for Field {
    type Output = f64;

    fn index(&self, l: usize) -> &f64 {
        &self.data[l]
    }
}

impl IndexMut<usize> for Field {
    fn index_mut(&mut self, l: usize) -> &mut f64 {
        &mut self.data[l]
    }
}

/// An ordered tuple of fields sharing one grid, e.g. `(U, V)` for a
/// two-species system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemField {
    components: Vec<Field>,
}

impl SystemField {
    pub fn new(components: Vec<Field>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a system field needs a component".into()))?;
        for c in &components[1..] {
            first.spec().ensure_same(c.spec())?;
        }
        Ok(Self { components })
    }

    pub fn single(field: Field) -> Self {
        Self {
            components: vec![field],
        }
    }

    pub fn zeros(spec: GridSpec, n_components: usize) -> Self {
        Self {
            components: (0..n_components).map(|_| Field::zeros(spec)).collect(),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        self.components[0].spec()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Field] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Field] {
        &mut self.components
    }

    pub fn component(&self, k: usize) -> &Field {
        &self.components[k]
    }

    pub fn into_components(self) -> Vec<Field> {
        self.components
    }

    /// Sum of per-component Euclidean norms.
    pub fn norm_sum(&self) -> f64 {
        self.components.iter().map(Field::l2_norm).sum()
    }

    pub fn dot(&self, other: &SystemField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.dot(b))
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Field::is_finite)
    }

    pub fn axpy(&mut self, alpha: f64, other: &SystemField) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(alpha, b);
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        self.components.iter_mut().for_each(|c| c.scale(alpha));
    }

    /// Same component count on the same grid.
    pub fn ensure_compatible(&self, other: &SystemField) -> Result<()> {
        if self.n_components() != other.n_components() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} components, found {}",
                self.n_components(),
                other.n_components()
            )));
        }
        self.spec().ensure_same(other.spec())
    }
}

impl From<Field> for SystemField {
    fn from(f: Field) -> Self {
        SystemField::single(f)
    }
}

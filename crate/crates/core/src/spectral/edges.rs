//! Staggered (edge) operators on Neumann grids: one-sided-at-the-boundary
//! forward differences and midpoint averages, plus their exact adjoints.
//!
//! Along each grid line of `n` nodes there are `n + 1` edges. Edge `m` for
//! `1 ≤ m ≤ n-1` sits between nodes `m-1` and `m`; edges `0` and `n` are the
//! boundary half-indices and copy the nearest interior value.
//!
//! Layout: x-edges are stored as `i * (n + 1) + m` (row `i`), y-edges as
//! `m * n + j` (column `j`).

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAxis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    axis: EdgeAxis,
    n: usize,
    data: Vec<f64>,
}

impl EdgeField {
    pub fn zeros(axis: EdgeAxis, n: usize) -> Self {
        Self {
            axis,
            n,
            data: vec![0.0; (n + 1) * n],
        }
    }

    pub fn from_vec(axis: EdgeAxis, n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != (n + 1) * n {
            return Err(Error::ShapeMismatch(format!(
                "edge field needs {} entries, got {}",
                (n + 1) * n,
                data.len()
            )));
        }
        Ok(Self { axis, n, data })
    }

    pub fn axis(&self) -> EdgeAxis {
        self.axis
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn dot(&self, other: &EdgeField) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Pointwise product, used for flux = average ⊙ gradient.
    pub fn mul(&self, other: &EdgeField) -> EdgeField {
        debug_assert_eq!(self.axis, other.axis);
        EdgeField {
            axis: self.axis,
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        }
    }
}

// (node base, node stride, edge base, edge stride) for line `t` along `axis`.
#[inline]
fn line(axis: EdgeAxis, n: usize, t: usize) -> (usize, usize, usize, usize) {
    match axis {
        EdgeAxis::X => (t * n, 1, t * (n + 1), 1),
        EdgeAxis::Y => (t, n, t, n),
    }
}

fn check(spec: &GridSpec) -> Result<()> {
    if spec.bc() != BoundaryCondition::Neumann {
        return Err(Error::InvalidGrid(
            "edge operators are defined on Neumann grids only".into(),
        ));
    }
    if spec.n_x() < 2 {
        return Err(Error::InvalidGrid("edge operators need n_x >= 2".into()));
    }
    Ok(())
}

pub fn gradient(spec: &GridSpec, v: &Field, axis: EdgeAxis) -> Result<EdgeField> {
    check(spec)?;
    spec.ensure_same(v.spec())?;
    let n = spec.n_x();
    let inv_h = 1.0 / spec.h_x();
    let u = v.as_slice();
    let mut out = EdgeField::zeros(axis, n);
    let e = &mut out.data;
    for t in 0..n {
        let (nb, ns, eb, es) = line(axis, n, t);
        let node = |k: usize| u[nb + k * ns];
        for m in 1..n {
            e[eb + m * es] = (node(m) - node(m - 1)) * inv_h;
        }
        e[eb] = e[eb + es];
        e[eb + n * es] = e[eb + (n - 1) * es];
    }
    Ok(out)
}

pub fn gradient_transpose(spec: &GridSpec, edges: &EdgeField) -> Result<Field> {
    check(spec)?;
    let n = spec.n_x();
    if edges.n != n {
        return Err(Error::ShapeMismatch("edge field size does not match grid".into()));
    }
    let inv_h = 1.0 / spec.h_x();
    let mut out = Field::zeros(*spec);
    let u = out.as_mut_slice();
    let e = &edges.data;
    for t in 0..n {
        let (nb, ns, eb, es) = line(edges.axis, n, t);
        // boundary half-indices repeat the first / last difference
        let first = e[eb] * inv_h;
        u[nb] -= first;
        u[nb + ns] += first;
        for m in 1..n {
            let w = e[eb + m * es] * inv_h;
            u[nb + (m - 1) * ns] -= w;
            u[nb + m * ns] += w;
        }
        let last = e[eb + n * es] * inv_h;
        u[nb + (n - 2) * ns] -= last;
        u[nb + (n - 1) * ns] += last;
    }
    Ok(out)
}

pub fn midpoint_average(spec: &GridSpec, v: &Field, axis: EdgeAxis) -> Result<EdgeField> {
    check(spec)?;
    spec.ensure_same(v.spec())?;
    let n = spec.n_x();
    let u = v.as_slice();
    let mut out = EdgeField::zeros(axis, n);
    let e = &mut out.data;
    for t in 0..n {
        let (nb, ns, eb, es) = line(axis, n, t);
        let node = |k: usize| u[nb + k * ns];
        for m in 1..n {
            e[eb + m * es] = 0.5 * (node(m - 1) + node(m));
        }
        e[eb] = node(0);
        e[eb + n * es] = node(n - 1);
    }
    Ok(out)
}

pub fn midpoint_average_transpose(spec: &GridSpec, edges: &EdgeField) -> Result<Field> {
    check(spec)?;
    let n = spec.n_x();
    if edges.n != n {
        return Err(Error::ShapeMismatch("edge field size does not match grid".into()));
    }
    let mut out = Field::zeros(*spec);
    let u = out.as_mut_slice();
    let e = &edges.data;
    for t in 0..n {
        let (nb, ns, eb, es) = line(edges.axis, n, t);
        u[nb] += e[eb];
        for m in 1..n {
            let w = 0.5 * e[eb + m * es];
            u[nb + (m - 1) * ns] += w;
            u[nb + m * ns] += w;
        }
        u[nb + (n - 1) * ns] += e[eb + n * es];
    }
    Ok(out)
}

pub fn gradient_x_apply(spec: &GridSpec, v: &Field) -> Result<EdgeField> {
    gradient(spec, v, EdgeAxis::X)
}

pub fn gradient_y_apply(spec: &GridSpec, v: &Field) -> Result<EdgeField> {
    gradient(spec, v, EdgeAxis::Y)
}

pub fn gradient_x_transpose(spec: &GridSpec, e: &EdgeField) -> Result<Field> {
    debug_assert_eq!(e.axis, EdgeAxis::X);
    gradient_transpose(spec, e)
}

pub fn gradient_y_transpose(spec: &GridSpec, e: &EdgeField) -> Result<Field> {
    debug_assert_eq!(e.axis, EdgeAxis::Y);
    gradient_transpose(spec, e)
}

pub fn midpoint_average_x(spec: &GridSpec, v: &Field) -> Result<EdgeField> {
    midpoint_average(spec, v, EdgeAxis::X)
}

pub fn midpoint_average_y(spec: &GridSpec, v: &Field) -> Result<EdgeField> {
    midpoint_average(spec, v, EdgeAxis::Y)
}

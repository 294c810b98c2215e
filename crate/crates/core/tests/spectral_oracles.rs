//! Fast operators against dense matrices assembled straight from their
//! stencil definitions.

mod common;

use common::{dense_edges, dense_laplacian, random_field, rng};
use nalgebra::{DMatrix, DVector};
use rd_pdhg::spectral::{
    gradient, gradient_transpose, lap_apply, midpoint_average, midpoint_average_transpose,
    precond_solve, quadratic_kernel_convolve, EdgeAxis, EdgeField, LaplacianOperator,
};
use rd_pdhg::{BoundaryCondition, Field, GridSpec};

const TOL: f64 = 1e-9;

type Symbol = Box<dyn Fn(f64) -> f64>;

fn grids(n: usize) -> [GridSpec; 2] {
    [
        GridSpec::new(1.0, n, BoundaryCondition::Periodic).unwrap(),
        GridSpec::new(1.0, n, BoundaryCondition::Neumann).unwrap(),
    ]
}

fn to_vec(f: &Field) -> DVector<f64> {
    DVector::from_column_slice(f.as_slice())
}

fn max_abs(a: &DVector<f64>, b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn laplacian_matches_dense() {
    let mut rng = rng(1);
    for n in [4, 8] {
        for spec in grids(n) {
            let a = dense_laplacian(&spec);
            let op = LaplacianOperator::new(spec);
            for _ in 0..3 {
                let v = random_field(spec, &mut rng, -1.0, 1.0);
                let err = max_abs(&(&a * to_vec(&v)), lap_apply(&op, &v).unwrap().as_slice());
                assert!(err < TOL, "{:?} n={n}: {err:e}", spec.bc());
            }
            // the symmetric matrix's spectrum is what the transform reports
            let mut dense: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
            let mut fast = op.eigenvalues().to_vec();
            dense.sort_by(f64::total_cmp);
            fast.sort_by(f64::total_cmp);
            for (x, y) in dense.iter().zip(&fast) {
                assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "{x} vs {y}");
            }
        }
    }
}

#[test]
fn precond_solve_matches_dense() {
    let mut rng = rng(2);
    let h_t = 1e-3;
    let symbols: [(&str, Symbol); 3] = [
        ("ac", Box::new(move |l: f64| (1.0 - 0.01 * h_t * l).powi(2))),
        ("ch", Box::new(move |l: f64| (1.0 + 0.01 * h_t * l * l).powi(2))),
        ("shifted", Box::new(|l: f64| 2.0 - 0.1 * l)),
    ];
    for n in [4, 8] {
        for spec in grids(n) {
            let a = dense_laplacian(&spec);
            let eig = a.clone().symmetric_eigen();
            let op = LaplacianOperator::new(spec);
            for (name, f) in &symbols {
                let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
                let g = &eig.eigenvectors * d * eig.eigenvectors.transpose();
                let sym = op.symbol(f).unwrap();
                let r = random_field(spec, &mut rng, -1.0, 1.0);
                let x = g.clone().lu().solve(&to_vec(&r)).unwrap();
                let fast = precond_solve(&op, &sym, &r).unwrap();
                let err = max_abs(&x, fast.as_slice());
                assert!(err < TOL, "{name} {:?} n={n}: {err:e}", spec.bc());
                // G applied to the fast solution gives r back
                let back = max_abs(&(&g * to_vec(&fast)), r.as_slice());
                assert!(back < TOL, "{name}: {back:e}");
            }
        }
    }
}

#[test]
fn kernel_matches_direct_sum() {
    let mut rng = rng(3);
    for n in [4, 8] {
        let spec = GridSpec::with_origin(3.0, n, BoundaryCondition::Neumann, (-1.5, -1.5)).unwrap();
        let h = spec.h_x();
        let v = random_field(spec, &mut rng, -1.0, 1.0);
        let fast = quadratic_kernel_convolve(&spec, &v).unwrap();
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        let d2 = (i as f64 - k as f64).powi(2) + (j as f64 - l as f64).powi(2);
                        s += h.powi(4) / 2.0 * d2 * v.at(k, l);
                    }
                }
                assert!((s - fast.at(i, j)).abs() < TOL, "n={n} ({i},{j}): {s} vs {}", fast.at(i, j));
            }
        }
    }
}

#[test]
fn kernel_one_hot() {
    let spec = GridSpec::new(2.0, 3, BoundaryCondition::Neumann).unwrap();
    assert_eq!(spec.h_x(), 1.0);
    let mut v = Field::zeros(spec);
    v.as_mut_slice()[0] = 1.0;
    let out = quadratic_kernel_convolve(&spec, &v).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = ((i * i + j * j) as f64) / 2.0;
            assert!((out.at(i, j) - want).abs() < 1e-12);
        }
    }
    assert!((out.at(1, 1) - 1.0).abs() < 1e-12);
}

#[test]
fn edge_operators_match_dense() {
    let mut rng = rng(4);
    for n in [4, 8] {
        let spec = GridSpec::new(1.0, n, BoundaryCondition::Neumann).unwrap();
        for axis in [EdgeAxis::X, EdgeAxis::Y] {
            let (d, a) = dense_edges(&spec, axis);
            let v = random_field(spec, &mut rng, -1.0, 1.0);
            let vv = to_vec(&v);
            let g = gradient(&spec, &v, axis).unwrap();
            assert!(max_abs(&(&d * &vv), g.as_slice()) < TOL, "{axis:?} gradient");
            let m = midpoint_average(&spec, &v, axis).unwrap();
            assert!(max_abs(&(&a * &vv), m.as_slice()) < TOL, "{axis:?} average");

            let data: Vec<f64> = (0..(n + 1) * n).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
            let e = EdgeField::from_vec(axis, n, data.clone()).unwrap();
            let ev = DVector::from_vec(data);
            let gt = gradient_transpose(&spec, &e).unwrap();
            assert!(max_abs(&(d.transpose() * &ev), gt.as_slice()) < TOL, "{axis:?} gradientᵀ");
            let at = midpoint_average_transpose(&spec, &e).unwrap();
            assert!(max_abs(&(a.transpose() * &ev), at.as_slice()) < TOL, "{axis:?} averageᵀ");
        }
    }
}

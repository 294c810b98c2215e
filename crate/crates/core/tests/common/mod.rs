#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rd_pdhg::models::{
    AllenCahnParams, CahnHilliardParams, ModelParams, SchnakenbergParams, SixthOrderParams,
    WolfDeerParams,
};
use rd_pdhg::{BoundaryCondition, EquationModel, Field, GridSpec, Model, SystemField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(spec: GridSpec, rng: &mut impl Rng, lo: f64, hi: f64) -> Field {
    let data = (0..spec.len()).map(|_| rng.random_range(lo..hi)).collect();
    Field::from_vec(spec, data).unwrap()
}

pub fn random_system(spec: GridSpec, n: usize, rng: &mut impl Rng, lo: f64, hi: f64) -> SystemField {
    SystemField::new((0..n).map(|_| random_field(spec, rng, lo, hi)).collect()).unwrap()
}

/// The five models on a small grid of the right boundary type, with the
/// parameter values used by the presets.
pub fn all_models(n_x: usize) -> Vec<(ModelParams, GridSpec)> {
    let periodic = GridSpec::new(2.0 * std::f64::consts::PI, n_x, BoundaryCondition::Periodic).unwrap();
    let neumann = GridSpec::with_origin(6.0, n_x, BoundaryCondition::Neumann, (-3.0, -3.0)).unwrap();
    vec![
        (ModelParams::AllenCahn(AllenCahnParams { a: 0.01, b: 100.0 }), periodic),
        (ModelParams::CahnHilliard(CahnHilliardParams { a: 0.01, b: 1.0 }), periodic),
        (ModelParams::SixthOrder(SixthOrderParams { epsilon: 0.18 }), periodic),
        (
            ModelParams::Schnakenberg(SchnakenbergParams {
                kappa: 100.0,
                a: 0.1305,
                b: 0.7695,
                d1: 0.05,
                d2: 1.0,
            }),
            neumann,
        ),
        (
            ModelParams::WolfDeer(WolfDeerParams {
                d: 0.5,
                a: 5.0,
                b: 35.0,
                c: 2.5,
                kernel_weight: 1.0,
            }),
            neumann,
        ),
    ]
}

pub fn build(params: &ModelParams, spec: GridSpec) -> Model {
    Model::new(params, spec).unwrap()
}

/// 5-point Laplacian assembled from its stencil; Neumann grids reflect the
/// ghost node.
pub fn dense_laplacian(spec: &GridSpec) -> nalgebra::DMatrix<f64> {
    let n = spec.n_x();
    let h2 = spec.h_x() * spec.h_x();
    let nb = |k: isize| -> usize {
        match spec.bc() {
            BoundaryCondition::Periodic => k.rem_euclid(n as isize) as usize,
            BoundaryCondition::Neumann => k.clamp(0, n as isize - 1) as usize,
        }
    };
    let mut a = nalgebra::DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for (di, dj) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let col = nb(i as isize + di) * n + nb(j as isize + dj);
                a[(row, col)] += 1.0 / h2;
            }
            a[(row, row)] -= 4.0 / h2;
        }
    }
    a
}

/// Root of `√(1 − η/κ²) = η − 1 + √(η² − η)` on `[1, 4/3]` by bisection.
pub fn eta_bisect(kappa: f64) -> f64 {
    let (mut lo, mut hi) = (1.0f64, 4.0 / 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eta_balance(kappa, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn eta_balance(kappa: f64, eta: f64) -> f64 {
    (1.0 - eta / (kappa * kappa)).sqrt() - (eta - 1.0 + (eta * eta - eta).sqrt())
}

/// Pure heat `A = I − h_t a Lap` on a 4×4 periodic unit grid.
pub struct HeatProblem {
    pub model: Model,
    pub a: nalgebra::DMatrix<f64>,
    /// `A` restricted to mean-zero fields. PDHG starts from `U_prev`, so the
    /// initial error `(I − A⁻¹)U_prev` has no constant component and the
    /// iteration never leaves this invariant subspace.
    pub a_mean_zero: nalgebra::DMatrix<f64>,
    pub eigs: Vec<f64>,
    pub h_t: f64,
}

pub fn heat_problem(n_x: usize, coef: f64, h_t: f64) -> HeatProblem {
    let spec = GridSpec::new(1.0, n_x, BoundaryCondition::Periodic).unwrap();
    let params = ModelParams::AllenCahn(AllenCahnParams { a: coef, b: 0.0 });
    let lap = dense_laplacian(&spec);
    let a = nalgebra::DMatrix::identity(n_x * n_x, n_x * n_x) - lap * (h_t * coef);
    let eig = a.clone().symmetric_eigen();
    let eigs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    // the constant mode is the only eigenvector with eigenvalue 1
    let keep: Vec<usize> = (0..eigs.len()).filter(|&k| eigs[k] > 1.0 + 1e-12).collect();
    let q = eig.eigenvectors.select_columns(&keep);
    let a_mean_zero = q.transpose() * &a * &q;
    HeatProblem {
        model: Model::new(&params, spec).unwrap(),
        a,
        a_mean_zero,
        eigs,
        h_t,
    }
}

/// Iteration matrix of the linear PDHG map with `G = I` and extrapolation
/// `P̃ = P_{n+1} + ω(P_{n+1} − P_n)`:
/// `[[I − (1+ω)τ_uτ_p A², −τ_u A], [τ_p A, I]]`.
pub fn iteration_matrix(a: &nalgebra::DMatrix<f64>, tau_u: f64, tau_p: f64, omega: f64) -> nalgebra::DMatrix<f64> {
    let n = a.nrows();
    let id = nalgebra::DMatrix::<f64>::identity(n, n);
    let mut m = nalgebra::DMatrix::zeros(2 * n, 2 * n);
    let a2 = a * a;
    m.view_mut((0, 0), (n, n)).copy_from(&(&id - a2 * ((1.0 + omega) * tau_u * tau_p)));
    m.view_mut((0, n), (n, n)).copy_from(&(a * (-tau_u)));
    m.view_mut((n, 0), (n, n)).copy_from(&(a * tau_p));
    m.view_mut((n, n), (n, n)).copy_from(&id);
    m
}

/// `ρ(M) = lim ‖M^k‖^{1/k}`, with `k = 2^40` reached by repeated squaring of
/// the normalized power.
pub fn spectral_radius_dense(m: &nalgebra::DMatrix<f64>) -> f64 {
    let mut b = m.clone();
    let mut log_scale = 0.0;
    let squarings = 40;
    for _ in 0..squarings {
        let s = b.norm();
        if s == 0.0 {
            return 0.0;
        }
        b /= s;
        log_scale = 2.0 * (log_scale + s.ln());
        b = &b * &b;
    }
    ((log_scale + b.norm().ln()) / 2f64.powi(squarings)).exp()
}

// Dense edge operators from the definitions: interior forward differences and
// averages, boundary half-indices copying the adjacent interior difference and
// the boundary node value.
pub fn dense_edges(
    spec: &GridSpec,
    axis: rd_pdhg::spectral::EdgeAxis,
) -> (nalgebra::DMatrix<f64>, nalgebra::DMatrix<f64>) {
    use rd_pdhg::spectral::EdgeAxis;
    let n = spec.n_x();
    let h = spec.h_x();
    let mut d = nalgebra::DMatrix::zeros((n + 1) * n, n * n);
    let mut a = nalgebra::DMatrix::zeros((n + 1) * n, n * n);
    let node = |t: usize, k: usize| match axis {
        EdgeAxis::X => t * n + k,
        EdgeAxis::Y => k * n + t,
    };
    let edge = |t: usize, m: usize| match axis {
        EdgeAxis::X => t * (n + 1) + m,
        EdgeAxis::Y => m * n + t,
    };
    for t in 0..n {
        for m in 0..=n {
            let e = edge(t, m);
            let (lo, hi) = match m {
                0 => (0, 1),
                m if m == n => (n - 2, n - 1),
                m => (m - 1, m),
            };
            d[(e, node(t, hi))] += 1.0 / h;
            d[(e, node(t, lo))] -= 1.0 / h;
            match m {
                0 => a[(e, node(t, 0))] = 1.0,
                m if m == n => a[(e, node(t, n - 1))] = 1.0,
                m => {
                    a[(e, node(t, m - 1))] = 0.5;
                    a[(e, node(t, m))] = 0.5;
                }
            }
        }
    }
    (d, a)
}

/// Worst relative error of the central-difference identity
/// `⟨F(U + εv) − F(U − εv), P⟩ / 2ε = ⟨v, ∇F(U)ᵀP⟩` per model.
pub fn adjoint_errors(n_x: usize, trials: usize, seed: u64) -> Vec<(String, f64)> {
    let mut rng = rng(seed);
    let h_t = 1e-2;
    let eps = 1e-6;
    let mut out = Vec::new();
    for (params, spec) in all_models(n_x) {
        let model = build(&params, spec);
        let nc = model.n_components();
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let u = random_system(spec, nc, &mut rng, 0.05, 0.95);
            let prev = random_system(spec, nc, &mut rng, 0.05, 0.95);
            let v = random_system(spec, nc, &mut rng, -1.0, 1.0);
            let p = random_system(spec, nc, &mut rng, -1.0, 1.0);
            let mut up = u.clone();
            up.axpy(eps, &v);
            let mut um = u.clone();
            um.axpy(-eps, &v);
            let fp = model.residual(&up, &prev, h_t).unwrap();
            let fm = model.residual(&um, &prev, h_t).unwrap();
            let lhs = (fp.dot(&p) - fm.dot(&p)) / (2.0 * eps);
            let rhs = v.dot(&model.jacobian_transpose_apply(&u, &p, h_t).unwrap());
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-12));
        }
        out.push((model.name().to_string(), worst));
    }
    out
}

/// Measured contraction of PDHG on pure heat with `G = I` next to the radius
/// of the assembled iteration matrix. The slow modes rotate, so the run uses
/// a fixed iteration count (about ten decades of decay) rather than stopping
/// at a tolerance, which would tend to end on a dip.
pub fn measured_vs_assembled(omega: f64, scale: f64) -> (f64, f64) {
    let heat = heat_problem(4, 1.0, 1.0);
    let excited: Vec<f64> = heat.eigs.iter().copied().filter(|&l| l > 1.0 + 1e-12).collect();
    let pred = rd_pdhg::theory::RatePrediction::from_eigenvalues(&excited).unwrap();
    let tau = (pred.tau_product_opt * scale).sqrt();
    let rho = spectral_radius_dense(&iteration_matrix(&heat.a_mean_zero, tau, tau, omega));
    assert!(rho < 1.0, "ω={omega} scale={scale}: ρ(M) = {rho}");
    let iters = (1e-10f64.ln() / rho.ln()).ceil() as usize;
    let params = rd_pdhg::PdhgParams::new(tau, 1e-300)
        .with_max_iters(iters)
        .with_omega(omega)
        .with_preconditioner(rd_pdhg::Preconditioner::Identity);
    let mut r = rng(9);
    let prev = random_system(*heat.model.spec(), 1, &mut r, -1.0, 1.0);
    let sol = rd_pdhg::pdhg_step(&heat.model, &prev, heat.h_t, &params).unwrap();
    assert_eq!(sol.outcome, rd_pdhg::Outcome::MaxIters);
    (rd_pdhg::theory::fit_linear_rate(&sol.trace.residuals).unwrap(), rho)
}

/// Largest deviation of the fast spectral operators from dense matrices
/// assembled from their stencils, over both boundary conditions at size `n`.
pub fn spectral_error(n: usize, seed: u64) -> f64 {
    use nalgebra::{DMatrix, DVector};
    use rd_pdhg::spectral::{
        gradient, gradient_transpose, lap_apply, midpoint_average, midpoint_average_transpose,
        precond_solve, quadratic_kernel_convolve, EdgeAxis, EdgeField, LaplacianOperator,
    };
    let to_vec = |f: &Field| DVector::from_column_slice(f.as_slice());
    let max_abs = |a: &DVector<f64>, b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    let h_t = 1e-3;
    let symbols: [fn(f64, f64) -> f64; 3] = [
        |l, h| (1.0 - 0.01 * h * l).powi(2),
        |l, h| (1.0 + 0.01 * h * l * l).powi(2),
        |l, _| 2.0 - 0.1 * l,
    ];
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
        let spec = GridSpec::new(1.0, n, bc).unwrap();
        let a = dense_laplacian(&spec);
        let op = LaplacianOperator::new(spec);
        let v = random_field(spec, &mut rng, -1.0, 1.0);
        worst = worst.max(max_abs(&(&a * to_vec(&v)), lap_apply(&op, &v).unwrap().as_slice()));
        let eig = a.symmetric_eigen();
        for f in symbols {
            let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| f(l, h_t)));
            let g = &eig.eigenvectors * d * eig.eigenvectors.transpose();
            let sym = op.symbol(|l| f(l, h_t)).unwrap();
            let r = random_field(spec, &mut rng, -1.0, 1.0);
            let x = g.lu().solve(&to_vec(&r)).unwrap();
            worst = worst.max(max_abs(&x, precond_solve(&op, &sym, &r).unwrap().as_slice()));
        }
    }

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
            worst = worst.max((s - fast.at(i, j)).abs());
        }
    }

    for axis in [EdgeAxis::X, EdgeAxis::Y] {
        let (d, a) = dense_edges(&spec, axis);
        let vv = to_vec(&v);
        worst = worst.max(max_abs(&(&d * &vv), gradient(&spec, &v, axis).unwrap().as_slice()));
        worst = worst.max(max_abs(&(&a * &vv), midpoint_average(&spec, &v, axis).unwrap().as_slice()));
        let data: Vec<f64> = (0..(n + 1) * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let e = EdgeField::from_vec(axis, n, data.clone()).unwrap();
        let ev = DVector::from_vec(data);
        worst = worst.max(max_abs(&(d.transpose() * &ev), gradient_transpose(&spec, &e).unwrap().as_slice()));
        worst = worst.max(max_abs(&(a.transpose() * &ev), midpoint_average_transpose(&spec, &e).unwrap().as_slice()));
    }
    worst
}

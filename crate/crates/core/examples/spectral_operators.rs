//! The fast operators: Laplacian application, preconditioner inversion by
//! FFT (periodic) or DCT (Neumann), and the nonlocal quadratic kernel.

use rd_pdhg::spectral::{lap_apply, precond_solve, quadratic_kernel_convolve};
use rd_pdhg::{BoundaryCondition, Field, GridSpec, LaplacianOperator};

fn main() -> rd_pdhg::Result<()> {
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Neumann] {
        let spec = GridSpec::new(1.0, 64, bc)?;
        let op = LaplacianOperator::new(spec);
        let eig = op.eigenvalues();
        let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("{bc:?}: Laplacian eigenvalues in [{lo:.1}, {hi:.2e}]");

        // solve (I − h Lap)² x = r and check by applying the operator back
        let h = 1e-3;
        let sym = op.symbol(|l| (1.0 - h * l).powi(2))?;
        let r = Field::sample(spec, |x, y| (2.0 * x).cos() * (3.0 * y).sin() + x)?;
        let x = precond_solve(&op, &sym, &r)?;
        let once = x.zip_map(&lap_apply(&op, &x)?, |a, l| a - h * l);
        let twice = once.zip_map(&lap_apply(&op, &once)?, |a, l| a - h * l);
        let err = twice.zip_map(&r, |a, b| (a - b).abs()).max();
        println!("  preconditioner solve residual {err:.1e}");
    }

    let spec = GridSpec::with_origin(6.0, 64, BoundaryCondition::Neumann, (-3.0, -3.0))?;
    let bump = Field::sample(spec, |x, y| (-(x * x + y * y) * 4.0).exp())?;
    let k = quadratic_kernel_convolve(&spec, &bump)?;
    // for a centred bump, K * rho ≈ m (|x|² + second moment) / 2
    println!(
        "kernel: centre {:.4}, corner {:.4}, mass {:.4}",
        k.at(32, 32),
        k.at(0, 0),
        bump.total_mass()
    );
    Ok(())
}

//! Predicted PDHG rates against a measured one. For `A = I − h_t Lap` and
//! `G = I` the optimal step product is `η*/λ_max²` and the contraction factor
//! is `γ*`; the run below fits the rate from the residual history.

use rd_pdhg::models::{AllenCahn, AllenCahnParams};
use rd_pdhg::theory::{eta_star, fit_linear_rate, gamma_star, heat_condition_number, RatePrediction};
use rd_pdhg::{pdhg_step, BoundaryCondition, EquationModel, Field, GridSpec, PdhgParams, Preconditioner, SystemField};

fn main() -> rd_pdhg::Result<()> {
    println!("{:>10} {:>12} {:>12}", "kappa", "eta*", "gamma*");
    for kappa in [1.5, 2.0, 10.0, 100.0, 1e4] {
        println!("{kappa:>10} {:>12.8} {:>12.8}", eta_star(kappa)?, gamma_star(kappa)?);
    }
    println!("heat kappa for n = 128, h_t = 1e-3: {:.3}", heat_condition_number(1.0, 128, 1e-3)?);

    // pure heat: Allen-Cahn with the reaction switched off
    let n = 8;
    let spec = GridSpec::new(1.0, n, BoundaryCondition::Periodic)?;
    let model = AllenCahn::new(AllenCahnParams { a: 1.0, b: 0.0 }, spec)?;
    let h_t = 2e-3;
    // eigenvalues of A, leaving out the constant mode the iteration never sees
    let eigs: Vec<f64> = model
        .laplacian()
        .eigenvalues()
        .iter()
        .map(|l| 1.0 - h_t * l)
        .filter(|&a| a > 1.0 + 1e-12)
        .collect();
    let pred = RatePrediction::from_eigenvalues(&eigs)?;
    let tau = pred.tau_product_opt.sqrt();
    // about ten decades of decay, stopping short of round-off
    let iters = (1e-10f64.ln() / pred.gamma_star.ln()).ceil() as usize;
    let params = PdhgParams::new(tau, 1e-300)
        .with_max_iters(iters)
        .with_omega(1.0)
        .with_preconditioner(Preconditioner::Identity);
    let prev = SystemField::single(Field::sample(spec, |x, y| (6.0 * x).sin() + (4.0 * y).cos() + x * y)?);
    let sol = pdhg_step(&model, &prev, h_t, &params)?;
    println!(
        "heat on {n}x{n}: kappa {:.2}, predicted rate {:.4}, fitted {:.4}",
        pred.kappa,
        pred.gamma_star,
        fit_linear_rate(&sol.trace.residuals)?
    );
    Ok(())
}

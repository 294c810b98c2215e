//! Functionalized (sixth-order) Cahn-Hilliard from two bumps. The preconditioner
//! is the squared linear part, a cubic polynomial in the Laplacian symbol.
//!
//! `cargo run --release --example sixth_order [t_final] [n]`

use rd_pdhg::models::preset;
use rd_pdhg::stepper::{run_with, RunOptions};
use rd_pdhg::{GridSpec, Model, TimeSchedule};

fn main() -> rd_pdhg::Result<()> {
    let mut args = std::env::args().skip(1);
    let t_final: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let p = preset("sixth-order")?;
    let grid = GridSpec::new(p.grid.side_length(), n, p.grid.bc())?;
    let model = Model::new(&p.model, grid)?;
    let u0 = p.initial.sample(grid, 0)?;
    let schedule = TimeSchedule::fixed(p.schedule.h_t0, t_final);

    let mass0 = u0.component(0).total_mass();
    let report = run_with(&model, &u0, &schedule, &p.pdhg, &RunOptions::default(), |ev| {
        if ev.step % 50 == 0 {
            let u = ev.state.component(0);
            println!(
                "t = {:.3}  u in [{:.3}, {:.3}]  mass drift {:.1e}  {} iterations",
                ev.time,
                u.min(),
                u.max(),
                u.total_mass() - mass0,
                ev.iterations
            );
        }
    })?;
    let total: usize = report.pdhg_iters.iter().sum();
    println!("{} steps, {:.1} PDHG iterations per step", report.n_steps(), total as f64 / report.n_steps() as f64);
    Ok(())
}

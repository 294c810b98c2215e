//! Schnakenberg Turing patterns on a Neumann grid (DCT preconditioner). A
//! small bump on the homogeneous equilibrium grows into spots.
//!
//! `cargo run --release --example schnakenberg [t_final] [n]`

use rd_pdhg::models::preset;
use rd_pdhg::stepper::{run_with, RunOptions};
use rd_pdhg::{GridSpec, Model, TimeSchedule};

fn main() -> rd_pdhg::Result<()> {
    let mut args = std::env::args().skip(1);
    let t_final: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let p = preset("schnakenberg")?;
    let grid = GridSpec::new(p.grid.side_length(), n, p.grid.bc())?;
    let model = Model::new(&p.model, grid)?;
    let u0 = p.initial.sample(grid, 0)?;
    let schedule = TimeSchedule::fixed(1.0 / 2500.0, t_final);

    let report = run_with(&model, &u0, &schedule, &p.pdhg, &RunOptions::default(), |ev| {
        if ev.step % 125 == 0 {
            let u = ev.state.component(0);
            let v = ev.state.component(1);
            println!(
                "t = {:.3}  u in [{:.3}, {:.3}]  v in [{:.3}, {:.3}]",
                ev.time,
                u.min(),
                u.max(),
                v.min(),
                v.max()
            );
        }
    })?;
    let mut iters = report.pdhg_iters.clone();
    iters.sort_unstable();
    println!("median PDHG iterations {}, max {}", iters[iters.len() / 2], iters[iters.len() - 1]);
    Ok(())
}

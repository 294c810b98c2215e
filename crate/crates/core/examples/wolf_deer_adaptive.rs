//! Nonlocal predator-prey system with adaptive steps: a step that fails to
//! converge is retried with `h_t · η`, and the nominal step grows again once
//! steps converge quickly.
//!
//! Early on the deer are driven into a wall boundary layer that a coarse grid
//! cannot resolve, so keep `t_final` short unless `n` is large.
//!
//! `cargo run --release --example wolf_deer_adaptive [t_final] [n]`

use rd_pdhg::models::preset;
use rd_pdhg::stepper::{run_with, RunOptions};
use rd_pdhg::{GridSpec, Model, TimeSchedule};

fn main() -> rd_pdhg::Result<()> {
    let mut args = std::env::args().skip(1);
    let t_final: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.01);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let p = preset("wolf-deer")?;
    let grid = GridSpec::with_origin(p.grid.side_length(), n, p.grid.bc(), p.grid.origin())?;
    let model = Model::new(&p.model, grid)?;
    let u0 = p.initial.sample(grid, 0)?;
    let s = p.schedule;
    let schedule = TimeSchedule::adaptive(s.h_t0, t_final, s.eta, s.n_star_hi, s.n_star_lo);

    let report = run_with(&model, &u0, &schedule, &p.pdhg, &RunOptions::default(), |ev| {
        if ev.step > 0 && ev.step % 10 == 0 {
            println!(
                "step {:>4}  t = {:.5}  h_t = {:.2e}  {:>4} iterations  deer {:.3}  wolves {:.3}",
                ev.step,
                ev.time,
                ev.h_t,
                ev.iterations,
                ev.state.component(0).total_mass(),
                ev.state.component(1).total_mass()
            );
        }
    })?;
    let (lo, hi) = report
        .ht_history
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &h| (lo.min(h), hi.max(h)));
    println!(
        "{} steps, {} shrinks, h_t in [{lo:.2e}, {hi:.2e}]",
        report.n_steps(),
        report.shrink_events
    );
    Ok(())
}

//! Shrinking Allen-Cahn circle. Under curvature flow the zero level set has
//! radius `sqrt(r0² − 2 a t)`; this prints the measured radius next to it.
//!
//! `cargo run --release --example allen_cahn_circle [t_final]`

use rd_pdhg::models::preset;
use rd_pdhg::postproc::zero_level_radius;
use rd_pdhg::stepper::{run_with, RunOptions};
use rd_pdhg::{Model, TimeSchedule};

fn main() -> rd_pdhg::Result<()> {
    let t_final: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let p = preset("ac-circle")?;
    let model = Model::new(&p.model, p.grid)?;
    let u0 = p.initial.sample(p.grid, 0)?;
    let schedule = TimeSchedule::fixed(p.schedule.h_t0, t_final);

    println!("{:>8} {:>10} {:>10} {:>6}", "t", "radius", "law", "iters");
    let report = run_with(&model, &u0, &schedule, &p.pdhg, &RunOptions::default(), |ev| {
        if ev.step % 100 != 0 {
            return;
        }
        let law = (0.04 - 0.02 * ev.time).max(0.0).sqrt();
        match zero_level_radius(ev.state.component(0), (0.0, 0.0)) {
            Ok(r) => println!("{:>8.3} {r:>10.5} {law:>10.5} {:>6}", ev.time, ev.iterations),
            Err(_) => println!("{:>8.3} {:>10} {law:>10.5} {:>6}", ev.time, "gone", ev.iterations),
        }
    })?;
    let max_iters = report.pdhg_iters.iter().max().copied().unwrap_or(0);
    println!("{} steps, at most {max_iters} PDHG iterations per step, {:.1} s", report.n_steps(), report.wall_time);
    Ok(())
}

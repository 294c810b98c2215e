//! Builds a configuration in code, writes it as TOML and runs it through the
//! same pipeline as `rd-pdhg run`, leaving trace, snapshots and a summary.
//!
//! `cargo run --release --example run_config [output_dir]`

use rd_pdhg::cli::{execute, RunConfig};

fn main() -> rd_pdhg::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "run-config-output".into());
    let mut cfg = RunConfig::for_preset("ch-random")?;
    cfg.grid.n = Some(32);
    cfg.time.t_final = Some(1e-3);
    cfg.snapshot_times = Some(vec![0.0, 5e-4, 1e-3]);
    cfg.output.csv = true;
    cfg.output.energy = true;
    println!("{}", cfg.to_toml()?);

    let run = cfg.resolve()?;
    let summary = execute(&run, out.as_ref())?;
    println!(
        "{}: {} steps, {} PDHG iterations, mass drift {:.1e}; outputs in {out}",
        summary.status, summary.total_steps, summary.total_pdhg_iterations, summary.mass_drift[0]
    );
    Ok(())
}

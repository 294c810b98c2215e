//! Run configurations and the batch runner behind the `rd-pdhg` binary.
//!
//! A configuration is a TOML file naming a preset (or `"custom"`) plus
//! optional overrides:
//!
//! ```toml
//! preset = "ac-circle"
//! seed = 0
//! output_dir = "out"          # relative to the config file
//! snapshot_times = [0.0, 0.5, 1.0]
//!
//! [grid]
//! n = 64
//!
//! [time]
//! t_final = 1.5
//!
//! [pdhg]
//! delta = 1e-7
//! ```
//!
//! `[model]` and `[initial]` replace the preset's model and initial data
//! wholesale and are required for custom runs, as are `grid.side_length`,
//! `grid.n`, `time.t_final`, `time.h_t0`, `pdhg.tau_u`, `pdhg.tau_p` and
//! `pdhg.delta`.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, SystemField};
use crate::io::{write_field_csv, write_system_binary};
use crate::models::{preset, preset_names, InitialCondition, Model, ModelParams};
use crate::pdhg::{PdhgParams, Preconditioner, StepTrace};
use crate::postproc::{discrete_energy, zero_level_radius, FrontSeries};
use crate::stepper::{run_with, RunOptions, RunReport, TimeSchedule};
use crate::theory::RatePrediction;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::StepFailed { .. } | Error::ModelBlowUp { .. } => EXIT_SOLVER,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adaptive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_star_hi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_star_lo: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdhgOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preconditioner: Option<Preconditioner>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default = "yes")]
    pub binary: bool,
    /// Energy and mass after every step (gradient-flow models only).
    #[serde(default = "yes")]
    pub energy: bool,
    /// Track the zero level set along the +x ray from this point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front_center: Option<[f64; 2]>,
}

fn yes() -> bool {
    true
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            csv: true,
            binary: true,
            energy: true,
            front_center: None,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("output")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_times: Option<Vec<f64>>,
    /// Steps whose per-iteration residuals are written out.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace_steps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialCondition>,
    #[serde(default)]
    pub grid: GridOverrides,
    #[serde(default)]
    pub time: TimeOverrides,
    #[serde(default)]
    pub pdhg: PdhgOverrides,
    #[serde(default)]
    pub output: OutputOptions,
}

/// A configuration with every default filled in and validated.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub name: String,
    pub model: ModelParams,
    pub grid: GridSpec,
    pub schedule: TimeSchedule,
    pub pdhg: PdhgParams,
    pub initial: InitialCondition,
    pub snapshot_times: Vec<f64>,
    pub probes: Vec<(f64, f64)>,
    pub trace_steps: Vec<usize>,
    pub seed: u64,
    pub output: OutputOptions,
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing `{field}` (required for custom runs)"))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// The full configuration of a preset, with every field spelled out.
    pub fn for_preset(name: &str) -> Result<Self> {
        let p = preset(name)?;
        let s = p.schedule;
        let d = p.pdhg;
        Ok(Self {
            preset: p.name.to_string(),
            seed: 0,
            output_dir: PathBuf::from(format!("{}-output", p.name)),
            snapshot_times: Some(p.snapshot_times.clone()),
            trace_steps: Vec::new(),
            probes: p.probes.iter().map(|&(x, y)| [x, y]).collect(),
            model: Some(p.model.clone()),
            initial: Some(p.initial),
            grid: GridOverrides {
                side_length: Some(p.grid.side_length()),
                n: Some(p.grid.n_x()),
                origin: Some([p.grid.origin().0, p.grid.origin().1]),
            },
            time: TimeOverrides {
                t_final: Some(s.t_final),
                h_t0: Some(s.h_t0),
                adaptive: Some(s.adaptive),
                eta: Some(s.eta),
                n_star_hi: Some(s.n_star_hi),
                n_star_lo: Some(s.n_star_lo),
            },
            pdhg: PdhgOverrides {
                tau_u: Some(d.tau_u),
                tau_p: Some(d.tau_p),
                omega: Some(d.omega),
                delta: Some(d.delta),
                max_iters: Some(d.max_iters),
                divergence_factor: Some(d.divergence_factor),
                preconditioner: Some(d.preconditioner),
            },
            output: OutputOptions {
                front_center: p.front_center.map(|(x, y)| [x, y]),
                ..Default::default()
            },
        })
    }

    pub fn resolve(&self) -> Result<ResolvedRun> {
        let custom = self.preset == "custom";
        let base = if custom { None } else { Some(preset(&self.preset)?) };

        let model = match (&self.model, &base) {
            (Some(m), _) => m.clone(),
            (None, Some(b)) => b.model.clone(),
            (None, None) => return Err(missing("model")),
        };
        model.validate()?;
        let initial = match (self.initial, &base) {
            (Some(i), _) => i,
            (None, Some(b)) => b.initial,
            (None, None) => return Err(missing("initial")),
        };

        let g = &self.grid;
        let side = g
            .side_length
            .or(base.as_ref().map(|b| b.grid.side_length()))
            .ok_or_else(|| missing("grid.side_length"))?;
        let n = g
            .n
            .or(base.as_ref().map(|b| b.grid.n_x()))
            .ok_or_else(|| missing("grid.n"))?;
        let origin = g
            .origin
            .map(|[x, y]| (x, y))
            .or(base.as_ref().map(|b| b.grid.origin()))
            .unwrap_or((0.0, 0.0));
        let grid = GridSpec::with_origin(side, n, model.bc(), origin)?;

        let t = &self.time;
        let bs = base.as_ref().map(|b| b.schedule);
        let fallback = TimeSchedule::fixed(1.0, 1.0);
        let schedule = TimeSchedule {
            t_final: t
                .t_final
                .or(bs.map(|s| s.t_final))
                .ok_or_else(|| missing("time.t_final"))?,
            h_t0: t
                .h_t0
                .or(bs.map(|s| s.h_t0))
                .ok_or_else(|| missing("time.h_t0"))?,
            adaptive: t.adaptive.or(bs.map(|s| s.adaptive)).unwrap_or(false),
            eta: t.eta.or(bs.map(|s| s.eta)).unwrap_or(fallback.eta),
            n_star_hi: t.n_star_hi.or(bs.map(|s| s.n_star_hi)).unwrap_or(fallback.n_star_hi),
            n_star_lo: t.n_star_lo.or(bs.map(|s| s.n_star_lo)).unwrap_or(fallback.n_star_lo),
        };
        schedule.validate()?;

        let q = &self.pdhg;
        let bp = base.as_ref().map(|b| b.pdhg);
        let dflt = PdhgParams::new(1.0, 1.0);
        let pdhg = PdhgParams {
            tau_u: q.tau_u.or(bp.map(|p| p.tau_u)).ok_or_else(|| missing("pdhg.tau_u"))?,
            tau_p: q.tau_p.or(bp.map(|p| p.tau_p)).ok_or_else(|| missing("pdhg.tau_p"))?,
            delta: q.delta.or(bp.map(|p| p.delta)).ok_or_else(|| missing("pdhg.delta"))?,
            omega: q.omega.or(bp.map(|p| p.omega)).unwrap_or(dflt.omega),
            max_iters: q.max_iters.or(bp.map(|p| p.max_iters)).unwrap_or(dflt.max_iters),
            divergence_factor: q
                .divergence_factor
                .or(bp.map(|p| p.divergence_factor))
                .unwrap_or(dflt.divergence_factor),
            preconditioner: q
                .preconditioner
                .or(bp.map(|p| p.preconditioner))
                .unwrap_or_default(),
        };
        pdhg.validate()?;

        let snapshot_times = match &self.snapshot_times {
            Some(v) => v.clone(),
            None => (0..=10).map(|k| schedule.t_final * k as f64 / 10.0).collect(),
        };
        if let Some(bad) = snapshot_times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::param("snapshot_times", format!("invalid time {bad}")));
        }
        let probes = self.probes.iter().map(|&[x, y]| (x, y)).collect();
        let mut output = self.output.clone();
        if output.front_center.is_none() && self.model.is_none() {
            output.front_center = base.as_ref().and_then(|b| b.front_center).map(|(x, y)| [x, y]);
        }

        Ok(ResolvedRun {
            name: self.preset.clone(),
            model,
            grid,
            schedule,
            pdhg,
            initial,
            snapshot_times,
            probes,
            trace_steps: self.trace_steps.clone(),
            seed: self.seed,
            output,
        })
    }
}

/// Machine-readable summary of a run, written as `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub preset: String,
    pub model: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub final_time: f64,
    pub total_steps: usize,
    pub total_pdhg_iterations: usize,
    pub max_pdhg_iterations: usize,
    pub shrink_events: usize,
    pub retries: usize,
    pub min_h_t: f64,
    pub max_h_t: f64,
    pub mass_initial: Vec<f64>,
    pub mass_final: Vec<f64>,
    pub mass_drift: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_vanished_at: Option<f64>,
    pub wall_time: f64,
    pub seed: u64,
}

struct TraceRow {
    step: usize,
    time: f64,
    h_t: f64,
    iterations: usize,
    residual: f64,
}

fn masses(u: &SystemField) -> Vec<f64> {
    u.components().iter().map(Field::total_mass).collect()
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_trace_csv(dir: &Path, rows: &[TraceRow]) -> Result<()> {
    let mut w = create(dir, "trace.csv")?;
    writeln!(w, "step,time,h_t,pdhg_iters,final_residual")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.step, r.time, r.h_t, r.iterations, r.residual)?;
    }
    w.flush()?;
    Ok(())
}

fn write_iteration_trace(dir: &Path, name: &str, trace: &StepTrace) -> Result<()> {
    let mut w = create(dir, name)?;
    writeln!(w, "iteration,residual")?;
    for (k, r) in trace.residuals.iter().enumerate() {
        writeln!(w, "{k},{r}")?;
    }
    w.flush()?;
    Ok(())
}

fn write_snapshots(dir: &Path, report: &RunReport, output: &OutputOptions) -> Result<()> {
    let mut index = create(dir, "snapshots.csv")?;
    writeln!(index, "index,requested,time")?;
    for (k, s) in report.snapshots.iter().enumerate() {
        writeln!(index, "{k},{},{}", s.requested, s.time)?;
        if output.csv {
            for (c, f) in s.state.components().iter().enumerate() {
                let mut w = create(dir, &format!("snapshot_{k:03}_c{c}.csv"))?;
                write_field_csv(f, &mut w)?;
                w.flush()?;
            }
        }
        if output.binary {
            let mut w = create(dir, &format!("snapshot_{k:03}.rdf"))?;
            write_system_binary(&s.state, &mut w)?;
            w.flush()?;
        }
    }
    index.flush()?;
    Ok(())
}

/// Runs a resolved configuration, writing every output into `dir`.
///
/// On solver failure the partial trace, the failing step's residual history,
/// the last accepted state and a summary with `status = "failed"` are still written before the error
/// is returned.
pub fn execute(run: &ResolvedRun, dir: &Path) -> Result<RunSummary> {
    let model = Model::new(&run.model, run.grid)?;
    let u0 = run.initial.sample(run.grid, run.seed)?;
    if u0.n_components() != run.model.n_components() {
        return Err(Error::Config(format!(
            "initial data has {} components but the model needs {}",
            u0.n_components(),
            run.model.n_components()
        )));
    }
    fs::create_dir_all(dir)?;

    let energy_coefs = run.model.energy_coefficients().filter(|_| run.output.energy);
    let front_center = run.output.front_center.map(|[x, y]| (x, y));
    let mut rows = Vec::new();
    let mut energy_rows: Vec<(f64, f64, f64)> = Vec::new();
    let mut front_times = Vec::new();
    let mut front_radii = Vec::new();
    let mut vanished_at = None;
    let mut last_state = None;

    let options = RunOptions {
        snapshot_times: run.snapshot_times.clone(),
        probes: run.probes.clone(),
        trace_steps: run.trace_steps.clone(),
    };
    let result = run_with(&model, &u0, &run.schedule, &run.pdhg, &options, |ev| {
        rows.push(TraceRow {
            step: ev.step,
            time: ev.time,
            h_t: ev.h_t,
            iterations: ev.iterations,
            residual: ev.final_residual,
        });
        last_state = Some(ev.state.clone());
        if let Some((a, b)) = energy_coefs {
            let f = ev.state.component(0);
            energy_rows.push((ev.time, discrete_energy(f, a, b), f.total_mass()));
        }
        if let (Some(c), None) = (front_center, vanished_at) {
            match zero_level_radius(ev.state.component(0), c) {
                Ok(r) => {
                    front_times.push(ev.time);
                    front_radii.push(r);
                }
                Err(_) => vanished_at = Some(ev.time),
            }
        }
    });

    write_trace_csv(dir, &rows)?;
    if energy_coefs.is_some() {
        let mut w = create(dir, "energy.csv")?;
        writeln!(w, "time,energy,mass")?;
        for (t, e, m) in &energy_rows {
            writeln!(w, "{t},{e},{m}")?;
        }
        w.flush()?;
    }
    if front_center.is_some() {
        let series = FrontSeries::from_samples(front_times, front_radii)?;
        let mut w = create(dir, "front.csv")?;
        writeln!(w, "time,radius,speed")?;
        for k in 0..series.len() {
            writeln!(w, "{},{},{}", series.times[k], series.radii[k], series.speeds[k])?;
        }
        w.flush()?;
    }

    let mass_initial = masses(&u0);
    let mut summary = RunSummary {
        preset: run.name.clone(),
        model: model_name(&run.model).to_string(),
        status: "ok".into(),
        error: None,
        final_time: 0.0,
        total_steps: 0,
        total_pdhg_iterations: 0,
        max_pdhg_iterations: 0,
        shrink_events: 0,
        retries: 0,
        min_h_t: 0.0,
        max_h_t: 0.0,
        mass_initial: mass_initial.clone(),
        mass_final: mass_initial.clone(),
        mass_drift: vec![0.0; mass_initial.len()],
        front_vanished_at: vanished_at,
        wall_time: 0.0,
        seed: run.seed,
    };
    let steps = &rows[1..];
    summary.total_steps = steps.len();
    summary.total_pdhg_iterations = steps.iter().map(|r| r.iterations).sum();
    summary.max_pdhg_iterations = steps.iter().map(|r| r.iterations).max().unwrap_or(0);
    summary.final_time = rows.last().map(|r| r.time).unwrap_or(0.0);
    summary.min_h_t = steps.iter().map(|r| r.h_t).fold(f64::INFINITY, f64::min);
    summary.max_h_t = steps.iter().map(|r| r.h_t).fold(0.0, f64::max);
    if steps.is_empty() {
        summary.min_h_t = 0.0;
    }

    match result {
        Ok(report) => {
            write_snapshots(dir, &report, &run.output)?;
            for (step, trace) in &report.iteration_traces {
                write_iteration_trace(dir, &format!("iterations_step_{step}.csv"), trace)?;
            }
            if !report.probes.is_empty() {
                let mut w = create(dir, "probes.csv")?;
                let header: Vec<String> = (0..report.probes.len())
                    .flat_map(|p| {
                        (0..report.probes[p].values.len()).map(move |c| format!("probe{p}_c{c}"))
                    })
                    .collect();
                writeln!(w, "time,{}", header.join(","))?;
                let times = &report.probes[0].times;
                for k in 0..times.len() {
                    let mut line = format!("{}", times[k]);
                    for p in &report.probes {
                        for c in &p.values {
                            let _ = write!(line, ",{}", c[k]);
                        }
                    }
                    writeln!(w, "{line}")?;
                }
                w.flush()?;
            }
            summary.mass_final = masses(&report.final_state);
            summary.mass_drift = summary
                .mass_final
                .iter()
                .zip(&summary.mass_initial)
                .map(|(a, b)| a - b)
                .collect();
            summary.shrink_events = report.shrink_events;
            summary.retries = report.retries;
            summary.wall_time = report.wall_time;
            write_summary(dir, &summary)?;
            Ok(summary)
        }
        Err(err) => {
            if let Error::StepFailed { trace, .. } = &err {
                write_iteration_trace(dir, "failed_step_trace.csv", trace)?;
            }
            if let Some(state) = &last_state {
                for (c, f) in state.components().iter().enumerate() {
                    let mut w = create(dir, &format!("last_state_c{c}.csv"))?;
                    write_field_csv(f, &mut w)?;
                    w.flush()?;
                }
            }
            summary.status = "failed".into();
            summary.error = Some(err.to_string());
            write_summary(dir, &summary)?;
            Err(err)
        }
    }
}

fn model_name(p: &ModelParams) -> &'static str {
    match p {
        ModelParams::AllenCahn(_) => "allen-cahn",
        ModelParams::CahnHilliard(_) => "cahn-hilliard",
        ModelParams::SixthOrder(_) => "sixth-order",
        ModelParams::Schnakenberg(_) => "schnakenberg",
        ModelParams::WolfDeer(_) => "wolf-deer",
    }
}

fn write_summary(dir: &Path, summary: &RunSummary) -> Result<()> {
    let mut w = create(dir, "summary.json")?;
    serde_json::to_writer_pretty(&mut w, summary).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Loads, validates and executes a config file. Relative output directories
/// are taken relative to the file's directory.
pub fn run_config_file(path: &Path) -> Result<(PathBuf, RunSummary)> {
    let config = RunConfig::load(path)?;
    let run = config.resolve()?;
    let dir = if config.output_dir.is_absolute() {
        config.output_dir.clone()
    } else {
        path.parent().unwrap_or(Path::new(".")).join(&config.output_dir)
    };
    let summary = execute(&run, &dir)?;
    Ok((dir, summary))
}

pub fn run_command(path: &Path) -> i32 {
    match run_config_file(path) {
        Ok((dir, s)) => {
            println!(
                "{}: t = {} after {} steps ({} PDHG iterations) -> {}",
                s.preset,
                s.final_time,
                s.total_steps,
                s.total_pdhg_iterations,
                dir.display()
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Table of optimal parameters, one row per condition number.
pub fn theory_table(kappas: &[f64], lambda_max: f64) -> Result<String> {
    if kappas.is_empty() {
        return Err(Error::param("kappa", "give at least one condition number"));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>14}  {:>18}  {:>18}  {:>18}",
        "kappa", "eta_star", "gamma_star", "tau_product_opt"
    );
    for &k in kappas {
        let p = RatePrediction::new(k, lambda_max)?;
        let _ = writeln!(
            out,
            "{:>14}  {:>18.15}  {:>18.15}  {:>18.12e}",
            p.kappa, p.eta_star, p.gamma_star, p.tau_product_opt
        );
    }
    Ok(out)
}

pub fn theory_command(kappas: &[f64], lambda_max: f64) -> i32 {
    match theory_table(kappas, lambda_max) {
        Ok(t) => {
            print!("{t}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Every preset as a commented, complete configuration. With `name`, only that one.
pub fn presets_listing(name: Option<&str>) -> Result<String> {
    let names: Vec<&str> = match name {
        Some(n) => vec![preset(n)?.name],
        None => preset_names().to_vec(),
    };
    let mut out = String::new();
    for (k, n) in names.iter().enumerate() {
        let p = preset(n)?;
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# {}: {}", p.name, p.description);
        out.push_str(&RunConfig::for_preset(n)?.to_toml()?);
    }
    Ok(out)
}

pub fn presets_command(name: Option<&str>) -> i32 {
    match presets_listing(name) {
        Ok(t) => {
            print!("{t}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_round_trips() {
        for name in preset_names() {
            let c = RunConfig::for_preset(name).unwrap();
            let text = c.to_toml().unwrap();
            let back = RunConfig::from_toml(&text).unwrap();
            assert_eq!(back, c, "{name}\n{text}");
            back.resolve().unwrap();
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_toml("preset = \"ac-circle\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = RunConfig::from_toml("preset = \"ac-circle\"\n[pdhg]\ntau = 1\n").unwrap_err();
        assert!(err.to_string().contains("tau"), "{err}");
    }

    #[test]
    fn negative_tau_names_field() {
        let c = RunConfig::from_toml("preset = \"ac-circle\"\n[pdhg]\ntau_u = -1.0\n").unwrap();
        let err = c.resolve().unwrap_err();
        assert_eq!(exit_code(&err), EXIT_VALIDATION);
        assert!(err.to_string().contains("tau_u"), "{err}");
    }

    #[test]
    fn custom_requires_fields() {
        let c = RunConfig::from_toml(
            "preset = \"custom\"\n[model]\nkind = \"allen-cahn\"\na = 0.01\nb = 100.0\n",
        )
        .unwrap();
        let err = c.resolve().unwrap_err();
        assert!(err.to_string().contains("initial"), "{err}");
    }

    #[test]
    fn default_snapshot_cadence() {
        let c = RunConfig::from_toml("preset = \"ac-two-disks\"\n").unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.snapshot_times.len(), 11);
        assert_eq!(r.snapshot_times[10], 0.5);
    }

    #[test]
    fn theory_rows() {
        let t = theory_table(&[1.0, 100.0], 1.0).unwrap();
        assert_eq!(t.lines().count(), 3);
        assert!(theory_table(&[], 1.0).is_err());
        assert!(theory_table(&[0.5], 1.0).is_err());
    }

    #[test]
    fn listing_mentions_parameters() {
        let t = presets_listing(None).unwrap();
        for n in preset_names() {
            assert!(t.contains(&format!("preset = \"{n}\"")), "{n}");
        }
        let s = presets_listing(Some("schnakenberg")).unwrap();
        assert!(s.contains("kappa = 100.0") && s.contains("a = 0.1305"), "{s}");
        let w = presets_listing(Some("wolf-deer")).unwrap();
        assert!(w.contains("d = 0.5") && w.contains("b = 35.0") && w.contains("c = 2.5"), "{w}");
    }
}

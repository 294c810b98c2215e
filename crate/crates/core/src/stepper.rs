//! Outer time loop: one implicit step per iteration, each solved by
//! [`pdhg_step`], with optional adaptive control of `h_t` driven by the
//! inner iteration count.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Outcome, Result};
use crate::grid::SystemField;
use crate::models::EquationModel;
use crate::pdhg::{pdhg_step, PdhgParams, StepSolution, StepTrace};

/// Number of `η` shrinkages below `h_t0` before a step is declared unsolvable.
pub const MAX_SHRINKS: i32 = 20;

// A remaining interval within this relative margin of h_t is taken in one step.
const LANDING_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSchedule {
    pub t_final: f64,
    /// Initial step size, and the cap for adaptive runs.
    pub h_t0: f64,
    #[serde(default)]
    pub adaptive: bool,
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Shrink `h_t` after a step that needed more than this many iterations.
    #[serde(default = "default_hi")]
    pub n_star_hi: usize,
    /// Grow `h_t` after a step that needed fewer than this many iterations.
    #[serde(default = "default_lo")]
    pub n_star_lo: usize,
}

fn default_eta() -> f64 {
    0.75
}

fn default_hi() -> usize {
    100
}

fn default_lo() -> usize {
    20
}

impl TimeSchedule {
    pub fn fixed(h_t: f64, t_final: f64) -> Self {
        Self {
            t_final,
            h_t0: h_t,
            adaptive: false,
            eta: default_eta(),
            n_star_hi: default_hi(),
            n_star_lo: default_lo(),
        }
    }

    pub fn adaptive(h_t0: f64, t_final: f64, eta: f64, n_star_hi: usize, n_star_lo: usize) -> Self {
        Self {
            t_final,
            h_t0,
            adaptive: true,
            eta,
            n_star_hi,
            n_star_lo,
        }
    }

    /// Smallest step an adaptive run may use.
    pub fn h_min(&self) -> f64 {
        self.h_t0 * self.eta.powi(MAX_SHRINKS)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::param("t_final", "must be positive and finite"));
        }
        if !(self.h_t0.is_finite() && self.h_t0 > 0.0) {
            return Err(Error::param("h_t0", "must be positive and finite"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1)"));
        }
        if !(self.n_star_hi > self.n_star_lo && self.n_star_lo > 0) {
            return Err(Error::param("n_star_hi", "need n_star_hi > n_star_lo > 0"));
        }
        Ok(())
    }
}

/// Step size for the next step after one that took `iterations` PDHG iterations.
pub fn adapt_ht(h_t: f64, iterations: usize, schedule: &TimeSchedule) -> f64 {
    if iterations > schedule.n_star_hi {
        schedule.eta * h_t
    } else if iterations < schedule.n_star_lo {
        let grown = h_t / schedule.eta;
        if grown <= schedule.h_t0 {
            grown
        } else {
            h_t
        }
    } else {
        h_t
    }
}

/// A committed step together with the step size that produced it.
#[derive(Debug, Clone)]
pub struct Attempt {
    pub solution: StepSolution,
    pub h_used: f64,
    pub shrinks: usize,
}

/// Tries a step at `h_t`, multiplying by `η` after each failure. Only a
/// converged step is returned.
pub fn retry_with_shrink<M: EquationModel + ?Sized>(
    model: &M,
    u_prev: &SystemField,
    h_t: f64,
    schedule: &TimeSchedule,
    pdhg: &PdhgParams,
) -> Result<Attempt> {
    let floor = schedule.h_min() * (1.0 - 1e-12);
    let mut h = h_t;
    let mut shrinks = 0;
    loop {
        let solution = pdhg_step(model, u_prev, h, pdhg)?;
        if solution.outcome == Outcome::Converged {
            return Ok(Attempt {
                solution,
                h_used: h,
                shrinks,
            });
        }
        let next = h * schedule.eta;
        if !schedule.adaptive || next < floor || shrinks >= MAX_SHRINKS as usize {
            return Err(Error::StepFailed {
                time: f64::NAN,
                h_t: h,
                outcome: solution.outcome,
                iterations: solution.iterations,
                trace: Box::new(solution.trace),
            });
        }
        h = next;
        shrinks += 1;
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub snapshot_times: Vec<f64>,
    /// Points whose nearest-node values are recorded after every step.
    pub probes: Vec<(f64, f64)>,
    /// Steps (1-based) whose full per-iteration residual history is kept.
    pub trace_steps: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub requested: f64,
    pub time: f64,
    pub state: SystemField,
}

/// Values at one grid node over time, `values[c][k]` for component `c` at `times[k]`.
#[derive(Debug, Clone)]
pub struct ProbeSeries {
    pub point: (f64, f64),
    pub node: (usize, usize),
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl ProbeSeries {
    fn push(&mut self, t: f64, u: &SystemField) {
        let (i, j) = self.node;
        self.times.push(t);
        for (c, f) in u.components().iter().enumerate() {
            self.values[c].push(f.at(i, j));
        }
    }
}

/// What the observer sees after each accepted step (and once for the initial state, as step 0).
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub step: usize,
    pub time: f64,
    pub h_t: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub state: &'a SystemField,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Accepted times, one per step (the initial time 0 is not included).
    pub times: Vec<f64>,
    pub ht_history: Vec<f64>,
    pub pdhg_iters: Vec<usize>,
    pub final_residuals: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub probes: Vec<ProbeSeries>,
    pub iteration_traces: Vec<(usize, StepTrace)>,
    /// Count of step-size reductions, both between steps and on retry.
    pub shrink_events: usize,
    /// Failed PDHG attempts that were retried at a smaller step.
    pub retries: usize,
    pub final_state: SystemField,
    pub wall_time: f64,
}

impl RunReport {
    pub fn n_steps(&self) -> usize {
        self.times.len()
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}

/// Runs `u0` to `schedule.t_final`, snapshotting at the first accepted time at
/// or after each entry of `snapshot_times`.
pub fn run<M: EquationModel + ?Sized>(
    model: &M,
    u0: &SystemField,
    schedule: &TimeSchedule,
    pdhg: &PdhgParams,
    snapshot_times: &[f64],
) -> Result<RunReport> {
    let options = RunOptions {
        snapshot_times: snapshot_times.to_vec(),
        ..Default::default()
    };
    run_with(model, u0, schedule, pdhg, &options, |_| {})
}

pub fn run_with<M, F>(
    model: &M,
    u0: &SystemField,
    schedule: &TimeSchedule,
    pdhg: &PdhgParams,
    options: &RunOptions,
    mut observer: F,
) -> Result<RunReport>
where
    M: EquationModel + ?Sized,
    F: FnMut(&StepEvent<'_>),
{
    schedule.validate()?;
    pdhg.validate()?;
    if u0.n_components() != model.n_components() {
        return Err(Error::ShapeMismatch(format!(
            "model has {} components, initial state has {}",
            model.n_components(),
            u0.n_components()
        )));
    }
    model.spec().ensure_same(u0.spec())?;
    if !u0.is_finite() {
        return Err(Error::param("initial state", "contains non-finite values"));
    }
    let started = Instant::now();
    let t_final = schedule.t_final;
    let snap_tol = 1e-12 * t_final.max(1.0);

    let mut requests: Vec<f64> = options.snapshot_times.clone();
    if requests.iter().any(|t| !t.is_finite()) {
        return Err(Error::param("snapshot_times", "must be finite"));
    }
    requests.sort_by(f64::total_cmp);
    let mut pending = requests.into_iter().peekable();
    let mut snapshots = Vec::new();

    let spec = *model.spec();
    let mut probes: Vec<ProbeSeries> = options
        .probes
        .iter()
        .map(|&(x, y)| ProbeSeries {
            point: (x, y),
            node: spec.nearest_node(x, y),
            times: Vec::new(),
            values: vec![Vec::new(); model.n_components()],
        })
        .collect();

    let mut u = u0.clone();
    let mut t = 0.0;
    for p in &mut probes {
        p.push(t, &u);
    }
    while let Some(&req) = pending.peek() {
        if req > snap_tol {
            break;
        }
        snapshots.push(Snapshot {
            requested: req,
            time: t,
            state: u.clone(),
        });
        pending.next();
    }
    observer(&StepEvent {
        step: 0,
        time: t,
        h_t: 0.0,
        iterations: 0,
        final_residual: 0.0,
        state: &u,
    });

    let mut report = RunReport {
        times: Vec::new(),
        ht_history: Vec::new(),
        pdhg_iters: Vec::new(),
        final_residuals: Vec::new(),
        snapshots: Vec::new(),
        probes: Vec::new(),
        iteration_traces: Vec::new(),
        shrink_events: 0,
        retries: 0,
        final_state: u0.clone(),
        wall_time: 0.0,
    };

    let mut h_nominal = schedule.h_t0;
    let mut step = 0usize;
    while t < t_final {
        let remaining = t_final - t;
        let landing = remaining <= h_nominal * (1.0 + LANDING_SLACK);
        let h_try = if landing { remaining } else { h_nominal };
        let attempt = retry_with_shrink(model, &u, h_try, schedule, pdhg).map_err(|e| match e {
            Error::StepFailed {
                h_t,
                outcome,
                iterations,
                trace,
                ..
            } => Error::StepFailed {
                time: t,
                h_t,
                outcome,
                iterations,
                trace,
            },
            other => other,
        })?;
        step += 1;
        let Attempt {
            solution,
            h_used,
            shrinks,
        } = attempt;
        report.retries += shrinks;
        report.shrink_events += shrinks;
        let finished = landing && shrinks == 0;
        t = if finished { t_final } else { t + h_used };
        u = solution.u;

        report.times.push(t);
        report.ht_history.push(h_used);
        report.pdhg_iters.push(solution.iterations);
        report.final_residuals.push(solution.final_residual);
        if options.trace_steps.contains(&step) {
            report.iteration_traces.push((step, solution.trace));
        }
        for p in &mut probes {
            p.push(t, &u);
        }
        while let Some(&req) = pending.peek() {
            if req > t + snap_tol {
                break;
            }
            snapshots.push(Snapshot {
                requested: req,
                time: t,
                state: u.clone(),
            });
            pending.next();
        }
        observer(&StepEvent {
            step,
            time: t,
            h_t: h_used,
            iterations: solution.iterations,
            final_residual: solution.final_residual,
            state: &u,
        });

        if schedule.adaptive {
            // a shortened landing step does not change the nominal size
            let base = if landing && shrinks == 0 { h_nominal } else { h_used };
            let next = adapt_ht(base, solution.iterations, schedule);
            if next < base {
                report.shrink_events += 1;
            }
            h_nominal = next.max(schedule.h_min());
        }
    }

    report.snapshots = snapshots;
    report.probes = probes;
    report.final_state = u;
    report.wall_time = started.elapsed().as_secs_f64();
    Ok(report)
}

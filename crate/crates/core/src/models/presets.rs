//! Reference configurations and their initial data.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    AllenCahnParams, CahnHilliardParams, ModelParams, SchnakenbergParams, SixthOrderParams,
    WolfDeerParams,
};
use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec, SystemField};
use crate::pdhg::PdhgParams;
use crate::stepper::TimeSchedule;

/// Initial data families used by the presets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `2χ_B − 1` for the disk `B` of radius `radius` about `center`.
    Disk { center: (f64, f64), radius: f64 },
    /// `2χ_E − 1` for the symmetric difference of two disks.
    TwoDisks {
        first: (f64, f64),
        second: (f64, f64),
        radius: f64,
    },
    /// `−1` plus a mollified indicator of seven fixed circles on `[0, 2π]²`.
    SevenCircles,
    /// Smooth trigonometric perturbation of the mixed state.
    Sinusoidal,
    /// i.i.d. uniform values in `[−amplitude, amplitude]`.
    UniformNoise { amplitude: f64 },
    /// `2e^{sin x + sin y − 2} + 2.2e^{−sin x − sin y − 2} − 1`.
    TwoBumps,
    /// Schnakenberg equilibrium with a small Gaussian bump in `u`.
    PerturbedEquilibrium { a: f64, b: f64 },
    /// Two smoothed disks of radius 1 about `(±1.5, ±1.5)`.
    PredatorPrey,
}

const SEVEN_CIRCLES: [(f64, f64, f64); 7] = [
    (PI / 2.0, PI / 2.0, PI / 5.0),
    (PI / 4.0, 3.0 * PI / 4.0, 2.0 * PI / 15.0),
    (PI / 2.0, 5.0 * PI / 4.0, PI / 15.0),
    (PI, PI / 4.0, PI / 10.0),
    (3.0 * PI / 2.0, PI / 4.0, PI / 10.0),
    (PI, PI, PI / 4.0),
    (3.0 * PI / 2.0, 3.0 * PI / 2.0, PI / 4.0),
];

fn mollifier(s: f64) -> f64 {
    const EPS: f64 = 0.1;
    if s < 0.0 {
        2.0 * (-(EPS * EPS) / (s * s)).exp()
    } else {
        0.0
    }
}

fn smoothed_disk(x: f64, y: f64, mu: (f64, f64)) -> f64 {
    const R: f64 = 1.0;
    const EPS: f64 = 0.1;
    let d2 = (x - mu.0).powi(2) + (y - mu.1).powi(2);
    (PI / 2.0 + ((R * R - d2) / EPS).atan()) / PI
}

impl InitialCondition {
    /// Samples the initial state on `spec`. Only [`InitialCondition::UniformNoise`] uses `seed`.
    pub fn sample(&self, spec: GridSpec, seed: u64) -> Result<SystemField> {
        let indicator = |inside: bool| if inside { 1.0 } else { -1.0 };
        match *self {
            InitialCondition::Disk { center, radius } => Field::sample(spec, |x, y| {
                indicator((x - center.0).powi(2) + (y - center.1).powi(2) < radius * radius)
            })
            .map(SystemField::single),
            InitialCondition::TwoDisks {
                first,
                second,
                radius,
            } => Field::sample(spec, |x, y| {
                let r2 = radius * radius;
                let in1 = (x - first.0).powi(2) + (y - first.1).powi(2) < r2;
                let in2 = (x - second.0).powi(2) + (y - second.1).powi(2) < r2;
                indicator(in1 != in2)
            })
            .map(SystemField::single),
            InitialCondition::SevenCircles => Field::sample(spec, |x, y| {
                -1.0 + SEVEN_CIRCLES
                    .iter()
                    .map(|&(cx, cy, r)| mollifier(((x - cx).powi(2) + (y - cy).powi(2)).sqrt() - r))
                    .sum::<f64>()
            })
            .map(SystemField::single),
            InitialCondition::Sinusoidal => Field::sample(spec, |x, y| {
                0.05 * ((3.0 * x).cos() * (4.0 * y).cos()
                    + ((4.0 * x).cos() * (3.0 * y).cos()).powi(2)
                    + (x - 5.0 * y).cos() * (2.0 * x - y).cos())
            })
            .map(SystemField::single),
            InitialCondition::UniformNoise { amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let data = (0..spec.len())
                    .map(|_| rng.random_range(-amplitude..=amplitude))
                    .collect();
                Field::from_vec(spec, data).map(SystemField::single)
            }
            InitialCondition::TwoBumps => Field::sample(spec, |x, y| {
                let s = x.sin() + y.sin();
                2.0 * (s - 2.0).exp() + 2.2 * (-s - 2.0).exp() - 1.0
            })
            .map(SystemField::single),
            InitialCondition::PerturbedEquilibrium { a, b } => {
                let u = Field::sample(spec, |x, y| {
                    a + b + 1e-3 * (-100.0 * ((x - 1.0 / 3.0).powi(2) + (y - 0.5).powi(2))).exp()
                })?;
                let v = Field::constant(spec, b / (a + b).powi(2));
                SystemField::new(vec![u, v])
            }
            InitialCondition::PredatorPrey => {
                let r1 = Field::sample(spec, |x, y| smoothed_disk(x, y, (1.5, 1.5)))?;
                let r2 = Field::sample(spec, |x, y| smoothed_disk(x, y, (-1.5, -1.5)))?;
                SystemField::new(vec![r1, r2])
            }
        }
    }
}

/// A named reference configuration.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub model: ModelParams,
    pub grid: GridSpec,
    pub schedule: TimeSchedule,
    pub pdhg: PdhgParams,
    pub initial: InitialCondition,
    pub snapshot_times: Vec<f64>,
    /// Points worth recording a time series at.
    pub probes: Vec<(f64, f64)>,
    /// Center of a circular front to track, if any.
    pub front_center: Option<(f64, f64)>,
}

const NAMES: [&str; 8] = [
    "ac-circle",
    "ac-two-disks",
    "ch-seven-circles",
    "ch-sinusoidal",
    "ch-random",
    "sixth-order",
    "schnakenberg",
    "wolf-deer",
];

pub fn preset_names() -> &'static [&'static str] {
    &NAMES
}

fn unknown(name: &str) -> Error {
    Error::UnknownPreset {
        name: name.to_string(),
        valid: NAMES.join(", "),
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    use BoundaryCondition::{Neumann, Periodic};
    let two_pi = 2.0 * PI;
    let ac = ModelParams::AllenCahn(AllenCahnParams { a: 0.01, b: 100.0 });
    let p = match name {
        "ac-circle" => Preset {
            name: "ac-circle",
            description: "Allen-Cahn shrinking circle; zero level set follows r(t) = sqrt(0.04 - 0.02 t) and vanishes near t = 2",
            model: ac,
            grid: GridSpec::with_origin(0.5, 100, Periodic, (-0.25, -0.25))?,
            schedule: TimeSchedule::fixed(1e-3, 3.0),
            pdhg: PdhgParams::new(0.5, 1e-7),
            initial: InitialCondition::Disk {
                center: (0.0, 0.0),
                radius: 0.2,
            },
            snapshot_times: vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0],
            probes: vec![(0.0, 0.0)],
            front_center: Some((0.0, 0.0)),
        },
        "ac-two-disks" => Preset {
            name: "ac-two-disks",
            description: "Allen-Cahn from the symmetric difference of two overlapping disks",
            model: ac,
            grid: GridSpec::new(0.5, 100, Periodic)?,
            schedule: TimeSchedule::fixed(1e-3, 0.5),
            pdhg: PdhgParams::new(0.5, 1e-7),
            initial: InitialCondition::TwoDisks {
                first: (0.2, 0.25),
                second: (0.3, 0.25),
                radius: 0.1,
            },
            snapshot_times: vec![0.0, 0.1, 0.25, 0.5],
            probes: vec![],
            front_center: None,
        },
        "ch-seven-circles" => Preset {
            name: "ch-seven-circles",
            description: "Cahn-Hilliard coarsening of seven circles; small circles dissolve into the large ones",
            model: ModelParams::CahnHilliard(CahnHilliardParams { a: 0.01, b: 1.0 }),
            grid: GridSpec::new(two_pi, 128, Periodic)?,
            schedule: TimeSchedule::fixed(1.0 / 200.0, 30.0),
            pdhg: PdhgParams::new(0.5, 1e-6),
            initial: InitialCondition::SevenCircles,
            snapshot_times: vec![0.0, 5.0, 10.0, 20.0, 30.0],
            probes: vec![(PI / 2.0, PI / 2.0), (1.5 * PI, 1.5 * PI)],
            front_center: None,
        },
        "ch-sinusoidal" => Preset {
            name: "ch-sinusoidal",
            description: "Cahn-Hilliard spinodal decomposition from smooth trigonometric data",
            model: ModelParams::CahnHilliard(CahnHilliardParams {
                a: PI * PI / 25000.0,
                b: 1.0,
            }),
            grid: GridSpec::new(two_pi, 256, Periodic)?,
            schedule: TimeSchedule::fixed(1.0 / 3000.0, 8.0),
            pdhg: PdhgParams::new(0.5, 1e-6),
            initial: InitialCondition::Sinusoidal,
            snapshot_times: vec![0.0, 1.0, 2.0, 4.0, 8.0],
            probes: vec![],
            front_center: None,
        },
        "ch-random" => Preset {
            name: "ch-random",
            description: "Cahn-Hilliard from seeded uniform noise of amplitude 0.05",
            model: ModelParams::CahnHilliard(CahnHilliardParams { a: 1e-4, b: 1.0 }),
            grid: GridSpec::new(1.0, 128, Periodic)?,
            schedule: TimeSchedule::fixed(1e-5, 1.0),
            pdhg: PdhgParams::new(0.75, 1e-7),
            initial: InitialCondition::UniformNoise { amplitude: 0.05 },
            snapshot_times: vec![0.0, 0.01, 0.1, 1.0],
            probes: vec![],
            front_center: None,
        },
        "sixth-order" => Preset {
            name: "sixth-order",
            description: "Functionalized Cahn-Hilliard (sixth order) from two smooth bumps",
            model: ModelParams::SixthOrder(SixthOrderParams { epsilon: 0.18 }),
            grid: GridSpec::new(two_pi, 128, Periodic)?,
            schedule: TimeSchedule::fixed(1e-3, 20.0),
            pdhg: PdhgParams::new(0.58, 5e-6),
            initial: InitialCondition::TwoBumps,
            snapshot_times: vec![0.0, 1.0, 5.0, 10.0, 20.0],
            probes: vec![],
            front_center: None,
        },
        "schnakenberg" => {
            let (a, b) = (0.1305, 0.7695);
            Preset {
                name: "schnakenberg",
                description: "Schnakenberg Turing patterns grown from a small bump on the equilibrium",
                model: ModelParams::Schnakenberg(SchnakenbergParams {
                    kappa: 100.0,
                    a,
                    b,
                    d1: 0.05,
                    d2: 1.0,
                }),
                grid: GridSpec::new(1.0, 128, Neumann)?,
                schedule: TimeSchedule::fixed(1.0 / 5000.0, 2.0),
                pdhg: PdhgParams::new(0.9, 1e-7),
                initial: InitialCondition::PerturbedEquilibrium { a, b },
                snapshot_times: vec![0.0, 0.5, 1.0, 2.0],
                probes: vec![],
                front_center: None,
            }
        }
        "wolf-deer" => Preset {
            name: "wolf-deer",
            description: "Nonlocal predator-prey densities with adaptive time steps",
            model: ModelParams::WolfDeer(WolfDeerParams {
                d: 0.5,
                a: 5.0,
                b: 35.0,
                c: 2.5,
                kernel_weight: 1.0,
            }),
            grid: GridSpec::with_origin(6.0, 128, Neumann, (-3.0, -3.0))?,
            schedule: TimeSchedule::adaptive(1.0 / 500.0, 1.0, 0.75, 100, 20),
            pdhg: PdhgParams::new(0.95, 5e-6),
            initial: InitialCondition::PredatorPrey,
            snapshot_times: vec![0.0, 0.25, 0.5, 1.0],
            probes: vec![],
            front_center: None,
        },
        other => return Err(unknown(other)),
    };
    Ok(p)
}

/// Initial state of preset `name` on its default grid.
pub fn reference_initial_condition(name: &str, seed: u64) -> Result<SystemField> {
    let p = preset(name)?;
    p.initial.sample(p.grid, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build() {
        for name in preset_names() {
            let p = preset(name).unwrap();
            assert_eq!(p.name, *name);
            p.model.validate().unwrap();
            p.schedule.validate().unwrap();
            p.pdhg.validate().unwrap();
            assert_eq!(p.grid.bc(), p.model.bc());
            let u = p.initial.sample(p.grid, 1).unwrap();
            assert_eq!(u.n_components(), p.model.n_components());
            assert!(u.is_finite());
        }
    }

    #[test]
    fn unknown_lists_names() {
        let err = reference_initial_condition("nope", 0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ac-circle") && msg.contains("wolf-deer"), "{msg}");
    }

    #[test]
    fn circle_values() {
        let u = reference_initial_condition("ac-circle", 0).unwrap();
        let f = u.component(0);
        let g = *f.spec();
        let (i, j) = g.nearest_node(0.0, 0.0);
        assert_eq!(f.at(i, j), 1.0);
        let (i, j) = g.nearest_node(0.25 - g.h_x(), 0.25 - g.h_x());
        assert_eq!(f.at(i, j), -1.0);
    }

    #[test]
    fn seven_circles_center_value() {
        let u = reference_initial_condition("ch-seven-circles", 0).unwrap();
        let f = u.component(0);
        let (i, j) = f.spec().nearest_node(PI / 2.0, PI / 2.0);
        let v = f.at(i, j);
        assert!((0.9..=1.0).contains(&v), "{v}");
    }

    #[test]
    fn schnakenberg_v_is_constant() {
        let u = reference_initial_condition("schnakenberg", 0).unwrap();
        let expect = 0.7695 / 0.9f64.powi(2);
        assert!((expect - 0.95).abs() < 1e-12);
        assert!(u.component(1).as_slice().iter().all(|&v| (v - expect).abs() < 1e-15));
    }

    #[test]
    fn random_is_seeded() {
        let a = reference_initial_condition("ch-random", 7).unwrap();
        let b = reference_initial_condition("ch-random", 7).unwrap();
        let c = reference_initial_condition("ch-random", 8).unwrap();
        assert_eq!(a.component(0).as_slice(), b.component(0).as_slice());
        assert_ne!(a.component(0).as_slice(), c.component(0).as_slice());
        assert!(a.component(0).as_slice().iter().all(|v| v.abs() <= 0.05));
    }
}

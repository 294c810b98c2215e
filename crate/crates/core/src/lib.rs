//! Implicit time stepping for stiff reaction-diffusion equations, with each
//! step's nonlinear system `F(U) = 0` solved by a preconditioned primal-dual
//! hybrid gradient (G-prox PDHG) iteration.
//!
//! Layout:
//!
//! * [`grid`]: grids, fields, norms.
//! * [`spectral`]: 5-point Laplacians, FFT/DCT diagonalization, preconditioner
//!   inversion, staggered operators and the nonlocal quadratic kernel.
//! * [`models`]: residuals, Jacobian-transpose actions and preconditioner
//!   symbols for Allen-Cahn, Cahn-Hilliard, a sixth-order Cahn-Hilliard
//!   variant, Schnakenberg and a nonlocal predator-prey system.
//! * [`pdhg`]: the inner solver for one time step.
//! * [`stepper`]: outer time loop with adaptive step size control.
//! * [`theory`]: linear convergence-rate predictions.
//! * [`postproc`]: front radius, sign-crossing times, energy.
//! * [`cli`]: configuration files and the batch runner behind the `rd-pdhg` binary.

pub mod cli;
pub mod error;
pub mod grid;
pub mod io;
pub mod models;
pub mod pdhg;
pub mod postproc;
pub mod spectral;
pub mod stepper;
pub mod theory;

pub use error::{Error, Outcome, Result};
pub use grid::{BoundaryCondition, Field, GridSpec, SystemField};
pub use models::{EquationModel, Model};
pub use pdhg::{pdhg_step, residual_norm, PdhgParams, Preconditioner, StepSolution, StepTrace};
pub use spectral::{LaplacianOperator, PrecondSymbol};
pub use stepper::{run, RunReport, TimeSchedule};

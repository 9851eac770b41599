//! Coupled phase-field multiphysics finite element solver.
//!
//! One scalar transient-diffusion kernel contract serves seven physics
//! (phase-field fracture, Allen-Cahn dissolution, metal-ion transport,
//! porous fluid flow, hydrogen transport, heat conduction and a general
//! relaxation form), coupled to small-strain mechanics with staggered or
//! monolithic-pair schemes. Scenario drivers reproduce four benchmark
//! families at desk scale: thermal-shock cracking, pressurized/injected
//! hydraulic fracture, hydrogen-assisted cracking and pitting corrosion
//! with and without stress.
//!
//! Entry points:
//! - [`mesh`]: structured grids, an ASCII mesh format, shape functions.
//! - [`mechanics`]: constitutive laws, strain-energy splits, J2 plasticity.
//! - [`kernels`]: the unified diffusion kernel and its instantiations.
//! - [`solver`]: assembly, Newton, transient stepping, coupling schedules.
//! - [`scenarios`]: benchmark drivers, probes and analytical oracles.
//! - [`config`] / [`output`] / [`cli`]: TOML configs, VTK/CSV emission, CLI.

pub mod cli;
pub mod config;
pub mod error;
pub mod kernels;
pub mod mechanics;
pub mod mesh;
pub mod output;
pub mod scenarios;
pub mod solver;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};

//! The unified scalar transient-diffusion kernel contract.
//!
//! Every scalar balance solved here is cast as
//!
//! ```text
//! rho * dU/dt + div(f) - r = 0
//! ```
//!
//! and a kernel supplies, at one material point, the internal-energy update
//! `U_new`, the flux `f`, the source `r`, and the four derivative blocks the
//! stiffness needs: `dU/ds`, `dU/d(grad s)`, `df/ds`, `df/d(grad s)`. The
//! assembler is physics-agnostic; the kernels below instantiate heat
//! conduction, phase-field fracture, the general relaxation form, dissolution
//! (Allen-Cahn), metal-ion transport, porous fluid flow and hydrogen
//! transport.
//!
//! Time integration is backward Euler: `U_new` carries increments already
//! multiplied by `dt` where the balance has no own rate term, so the
//! assembled `(U_new - U_old)/dt` reproduces each strong form.
//!
//! Sign conventions follow the source balances, so some kernels carry
//! `f = +kappa grad(phi)` and others `f = -grad(phi)`; each row is
//! internally consistent.
//!
//! Conventions for the phase value `phi` as an input: when `phi` is the
//! kernel's own unknown it enters raw (the potentials are globally smooth
//! polynomials); when it is an auxiliary coupling input to a degradation
//! function it is clamped to [0, 1] first, since staggered transport may
//! overshoot slightly.

mod corrosion;
mod fluid;
mod fracture;
mod general;
mod heat;
mod hydrogen;
mod mobility_forms;

pub use corrosion::{
    chemical_free_energy, corrosion_phase_kernel, ion_transport_kernel, mobility,
    ChemicalFreeEnergy, CorrosionParams,
};
pub use fluid::{domain_indicators, fluid_kernel, FluidParams};
pub use fracture::{fracture_kernel, FractureParams};
pub use general::allen_cahn_kernel;
pub use heat::{heat_kernel, HeatParams};
pub use hydrogen::{
    hydrogen_kernel, hydrogen_toughness, wppm_to_mole_fraction, HydrogenParams,
};
pub use mobility_forms::{flux_scaled_mobility_kernel, rate_scaled_mobility_kernel};


/// State handed to a kernel at one integration point.
#[derive(Clone, Copy, Debug)]
pub struct KernelInput {
    /// Scalar field value.
    pub s: f64,
    /// Value at the last committed increment.
    pub s_old: f64,
    /// Spatial gradient (unused trailing entries zero in 2D).
    pub grad_s: [f64; 3],
    /// Time step, > 0.
    pub dt: f64,
    /// Simulation time at the end of the increment.
    pub t_total: f64,
    /// Stored internal energy baseline; only differences matter.
    pub u_old: f64,
    /// Configured volumetric source at the point (raw config units).
    pub source: f64,
}

impl KernelInput {
    pub fn new(s: f64, s_old: f64, grad_s: [f64; 3], dt: f64) -> Self {
        KernelInput { s, s_old, grad_s, dt, t_total: 0.0, u_old: 0.0, source: 0.0 }
    }
}

/// Kernel output: energy, flux, source and the four derivative blocks.
#[derive(Clone, Copy, Debug)]
pub struct KernelResponse {
    pub u_new: f64,
    pub du_ds: f64,
    pub du_dgrad: [f64; 3],
    pub flux: [f64; 3],
    pub dflux_ds: [f64; 3],
    /// Symmetric for isotropic kernels.
    pub dflux_dgrad: [[f64; 3]; 3],
    pub source: f64,
    /// Density multiplying the rate term (1 for all shipped kernels; the
    /// fluid equation is divided through by the fluid density).
    pub rho: f64,
}

impl KernelResponse {
    pub fn zero() -> Self {
        KernelResponse {
            u_new: 0.0,
            du_ds: 0.0,
            du_dgrad: [0.0; 3],
            flux: [0.0; 3],
            dflux_ds: [0.0; 3],
            dflux_dgrad: [[0.0; 3]; 3],
            source: 0.0,
            rho: 1.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        let mut ok = self.u_new.is_finite() && self.du_ds.is_finite() && self.source.is_finite();
        for i in 0..3 {
            ok &= self.du_dgrad[i].is_finite() && self.flux[i].is_finite() && self.dflux_ds[i].is_finite();
            for j in 0..3 {
                ok &= self.dflux_dgrad[i][j].is_finite();
            }
        }
        ok
    }
}

/// `c * I` convenience for isotropic flux derivatives.
pub(crate) fn diag3(c: f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    m[0][0] = c;
    m[1][1] = c;
    m[2][2] = c;
    m
}

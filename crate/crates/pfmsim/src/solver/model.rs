//! The coupled physics wiring: which kernels drive the phase and scalar
//! fields and how mechanics feeds them.

use crate::kernels::{
    corrosion_phase_kernel, fluid_kernel, fracture_kernel, heat_kernel, hydrogen_kernel,
    hydrogen_toughness, ion_transport_kernel, mobility, wppm_to_mole_fraction, CorrosionParams,
    FluidParams, FractureParams, HeatParams, HydrogenParams, KernelInput, KernelResponse,
};
use crate::kernels::{flux_scaled_mobility_kernel, rate_scaled_mobility_kernel};
use crate::mechanics::{
    degraded_tangent, history_update, isotropic_split_none, j2_return_map, no_tension_split,
    total_stress, Degradation, ElasticProps, MaterialPointState, PlasticProps, SplitKind,
};
use crate::tensor::{SymTensor, Tangent};

/// Physics bound to the phase field.
#[derive(Clone, Debug)]
pub enum PhasePhysics {
    None,
    /// AT2 fracture driven by the history field.
    Fracture(FractureParams),
    /// Dissolution with mechanochemically enhanced mobility.
    Corrosion(CorrosionParams),
}

/// Spatially varying mobility for the weak-form arrangement checks.
#[derive(Clone, Copy, Debug)]
pub enum MobilityField {
    Constant(f64),
    /// `L(x) = a + b x`.
    LinearX { a: f64, b: f64 },
}

impl MobilityField {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            MobilityField::Constant(l) => *l,
            MobilityField::LinearX { a, b } => a + b * x[0],
        }
    }
}

/// Physics bound to the extra scalar field.
#[derive(Clone, Debug)]
pub enum ScalarPhysics {
    None,
    Heat(HeatParams),
    Fluid(FluidParams),
    Hydrogen(HydrogenParams),
    IonTransport(CorrosionParams),
    /// Pure-diffusion arrangement (a): mobility divides the rate term.
    RateScaledMobility(MobilityField),
    /// Pure-diffusion arrangement (c): mobility scales the flux.
    FluxScaledMobility(MobilityField),
}

/// Everything the assembler needs to evaluate one integration point.
#[derive(Clone, Debug)]
pub struct CoupledModel {
    pub elastic: ElasticProps,
    pub plastic: Option<PlasticProps>,
    pub split: SplitKind,
    /// Degradation applied to the first-phase stress/stiffness.
    pub degradation: Degradation,
    pub phase: PhasePhysics,
    pub scalar: ScalarPhysics,
    /// Scalar field is a temperature feeding thermal strain.
    pub thermal_coupling: bool,
    /// Scalar field is a pore pressure feeding Biot stress.
    pub pressure_coupling: bool,
    /// Mechanics feeds the dissolution mobility (k_m); off reduces L to L0.
    pub mechanochemical: bool,
    /// Hydrogen nodal values are wppm and need conversion for the isotherm.
    pub hydrogen_in_wppm: bool,
}

impl CoupledModel {
    /// Elastic-only model with no coupled fields; useful for tests.
    pub fn elastic_only(elastic: ElasticProps) -> Self {
        CoupledModel {
            elastic,
            plastic: None,
            split: SplitKind::None,
            degradation: Degradation::At2,
            phase: PhasePhysics::None,
            scalar: ScalarPhysics::None,
            thermal_coupling: false,
            pressure_coupling: false,
            mechanochemical: false,
            hydrogen_in_wppm: true,
        }
    }

    pub fn yield_strain(&self) -> f64 {
        self.plastic.as_ref().map(|p| p.sigma_y / self.elastic.e).unwrap_or(0.0)
    }

    /// Biot coefficient at the current phase value (0 unless fluid-coupled).
    pub fn biot_alpha(&self, phi: f64) -> f64 {
        match (&self.scalar, self.pressure_coupling) {
            (ScalarPhysics::Fluid(p), true) => {
                let (chi_r, chi_f) = crate::kernels::domain_indicators(phi, p.c1, p.c2);
                chi_r * p.alpha_r + chi_f
            }
            _ => 0.0,
        }
    }
}

/// Auxiliary field values interpolated to one integration point.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointAux {
    pub phi: f64,
    pub grad_phi: [f64; 3],
    pub scalar: f64,
    pub grad_scalar: [f64; 3],
    pub grad_sigma_h: [f64; 3],
    /// Physical coordinates of the point.
    pub x: [f64; 3],
    /// Configured volumetric source value at the point (already time-scaled).
    pub source: f64,
}

/// Stress, tangent and the refreshed working state at one point.
pub struct MechResponse {
    pub stress: SymTensor,
    pub tangent: Tangent,
    pub state: MaterialPointState,
}

impl CoupledModel {
    /// Constitutive update at one integration point.
    ///
    /// Pure in (committed state, strain, aux); the caller stores the returned
    /// working state and commits it only at increment acceptance.
    pub fn mechanics_at_point(
        &self,
        eps: &SymTensor,
        committed: &MaterialPointState,
        aux: &PointAux,
        dt: f64,
    ) -> crate::Result<MechResponse> {
        let eps_t = if self.thermal_coupling {
            crate::mechanics::thermal_strain(aux.scalar, &self.elastic)
        } else {
            SymTensor::ZERO
        };
        let eps_mech = eps.sub(&eps_t);

        let mut state = committed.clone();
        let split = if let Some(plastic) = &self.plastic {
            let out = j2_return_map(&eps_mech, committed, &self.elastic, plastic)?;
            state.eps_p = out.eps_p;
            state.eps_p_eq = out.eps_p_eq;
            state.psi_p = out.psi_p;
            crate::mechanics::SplitResult {
                psi1: out.psi_e + out.psi_p,
                psi2: 0.0,
                stress1: out.sigma0,
                stress2: SymTensor::ZERO,
                c1: out.c_ep,
                c2: Tangent::ZERO,
            }
        } else {
            match self.split {
                SplitKind::None => isotropic_split_none(&eps_mech, &self.elastic),
                SplitKind::NoTension => no_tension_split(&eps_mech, &self.elastic),
            }
        };

        let pressure = if self.pressure_coupling { aux.scalar } else { 0.0 };
        let alpha_b = self.biot_alpha(aux.phi);
        let stress = total_stress(&split, aux.phi, self.degradation, alpha_b, pressure);
        let tangent = degraded_tangent(&split, aux.phi, self.degradation);

        if matches!(self.phase, PhasePhysics::Fracture(_)) {
            state.h = history_update(committed.h, split.psi1, split.psi2);
        }
        // hydrostatic stress of the degraded (effective) stress, without the
        // pore-pressure term: dissolved or broken material carries none
        let (g, _, _) = self.degradation.eval(aux.phi);
        let sig_eff = split.stress1.scale(g).add(&split.stress2.scale(1.0 - g));
        state.sigma_h = sig_eff.trace() / 3.0;
        state.eps = *eps;
        if dt > 0.0 {
            state.eps_vol_rate = (eps.trace() - committed.eps.trace()) / dt;
        }
        Ok(MechResponse { stress, tangent, state })
    }

    /// Phase-field kernel at one point. `working` carries the latest
    /// mechanics-consistent history/stress values.
    pub fn phase_kernel_at_point(
        &self,
        input: &KernelInput,
        working: &MaterialPointState,
        aux: &PointAux,
    ) -> crate::Result<KernelResponse> {
        match &self.phase {
            PhasePhysics::None => Err(crate::Error::InvalidArgument(
                "phase field solved but no phase physics bound".into(),
            )),
            PhasePhysics::Fracture(p) => {
                let gc_eff = match (&self.scalar, p) {
                    (ScalarPhysics::Hydrogen(hp), p) => {
                        let c = if self.hydrogen_in_wppm {
                            wppm_to_mole_fraction(aux.scalar.max(0.0))
                        } else {
                            aux.scalar.max(0.0)
                        };
                        hydrogen_toughness(c, hp, p.g_c)?
                    }
                    _ => p.g_c,
                };
                let eff = FractureParams { g_c: gc_eff, ell: p.ell };
                Ok(fracture_kernel(input, &eff, working.h))
            }
            PhasePhysics::Corrosion(p) => {
                let l_eff = if self.mechanochemical {
                    mobility(working, p, self.yield_strain())
                } else {
                    p.l0
                };
                corrosion_phase_kernel(input, p, l_eff, aux.scalar)
            }
        }
    }

    /// Extra-scalar kernel at one point.
    pub fn scalar_kernel_at_point(
        &self,
        input: &KernelInput,
        working: &MaterialPointState,
        aux: &PointAux,
    ) -> crate::Result<KernelResponse> {
        match &self.scalar {
            ScalarPhysics::None => Err(crate::Error::InvalidArgument(
                "scalar field solved but no scalar physics bound".into(),
            )),
            ScalarPhysics::Heat(p) => Ok(heat_kernel(input, p, aux.phi)),
            ScalarPhysics::Fluid(p) => Ok(fluid_kernel(input, p, aux.phi, working.eps_vol_rate)),
            ScalarPhysics::Hydrogen(p) => {
                Ok(hydrogen_kernel(input, p, working.sigma_h, &aux.grad_sigma_h))
            }
            ScalarPhysics::IonTransport(p) => {
                Ok(ion_transport_kernel(input, p, aux.phi, &aux.grad_phi))
            }
            ScalarPhysics::RateScaledMobility(l) => {
                Ok(rate_scaled_mobility_kernel(input, l.eval(&aux.x)))
            }
            ScalarPhysics::FluxScaledMobility(l) => {
                Ok(flux_scaled_mobility_kernel(input, l.eval(&aux.x)))
            }
        }
    }

    /// True when the scalar solve needs the recovered hydrostatic-stress
    /// gradient refreshed after each mechanics solve.
    pub fn needs_stress_gradient(&self) -> bool {
        matches!(self.scalar, ScalarPhysics::Hydrogen(_))
    }
}

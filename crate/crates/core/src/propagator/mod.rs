//! Time evolution for every equation family.
//!
//! Constant-coefficient problems are propagated exactly, mode by mode, in
//! spectral space. The Schrodinger equation with a potential uses Strang
//! split-step; Crank-Nicolson exists as an independent cross-check.

mod crank_nicolson;
mod packet;
mod potential;
mod spectral;
mod split_step;

pub use crank_nicolson::{crank_nicolson_evolve, CrankNicolsonKernel};
pub use packet::{
    analytic_free_gaussian, centroid, free_gaussian_width, gaussian_packet, harmonic_ground_state,
    packet_width,
};
pub use potential::Potential;
pub use spectral::{
    evolve_schrodinger_spectral, evolve_second_order_spectral, positive_branch_init,
    SchrodingerSpectral, SecondOrderSpectral,
};
pub use split_step::{split_step_evolve, SplitStepKernel};

use crate::error::{Error, Result};
use crate::model::{l2_norm, Complex64, Grid1D, TimeSpec, WaveField};

/// `(psi, d psi / dt)` for equations second order in time.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderState {
    pub psi: WaveField,
    pub psi_dot: WaveField,
}

impl SecondOrderState {
    pub fn new(psi: WaveField, psi_dot: WaveField) -> Result<Self> {
        psi.check_grid(&psi_dot)?;
        Ok(Self { psi, psi_dot })
    }

    /// Standing start, `psi_t = 0`.
    pub fn at_rest(psi: WaveField) -> Self {
        let psi_dot = WaveField::zeros(*psi.grid());
        Self { psi, psi_dot }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: WaveField,
}

/// Norm and moments at a snapshot. `centroid` and `width` are NaN for a zero
/// field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub norm: f64,
    pub centroid: f64,
    pub width: f64,
}

impl Diagnostics {
    pub fn of(t: f64, field: &WaveField) -> Self {
        Self {
            t,
            norm: l2_norm(field),
            centroid: centroid(field).unwrap_or(f64::NAN),
            width: packet_width(field).unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub final_field: WaveField,
    /// Strictly increasing in time; the first entry is the initial condition.
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<Diagnostics>,
}

/// Snapshot bookkeeping shared by the stepping schemes.
pub(crate) struct Recorder {
    dt: f64,
    n_steps: usize,
    every: usize,
    snapshots: Vec<Snapshot>,
}

impl Recorder {
    pub(crate) fn new(psi0: &WaveField, time: &TimeSpec, every: usize) -> Result<Self> {
        crate::model::positive("dt", time.dt)?;
        if !psi0.is_finite() {
            return Err(Error::NonFinite { step: 0 });
        }
        Ok(Self {
            dt: time.dt,
            n_steps: time.n_steps,
            every,
            snapshots: vec![Snapshot {
                step: 0,
                t: 0.0,
                field: psi0.clone(),
            }],
        })
    }

    pub(crate) fn observe(&mut self, step: usize, grid: &Grid1D, psi: &[Complex64]) -> Result<()> {
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        let due = (self.every > 0 && step.is_multiple_of(self.every)) || step == self.n_steps;
        if due {
            self.snapshots.push(Snapshot {
                step,
                t: step as f64 * self.dt,
                field: WaveField::from_raw(*grid, psi.to_vec()),
            });
        }
        Ok(())
    }

    pub(crate) fn finish(self, final_field: WaveField) -> EvolutionResult {
        let diagnostics = self
            .snapshots
            .iter()
            .map(|s| Diagnostics::of(s.t, &s.field))
            .collect();
        EvolutionResult {
            final_field,
            snapshots: self.snapshots,
            diagnostics,
        }
    }
}

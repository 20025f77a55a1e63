//! Strang splitting for `i hbar psi_t = (-hbar^2/2m d_xx + V) psi`:
//! half kick, spectral drift, half kick.

use crate::error::{Error, Result};
use crate::model::{
    forward_unitary, inverse_unitary, Complex64, Grid1D, PhysicalConstants, TimeSpec, WaveField,
};

use super::{EvolutionResult, Potential, Recorder};

/// Precomputed Strang factors for one step of size `dt`.
///
/// `dt` is complex: a real step gives the unitary real-time propagator,
/// `dt = -i tau` gives imaginary-time relaxation (`exp(-H tau / hbar)`).
#[derive(Debug, Clone)]
pub struct SplitStepKernel {
    half_kick: Vec<Complex64>,
    drift: Vec<Complex64>,
}

impl SplitStepKernel {
    pub fn new(
        grid: &Grid1D,
        m: f64,
        potential: &Potential,
        consts: &PhysicalConstants,
        dt: Complex64,
    ) -> Result<Self> {
        crate::model::positive("m", m)?;
        if potential.len() != grid.n_points() {
            return Err(Error::param("potential", "length differs from grid size"));
        }
        if potential.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::param("potential", "samples must be finite"));
        }
        let hbar = consts.hbar;
        let minus_i = Complex64::new(0.0, -1.0);
        let half_kick = potential
            .values()
            .iter()
            .map(|&v| (minus_i * dt * (0.5 * v / hbar)).exp())
            .collect();
        let drift = grid
            .wavenumbers()
            .into_iter()
            .map(|k| (minus_i * dt * (hbar * k * k / (2.0 * m))).exp())
            .collect();
        Ok(Self { half_kick, drift })
    }

    pub fn step(&self, psi: &mut [Complex64]) {
        apply(psi, &self.half_kick);
        forward_unitary(psi);
        apply(psi, &self.drift);
        inverse_unitary(psi);
        apply(psi, &self.half_kick);
    }
}

fn apply(psi: &mut [Complex64], factors: &[Complex64]) {
    psi.iter_mut().zip(factors).for_each(|(z, f)| *z *= f);
}

/// Real-time Strang split-step evolution, recording a snapshot every
/// `snapshot_every` steps (0 records only the initial and final state).
pub fn split_step_evolve(
    psi0: &WaveField,
    m: f64,
    potential: &Potential,
    consts: &PhysicalConstants,
    time: &TimeSpec,
    snapshot_every: usize,
) -> Result<EvolutionResult> {
    let grid = *psi0.grid();
    let kernel = SplitStepKernel::new(&grid, m, potential, consts, Complex64::new(time.dt, 0.0))?;
    let mut recorder = Recorder::new(psi0, time, snapshot_every)?;
    let mut psi = psi0.samples().to_vec();
    for step in 1..=time.n_steps {
        kernel.step(&mut psi);
        recorder.observe(step, &grid, &psi)?;
    }
    Ok(recorder.finish(WaveField::from_raw(grid, psi)))
}

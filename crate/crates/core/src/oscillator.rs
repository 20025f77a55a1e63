//! Harmonic-oscillator ground energy from the uncertainty relation.
//!
//! Replacing `p -> hbar / (2 dx)` and `x -> dx` in
//! `H = p^2 / 2m + m omega_c^2 x^2 / 2` gives the bound curve
//! `E(dx) = hbar^2 / (8 m dx^2) + m omega_c^2 dx^2 / 2`, whose minimum
//! `hbar omega_c / 2` sits at `dx* = sqrt(hbar / (2 m omega_c))`. The
//! imaginary-time solver confirms that the true ground state attains it.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dft, l2_norm, positive, Complex64, Grid1D, PhysicalConstants, WaveField};
use crate::optimize::GoldenSection;
use crate::propagator::{Potential, SplitStepKernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorProblem {
    pub m: f64,
    pub omega_c: f64,
    pub consts: PhysicalConstants,
}

impl OscillatorProblem {
    pub fn new(m: f64, omega_c: f64, consts: PhysicalConstants) -> Result<Self> {
        positive("m", m)?;
        positive("omega_c", omega_c)?;
        Ok(Self { m, omega_c, consts })
    }

    /// `sqrt(hbar / (2 m omega_c))`, the minimizing width.
    pub fn ground_width(&self) -> f64 {
        (self.consts.hbar / (2.0 * self.m * self.omega_c)).sqrt()
    }

    pub fn ground_energy(&self) -> f64 {
        0.5 * self.consts.hbar * self.omega_c
    }

    /// Trap centred on the middle of `grid`.
    pub fn potential(&self, grid: &Grid1D) -> Potential {
        Potential::harmonic(grid, self.m, self.omega_c, 0.5 * grid.length())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyPoint {
    pub delta_x: f64,
    pub energy: f64,
}

pub fn energy_bound(problem: &OscillatorProblem, delta_x: f64) -> Result<UncertaintyPoint> {
    if !(delta_x > 0.0 && delta_x.is_finite()) {
        return Err(Error::NonPositiveDeltaX(delta_x));
    }
    let OscillatorProblem { m, omega_c, consts } = *problem;
    let hbar = consts.hbar;
    let energy = hbar * hbar / (8.0 * m * delta_x * delta_x)
        + 0.5 * m * omega_c * omega_c * delta_x * delta_x;
    Ok(UncertaintyPoint { delta_x, energy })
}

/// `E(x) - E(y)` in factored form,
/// `(x - y)(x + y)(m omega_c^2 / 2 - hbar^2 / (8 m x^2 y^2))`, which keeps its
/// sign right even when both energies agree to every printed digit.
pub fn energy_bound_difference(problem: &OscillatorProblem, x: f64, y: f64) -> f64 {
    let OscillatorProblem { m, omega_c, consts } = *problem;
    let hbar = consts.hbar;
    (x - y) * (x + y) * (0.5 * m * omega_c * omega_c - hbar * hbar / (8.0 * m * x * x * y * y))
}

pub fn minimize_bound_analytic(problem: &OscillatorProblem) -> UncertaintyPoint {
    UncertaintyPoint {
        delta_x: problem.ground_width(),
        energy: problem.ground_energy(),
    }
}

/// Golden-section search of the bound curve over `bracket`. The minimum must
/// lie strictly inside: a result on the bracket edge is reported as
/// [`Error::InvalidBracket`].
pub fn minimize_bound_numeric(
    problem: &OscillatorProblem,
    bracket: (f64, f64),
    tol: f64,
) -> Result<UncertaintyPoint> {
    let (lo, hi) = bracket;
    let invalid = |reason: &str| Error::InvalidBracket {
        lo,
        hi,
        reason: reason.into(),
    };
    if lo.is_nan() || lo <= 0.0 {
        return Err(invalid("lower end must be > 0"));
    }
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(invalid("need lo < hi"));
    }
    let mid = 0.5 * (lo + hi);
    let e = |x| energy_bound(problem, x).map(|p| p.energy);
    if e(lo)? < e(mid)? && e(hi)? < e(mid)? {
        return Err(invalid("not unimodal: both ends lie below the midpoint"));
    }
    let search = GoldenSection {
        tol,
        max_iter: 10_000,
    };
    let x = search.minimize_by(lo, hi, |a, b| {
        energy_bound_difference(problem, a, b)
            .partial_cmp(&0.0)
            .unwrap_or(Ordering::Equal)
    })?;
    if x - lo <= tol || hi - x <= tol {
        return Err(invalid("minimum lies on the bracket boundary"));
    }
    energy_bound(problem, x)
}

/// `<psi|H|psi> / <psi|psi>` with the kinetic term evaluated spectrally.
pub fn expected_energy(
    psi: &WaveField,
    m: f64,
    potential: &Potential,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let grid = psi.grid();
    let norm2 = l2_norm(psi).powi(2);
    if norm2 == 0.0 {
        return Err(Error::ZeroField);
    }
    let spec = dft(psi);
    let kinetic: f64 = spec
        .modes()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(z, k)| consts.hbar * consts.hbar * k * k / (2.0 * m) * z.norm_sqr())
        .sum::<f64>()
        * grid.spacing();
    let potential_term: f64 = psi
        .samples()
        .iter()
        .zip(potential.values())
        .map(|(z, v)| v * z.norm_sqr())
        .sum::<f64>()
        * grid.spacing();
    Ok((kinetic + potential_term) / norm2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub psi: WaveField,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationSettings {
    pub tau_step: f64,
    pub max_iters: usize,
    pub energy_tol: f64,
}

impl Default for RelaxationSettings {
    fn default() -> Self {
        Self {
            tau_step: 0.005,
            max_iters: 200_000,
            energy_tol: 1e-12,
        }
    }
}

/// Fails with [`Error::GridTooCoarse`] unless the ground width spans at
/// least 4 cells and the box is at least 16 widths long.
pub fn check_resolution(problem: &OscillatorProblem, grid: &Grid1D) -> Result<()> {
    let w = problem.ground_width();
    if w < 4.0 * grid.spacing() {
        let need = (4.0 * grid.length() / w).ceil() as usize;
        return Err(Error::GridTooCoarse(format!(
            "ground width {w} is below 4 dx = {}; use n_points >= {}",
            4.0 * grid.spacing(),
            need.next_power_of_two()
        )));
    }
    if grid.length() < 16.0 * w {
        return Err(Error::GridTooCoarse(format!(
            "length {} is below 16 ground widths; use length >= {}",
            grid.length(),
            16.0 * w
        )));
    }
    Ok(())
}

/// Ground state by imaginary-time split-step relaxation from a generic
/// off-centre Gaussian.
pub fn imaginary_time_ground_state(
    problem: &OscillatorProblem,
    grid: &Grid1D,
    settings: &RelaxationSettings,
) -> Result<GroundState> {
    let w = problem.ground_width();
    let x0 = 0.5 * grid.length() + 0.3 * w;
    let initial = WaveField::from_fn(*grid, |x| {
        let d = x - x0;
        Complex64::new((-d * d / (8.0 * w * w)).exp(), 0.0)
    })?;
    imaginary_time_ground_state_from(problem, &initial, settings)
}

/// Imaginary-time relaxation from a caller-supplied start. Each iteration is
/// one Strang step with `dt = -i tau` followed by renormalization; it stops
/// when the energy changes by less than `energy_tol` between iterations.
pub fn imaginary_time_ground_state_from(
    problem: &OscillatorProblem,
    initial: &WaveField,
    settings: &RelaxationSettings,
) -> Result<GroundState> {
    let grid = *initial.grid();
    check_resolution(problem, &grid)?;
    positive("tau_step", settings.tau_step)?;
    positive("energy_tol", settings.energy_tol)?;
    let potential = problem.potential(&grid);
    let kernel = SplitStepKernel::new(
        &grid,
        problem.m,
        &potential,
        &problem.consts,
        Complex64::new(0.0, -settings.tau_step),
    )?;
    let mut psi = initial.normalized()?;
    let mut energy = expected_energy(&psi, problem.m, &potential, &problem.consts)?;
    let mut change = f64::INFINITY;
    for iter in 1..=settings.max_iters {
        let mut samples = psi.into_samples();
        kernel.step(&mut samples);
        let stepped = WaveField::from_raw(grid, samples);
        if !stepped.is_finite() {
            return Err(Error::NonFinite { step: iter });
        }
        psi = stepped.normalized()?;
        let next = expected_energy(&psi, problem.m, &potential, &problem.consts)?;
        change = (next - energy).abs();
        energy = next;
        if change < settings.energy_tol {
            return Ok(GroundState {
                energy,
                psi,
                iterations: iter,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iters,
        last_change: change,
    })
}

//! Closed-form dispersion relations `omega(k)` for each equation family, the
//! `(k, omega) <-> (p, E)` kinematic map, and analytic plane-wave residuals.
//!
//! Frequencies follow the positive-branch convention: `omega >= 0` and the
//! time dependence of a mode is `exp(i(kx - omega t))`.

use crate::error::{Error, Result};
use crate::model::{reduced_phase, Complex64, Grid1D, PhysicalConstants, WaveField};
use crate::propagator::Potential;

/// One of the supported PDE families together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum EquationKind {
    /// `psi_xx = psi_tt / v^2`.
    ClassicalWave { v: f64 },
    /// `psi_xx = psi_tt / c^2`, with `c` taken from [`PhysicalConstants`].
    Electromagnetic,
    /// `psi_xx - psi_tt / c^2 - (m c / hbar)^2 psi = 0`.
    KleinGordon { m: f64 },
    /// `i hbar psi_t = -hbar^2 / 2m psi_xx`.
    SchrodingerFree { m: f64 },
    /// `i hbar psi_t = (-hbar^2 / 2m d_xx + V) psi`.
    SchrodingerPotential { m: f64, potential: Potential },
}

impl EquationKind {
    pub fn name(&self) -> &'static str {
        match self {
            EquationKind::ClassicalWave { .. } => "classical_wave",
            EquationKind::Electromagnetic => "electromagnetic",
            EquationKind::KleinGordon { .. } => "klein_gordon",
            EquationKind::SchrodingerFree { .. } => "schrodinger_free",
            EquationKind::SchrodingerPotential { .. } => "schrodinger_potential",
        }
    }

    /// Second order in time, so state is `(psi, psi_t)`.
    pub fn is_second_order(&self) -> bool {
        matches!(
            self,
            EquationKind::ClassicalWave { .. }
                | EquationKind::Electromagnetic
                | EquationKind::KleinGordon { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EquationKind::ClassicalWave { v } => positive("v", *v),
            EquationKind::Electromagnetic => Ok(()),
            EquationKind::KleinGordon { m } | EquationKind::SchrodingerFree { m } => {
                positive("m", *m)
            }
            EquationKind::SchrodingerPotential { m, potential } => {
                positive("m", *m)?;
                if potential.values().iter().all(|v| v.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::param("potential", "samples must be finite"))
                }
            }
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    crate::model::positive(name, v).map(|_| ())
}

/// `psi = A exp(i(kx - omega t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveMode {
    pub amplitude: Complex64,
    pub k: f64,
    pub omega: f64,
}

impl PlaneWaveMode {
    /// The mode with `omega` taken from the dispersion relation of `eq`.
    pub fn on_shell(
        eq: &EquationKind,
        amplitude: Complex64,
        k: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        Ok(Self {
            amplitude,
            k,
            omega: omega_of_k(eq, k, consts)?,
        })
    }
}

/// Momentum and energy of a mode, `p = hbar k`, `E = hbar omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicPair {
    pub p: f64,
    pub energy: f64,
}

impl KinematicPair {
    /// Back to `(k, omega)`.
    pub fn to_wave(self, consts: &PhysicalConstants) -> (f64, f64) {
        (self.p / consts.hbar, self.energy / consts.hbar)
    }
}

/// Angular frequency of wavenumber `k` on the positive branch.
///
/// A `SchrodingerPotential` whose samples are all equal to `V0` gets the
/// shifted parabola `hbar k^2 / 2m + V0 / hbar`; any other potential has no
/// dispersion relation.
pub fn omega_of_k(eq: &EquationKind, k: f64, consts: &PhysicalConstants) -> Result<f64> {
    eq.validate()?;
    let hbar = consts.hbar;
    let c = consts.c;
    Ok(match eq {
        EquationKind::ClassicalWave { v } => v * k.abs(),
        EquationKind::Electromagnetic => c * k.abs(),
        EquationKind::KleinGordon { m } => (k * c).hypot(m * c * c / hbar),
        EquationKind::SchrodingerFree { m } => hbar * k * k / (2.0 * m),
        EquationKind::SchrodingerPotential { m, potential } => {
            let v0 = potential
                .constant_value()
                .ok_or(Error::DispersionUndefined)?;
            hbar * k * k / (2.0 * m) + v0 / hbar
        }
    })
}

/// Analytic `d omega / dk`. The massless families return `0` at `k = 0`,
/// where the cone has no derivative.
pub fn group_velocity(eq: &EquationKind, k: f64, consts: &PhysicalConstants) -> Result<f64> {
    eq.validate()?;
    let sign = if k > 0.0 {
        1.0
    } else if k < 0.0 {
        -1.0
    } else {
        0.0
    };
    Ok(match eq {
        EquationKind::ClassicalWave { v } => v * sign,
        EquationKind::Electromagnetic => consts.c * sign,
        EquationKind::KleinGordon { .. } => {
            let omega = omega_of_k(eq, k, consts)?;
            k * consts.c * consts.c / omega
        }
        EquationKind::SchrodingerFree { m } => consts.hbar * k / m,
        EquationKind::SchrodingerPotential { m, potential } => {
            potential
                .constant_value()
                .ok_or(Error::DispersionUndefined)?;
            consts.hbar * k / m
        }
    })
}

pub fn kinematic_map(k: f64, omega: f64, consts: &PhysicalConstants) -> KinematicPair {
    KinematicPair {
        p: consts.hbar * k,
        energy: consts.hbar * omega,
    }
}

/// Samples `A exp(i(k x_j - omega t))`. `k` must be a grid wavenumber so the
/// sampled wave is exactly periodic.
pub fn planewave_sample(mode: &PlaneWaveMode, grid: &Grid1D, t: f64) -> Result<WaveField> {
    grid.commensurate_mode(mode.k)
        .ok_or(Error::NonCommensurateWavenumber { k: mode.k })?;
    WaveField::from_fn(*grid, |x| {
        mode.amplitude
            * Complex64::from_polar(1.0, reduced_phase(mode.k, x) - reduced_phase(mode.omega, t))
    })
}

/// `|D(k, omega)|` for the characteristic polynomial `D` of the PDE; zero iff
/// the mode solves the equation.
///
/// * wave / electromagnetic: `|-k^2 + omega^2 / v^2|`
/// * Klein-Gordon: `|-k^2 + omega^2 / c^2 - (m c / hbar)^2|`
/// * Schrodinger: `|hbar omega - hbar^2 k^2 / 2m - V0| / hbar`
pub fn planewave_residual(
    eq: &EquationKind,
    mode: &PlaneWaveMode,
    consts: &PhysicalConstants,
) -> Result<f64> {
    eq.validate()?;
    let PlaneWaveMode { k, omega, .. } = *mode;
    let hbar = consts.hbar;
    let c = consts.c;
    Ok(match eq {
        EquationKind::ClassicalWave { v } => (-k * k + (omega / v).powi(2)).abs(),
        EquationKind::Electromagnetic => (-k * k + (omega / c).powi(2)).abs(),
        EquationKind::KleinGordon { m } => {
            (-k * k + (omega / c).powi(2) - (m * c / hbar).powi(2)).abs()
        }
        EquationKind::SchrodingerFree { m } => (omega - hbar * k * k / (2.0 * m)).abs(),
        EquationKind::SchrodingerPotential { m, potential } => {
            let v0 = potential
                .constant_value()
                .ok_or(Error::DispersionUndefined)?;
            (omega - hbar * k * k / (2.0 * m) - v0 / hbar).abs()
        }
    })
}

/// Klein-Gordon frequency with the rest frequency `m c^2 / hbar` removed,
/// `omega_KG(k) - m c^2 / hbar`, evaluated without cancellation.
pub fn kg_kinetic_frequency(m: f64, k: f64, consts: &PhysicalConstants) -> f64 {
    let rest = m * consts.c * consts.c / consts.hbar;
    let x = (consts.hbar * k / (m * consts.c)).powi(2);
    let s = (1.0 + x).sqrt();
    rest * x / (1.0 + s)
}

/// How far the Klein-Gordon frequency is from "rest + Schrodinger".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NrExpansionError {
    /// `|omega_KG(k) - m c^2 / hbar - hbar k^2 / 2m|`.
    pub exact_gap: f64,
    /// Leading correction `hbar^3 k^4 / (8 m^3 c^2)`.
    pub next_term_bound: f64,
}

/// Error of truncating `sqrt(1 + x)` after the linear term in the
/// Klein-Gordon dispersion.
///
/// With `x = (hbar k / m c)^2` and `s = sqrt(1 + x)` the gap is exactly
/// `(m c^2 / hbar) x^2 / (2 (1 + s)^2)`, which never exceeds the leading
/// bound since `(1 + s)^2 >= 4`.
pub fn nr_expansion_error(m: f64, k: f64, consts: &PhysicalConstants) -> Result<NrExpansionError> {
    positive("m", m)?;
    let hbar = consts.hbar;
    let c = consts.c;
    let rest = m * c * c / hbar;
    let x = (hbar * k / (m * c)).powi(2);
    let s = (1.0 + x).sqrt();
    let exact_gap = rest * x * x / (2.0 * (1.0 + s).powi(2));
    let next_term_bound = hbar.powi(3) * k.powi(4) / (8.0 * m.powi(3) * c * c);
    Ok(NrExpansionError {
        exact_gap,
        next_term_bound,
    })
}

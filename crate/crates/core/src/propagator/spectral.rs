//! Exact per-mode propagation for constant-coefficient equations.

use crate::dispersion::{omega_of_k, EquationKind};
use crate::error::{Error, Result};
use crate::model::{
    dft, idft, reduced_phase, Complex64, PhysicalConstants, SpectralField, WaveField,
};

use super::SecondOrderState;

/// Free Schrodinger evolution from a fixed initial field. The spectrum is
/// transformed once; every [`at`](Self::at) costs one inverse transform.
#[derive(Debug, Clone)]
pub struct SchrodingerSpectral {
    initial: SpectralField,
    omega: Vec<f64>,
}

impl SchrodingerSpectral {
    pub fn new(psi0: &WaveField, m: f64, consts: &PhysicalConstants) -> Result<Self> {
        let eq = EquationKind::SchrodingerFree { m };
        let initial = dft(psi0);
        let omega = initial
            .wavenumbers()
            .into_iter()
            .map(|k| omega_of_k(&eq, k, consts))
            .collect::<Result<_>>()?;
        Ok(Self { initial, omega })
    }

    pub fn at(&self, t: f64) -> WaveField {
        let mut spec = self.initial.clone();
        for (z, &w) in spec.modes_mut().iter_mut().zip(&self.omega) {
            *z *= Complex64::from_polar(1.0, -reduced_phase(w, t));
        }
        idft(&spec)
    }
}

/// `psi_hat(k, t) = psi_hat(k, 0) exp(-i hbar k^2 t / 2m)`; exact for any `t`.
pub fn evolve_schrodinger_spectral(
    psi0: &WaveField,
    m: f64,
    consts: &PhysicalConstants,
    t: f64,
) -> Result<WaveField> {
    Ok(SchrodingerSpectral::new(psi0, m, consts)?.at(t))
}

fn require_second_order(eq: &EquationKind) -> Result<()> {
    if eq.is_second_order() {
        eq.validate()
    } else {
        Err(Error::WrongEquationFamily(eq.name()))
    }
}

/// Per-mode harmonic rotation for the wave, electromagnetic and
/// Klein-Gordon equations.
#[derive(Debug, Clone)]
pub struct SecondOrderSpectral {
    psi: SpectralField,
    psi_dot: SpectralField,
    omega: Vec<f64>,
}

impl SecondOrderSpectral {
    pub fn new(
        state0: &SecondOrderState,
        eq: &EquationKind,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        require_second_order(eq)?;
        let psi = dft(&state0.psi);
        let psi_dot = dft(&state0.psi_dot);
        let omega = psi
            .wavenumbers()
            .into_iter()
            .map(|k| omega_of_k(eq, k, consts))
            .collect::<Result<_>>()?;
        Ok(Self {
            psi,
            psi_dot,
            omega,
        })
    }

    fn rotate(&self, t: f64, with_dot: bool) -> (SpectralField, Option<SpectralField>) {
        let mut psi = self.psi.clone();
        let mut dot = with_dot.then(|| self.psi_dot.clone());
        for (slot, &w) in self.omega.iter().enumerate() {
            let p0 = self.psi.modes()[slot];
            let d0 = self.psi_dot.modes()[slot];
            let (p, d) = if w == 0.0 {
                (p0 + d0 * t, d0)
            } else {
                let (s, c) = reduced_phase(w, t).sin_cos();
                (p0 * c + d0 * (s / w), -p0 * (w * s) + d0 * c)
            };
            psi.modes_mut()[slot] = p;
            if let Some(dot) = dot.as_mut() {
                dot.modes_mut()[slot] = d;
            }
        }
        (psi, dot)
    }

    pub fn at(&self, t: f64) -> SecondOrderState {
        let (psi, dot) = self.rotate(t, true);
        SecondOrderState {
            psi: idft(&psi),
            psi_dot: idft(&dot.expect("requested")),
        }
    }

    /// Only `psi(t)`, skipping the velocity transform.
    pub fn psi_at(&self, t: f64) -> WaveField {
        idft(&self.rotate(t, false).0)
    }

    /// `omega^2 |psi_hat|^2 + |psi_hat_t|^2` for every mode at time `t`.
    pub fn mode_energies(&self, t: f64) -> Vec<f64> {
        let (psi, dot) = self.rotate(t, true);
        let dot = dot.expect("requested");
        self.omega
            .iter()
            .zip(psi.modes().iter().zip(dot.modes()))
            .map(|(w, (p, d))| w * w * p.norm_sqr() + d.norm_sqr())
            .collect()
    }
}

/// Advances `(psi, psi_t)` by `t`:
/// `psi_hat(t) = psi_hat cos(wt) + psi_hat_t sin(wt) / w`, and
/// `psi_hat(t) = psi_hat + psi_hat_t t` on a zero-frequency mode.
pub fn evolve_second_order_spectral(
    state0: &SecondOrderState,
    eq: &EquationKind,
    consts: &PhysicalConstants,
    t: f64,
) -> Result<SecondOrderState> {
    Ok(SecondOrderSpectral::new(state0, eq, consts)?.at(t))
}

/// Chooses `psi_hat_t = -i omega(k) psi_hat` so every mode evolves as
/// `exp(-i omega t)`: a pure positive-frequency state.
pub fn positive_branch_init(
    psi0: &WaveField,
    eq: &EquationKind,
    consts: &PhysicalConstants,
) -> Result<SecondOrderState> {
    require_second_order(eq)?;
    let mut spec = dft(psi0);
    let ks = spec.wavenumbers();
    for (z, k) in spec.modes_mut().iter_mut().zip(ks) {
        let w = omega_of_k(eq, k, consts)?;
        *z *= Complex64::new(0.0, -w);
    }
    Ok(SecondOrderState {
        psi: psi0.clone(),
        psi_dot: idft(&spec),
    })
}

//! Crank-Nicolson (Cayley) scheme with a second-order central-difference
//! Laplacian on the periodic grid:
//! `(1 + i dt H / 2 hbar) psi^{n+1} = (1 - i dt H / 2 hbar) psi^n`.

use crate::error::{Error, Result};
use crate::model::{Complex64, Grid1D, PhysicalConstants, TimeSpec, WaveField};

use super::{EvolutionResult, Potential, Recorder};

/// Factorized cyclic tridiagonal matrix with constant off-diagonal `off`
/// (including both corners), solved by Sherman-Morrison around Thomas.
#[derive(Debug, Clone)]
struct CyclicTridiagonal {
    off: Complex64,
    /// Thomas multipliers `c'_i` and pivots of the corner-modified matrix.
    upper: Vec<Complex64>,
    pivots: Vec<Complex64>,
    gamma: Complex64,
    /// Solution of the rank-one correction system.
    z: Vec<Complex64>,
    z_factor: Complex64,
}

impl CyclicTridiagonal {
    const TINY: f64 = 1e-300;

    fn new(diag: &[Complex64], off: Complex64) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::LinearSolveFailure("system smaller than 3".into()));
        }
        let gamma = -diag[0];
        let mut modified = diag.to_vec();
        modified[0] -= gamma;
        modified[n - 1] -= off * off / gamma;

        let mut upper = vec![Complex64::new(0.0, 0.0); n];
        let mut pivots = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let pivot = if i == 0 {
                modified[0]
            } else {
                modified[i] - off * upper[i - 1]
            };
            if pivot.norm().is_nan() || pivot.norm() <= Self::TINY || !pivot.re.is_finite() {
                return Err(Error::LinearSolveFailure(format!("zero pivot at row {i}")));
            }
            pivots[i] = pivot;
            upper[i] = off / pivot;
        }
        let mut this = Self {
            off,
            upper,
            pivots,
            gamma,
            z: Vec::new(),
            z_factor: Complex64::new(0.0, 0.0),
        };
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        u[0] = gamma;
        u[n - 1] = off;
        this.z = this.thomas(&u);
        let denom = Complex64::new(1.0, 0.0) + this.z[0] + off * this.z[n - 1] / gamma;
        if denom.norm().is_nan() || denom.norm() <= Self::TINY {
            return Err(Error::LinearSolveFailure("singular rank-one update".into()));
        }
        this.z_factor = denom;
        Ok(this)
    }

    fn thomas(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[0] = rhs[0] / self.pivots[0];
        for i in 1..n {
            x[i] = (rhs[i] - self.off * x[i - 1]) / self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= self.upper[i] * next;
        }
        x
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let mut x = self.thomas(rhs);
        let fact = (x[0] + self.off * x[n - 1] / self.gamma) / self.z_factor;
        x.iter_mut()
            .zip(&self.z)
            .for_each(|(xi, zi)| *xi -= fact * zi);
        x
    }
}

/// One prepared Crank-Nicolson step.
#[derive(Debug, Clone)]
pub struct CrankNicolsonKernel {
    lhs: CyclicTridiagonal,
    rhs_diag: Vec<Complex64>,
    rhs_off: Complex64,
}

impl CrankNicolsonKernel {
    pub fn new(
        grid: &Grid1D,
        m: f64,
        potential: &Potential,
        consts: &PhysicalConstants,
        dt: f64,
    ) -> Result<Self> {
        crate::model::positive("m", m)?;
        crate::model::positive("dt", dt)?;
        if potential.len() != grid.n_points() {
            return Err(Error::param("potential", "length differs from grid size"));
        }
        let dx = grid.spacing();
        let hbar = consts.hbar;
        let a = hbar * hbar / (2.0 * m * dx * dx);
        // H = tridiag(-a, 2a + V_j, -a); scale by i dt / 2 hbar.
        let g = Complex64::new(0.0, dt / (2.0 * hbar));
        let one = Complex64::new(1.0, 0.0);
        let lhs_diag: Vec<_> = potential
            .values()
            .iter()
            .map(|&v| one + g * (2.0 * a + v))
            .collect();
        let rhs_diag = potential
            .values()
            .iter()
            .map(|&v| one - g * (2.0 * a + v))
            .collect();
        Ok(Self {
            lhs: CyclicTridiagonal::new(&lhs_diag, -g * a)?,
            rhs_diag,
            rhs_off: g * a,
        })
    }

    pub fn step(&self, psi: &mut Vec<Complex64>) {
        let n = psi.len();
        let rhs: Vec<Complex64> = (0..n)
            .map(|j| {
                let left = psi[(j + n - 1) % n];
                let right = psi[(j + 1) % n];
                self.rhs_diag[j] * psi[j] + self.rhs_off * (left + right)
            })
            .collect();
        *psi = self.lhs.solve(&rhs);
    }
}

pub fn crank_nicolson_evolve(
    psi0: &WaveField,
    m: f64,
    potential: &Potential,
    consts: &PhysicalConstants,
    time: &TimeSpec,
    snapshot_every: usize,
) -> Result<EvolutionResult> {
    let grid = *psi0.grid();
    let kernel = CrankNicolsonKernel::new(&grid, m, potential, consts, time.dt)?;
    let mut recorder = Recorder::new(psi0, time, snapshot_every)?;
    let mut psi = psi0.samples().to_vec();
    for step in 1..=time.n_steps {
        kernel.step(&mut psi);
        recorder.observe(step, &grid, &psi)?;
    }
    Ok(recorder.finish(WaveField::from_raw(grid, psi)))
}

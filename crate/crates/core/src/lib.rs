//! A one-dimensional numerical laboratory for plane waves and wave packets
//! under four wave equations: the classical wave equation, the
//! electromagnetic (massless) wave equation, Klein-Gordon, and Schrodinger.
//!
//! All four share one framework: a dispersion relation `omega(k)` fixes how
//! each Fourier mode of a periodic field advances in time. The crate provides
//!
//! * [`model`]: units, periodic grids, complex fields and a unitary radix-2 DFT,
//! * [`dispersion`]: closed-form dispersion relations and plane-wave residuals,
//! * [`propagator`]: exact spectral propagation, Strang split-step and
//!   Crank-Nicolson schemes,
//! * [`nrlimit`]: the Klein-Gordon to Schrodinger non-relativistic limit,
//! * [`oscillator`]: the uncertainty-relation energy bound of the harmonic
//!   oscillator and an imaginary-time ground-state solver,
//! * [`cli`]: the scenario runner behind the `wavelab` binary.

pub mod cli;
pub mod dispersion;
pub mod error;
pub mod model;
pub mod nrlimit;
pub mod optimize;
pub mod oscillator;
pub mod propagator;

pub use error::{Error, Result};
pub use model::{
    dft, idft, l2_norm, Complex64, GaussianPacketSpec, Grid1D, PhysicalConstants, SpectralField,
    TimeSpec, WaveField,
};

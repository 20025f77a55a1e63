//! C ABI over the `wavelab` solvers.
//!
//! Conventions:
//!
//! * every fallible function returns a [`WlStatus`]; results go through out
//!   pointers, which are written only on success,
//! * after a non-OK status, [`wl_last_error`] describes the failure on the
//!   calling thread,
//! * fields and reports are opaque handles created by this library and
//!   released with the matching `*_free` function,
//! * complex samples cross the boundary as separate real and imaginary
//!   `double` arrays,
//! * panics never unwind into the caller; they surface as
//!   [`WlStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use wavelab::dispersion::{group_velocity, nr_expansion_error, omega_of_k, EquationKind};
use wavelab::model::reduced_phase;
use wavelab::nrlimit::{dominance_terms_mode, kg_vs_schrodinger, NrLimitReport};
use wavelab::oscillator::{
    energy_bound, imaginary_time_ground_state, minimize_bound_numeric, OscillatorProblem,
    RelaxationSettings,
};
use wavelab::propagator::{
    gaussian_packet, positive_branch_init, split_step_evolve, Potential, SchrodingerSpectral,
    SecondOrderSpectral,
};
use wavelab::{l2_norm, Error, GaussianPacketSpec, Grid1D, PhysicalConstants, TimeSpec, WaveField};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    GridTooCoarse = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlFamily {
    ClassicalWave = 0,
    Electromagnetic = 1,
    KleinGordon = 2,
    SchrodingerFree = 3,
    /// Schrodinger with the constant potential `v0`.
    SchrodingerConstant = 4,
}

/// Equation selector. `v` is read by the classical wave family, `m` by
/// Klein-Gordon and both Schrodinger families, `v0` by
/// `WL_FAMILY_SCHRODINGER_CONSTANT`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WlEquation {
    pub family: WlFamily,
    pub m: f64,
    pub v: f64,
    pub v0: f64,
}

/// Opaque sampled field on a periodic grid.
pub struct WlField {
    inner: WaveField,
}

/// Opaque Klein-Gordon versus Schrodinger comparison.
pub struct WlNrReport {
    inner: NrLimitReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure {
    status: WlStatus,
    message: String,
}

impl Failure {
    fn new(status: WlStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn null(name: &str) -> Self {
        Self::new(WlStatus::NullPointer, format!("`{name}` is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NonFinite { .. }
            | Error::NoConvergence { .. }
            | Error::LinearSolveFailure(_)
            | Error::ZeroField => WlStatus::NumericalFailure,
            Error::GridTooCoarse(_) => WlStatus::GridTooCoarse,
            _ => WlStatus::InvalidArgument,
        };
        Self::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            WlStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("internal panic: {what}"));
            WlStatus::Panic
        }
    }
}

fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(name));
    }
    // SAFETY: non-null, and the caller guarantees it points to writable memory.
    unsafe { out.write(value) };
    Ok(())
}

fn field_ref<'a>(f: *const WlField, name: &str) -> Result<&'a WaveField, Failure> {
    // SAFETY: a non-null handle was produced by this library and not freed.
    unsafe { f.as_ref() }
        .map(|f| &f.inner)
        .ok_or_else(|| Failure::null(name))
}

/// # Safety
/// `ptr` must be null or valid for `len` reads.
unsafe fn slice<'a>(ptr: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if ptr.is_null() {
        return Err(Failure::null(name));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `ptr` must be null or valid for `len` writes.
unsafe fn slice_mut<'a>(ptr: *mut f64, len: usize, name: &str) -> Result<&'a mut [f64], Failure> {
    if ptr.is_null() {
        return Err(Failure::null(name));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

fn give_field(field: WaveField, out: *mut *mut WlField) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    let handle = Box::into_raw(Box::new(WlField { inner: field }));
    // SAFETY: checked non-null above.
    unsafe { out.write(handle) };
    Ok(())
}

fn equation(eq: &WlEquation) -> Result<EquationKind, Failure> {
    let kind = match eq.family {
        WlFamily::ClassicalWave => EquationKind::ClassicalWave { v: eq.v },
        WlFamily::Electromagnetic => EquationKind::Electromagnetic,
        WlFamily::KleinGordon => EquationKind::KleinGordon { m: eq.m },
        WlFamily::SchrodingerFree => EquationKind::SchrodingerFree { m: eq.m },
        WlFamily::SchrodingerConstant => {
            // dispersion only reads the constant value
            let grid = Grid1D::new(8, 1.0)?;
            EquationKind::SchrodingerPotential {
                m: eq.m,
                potential: Potential::constant(&grid, eq.v0),
            }
        }
    };
    kind.validate()?;
    Ok(kind)
}

/// Message for the most recent failure on this thread; empty after a
/// success. The pointer stays valid until the next call into this library
/// on the same thread.
#[no_mangle]
pub extern "C" fn wl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Angular frequency `omega(k)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_omega(
    eq: WlEquation,
    k: f64,
    hbar: f64,
    c: f64,
    out: *mut f64,
) -> WlStatus {
    guard(|| {
        let consts = PhysicalConstants::new(hbar, c)?;
        write(out, omega_of_k(&equation(&eq)?, k, &consts)?, "out")
    })
}

/// Group velocity `d omega / dk`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_group_velocity(
    eq: WlEquation,
    k: f64,
    hbar: f64,
    c: f64,
    out: *mut f64,
) -> WlStatus {
    guard(|| {
        let consts = PhysicalConstants::new(hbar, c)?;
        write(out, group_velocity(&equation(&eq)?, k, &consts)?, "out")
    })
}

/// Klein-Gordon frequency gap to "rest + Schrodinger" and its leading-order
/// bound `hbar^3 k^4 / (8 m^3 c^2)`.
///
/// # Safety
/// `gap` and `bound` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn wl_nr_expansion_error(
    m: f64,
    k: f64,
    hbar: f64,
    c: f64,
    gap: *mut f64,
    bound: *mut f64,
) -> WlStatus {
    guard(|| {
        let e = nr_expansion_error(m, k, &PhysicalConstants::new(hbar, c)?)?;
        write(gap, e.exact_gap, "gap")?;
        write(bound, e.next_term_bound, "bound")
    })
}

/// Per-mode dominance ratio of the second time derivative of the envelope
/// against the rest-energy terms.
///
/// # Safety
/// `small`, `big` and `ratio` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn wl_dominance_ratio(
    k: f64,
    m: f64,
    hbar: f64,
    c: f64,
    small: *mut f64,
    big: *mut f64,
    ratio: *mut f64,
) -> WlStatus {
    guard(|| {
        let t = dominance_terms_mode(k, m, &PhysicalConstants::new(hbar, c)?)?;
        write(small, t.small_term, "small")?;
        write(big, t.big_term, "big")?;
        write(ratio, t.ratio, "ratio")
    })
}

/// Copies `n_points` samples into a new field on `[0, length)`.
///
/// # Safety
/// `re` and `im` must be valid for `n_points` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_field_new(
    n_points: usize,
    length: f64,
    re: *const f64,
    im: *const f64,
    out: *mut *mut WlField,
) -> WlStatus {
    guard(|| {
        let grid = Grid1D::new(n_points, length)?;
        let re = slice(re, n_points, "re")?;
        let im = slice(im, n_points, "im")?;
        let samples = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        give_field(WaveField::new(grid, samples)?, out)
    })
}

/// Normalized Gaussian packet `exp(-(x-x0)^2 / 4 sigma^2 + i k0 x)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_field_gaussian(
    n_points: usize,
    length: f64,
    x0: f64,
    k0: f64,
    sigma: f64,
    out: *mut *mut WlField,
) -> WlStatus {
    guard(|| {
        let grid = Grid1D::new(n_points, length)?;
        let spec = GaussianPacketSpec::new(x0, k0, sigma)?;
        give_field(gaussian_packet(&spec, &grid, true), out)
    })
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wl_field_len(field: *const WlField) -> usize {
    field.as_ref().map_or(0, |f| f.inner.len())
}

/// Copies the samples out. Fails with `WL_STATUS_BUFFER_TOO_SMALL` when
/// `capacity` is below [`wl_field_len`].
///
/// # Safety
/// `field` must be a live handle; `re` and `im` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn wl_field_copy(
    field: *const WlField,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> WlStatus {
    guard(|| {
        let f = field_ref(field, "field")?;
        if capacity < f.len() {
            return Err(Failure::new(
                WlStatus::BufferTooSmall,
                format!("need {} samples, buffer holds {capacity}", f.len()),
            ));
        }
        let re = slice_mut(re, f.len(), "re")?;
        let im = slice_mut(im, f.len(), "im")?;
        for (j, z) in f.samples().iter().enumerate() {
            re[j] = z.re;
            im[j] = z.im;
        }
        Ok(())
    })
}

/// Discrete L2 norm `sqrt(sum |psi_j|^2 dx)`.
///
/// # Safety
/// `field` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_field_norm(field: *const WlField, out: *mut f64) -> WlStatus {
    guard(|| write(out, l2_norm(field_ref(field, "field")?), "out"))
}

/// Releases a field. Null is ignored.
///
/// # Safety
/// `field` must be null or a live handle, and is dangling afterwards.
#[no_mangle]
pub unsafe extern "C" fn wl_field_free(field: *mut WlField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Exact spectral evolution to time `t`. Second-order families start on the
/// positive-frequency branch.
///
/// # Safety
/// `psi0` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_evolve_spectral(
    psi0: *const WlField,
    eq: WlEquation,
    hbar: f64,
    c: f64,
    t: f64,
    out: *mut *mut WlField,
) -> WlStatus {
    guard(|| {
        let psi0 = field_ref(psi0, "psi0")?;
        let consts = PhysicalConstants::new(hbar, c)?;
        let kind = equation(&eq)?;
        let psi = match kind {
            EquationKind::SchrodingerFree { m } => {
                SchrodingerSpectral::new(psi0, m, &consts)?.at(t)
            }
            EquationKind::SchrodingerPotential { m, .. } => {
                let phase = Complex64::from_polar(1.0, -reduced_phase(eq.v0 / hbar, t));
                SchrodingerSpectral::new(psi0, m, &consts)?
                    .at(t)
                    .scaled(phase)
            }
            _ => {
                let state = positive_branch_init(psi0, &kind, &consts)?;
                SecondOrderSpectral::new(&state, &kind, &consts)?.psi_at(t)
            }
        };
        give_field(psi, out)
    })
}

/// Strang split-step Schrodinger evolution over `n_steps` steps of `dt`.
/// `potential` holds one value per sample, or is null for a free particle.
///
/// # Safety
/// `psi0` must be a live handle; `potential` null or valid for
/// `wl_field_len(psi0)` reads; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_evolve_split_step(
    psi0: *const WlField,
    m: f64,
    potential: *const f64,
    hbar: f64,
    c: f64,
    dt: f64,
    n_steps: usize,
    out: *mut *mut WlField,
) -> WlStatus {
    guard(|| {
        let psi0 = field_ref(psi0, "psi0")?;
        let grid = *psi0.grid();
        let pot = if potential.is_null() {
            Potential::zero(&grid)
        } else {
            Potential::from_values(slice(potential, grid.n_points(), "potential")?.to_vec())
        };
        let consts = PhysicalConstants::new(hbar, c)?;
        let time = TimeSpec::new(dt, n_steps)?;
        let r = split_step_evolve(psi0, m, &pot, &consts, &time, 0)?;
        give_field(r.final_field, out)
    })
}

/// `E(dx) = hbar^2 / (8 m dx^2) + m omega_c^2 dx^2 / 2`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_energy_bound(
    m: f64,
    omega_c: f64,
    hbar: f64,
    delta_x: f64,
    out: *mut f64,
) -> WlStatus {
    guard(|| {
        let problem = OscillatorProblem::new(m, omega_c, PhysicalConstants::new(hbar, 1.0)?)?;
        write(out, energy_bound(&problem, delta_x)?.energy, "out")
    })
}

/// Golden-section minimum of the energy bound inside `(lo, hi)`.
///
/// # Safety
/// `delta_x` and `energy` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn wl_minimize_bound(
    m: f64,
    omega_c: f64,
    hbar: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    delta_x: *mut f64,
    energy: *mut f64,
) -> WlStatus {
    guard(|| {
        let problem = OscillatorProblem::new(m, omega_c, PhysicalConstants::new(hbar, 1.0)?)?;
        let p = minimize_bound_numeric(&problem, (lo, hi), tol)?;
        write(delta_x, p.delta_x, "delta_x")?;
        write(energy, p.energy, "energy")
    })
}

/// Harmonic-oscillator ground state by imaginary-time relaxation on
/// `[0, length)` with the well centred at `length / 2`.
///
/// # Safety
/// `energy` and `out` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn wl_ground_state(
    m: f64,
    omega_c: f64,
    hbar: f64,
    n_points: usize,
    length: f64,
    tau: f64,
    max_iters: usize,
    energy_tol: f64,
    energy: *mut f64,
    out: *mut *mut WlField,
) -> WlStatus {
    guard(|| {
        if energy.is_null() {
            return Err(Failure::null("energy"));
        }
        let problem = OscillatorProblem::new(m, omega_c, PhysicalConstants::new(hbar, 1.0)?)?;
        let grid = Grid1D::new(n_points, length)?;
        let settings = RelaxationSettings {
            tau_step: tau,
            max_iters,
            energy_tol,
        };
        let ground = imaginary_time_ground_state(&problem, &grid, &settings)?;
        give_field(ground.psi, out)?;
        write(energy, ground.energy, "energy")
    })
}

/// Klein-Gordon envelope against Schrodinger evolution of a normalized
/// Gaussian packet, sampled every `snapshot_every` steps.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn wl_kg_vs_schrodinger(
    n_points: usize,
    length: f64,
    x0: f64,
    k0: f64,
    sigma: f64,
    m: f64,
    hbar: f64,
    c: f64,
    dt: f64,
    n_steps: usize,
    snapshot_every: usize,
    out: *mut *mut WlNrReport,
) -> WlStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let grid = Grid1D::new(n_points, length)?;
        let spec = GaussianPacketSpec::new(x0, k0, sigma)?;
        let consts = PhysicalConstants::new(hbar, c)?;
        let time = TimeSpec::new(dt, n_steps)?;
        let report = kg_vs_schrodinger(&spec, &grid, m, &consts, &time, snapshot_every)?;
        out.write(Box::into_raw(Box::new(WlNrReport { inner: report })));
        Ok(())
    })
}

/// Number of sampled times; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wl_nr_report_len(report: *const WlNrReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.times.len())
}

/// Copies times, relative deviations and dominance ratios. Any of the
/// output arrays may be null to skip it.
///
/// # Safety
/// `report` must be a live handle; each non-null array valid for
/// `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn wl_nr_report_copy(
    report: *const WlNrReport,
    times: *mut f64,
    deviation: *mut f64,
    ratio: *mut f64,
    capacity: usize,
) -> WlStatus {
    guard(|| {
        let r = &report
            .as_ref()
            .ok_or_else(|| Failure::null("report"))?
            .inner;
        let n = r.times.len();
        if capacity < n {
            return Err(Failure::new(
                WlStatus::BufferTooSmall,
                format!("need {n} entries, buffer holds {capacity}"),
            ));
        }
        for (dst, src) in [
            (times, &r.times),
            (deviation, &r.deviation),
            (ratio, &r.dominance_ratio),
        ] {
            if !dst.is_null() {
                ptr::copy_nonoverlapping(src.as_ptr(), dst, n);
            }
        }
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a live handle, and is dangling afterwards.
#[no_mangle]
pub unsafe extern "C" fn wl_nr_report_free(report: *mut WlNrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

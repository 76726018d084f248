//! C ABI for the pdm-lab library.
//!
//! Conventions:
//! * every fallible call returns a [`PdmStatus`]; `Ok` is 0;
//! * on failure, `pdm_last_error_message` returns a thread-local,
//!   NUL-terminated description valid until the next failing call;
//! * handle types (`PdmBackground`, `PdmSpectrum`, `PdmTrajectory`) are
//!   opaque; free them with the matching `*_free` function exactly once;
//! * no call stores the pointers you pass in; buffers only need to live for
//!   the duration of the call.
//!
//! The C header is generated into `include/pdm_lab.h` by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pdm_lab::classical::{
    measure_period, FlatCoupling, HarmonicPotential, PdmSystem, PhaseState, Trajectory,
};
use pdm_lab::dilaton::{BackgroundDescriptor, DilatonBackground, LinearNormalization};
use pdm_lab::error::Error;
use pdm_lab::quantum::{
    build_radial_hamiltonian, default_grid, solve_spectrum, Dimension, OscillatorSpec,
    RadialGridParams,
};
use pdm_lab::string::{tension_closed_form, tension_quadrature, StringConfig};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdmStatus {
    /// Success.
    Ok = 0,
    /// A parameter is out of range or inconsistent.
    InvalidArgument = 1,
    /// The background is singular or degenerate at the requested point.
    SingularBackground = 2,
    /// A solver or integrator failed to converge.
    NumericalFailure = 3,
    /// A required pointer argument was NULL.
    NullPointer = 4,
    /// A string argument was not valid UTF-8 or not parseable.
    InvalidString = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: PdmStatus, message: &str) -> PdmStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> PdmStatus {
    match err {
        Error::InvalidParameter { .. } | Error::InvalidGrid(_) | Error::Config(_) => {
            PdmStatus::InvalidArgument
        }
        Error::SingularLocus { .. }
        | Error::DegenerateBackground { .. }
        | Error::GridTouchesSingularity { .. } => PdmStatus::SingularBackground,
        _ => PdmStatus::NumericalFailure,
    }
}

fn fail_with(err: Error) -> PdmStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

fn guarded<F: FnOnce() -> PdmStatus>(body: F) -> PdmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(PdmStatus::NumericalFailure, "internal panic"),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. Never NULL;
/// empty when no failure has occurred. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn pdm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ---------------------------------------------------------------------------
// background

/// Exact Liouville dilaton background (opaque).
pub struct PdmBackground {
    inner: DilatonBackground,
}

/// All background fields at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmFieldPoint {
    pub phi: f64,
    pub b: f64,
    pub b_inv: f64,
    pub sqrt_b: f64,
    pub inv_sqrt_b: f64,
    pub quarter_b: f64,
    pub mass: f64,
}

/// Creates the f(ζ) = Aζ background on the Λ < 0 branch with explicit |Λ|.
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// `pdm_background_free`.
#[no_mangle]
pub unsafe extern "C" fn pdm_background_new_linear(
    kappa: f64,
    a_coeff: f64,
    abs_lambda: f64,
    out: *mut *mut PdmBackground,
) -> PdmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PdmStatus::NullPointer, "out pointer is NULL");
        }
        match DilatonBackground::linear(
            kappa,
            a_coeff,
            LinearNormalization::AbsLambda(abs_lambda),
        ) {
            Ok((inner, _)) => {
                *out = Box::into_raw(Box::new(PdmBackground { inner }));
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Creates the f(ζ) = Aζ background normalized to C = 1 (|Λ| derived).
///
/// # Safety
/// As `pdm_background_new_linear`.
#[no_mangle]
pub unsafe extern "C" fn pdm_background_new_linear_c_unity(
    kappa: f64,
    a_coeff: f64,
    out: *mut *mut PdmBackground,
) -> PdmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PdmStatus::NullPointer, "out pointer is NULL");
        }
        match DilatonBackground::linear(kappa, a_coeff, LinearNormalization::CTarget(1.0)) {
            Ok((inner, _)) => {
                *out = Box::into_raw(Box::new(PdmBackground { inner }));
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Creates a background from a JSON descriptor
/// `{"constants": {...}, "f": {...}, "branch": "..."}` (the same format the
/// CLI writes). Complex coefficients serialize as `[re, im]`.
///
/// # Safety
/// `descriptor_json` must be a NUL-terminated string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn pdm_background_new_from_json(
    descriptor_json: *const c_char,
    out: *mut *mut PdmBackground,
) -> PdmStatus {
    guarded(|| {
        if descriptor_json.is_null() || out.is_null() {
            return fail(PdmStatus::NullPointer, "descriptor or out pointer is NULL");
        }
        let text = match CStr::from_ptr(descriptor_json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(PdmStatus::InvalidString, "descriptor is not UTF-8"),
        };
        let descriptor: BackgroundDescriptor = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => {
                return fail(
                    PdmStatus::InvalidString,
                    &format!("descriptor JSON invalid: {e}"),
                )
            }
        };
        match DilatonBackground::from_descriptor(&descriptor) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PdmBackground { inner }));
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Evaluates φ, b and its powers, and the effective mass at (x, y).
///
/// # Safety
/// `bg` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdm_background_eval(
    bg: *const PdmBackground,
    x: f64,
    y: f64,
    out: *mut PdmFieldPoint,
) -> PdmStatus {
    guarded(|| {
        if bg.is_null() || out.is_null() {
            return fail(PdmStatus::NullPointer, "background or out pointer is NULL");
        }
        match (*bg).inner.eval(x, y) {
            Ok(p) => {
                *out = PdmFieldPoint {
                    phi: p.phi,
                    b: p.b,
                    b_inv: p.b_inv,
                    sqrt_b: p.sqrt_b,
                    inv_sqrt_b: p.inv_sqrt_b,
                    quarter_b: p.quarter_b,
                    mass: p.mass,
                };
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Releases a background handle. NULL is ignored.
///
/// # Safety
/// `bg` must come from a `pdm_background_new_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pdm_background_free(bg: *mut PdmBackground) {
    if !bg.is_null() {
        drop(Box::from_raw(bg));
    }
}

// ---------------------------------------------------------------------------
// spectrum

/// Solved oscillator spectrum (opaque).
pub struct PdmSpectrum {
    eigenvalues: Vec<f64>,
    bound: Vec<bool>,
    u_inf: Option<f64>,
    gram_deviation: f64,
}

/// Solves the k lowest eigenpairs of the PDM oscillator.
///
/// `dim` is 1 or 2; `ell` is the angular sector (d = 2 only). Pass `n = 0`
/// and/or `r_max <= 0` to use the built-in grid defaults.
///
/// # Safety
/// `out` must be a valid pointer; release with `pdm_spectrum_free`.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_solve(
    lambda: f64,
    alpha: f64,
    m0: f64,
    dim: u32,
    ell: u32,
    n: u64,
    r_max: f64,
    k: u64,
    out: *mut *mut PdmSpectrum,
) -> PdmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PdmStatus::NullPointer, "out pointer is NULL");
        }
        let dimension = match dim {
            1 if ell == 0 => Dimension::One,
            1 => return fail(PdmStatus::InvalidArgument, "ell requires dim = 2"),
            2 => Dimension::Two { ell },
            _ => return fail(PdmStatus::InvalidArgument, "dim must be 1 or 2"),
        };
        let spec = match OscillatorSpec::new(lambda, alpha, m0, dimension) {
            Ok(s) => s,
            Err(e) => return fail_with(e),
        };
        let defaults = default_grid(&spec);
        let params = RadialGridParams {
            n: if n == 0 { defaults.n } else { n as usize },
            r_max: if r_max > 0.0 { r_max } else { defaults.r_max },
        };
        let result = build_radial_hamiltonian(&spec, &params)
            .and_then(|op| solve_spectrum(&op, k as usize));
        match result {
            Ok(s) => {
                *out = Box::into_raw(Box::new(PdmSpectrum {
                    eigenvalues: s.eigenvalues,
                    bound: s.classification.flags,
                    u_inf: s.classification.u_inf,
                    gram_deviation: s.gram_deviation,
                }));
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Number of computed eigenpairs; 0 for a NULL handle.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_count(s: *const PdmSpectrum) -> u64 {
    if s.is_null() {
        return 0;
    }
    (&(*s).eigenvalues).len() as u64
}

/// Fetches eigenvalue `index` (ascending order).
///
/// # Safety
/// `s` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_eigenvalue(
    s: *const PdmSpectrum,
    index: u64,
    out: *mut f64,
) -> PdmStatus {
    if s.is_null() || out.is_null() {
        return fail(PdmStatus::NullPointer, "spectrum or out pointer is NULL");
    }
    let spectrum = &*s;
    match spectrum.eigenvalues.get(index as usize) {
        Some(&v) => {
            *out = v;
            PdmStatus::Ok
        }
        None => fail(PdmStatus::InvalidArgument, "eigenvalue index out of range"),
    }
}

/// Fetches the bound flag of state `index` (1 = bound, 0 = unbound).
///
/// # Safety
/// `s` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_bound_flag(
    s: *const PdmSpectrum,
    index: u64,
    out: *mut i32,
) -> PdmStatus {
    if s.is_null() || out.is_null() {
        return fail(PdmStatus::NullPointer, "spectrum or out pointer is NULL");
    }
    let spectrum = &*s;
    match spectrum.bound.get(index as usize) {
        Some(&b) => {
            *out = b as i32;
            PdmStatus::Ok
        }
        None => fail(PdmStatus::InvalidArgument, "bound-flag index out of range"),
    }
}

/// Gram-matrix deviation of the eigenvectors under the weighted measure.
///
/// # Safety
/// `s` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_gram_deviation(
    s: *const PdmSpectrum,
    out: *mut f64,
) -> PdmStatus {
    if s.is_null() || out.is_null() {
        return fail(PdmStatus::NullPointer, "spectrum or out pointer is NULL");
    }
    *out = (*s).gram_deviation;
    PdmStatus::Ok
}

/// Writes the asymptotic potential level 𝒰_∞ and returns 1, or returns 0
/// when λ = 0 (no finite threshold).
///
/// # Safety
/// `s` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_u_inf(s: *const PdmSpectrum, out: *mut f64) -> i32 {
    if s.is_null() || out.is_null() {
        return 0;
    }
    match (*s).u_inf {
        Some(u) => {
            *out = u;
            1
        }
        None => 0,
    }
}

/// Releases a spectrum handle. NULL is ignored.
///
/// # Safety
/// `s` must come from `pdm_spectrum_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pdm_spectrum_free(s: *mut PdmSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// string analysis

/// Flat summary of the dilaton-string tension report.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmTensionSummary {
    pub mu_quadrature: f64,
    pub mu_closed: f64,
    pub mu_kin: f64,
    pub mu_pot: f64,
    /// NaN when the asymptotic form is meaningless (ξ_C = 0).
    pub mu_asymptotic: f64,
    pub rel_discrepancy: f64,
    pub r_crit: f64,
    pub xi_crit: f64,
    /// 1 when ln(ξ_C + 1) > 1 + ξ_crit.
    pub positivity_flag: i32,
    pub positivity_margin: f64,
}

/// Computes tension (quadrature and closed form), the critical radius and the
/// positivity criterion in one call.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdm_string_tension(
    lambda: f64,
    abs_lambda: f64,
    kappa: f64,
    xi_c: f64,
    out: *mut PdmTensionSummary,
) -> PdmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PdmStatus::NullPointer, "out pointer is NULL");
        }
        let cfg = match StringConfig::new(lambda, abs_lambda, kappa, xi_c) {
            Ok(c) => c,
            Err(e) => return fail_with(e),
        };
        let q = match tension_quadrature(&cfg) {
            Ok(q) => q,
            Err(e) => return fail_with(e),
        };
        let c = tension_closed_form(&cfg);
        let p = pdm_lab::string::positivity_condition(&cfg);
        *out = PdmTensionSummary {
            mu_quadrature: q.mu,
            mu_closed: c.mu,
            mu_kin: q.mu_kin,
            mu_pot: q.mu_pot,
            mu_asymptotic: if c.mu_asymptotic.is_finite() {
                c.mu_asymptotic
            } else {
                f64::NAN
            },
            rel_discrepancy: (q.mu - c.mu).abs()
                / c.mu_kin.abs().max(c.mu_pot.abs()).max(f64::MIN_POSITIVE),
            r_crit: cfg.r_crit(),
            xi_crit: cfg.xi_crit(),
            positivity_flag: p.flag as i32,
            positivity_margin: p.margin,
        };
        PdmStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// classical dynamics

/// Integrated trajectory (opaque).
pub struct PdmTrajectory {
    inner: Trajectory,
    period: Option<f64>,
}

/// One trajectory sample. Only the first `dim` entries of `x` and `p` are
/// meaningful.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmPhasePoint {
    pub t: f64,
    pub dim: u32,
    pub x: [f64; 2],
    pub p: [f64; 2],
    pub energy: f64,
}

/// Integrates the PDM oscillator with the implicit midpoint rule.
///
/// λ = 0 runs with the coupling switched off (ordinary constant mass);
/// λ > 0 uses the C = 1 dilaton background. The potential is harmonic with
/// K = m₀α². `x0` and `p0` must point to `dim` doubles each.
///
/// # Safety
/// `x0`, `p0` and `out` must be valid; release via `pdm_trajectory_free`.
#[no_mangle]
pub unsafe extern "C" fn pdm_classical_integrate(
    lambda: f64,
    alpha: f64,
    m0: f64,
    dim: u32,
    x0: *const f64,
    p0: *const f64,
    step: f64,
    steps: u64,
    out: *mut *mut PdmTrajectory,
) -> PdmStatus {
    guarded(|| {
        if x0.is_null() || p0.is_null() || out.is_null() {
            return fail(PdmStatus::NullPointer, "x0, p0 or out pointer is NULL");
        }
        if !(dim == 1 || dim == 2) {
            return fail(PdmStatus::InvalidArgument, "dim must be 1 or 2");
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return fail(
                PdmStatus::InvalidArgument,
                "lambda must be finite and non-negative",
            );
        }
        let d = dim as usize;
        let x = std::slice::from_raw_parts(x0, d).to_vec();
        let p = std::slice::from_raw_parts(p0, d).to_vec();
        let s0 = match PhaseState::new(0.0, x, p) {
            Ok(s) => s,
            Err(e) => return fail_with(e),
        };
        let potential = HarmonicPotential {
            spring_constant: m0 * alpha * alpha,
        };
        let trajectory = if lambda == 0.0 {
            let coupling = FlatCoupling;
            PdmSystem::new(&coupling, &potential, m0)
                .and_then(|sys| sys.integrate(&s0, step, steps as usize))
        } else {
            DilatonBackground::linear(1.0, lambda.sqrt(), LinearNormalization::CTarget(1.0))
                .and_then(|(bg, _)| {
                    PdmSystem::new(&bg, &potential, m0)
                        .and_then(|sys| sys.integrate(&s0, step, steps as usize))
                })
        };
        match trajectory {
            Ok(tr) => {
                let period = measure_period(&tr).ok();
                *out = Box::into_raw(Box::new(PdmTrajectory { inner: tr, period }));
                PdmStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Number of stored samples (steps + 1); 0 for a NULL handle.
///
/// # Safety
/// `tr` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pdm_trajectory_len(tr: *const PdmTrajectory) -> u64 {
    if tr.is_null() {
        return 0;
    }
    (&(*tr).inner.states).len() as u64
}

/// Fetches sample `index`.
///
/// # Safety
/// `tr` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_trajectory_sample(
    tr: *const PdmTrajectory,
    index: u64,
    out: *mut PdmPhasePoint,
) -> PdmStatus {
    if tr.is_null() || out.is_null() {
        return fail(PdmStatus::NullPointer, "trajectory or out pointer is NULL");
    }
    let states = &(*tr).inner.states;
    let energies = &(*tr).inner.energies;
    match states.get(index as usize) {
        Some(s) => {
            let mut point = PdmPhasePoint {
                t: s.t,
                dim: s.dim() as u32,
                x: [0.0; 2],
                p: [0.0; 2],
                energy: energies[index as usize],
            };
            for (i, v) in s.x.iter().enumerate() {
                point.x[i] = *v;
            }
            for (i, v) in s.p.iter().enumerate() {
                point.p[i] = *v;
            }
            *out = point;
            PdmStatus::Ok
        }
        None => fail(PdmStatus::InvalidArgument, "sample index out of range"),
    }
}

/// Relative energy deviation over the whole run.
///
/// # Safety
/// `tr` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_trajectory_energy_drift(
    tr: *const PdmTrajectory,
    out: *mut f64,
) -> PdmStatus {
    if tr.is_null() || out.is_null() {
        return fail(PdmStatus::NullPointer, "trajectory or out pointer is NULL");
    }
    *out = (*tr).inner.energy_drift();
    PdmStatus::Ok
}

/// Writes the measured oscillation period and returns 1, or returns 0 for a
/// non-oscillatory trajectory.
///
/// # Safety
/// `tr` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pdm_trajectory_period(tr: *const PdmTrajectory, out: *mut f64) -> i32 {
    if tr.is_null() || out.is_null() {
        return 0;
    }
    match (*tr).period {
        Some(t) => {
            *out = t;
            1
        }
        None => 0,
    }
}

/// Releases a trajectory handle. NULL is ignored.
///
/// # Safety
/// `tr` must come from `pdm_classical_integrate` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pdm_trajectory_free(tr: *mut PdmTrajectory) {
    if !tr.is_null() {
        drop(Box::from_raw(tr));
    }
}

//! C ABI over `hbar-sim`.
//!
//! Every fallible call returns an [`HbarStatus`]; on failure a message is
//! available from [`hbar_last_error_message`] on the same thread. Objects
//! are opaque handles created by `*_new`/`*_parse`-style calls and released
//! with the matching `*_free`. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use libc::{c_char, c_int};

use hbar_sim::config::parse_config_with;
use hbar_sim::excitation::{
    excitation_probability_closed_form, excitation_probability_numeric, AtomSpec,
    ClosedFormVariant, ModeSpec, QuadratureConfig,
};
use hbar_sim::geometry::{self, BlackHole};
use hbar_sim::master_equation::{self, EvolveOptions, FockPopulations, ModeKinetics};
use hbar_sim::scenario::{self, RunReport, Stage};
use hbar_sim::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    DegenerateMode = 4,
    NonConvergence = 5,
    Positivity = 6,
    ConfigSyntax = 7,
    ConfigValidation = 8,
    Io = 9,
    Serialize = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Pipeline stage for [`hbar_scenario_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbarStage {
    Trajectory = 0,
    Excite = 1,
    Evolve = 2,
    Entropy = 3,
    Report = 4,
}

/// Emission/absorption rates of one mode.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbarModeRates {
    pub xi: f64,
    pub suppression: f64,
    pub gamma_e: f64,
    pub gamma_a: f64,
    pub injection_rate_r: f64,
    pub kappa_leak: f64,
}

/// Opaque black hole.
pub struct HbarBlackHole {
    inner: BlackHole,
}

/// Opaque photon-number distribution of one mode.
pub struct HbarPopulations {
    inner: FockPopulations,
}

/// Opaque parsed scenario.
pub struct HbarScenario {
    text: String,
    overrides: Vec<String>,
    cfg: hbar_sim::config::ScenarioConfig,
}

/// Opaque scenario result.
pub struct HbarReport {
    inner: RunReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HbarStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain { .. } => HbarStatus::Domain,
            Error::DegenerateMode(_) => HbarStatus::DegenerateMode,
            Error::NonConvergence { .. } => HbarStatus::NonConvergence,
            Error::Positivity { .. } => HbarStatus::Positivity,
            Error::ConfigSyntax(_) => HbarStatus::ConfigSyntax,
            Error::ConfigValidation { .. } => HbarStatus::ConfigValidation,
            Error::Io { .. } => HbarStatus::Io,
            Error::Serialize(_) => HbarStatus::Serialize,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HbarStatus::NullPointer, format!("{what} is null"))
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HbarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HbarStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HbarStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn in_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HbarStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hbar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hbar_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

// ---- black hole ----

/// Black hole of `mass_kg` in SI units.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_new(mass_kg: f64, out: *mut *mut HbarBlackHole) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let inner = BlackHole::new(mass_kg, hbar_sim::constants::Constants::SI)?;
        *out = boxed(HbarBlackHole { inner });
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_solar(solar_masses: f64, out: *mut *mut HbarBlackHole) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(HbarBlackHole {
            inner: BlackHole::solar(solar_masses)?,
        });
        Ok(())
    })
}

/// # Safety
/// `bh` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_free(bh: *mut HbarBlackHole) {
    if !bh.is_null() {
        drop(Box::from_raw(bh));
    }
}

unsafe fn bh_get(bh: *const HbarBlackHole, out: *mut f64, f: fn(&BlackHole) -> f64) -> HbarStatus {
    guard(|| {
        let bh = in_ref(bh, "bh")?;
        *out_ref(out, "out")? = f(&bh.inner);
        Ok(())
    })
}

/// Hawking temperature in kelvin.
///
/// # Safety
/// `bh` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_hawking_temperature(bh: *const HbarBlackHole, out: *mut f64) -> HbarStatus {
    bh_get(bh, out, BlackHole::hawking_temperature)
}

/// Gravitational radius `2GM/c^2` in meters.
///
/// # Safety
/// `bh` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_gravitational_radius(bh: *const HbarBlackHole, out: *mut f64) -> HbarStatus {
    bh_get(bh, out, BlackHole::gravitational_radius)
}

/// Horizon area in square meters.
///
/// # Safety
/// `bh` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_black_hole_area(bh: *const HbarBlackHole, out: *mut f64) -> HbarStatus {
    bh_get(bh, out, BlackHole::area)
}

// ---- geometry ----

/// `r* = r + ln(r - 1)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_tortoise(r: f64, out: *mut f64) -> HbarStatus {
    guard(|| {
        *out_ref(out, "out")? = geometry::tortoise(r)?;
        Ok(())
    })
}

/// Radius with tortoise coordinate `r_star`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_tortoise_inverse(r_star: f64, out: *mut f64) -> HbarStatus {
    guard(|| {
        *out_ref(out, "out")? = geometry::tortoise_inverse(r_star)?;
        Ok(())
    })
}

// ---- excitation ----

/// Closed-form excitation probability; `atom_dominant` drops the
/// `(1 + 2 nu/omega)^-2` factor.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_excitation_closed_form(
    omega: f64,
    nu: f64,
    g: f64,
    atom_dominant: bool,
    out: *mut f64,
) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let variant = if atom_dominant {
            ClosedFormVariant::AtomDominant
        } else {
            ClosedFormVariant::Full
        };
        let p = excitation_probability_closed_form(
            &AtomSpec::new(omega)?,
            &ModeSpec::new(nu, 0, g)?,
            variant,
        )?;
        *out = p.value;
        Ok(())
    })
}

/// Excitation probability by regulated quadrature with default settings.
/// Returns `NonConvergence` (with the outputs still written) when the
/// extrapolation error exceeds the relative tolerance.
///
/// # Safety
/// `value` and `error` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_excitation_numeric(
    omega: f64,
    nu: f64,
    g: f64,
    value: *mut f64,
    error: *mut f64,
) -> HbarStatus {
    guard(|| {
        let value = out_ref(value, "value")?;
        let error = out_ref(error, "error")?;
        let p = excitation_probability_numeric(
            &AtomSpec::new(omega)?,
            &ModeSpec::new(nu, 0, g)?,
            &QuadratureConfig::default(),
        )?;
        *value = p.value;
        *error = p.error;
        if !p.converged {
            return Err(Failure(
                HbarStatus::NonConvergence,
                format!("extrapolation error {} too large", p.error),
            ));
        }
        Ok(())
    })
}

// ---- master equation ----

impl From<ModeKinetics> for HbarModeRates {
    fn from(k: ModeKinetics) -> Self {
        HbarModeRates {
            xi: k.xi,
            suppression: k.suppression,
            gamma_e: k.gamma_e,
            gamma_a: k.gamma_a,
            injection_rate_r: k.injection_rate_r,
            kappa_leak: k.kappa_leak,
        }
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_mode_rates(
    omega: f64,
    nu: f64,
    g: f64,
    injection_rate_r: f64,
    out: *mut HbarModeRates,
) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let k = master_equation::mode_rates(&AtomSpec::new(omega)?, &ModeSpec::new(nu, 0, g)?, injection_rate_r)?;
        *out = k.into();
        Ok(())
    })
}

/// Thermal distribution at `xi`, truncated where the tail drops below
/// `tail_tol`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_steady_state(xi: f64, tail_tol: f64, out: *mut *mut HbarPopulations) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(HbarPopulations {
            inner: master_equation::steady_state(xi, tail_tol)?,
        });
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_vacuum(n_max: usize, out: *mut *mut HbarPopulations) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(HbarPopulations {
            inner: FockPopulations::vacuum(n_max),
        });
        Ok(())
    })
}

/// Copy `len` probabilities from `p`.
///
/// # Safety
/// `p` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_from_array(
    p: *const f64,
    len: usize,
    out: *mut *mut HbarPopulations,
) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if p.is_null() {
            return Err(null("p"));
        }
        let v = std::slice::from_raw_parts(p, len).to_vec();
        *out = boxed(HbarPopulations {
            inner: FockPopulations::new(v)?,
        });
        Ok(())
    })
}

/// Number of levels (`N + 1`); zero for NULL.
///
/// # Safety
/// `p` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_len(p: *const HbarPopulations) -> usize {
    p.as_ref().map_or(0, |p| p.inner.as_slice().len())
}

/// Copy the probabilities into `buf`, which must hold at least
/// [`hbar_populations_len`] doubles.
///
/// # Safety
/// `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_copy(p: *const HbarPopulations, buf: *mut f64, cap: usize) -> HbarStatus {
    guard(|| {
        let p = in_ref(p, "populations")?.inner.as_slice();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < p.len() {
            return Err(Failure(
                HbarStatus::BufferTooSmall,
                format!("need {} entries, have {cap}", p.len()),
            ));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

/// # Safety
/// `p` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_mean(p: *const HbarPopulations, out: *mut f64) -> HbarStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(p, "populations")?.inner.mean_photon_number();
        Ok(())
    })
}

/// Von Neumann entropy in units of `k_B`.
///
/// # Safety
/// `p` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_entropy(p: *const HbarPopulations, out: *mut f64) -> HbarStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(p, "populations")?.inner.entropy();
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hbar_populations_free(p: *mut HbarPopulations) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Evolve `p0` for `t_final` under `rates` with default step control.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hbar_evolve(
    p0: *const HbarPopulations,
    rates: *const HbarModeRates,
    t_final: f64,
    out: *mut *mut HbarPopulations,
) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let p0 = &in_ref(p0, "p0")?.inner;
        let r = in_ref(rates, "rates")?;
        let k = ModeKinetics::from_rates(r.gamma_e, r.gamma_a, r.kappa_leak)?;
        let ev = master_equation::evolve(
            p0,
            &k,
            &EvolveOptions {
                t_final,
                samples: 1,
                ..EvolveOptions::default()
            },
        )?;
        *out = boxed(HbarPopulations {
            inner: ev.last().clone(),
        });
        Ok(())
    })
}

// ---- scenarios ----

/// Parse a TOML scenario.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hbar_scenario_parse(toml: *const c_char, out: *mut *mut HbarScenario) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let text = in_str(toml, "toml")?.to_string();
        let cfg = parse_config_with(&text, &[])?;
        *out = boxed(HbarScenario {
            text,
            overrides: Vec::new(),
            cfg,
        });
        Ok(())
    })
}

/// Apply a `key=value` override. The scenario is unchanged on failure.
///
/// # Safety
/// `sc` must be a valid handle and `assignment` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hbar_scenario_set(sc: *mut HbarScenario, assignment: *const c_char) -> HbarStatus {
    guard(|| {
        let sc = out_ref(sc, "scenario")?;
        let a = in_str(assignment, "assignment")?.to_string();
        let mut overrides = sc.overrides.clone();
        overrides.push(a);
        sc.cfg = parse_config_with(&sc.text, &overrides)?;
        sc.overrides = overrides;
        Ok(())
    })
}

/// # Safety
/// `sc` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hbar_scenario_free(sc: *mut HbarScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// # Safety
/// `sc` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hbar_scenario_run(
    sc: *const HbarScenario,
    stage: HbarStage,
    out: *mut *mut HbarReport,
) -> HbarStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let sc = in_ref(sc, "scenario")?;
        let stage = match stage {
            HbarStage::Trajectory => Stage::Trajectory,
            HbarStage::Excite => Stage::Excite,
            HbarStage::Evolve => Stage::Evolve,
            HbarStage::Entropy => Stage::Entropy,
            HbarStage::Report => Stage::Report,
        };
        *out = boxed(HbarReport {
            inner: scenario::run_stage(&sc.cfg, stage)?,
        });
        Ok(())
    })
}

/// 0 when all checks pass, 2 otherwise; -1 for NULL.
///
/// # Safety
/// `r` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn hbar_report_exit_code(r: *const HbarReport) -> c_int {
    r.as_ref().map_or(-1, |r| r.inner.exit_code())
}

/// Report as JSON. `*needed` receives the size including the terminating
/// NUL; the text is written only if `cap` is large enough.
///
/// # Safety
/// `buf` must point to `cap` writable bytes (may be NULL when `cap` is 0);
/// `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hbar_report_json(
    r: *const HbarReport,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HbarStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        let needed = out_ref(needed, "needed")?;
        let json = serde_json::to_string(&r.inner).map_err(Error::from)?;
        *needed = json.len() + 1;
        if cap < json.len() + 1 || buf.is_null() {
            return Err(Failure(
                HbarStatus::BufferTooSmall,
                format!("need {} bytes, have {cap}", json.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(json.as_ptr().cast(), buf, json.len());
        *buf.add(json.len()) = 0;
        Ok(())
    })
}

/// Write the report's files into `dir` using the scenario's output settings.
///
/// # Safety
/// All pointers must be valid; `dir` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hbar_report_emit(
    r: *const HbarReport,
    sc: *const HbarScenario,
    dir: *const c_char,
) -> HbarStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        let sc = in_ref(sc, "scenario")?;
        let dir = in_str(dir, "dir")?;
        scenario::emit_outputs(&r.inner, &sc.cfg, Path::new(dir))?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hbar_report_free(r: *mut HbarReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

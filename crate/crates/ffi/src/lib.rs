//! C ABI for `specmult`.
//!
//! Every fallible call returns a [`SpecmultStatus`]; on failure the message is
//! available from [`specmult_last_error`] on the same thread. Objects are
//! opaque handles created by `*_new`/`*_from_*` calls and released with the
//! matching `*_free`.

use specmult::experiments::{self, ExperimentConfig, Outcome};
use specmult::norms::PowerOptions;
use specmult::riesz::{discrete_riesz_operator, CyclicGroupSpec, LatticeMultiplier};
use specmult::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecmultStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parameter = 3,
    Domain = 4,
    Atl = 5,
    Shape = 6,
    UnsupportedMode = 7,
    Numerical = 8,
    Divergence = 9,
    UnknownExperiment = 10,
    Io = 11,
    Json = 12,
    Csv = 13,
    OutOfRange = 14,
    Panic = 15,
}

impl From<&Error> for SpecmultStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) => Self::Parameter,
            Error::Domain { .. } => Self::Domain,
            Error::Atl { .. } => Self::Atl,
            Error::Shape(_) => Self::Shape,
            Error::UnsupportedMode(_) => Self::UnsupportedMode,
            Error::Numerical(_) => Self::Numerical,
            Error::Divergence(_) => Self::Divergence,
            Error::UnknownExperiment { .. } => Self::UnknownExperiment,
            Error::Io(_) => Self::Io,
            Error::Json(_) => Self::Json,
            Error::Csv(_) => Self::Csv,
        }
    }
}

/// An experiment configuration.
pub struct SpecmultConfig(ExperimentConfig);

/// Files written and flags raised by one run.
pub struct SpecmultOutcome {
    files: Vec<CString>,
    flags: Vec<CString>,
}

/// The discrete Riesz transform `R_r` on `Z_K^d` for the simple walk.
pub struct SpecmultRiesz(LatticeMultiplier);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SpecmultStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SpecmultStatus::from(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SpecmultStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SpecmultStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpecmultStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SpecmultStatus::NullPointer, format!("{what} is null"))
}

unsafe fn as_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(SpecmultStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn c_strings(items: &[impl AsRef<str>]) -> Vec<CString> {
    items.iter().filter_map(|s| CString::new(s.as_ref()).ok()).collect()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn specmult_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn specmult_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Number of registered experiments.
#[no_mangle]
pub extern "C" fn specmult_experiment_count() -> usize {
    experiments::EXPERIMENTS.len()
}

/// Name of experiment `index` as a static string, or null when out of range.
#[no_mangle]
pub extern "C" fn specmult_experiment_name(index: usize) -> *const c_char {
    static NAMES: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();
    let names = NAMES.get_or_init(|| c_strings(&experiments::names()));
    names.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// Parses a JSON configuration. A relative `output` is kept as given.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specmult_config_from_json(json: *const c_char, out: *mut *mut SpecmultConfig) -> SpecmultStatus {
    guard(|| {
        let text = as_str(json, "json")?;
        let cfg = ExperimentConfig::from_json(text)?;
        store(out, SpecmultConfig(cfg))
    })
}

/// Reads a JSON configuration file; a relative `output` resolves against the
/// file's directory.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specmult_config_from_file(path: *const c_char, out: *mut *mut SpecmultConfig) -> SpecmultStatus {
    guard(|| {
        let path = as_str(path, "path")?;
        let cfg = ExperimentConfig::from_file(Path::new(path))?;
        store(out, SpecmultConfig(cfg))
    })
}

/// Replaces the seed of a configuration.
///
/// # Safety
/// `config` must be a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn specmult_config_set_seed(config: *mut SpecmultConfig, seed: u64) -> SpecmultStatus {
    guard(|| {
        let cfg = config.as_mut().ok_or_else(|| null("config"))?;
        cfg.0.seed = seed;
        Ok(())
    })
}

/// Replaces the output directory of a configuration.
///
/// # Safety
/// `config` must be a handle from this library and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn specmult_config_set_output(config: *mut SpecmultConfig, dir: *const c_char) -> SpecmultStatus {
    guard(|| {
        let dir = as_str(dir, "dir")?;
        let cfg = config.as_mut().ok_or_else(|| null("config"))?;
        cfg.0.output = dir.into();
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn specmult_config_free(config: *mut SpecmultConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the configured experiment and writes its files.
///
/// # Safety
/// `config` must be a handle from this library and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specmult_run(config: *const SpecmultConfig, out: *mut *mut SpecmultOutcome) -> SpecmultStatus {
    guard(|| {
        let cfg = as_ref(config, "config")?;
        let Outcome { files, flags } = experiments::run(&cfg.0)?;
        let files: Vec<String> = files.iter().map(|p| p.to_string_lossy().into_owned()).collect();
        store(out, SpecmultOutcome { files: c_strings(&files), flags: c_strings(&flags) })
    })
}

/// # Safety
/// `outcome` must be a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn specmult_outcome_file_count(outcome: *const SpecmultOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.files.len())
}

/// Path of written file `index`, owned by `outcome`, or null when out of range.
///
/// # Safety
/// `outcome` must be a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn specmult_outcome_file(outcome: *const SpecmultOutcome, index: usize) -> *const c_char {
    outcome.as_ref().and_then(|o| o.files.get(index)).map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `outcome` must be a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn specmult_outcome_flag_count(outcome: *const SpecmultOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.flags.len())
}

/// Flag `index`, owned by `outcome`, or null when out of range.
///
/// # Safety
/// `outcome` must be a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn specmult_outcome_flag(outcome: *const SpecmultOutcome, index: usize) -> *const c_char {
    outcome.as_ref().and_then(|o| o.flags.get(index)).map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `outcome` must be null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn specmult_outcome_free(outcome: *mut SpecmultOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// Builds `R_r` on `Z_K^d`, `0 ≤ r < d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specmult_riesz_new(k: usize, d: usize, r: usize, out: *mut *mut SpecmultRiesz) -> SpecmultStatus {
    guard(|| {
        let spec = CyclicGroupSpec::simple_walk(k, d)?;
        let op = discrete_riesz_operator(&spec, r)?;
        store(out, SpecmultRiesz(op))
    })
}

/// Exact `L²` operator norm.
///
/// # Safety
/// `riesz` must be a handle from this library and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specmult_riesz_l2_norm(riesz: *const SpecmultRiesz, value: *mut f64) -> SpecmultStatus {
    guard(|| {
        let op = as_ref(riesz, "riesz")?;
        let value = value.as_mut().ok_or_else(|| null("value"))?;
        *value = op.0.l2_norm();
        Ok(())
    })
}

/// Certified bracket `lower ≤ ‖R_r‖_{p→p} ≤ upper` for `p > 1`.
///
/// # Safety
/// `riesz` must be a handle from this library; `lower` and `upper` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn specmult_riesz_lp_bounds(
    riesz: *const SpecmultRiesz,
    p: f64,
    seed: u64,
    lower: *mut f64,
    upper: *mut f64,
) -> SpecmultStatus {
    guard(|| {
        let op = as_ref(riesz, "riesz")?;
        if !(p > 1.0 && p.is_finite()) {
            return Err(Failure(SpecmultStatus::OutOfRange, format!("p = {p} must be finite and > 1")));
        }
        let (lo, hi) = (lower.as_mut().ok_or_else(|| null("lower"))?, upper.as_mut().ok_or_else(|| null("upper"))?);
        *lo = op.0.lower_bound(p, &PowerOptions { seed, ..PowerOptions::default() });
        *hi = op.0.upper_bound(p);
        Ok(())
    })
}

/// # Safety
/// `riesz` must be null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn specmult_riesz_free(riesz: *mut SpecmultRiesz) {
    if !riesz.is_null() {
        drop(Box::from_raw(riesz));
    }
}

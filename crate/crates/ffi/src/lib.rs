//! C ABI over the `symsep` library.
//!
//! States live behind an opaque handle created by one of the constructors and
//! released with `symsep_state_free`. Every fallible call returns a
//! `SymsepStatus`; on failure `symsep_last_error` gives a message that stays
//! valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use symsep::cli::format::{read_state, LoadedState};
use symsep::concurrence::multipartite_concurrence;
use symsep::linalg::{ComplexMatrix, DimSpec};
use symsep::num_complex::Complex64;
use symsep::separability::{
    ppt_oracle, pure_state_check, sample_witness_detection, wootters_oracle, DetectionConfig, PptVerdict,
    ViolationTolerance,
};
use symsep::states::{DensityMatrix, PureState};
use symsep::Error;

/// Result codes. Zero means success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymsepStatus {
    Ok = 0,
    InvalidArgument = 1,
    Shape = 2,
    NotDensityMatrix = 3,
    SizeLimit = 4,
    Numerical = 5,
    Io = 6,
    Format = 7,
    NullPointer = 8,
    Panic = 9,
}

impl From<&Error> for SymsepStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Argument(_) => SymsepStatus::InvalidArgument,
            Error::Shape(_) => SymsepStatus::Shape,
            Error::NotDensityMatrix(_) => SymsepStatus::NotDensityMatrix,
            Error::SizeLimit { .. } => SymsepStatus::SizeLimit,
            Error::Numerical(_) => SymsepStatus::Numerical,
            Error::Io(_) => SymsepStatus::Io,
            Error::Format(_) => SymsepStatus::Format,
        }
    }
}

/// Opaque state handle.
pub struct SymsepState {
    inner: LoadedState,
}

/// Summary of a detection run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymsepDetection {
    /// 1 when a violation (or, for pure input, a nonzero basis overlap) was found.
    pub entangled: i32,
    pub trials_run: usize,
    pub violations: usize,
    /// 0 when no trial violated.
    pub first_violation_trial: usize,
    pub max_margin: f64,
}

/// Partial-transpose check.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymsepPpt {
    /// 1 when the partial transpose has a negative eigenvalue.
    pub npt: i32,
    pub min_eigenvalue: f64,
    pub negativity: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F>(f: F) -> SymsepStatus
where
    F: FnOnce() -> Result<(), (SymsepStatus, String)>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymsepStatus::Ok,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            SymsepStatus::Panic
        }
    }
}

fn lib<T>(r: symsep::Result<T>) -> Result<T, (SymsepStatus, String)> {
    r.map_err(|e| ((&e).into(), e.to_string()))
}

fn null(what: &str) -> (SymsepStatus, String) {
    (SymsepStatus::NullPointer, format!("{what} is null"))
}

unsafe fn state_ref<'a>(s: *const SymsepState) -> Result<&'a LoadedState, (SymsepStatus, String)> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| null("state"))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (SymsepStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn store(out: *mut *mut SymsepState, state: LoadedState) -> Result<(), (SymsepStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(SymsepState { inner: state }));
    Ok(())
}

unsafe fn dims_from(dims: *const usize, n_dims: usize) -> Result<DimSpec, (SymsepStatus, String)> {
    lib(DimSpec::new(read_slice(dims, n_dims, "dims")?.to_vec()))
}

/// Builds a pure state from `len` complex coefficients, normalizing them.
///
/// # Safety
/// `dims` must point to `n_dims` values, `re` and `im` to `len` values each,
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_pure(
    dims: *const usize,
    n_dims: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut SymsepState,
) -> SymsepStatus {
    guard(|| {
        let ds = dims_from(dims, n_dims)?;
        let re = read_slice(re, len, "re")?;
        let im = read_slice(im, len, "im")?;
        let coeffs = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let psi = lib(PureState::from_coeffs(ds, coeffs))?;
        store(out, LoadedState::Pure(psi))
    })
}

/// Builds a density matrix from row-major `side × side` real and imaginary parts.
///
/// # Safety
/// `dims` must point to `n_dims` values, `re` and `im` to `side * side`
/// values each, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_mixed(
    dims: *const usize,
    n_dims: usize,
    re: *const f64,
    im: *const f64,
    side: usize,
    out: *mut *mut SymsepState,
) -> SymsepStatus {
    guard(|| {
        let ds = dims_from(dims, n_dims)?;
        let n = side
            .checked_mul(side)
            .ok_or((SymsepStatus::SizeLimit, "side overflows".to_string()))?;
        let re = read_slice(re, n, "re")?;
        let im = read_slice(im, n, "im")?;
        let data = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let m = lib(ComplexMatrix::from_row_major(side, side, data))?;
        let rho = lib(DensityMatrix::new(ds, m))?;
        store(out, LoadedState::Mixed(rho))
    })
}

/// Reads a state file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_load(path: *const c_char, out: *mut *mut SymsepState) -> SymsepStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let p = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (SymsepStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let state = lib(read_state(Path::new(p)))?;
        store(out, state)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must come from a constructor in this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_free(state: *mut SymsepState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Total Hilbert-space dimension, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_dimension(state: *const SymsepState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dims().total())
}

/// 1 for a pure state, 0 for a density matrix, -1 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_is_pure(state: *const SymsepState) -> i32 {
    match state.as_ref() {
        Some(s) => matches!(s.inner, LoadedState::Pure(_)) as i32,
        None => -1,
    }
}

/// Concurrence of a pure state (mixed states are rejected).
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_concurrence(state: *const SymsepState, out: *mut f64) -> SymsepStatus {
    guard(|| {
        let psi = match state_ref(state)? {
            LoadedState::Pure(p) => p,
            LoadedState::Mixed(_) => {
                return Err((
                    SymsepStatus::InvalidArgument,
                    "concurrence of a mixed state needs the convex roof, which is not computed".into(),
                ))
            }
        };
        let c = lib(multipartite_concurrence(psi))?;
        *out.as_mut().ok_or_else(|| null("out"))? = c;
        Ok(())
    })
}

/// Random-witness detection. For pure states the verdict comes from the
/// complete basis check and the sampling fields are still filled in.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_detect(
    state: *const SymsepState,
    trials: usize,
    seed: u64,
    full_stats: i32,
    out: *mut SymsepDetection,
) -> SymsepStatus {
    guard(|| {
        let s = state_ref(state)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg = DetectionConfig {
            trials,
            master_seed: seed,
            tolerance: ViolationTolerance::default(),
            full_stats: full_stats != 0,
        };
        let report = lib(sample_witness_detection(&s.to_density(), "ffi", &cfg))?;
        let entangled = match s {
            LoadedState::Pure(p) => !lib(pure_state_check(p))?.separable,
            LoadedState::Mixed(_) => report.violations > 0,
        };
        *out = SymsepDetection {
            entangled: entangled as i32,
            trials_run: report.trials_run,
            violations: report.violations,
            first_violation_trial: report.first_violation_trial.unwrap_or(0),
            max_margin: report.max_margin,
        };
        Ok(())
    })
}

/// Partial transpose on `subsystem` (1-based) of a bipartite state.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_ppt(state: *const SymsepState, subsystem: usize, out: *mut SymsepPpt) -> SymsepStatus {
    guard(|| {
        let s = state_ref(state)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if subsystem == 0 {
            return Err((SymsepStatus::InvalidArgument, "subsystem is 1-based".into()));
        }
        let r = lib(ppt_oracle(&s.to_density(), subsystem - 1))?;
        *out = SymsepPpt {
            npt: (r.verdict == PptVerdict::Npt) as i32,
            min_eigenvalue: r.min_eigenvalue,
            negativity: r.negativity,
        };
        Ok(())
    })
}

/// Two-qubit spin-flip concurrence.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symsep_wootters(state: *const SymsepState, out: *mut f64) -> SymsepStatus {
    guard(|| {
        let s = state_ref(state)?;
        let c = lib(wootters_oracle(&s.to_density()))?;
        *out.as_mut().ok_or_else(|| null("out"))? = c;
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or null.
#[no_mangle]
pub extern "C" fn symsep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn symsep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(SymsepStatus::from(&Error::SizeLimit { requested: 5, limit: 4 }), SymsepStatus::SizeLimit);
        assert_eq!(SymsepStatus::from(&Error::Format("x".into())), SymsepStatus::Format);
        assert_eq!(SymsepStatus::Ok as i32, 0);
    }

    #[test]
    fn panics_become_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, SymsepStatus::Panic);
        assert!(!symsep_last_error().is_null());
        assert_eq!(guard(|| Ok(())), SymsepStatus::Ok);
        assert!(symsep_last_error().is_null());
    }
}

//! C ABI over the grover-ev simulator.
//!
//! All functions return a `GroverStatus` code; results come back through
//! out-parameters. Search instances are opaque handles created with
//! `grover_instance_new` (or `grover_instance_random`) and released with
//! `grover_instance_free`. Strings returned by `grover_run_json` are
//! heap-allocated and must be released with `grover_string_free`.
//!
//! The generated header lives at `include/grover_ev.h`.

use std::ffi::{c_char, CString};
use std::ptr;
use std::slice;

use grover_ev::driver::{run_standard_ev, run_standard_pm, run_truncated_ev};
use grover_ev::filter::MeasureMode;
use grover_ev::measure::EnsembleModel;
use grover_ev::state::SearchInstance;
use grover_ev::{analytic, Error};

/// Status codes mirrored into the C header.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroverStatus {
    Ok = 0,
    NullPointer = 1,
    QubitCountOutOfRange = 2,
    MarkedOutOfRange = 3,
    DegenerateInstance = 4,
    InfeasibleResolution = 5,
    InvalidArgument = 6,
    SearchFailed = 7,
    InternalError = 8,
}

fn status_of(err: &Error) -> GroverStatus {
    match err {
        Error::QubitCountOutOfRange { .. } => GroverStatus::QubitCountOutOfRange,
        Error::MarkedOutOfRange { .. } => GroverStatus::MarkedOutOfRange,
        Error::DegenerateInstance { .. } => GroverStatus::DegenerateInstance,
        Error::InfeasibleResolution { .. } => GroverStatus::InfeasibleResolution,
        Error::DimensionMismatch { .. }
        | Error::QubitIndexOutOfRange { .. }
        | Error::InvalidCorrelationSpec(_)
        | Error::EmptyEnsemble
        | Error::InvalidConfig(_) => GroverStatus::InvalidArgument,
        _ => GroverStatus::InternalError,
    }
}

/// Opaque search-instance handle.
pub struct GroverInstance {
    inner: SearchInstance,
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn grover_status_message(status: GroverStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        GroverStatus::Ok => b"ok\0",
        GroverStatus::NullPointer => b"null pointer argument\0",
        GroverStatus::QubitCountOutOfRange => b"qubit count out of range\0",
        GroverStatus::MarkedOutOfRange => b"marked location out of range\0",
        GroverStatus::DegenerateInstance => b"degenerate instance (no marked or all marked)\0",
        GroverStatus::InfeasibleResolution => b"resolution not below 1/M\0",
        GroverStatus::InvalidArgument => b"invalid argument\0",
        GroverStatus::SearchFailed => b"search did not locate a marked item\0",
        GroverStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Creates a search instance over 2^num_qubits locations with the given
/// marked set.
///
/// # Safety
/// `marked` must point to `marked_len` readable u64 values and
/// `out_instance` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn grover_instance_new(
    num_qubits: usize,
    marked: *const u64,
    marked_len: usize,
    out_instance: *mut *mut GroverInstance,
) -> GroverStatus {
    if out_instance.is_null() || (marked.is_null() && marked_len > 0) {
        return GroverStatus::NullPointer;
    }
    let marked_slice = if marked_len == 0 {
        &[]
    } else {
        slice::from_raw_parts(marked, marked_len)
    };
    match SearchInstance::new(num_qubits, marked_slice) {
        Ok(inner) => {
            *out_instance = Box::into_raw(Box::new(GroverInstance { inner }));
            GroverStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Creates an instance with `num_marked` randomly placed marked items.
///
/// # Safety
/// `out_instance` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn grover_instance_random(
    num_qubits: usize,
    num_marked: u64,
    seed: u64,
    out_instance: *mut *mut GroverInstance,
) -> GroverStatus {
    if out_instance.is_null() {
        return GroverStatus::NullPointer;
    }
    match SearchInstance::random(num_qubits, num_marked, seed) {
        Ok(inner) => {
            *out_instance = Box::into_raw(Box::new(GroverInstance { inner }));
            GroverStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Releases an instance handle. Passing NULL is a no-op.
///
/// # Safety
/// `instance` must have been returned by an instance constructor and not
/// already freed.
#[no_mangle]
pub unsafe extern "C" fn grover_instance_free(instance: *mut GroverInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Rotation angle theta = arccos(1 - 2M/N).
///
/// # Safety
/// `instance` and `out_theta` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_theta(
    instance: *const GroverInstance,
    out_theta: *mut f64,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_theta.is_null()) else {
        return GroverStatus::NullPointer;
    };
    match analytic::theta_of(inst.inner.num_marked(), inst.inner.dimension()) {
        Ok(theta) => {
            *out_theta = theta;
            GroverStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Standard-version iteration count floor(sqrt(N/M) pi/4), clamped at 1.
///
/// # Safety
/// `instance` and `out_m` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_m_standard(
    instance: *const GroverInstance,
    out_m: *mut u64,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_m.is_null()) else {
        return GroverStatus::NullPointer;
    };
    *out_m = analytic::m_standard(inst.inner.num_marked(), inst.inner.dimension());
    GroverStatus::Ok
}

/// EV attenuation A_m after m iterations.
///
/// # Safety
/// `instance` and `out_attenuation` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_attenuation_after(
    instance: *const GroverInstance,
    m: u64,
    out_attenuation: *mut f64,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_attenuation.is_null()) else {
        return GroverStatus::NullPointer;
    };
    match analytic::attenuation_after(m, inst.inner.num_marked(), inst.inner.dimension()) {
        Ok(a) => {
            *out_attenuation = a;
            GroverStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Minimum truncated iteration count for device resolution epsilon.
///
/// # Safety
/// `instance` and `out_m` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_min_truncated_iterations(
    instance: *const GroverInstance,
    epsilon: f64,
    out_m: *mut u64,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_m.is_null()) else {
        return GroverStatus::NullPointer;
    };
    match analytic::min_truncated_iterations(
        epsilon,
        inst.inner.num_marked(),
        inst.inner.dimension(),
    ) {
        Ok(m) => {
            *out_m = m;
            GroverStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

fn mode_for(ensemble_size: u64, seed: u64, epsilon: f64) -> Result<MeasureMode, Error> {
    if ensemble_size == 0 {
        Ok(MeasureMode::Exact)
    } else {
        Ok(MeasureMode::Sampled(EnsembleModel::new(
            ensemble_size,
            seed,
            epsilon,
        )?))
    }
}

/// Standard PM version; writes the sampled location.
///
/// Returns `SearchFailed` when the measured location is unmarked (a
/// legitimate probabilistic miss); `out_location` still holds it.
///
/// # Safety
/// `instance` and `out_location` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_run_pm(
    instance: *const GroverInstance,
    seed: u64,
    out_location: *mut u64,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_location.is_null()) else {
        return GroverStatus::NullPointer;
    };
    match run_standard_pm(&inst.inner, seed) {
        Ok(result) => {
            *out_location = result.found.unwrap_or(0);
            if result.success {
                GroverStatus::Ok
            } else {
                GroverStatus::SearchFailed
            }
        }
        Err(err) => status_of(&err),
    }
}

/// Standard EV version (filtered cascade when more than one item is
/// marked). `ensemble_size` 0 reads exact expectation values.
///
/// # Safety
/// `instance`, `out_location` and `out_runs_used` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_run_ev_standard(
    instance: *const GroverInstance,
    ensemble_size: u64,
    seed: u64,
    epsilon: f64,
    out_location: *mut u64,
    out_runs_used: *mut u64,
) -> GroverStatus {
    let (Some(inst), false) = (
        instance.as_ref(),
        out_location.is_null() || out_runs_used.is_null(),
    ) else {
        return GroverStatus::NullPointer;
    };
    let mode = match mode_for(ensemble_size, seed, epsilon) {
        Ok(mode) => mode,
        Err(err) => return status_of(&err),
    };
    match run_standard_ev(&inst.inner, &mode) {
        Ok(result) => {
            *out_location = result.found.unwrap_or(0);
            *out_runs_used = result.runs_used;
            if result.success {
                GroverStatus::Ok
            } else {
                GroverStatus::SearchFailed
            }
        }
        Err(err) => status_of(&err),
    }
}

/// Truncated EV version at device resolution epsilon.
///
/// # Safety
/// `instance` and the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn grover_run_ev_truncated(
    instance: *const GroverInstance,
    epsilon: f64,
    ensemble_size: u64,
    seed: u64,
    out_location: *mut u64,
    out_iterations: *mut u64,
    out_runs_used: *mut u64,
) -> GroverStatus {
    let (Some(inst), false) = (
        instance.as_ref(),
        out_location.is_null() || out_iterations.is_null() || out_runs_used.is_null(),
    ) else {
        return GroverStatus::NullPointer;
    };
    let mode = match mode_for(ensemble_size, seed, epsilon) {
        Ok(mode) => mode,
        Err(err) => return status_of(&err),
    };
    match run_truncated_ev(&inst.inner, epsilon, &mode) {
        Ok(result) => {
            *out_location = result.found.unwrap_or(0);
            *out_iterations = result.iterations_used;
            *out_runs_used = result.runs_used;
            if result.success {
                GroverStatus::Ok
            } else {
                GroverStatus::SearchFailed
            }
        }
        Err(err) => status_of(&err),
    }
}

/// Runs the truncated EV version and returns the full result record as a
/// JSON string (same schema as the CLI). Free it with
/// `grover_string_free`.
///
/// # Safety
/// `instance` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grover_run_json(
    instance: *const GroverInstance,
    epsilon: f64,
    ensemble_size: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> GroverStatus {
    let (Some(inst), false) = (instance.as_ref(), out_json.is_null()) else {
        return GroverStatus::NullPointer;
    };
    let mode = match mode_for(ensemble_size, seed, epsilon) {
        Ok(mode) => mode,
        Err(err) => return status_of(&err),
    };
    let result = match run_truncated_ev(&inst.inner, epsilon, &mode) {
        Ok(result) => result,
        Err(err) => return status_of(&err),
    };
    let json = match grover_ev::output::result_json(&result) {
        Ok(json) => json,
        Err(err) => return status_of(&err),
    };
    match CString::new(json) {
        Ok(cstring) => {
            *out_json = cstring.into_raw();
            GroverStatus::Ok
        }
        Err(_) => {
            *out_json = ptr::null_mut();
            GroverStatus::InternalError
        }
    }
}

/// Releases a string returned by `grover_run_json`. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not already freed.
#[no_mangle]
pub unsafe extern "C" fn grover_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

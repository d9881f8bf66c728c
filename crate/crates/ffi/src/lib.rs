//! C ABI for the exact anticoncentration engines.
//!
//! Conventions:
//! - Opaque handles (`QloPoly`, `QloMatrix`) own parsed objects; free them
//!   with the matching `_free` function.
//! - Every fallible call returns a `QloStatus`; results come back as
//!   JSON-encoded C strings allocated by this library and released with
//!   `qlo_string_free`.
//! - On error, `qlo_last_error` returns a thread-local message.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qlo_core::algebra::{LinearConstraint, QuadPoly, RatMatrix};
use qlo_core::bounds;
use qlo_core::engine::{self, EnumOptions};
use qlo_core::jsonio;
use qlo_core::num::parse_rational;
use qlo_core::rank;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum QloStatus {
    Ok = 0,
    /// A verdict was produced but it is inconclusive.
    Inconclusive = 1,
    /// Malformed input (JSON, rational syntax, dimensions).
    InvalidInput = 2,
    /// The requested computation exceeds a configured cap.
    CapExceeded = 3,
    /// A stated hypothesis failed mid-computation.
    HypothesisViolated = 4,
    /// Null pointer or UTF-8 failure at the boundary.
    BadPointer = 5,
    /// Internal panic; a bug, not a usage error.
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let cstr = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstr));
}

fn status_of(err: &qlo_core::Error) -> QloStatus {
    use qlo_core::Error::*;
    match err {
        EnumerationCapExceeded { .. } | SupportProductCapExceeded { .. } => QloStatus::CapExceeded,
        HypothesisViolated { .. } => QloStatus::HypothesisViolated,
        _ => QloStatus::InvalidInput,
    }
}

/// Last error message for this thread, or null if none. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn qlo_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `ptr` must have been returned by a qlo function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qlo_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QloStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(QloStatus::BadPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        QloStatus::BadPointer
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> QloStatus {
    let cstr = match CString::new(text) {
        Ok(s) => s,
        Err(_) => {
            set_error("result contained an interior NUL");
            return QloStatus::Internal;
        }
    };
    unsafe { *out = cstr.into_raw() };
    QloStatus::Ok
}

fn guarded(f: impl FnOnce() -> QloStatus) -> QloStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            QloStatus::Internal
        }
    }
}

/// Opaque parsed quadratic polynomial.
pub struct QloPoly(QuadPoly);

/// Opaque parsed rational matrix.
pub struct QloMatrix(RatMatrix);

/// Parses a polynomial from its JSON wire format.
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlo_poly_parse(json: *const c_char, out: *mut *mut QloPoly) -> QloStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match jsonio::poly_from_json(text) {
            Ok(q) => {
                *out = Box::into_raw(Box::new(QloPoly(q)));
                QloStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `ptr` must come from `qlo_poly_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlo_poly_free(ptr: *mut QloPoly) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Parses a matrix from its JSON wire format.
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlo_matrix_parse(
    json: *const c_char,
    out: *mut *mut QloMatrix,
) -> QloStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match jsonio::matrix_from_json(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(QloMatrix(m)));
                QloStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `ptr` must come from `qlo_matrix_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlo_matrix_free(ptr: *mut QloMatrix) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Exact histogram of Q over {-1,1}^n as JSON (sup included), enumeration
/// capped at `cap` variables.
///
/// # Safety
/// `poly` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlo_poly_histogram(
    poly: *const QloPoly,
    cap: usize,
    out: *mut *mut c_char,
) -> QloStatus {
    guarded(|| {
        if poly.is_null() {
            set_error("null polynomial handle");
            return QloStatus::BadPointer;
        }
        let q = &(*poly).0;
        let opts = EnumOptions::serial(cap);
        match engine::histogram(q, None, &opts) {
            Ok(hist) => {
                let (sup_z, sup_p) = hist.sup_point_prob().expect("nonempty");
                let mut value =
                    serde_json::to_value(jsonio::histogram_to_dto("distribution of Q", &hist))
                        .expect("serializable");
                value["sup_z"] =
                    serde_json::Value::String(qlo_core::num::format_rational(&sup_z));
                value["sup_prob"] = serde_json::Value::String(qlo_core::num::format_rational(
                    &sup_p.to_rational(),
                ));
                give_string(out, value.to_string())
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Exact Pr[Q = z] (and optionally M xi = w from `constraint_json`).
///
/// # Safety
/// `poly` must be a live handle; strings NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlo_poly_point_prob(
    poly: *const QloPoly,
    z: *const c_char,
    constraint_json: *const c_char,
    cap: usize,
    out: *mut *mut c_char,
) -> QloStatus {
    guarded(|| {
        if poly.is_null() {
            set_error("null polynomial handle");
            return QloStatus::BadPointer;
        }
        let q = &(*poly).0;
        let z = match read_str(z).and_then(|t| {
            parse_rational(t).map_err(|e| {
                set_error(&e.to_string());
                QloStatus::InvalidInput
            })
        }) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let cons: Option<LinearConstraint> = if constraint_json.is_null() {
            None
        } else {
            match read_str(constraint_json) {
                Ok(t) => match jsonio::constraint_from_json(t) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        set_error(&e.to_string());
                        return status_of(&e);
                    }
                },
                Err(s) => return s,
            }
        };
        match engine::histogram(q, cons.as_ref(), &EnumOptions::serial(cap)) {
            Ok(hist) => {
                let p = hist.point_prob(&z);
                let dto = jsonio::event_result(&format!("Q = {z}"), &p);
                give_string(out, serde_json::to_string(&dto).expect("serializable"))
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Halasz-class membership certificate as JSON; Inconclusive surfaces in the
/// status code.
///
/// # Safety
/// `matrix` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlo_halasz_membership(
    matrix: *const QloMatrix,
    s: usize,
    budget: u64,
    out: *mut *mut c_char,
) -> QloStatus {
    guarded(|| {
        if matrix.is_null() {
            set_error("null matrix handle");
            return QloStatus::BadPointer;
        }
        let m = &(*matrix).0;
        let cert = rank::halasz_membership(m, s, budget);
        let verdict = cert.verdict;
        let status = give_string(
            out,
            serde_json::to_string(&cert).expect("serializable"),
        );
        if status == QloStatus::Ok && verdict == rank::Verdict::Inconclusive {
            QloStatus::Inconclusive
        } else {
            status
        }
    })
}

/// Evaluates a named closed-form bound; `params` uses the CLI syntax
/// ("k=2,t=4"). Returns {"name","log2","clamped"} JSON.
///
/// # Safety
/// Strings must be NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlo_bound_eval(
    name: *const c_char,
    params: *const c_char,
    out: *mut *mut c_char,
) -> QloStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let params = match read_str(params) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match eval_bound(name, params) {
            Ok(text) => give_string(out, text),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

fn eval_bound(name: &str, params: &str) -> qlo_core::Result<String> {
    use qlo_core::Error;
    let mut kv = std::collections::HashMap::new();
    for part in params.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |key: &str| -> qlo_core::Result<String> {
        kv.get(key)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}")))
    };
    let get_usize = |key: &str| -> qlo_core::Result<usize> {
        get(key)?
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {key} must be an integer")))
    };
    let get_rational = |key: &str| -> qlo_core::Result<qlo_core::Rational> {
        let text = get(key)?;
        if let Some(exp) = text.strip_prefix("2^") {
            let e: i64 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {text:?}")))?;
            return Ok(qlo_core::num::pow2(e));
        }
        parse_rational(&text)
    };
    let bound = match name {
        "erdos_lo" => bounds::erdos_lo(get_usize("n")?)?,
        "odlyzko" => bounds::odlyzko(get_usize("k")?),
        "halasz_fjz" => bounds::halasz_fjz(
            get_usize("k")?,
            get_usize("t")? as u64,
        )?,
        "halasz_sub" => bounds::halasz_sub(get_usize("k")?, &get_rational("s")?)?,
        "geometric" => bounds::geometric(
            get_usize("d")?,
            get_usize("r")?,
            get_usize("t")? as u64,
        )?,
        "low_rank" => bounds::low_rank(get_usize("k")?, &get_rational("s")?, get_usize("r")?)?,
        "hamming_ball" => bounds::hamming_ball(get_usize("k")?, get_usize("r")?, &get_rational("s")?)?,
        "rank_inheritance" => bounds::rank_inheritance(get_usize("k")?, &get_rational("s")?)?,
        "closed_form" => bounds::closed_form(
            get_usize("k")? as u32,
            get_usize("ell")? as u32,
            &get_rational("s")?,
        )?,
        other => {
            return Err(Error::InvalidParameter(format!("unknown bound {other:?}")));
        }
    };
    Ok(serde_json::to_string(&jsonio::bound_to_dto(name, &bound)).expect("serializable"))
}

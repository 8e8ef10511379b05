//! C ABI over `nodal_ic`.
//!
//! Every computation returns a [`NicStatus`] and, on success, writes an owned
//! [`NicReport`] handle holding the JSON rendering of the result. Read it with
//! [`nic_report_json`] and release it with [`nic_report_free`]. After a
//! failure, [`nic_last_error`] describes what went wrong on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use nodal_ic::bott::{bott_h, eagon_northcott_resolution, h1_vanishing_chase, koszul_resolution, Resolution};
use nodal_ic::monodromy::{ic_stalk_with_sign, MonodromyData, PlSign};
use nodal_ic::points::{conditions_report, grid_nodes, ProjectivePointSet};
use nodal_ic::Error;

/// Status codes. Values 1 to 4 mirror the library error kinds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NicStatus {
    Ok = 0,
    /// Malformed JSON or an unparsable number.
    ParseError = 1,
    /// Inconsistent vector or matrix sizes.
    DimensionError = 2,
    /// Input outside the supported range.
    InputError = 3,
    /// Input violates a mathematical precondition.
    PreconditionError = 4,
    NullPointer = 5,
    /// A string argument is not valid UTF-8.
    InvalidUtf8 = 6,
    /// Internal failure; the library caught a panic.
    Panic = 7,
}

/// Opaque handle owning a JSON report.
pub struct NicReport {
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> NicStatus {
    match e {
        Error::Parse(_) => NicStatus::ParseError,
        Error::Dimension(_) => NicStatus::DimensionError,
        Error::Input(_) => NicStatus::InputError,
        Error::Precondition(_) => NicStatus::PreconditionError,
    }
}

struct Failure(NicStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(NicStatus::ParseError, e.to_string())
    }
}

/// Runs `f`, records any error, and hands the JSON to the caller through `out`.
fn produce<F>(out: *mut *mut NicReport, f: F) -> NicStatus
where
    F: FnOnce() -> Result<String, Failure> + UnwindSafe,
{
    if out.is_null() {
        set_last_error("output handle pointer is null");
        return NicStatus::NullPointer;
    }
    // SAFETY: checked non-null above; the caller provides a writable slot.
    unsafe { *out = ptr::null_mut() };
    let result = catch_unwind(f).unwrap_or_else(|_| Err(Failure(NicStatus::Panic, "internal panic".into())));
    match result {
        Ok(json) => match CString::new(json) {
            Ok(json) => {
                clear_last_error();
                // SAFETY: as above.
                unsafe { *out = Box::into_raw(Box::new(NicReport { json })) };
                NicStatus::Ok
            }
            Err(_) => {
                set_last_error("report contains an interior NUL byte");
                NicStatus::Panic
            }
        },
        Err(Failure(status, msg)) => {
            set_last_error(msg);
            status
        }
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure(NicStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(NicStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// Stalk cohomology of the IC complex for a monodromy document. `sign` is
/// the Picard-Lefschetz sign, `+1` or `-1`.
///
/// # Safety
/// `monodromy_json` must be a NUL-terminated string and `out` a valid
/// pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nic_ic_stalk(
    monodromy_json: *const c_char,
    sign: i32,
    out: *mut *mut NicReport,
) -> NicStatus {
    produce(out, || {
        let text = read_str(monodromy_json, "monodromy_json")?;
        let sign = match sign {
            1 => PlSign::Plus,
            -1 => PlSign::Minus,
            s => return Err(Failure(NicStatus::InputError, format!("sign must be +1 or -1, got {s}"))),
        };
        let data = MonodromyData::from_json(text)?;
        Ok(serde_json::to_string(&ic_stalk_with_sign(&data, sign)?)?)
    })
}

/// Conditions imposed by a point-set document on forms of degree `degree`.
///
/// # Safety
/// Same contract as [`nic_ic_stalk`].
#[no_mangle]
pub unsafe extern "C" fn nic_conditions(
    points_json: *const c_char,
    degree: u32,
    out: *mut *mut NicReport,
) -> NicStatus {
    produce(out, || {
        let pts = ProjectivePointSet::from_json(read_str(points_json, "points_json")?)?;
        Ok(serde_json::to_string(&conditions_report(&pts, degree)?)?)
    })
}

/// Vanishing chase of `h^1` of the resolved sheaf twisted by `twist`.
///
/// # Safety
/// Same contract as [`nic_ic_stalk`].
#[no_mangle]
pub unsafe extern "C" fn nic_chase(
    resolution_json: *const c_char,
    twist: i64,
    out: *mut *mut NicReport,
) -> NicStatus {
    produce(out, || {
        let res = Resolution::from_json(read_str(resolution_json, "resolution_json")?)?;
        Ok(serde_json::to_string(&h1_vanishing_chase(&res, twist)?)?)
    })
}

/// Koszul resolution of the complete intersection of forms with the given
/// `count` degrees on `P^n`, as a resolution document.
///
/// # Safety
/// `degrees` must point to `count` readable values; `out` as in
/// [`nic_ic_stalk`].
#[no_mangle]
pub unsafe extern "C" fn nic_koszul(
    n: u64,
    degrees: *const u64,
    count: usize,
    out: *mut *mut NicReport,
) -> NicStatus {
    produce(out, || {
        let degrees: &[u64] = if count == 0 {
            &[]
        } else if degrees.is_null() {
            return Err(Failure(NicStatus::NullPointer, "degrees is null".into()));
        } else {
            std::slice::from_raw_parts(degrees, count)
        };
        Ok(serde_json::to_string(&koszul_resolution(n, degrees)?)?)
    })
}

/// Eagon-Northcott resolution for `quadrics` quadrics on `P^n`.
///
/// # Safety
/// `out` as in [`nic_ic_stalk`].
#[no_mangle]
pub unsafe extern "C" fn nic_eagon_northcott(
    n: u64,
    quadrics: u64,
    out: *mut *mut NicReport,
) -> NicStatus {
    produce(out, || Ok(serde_json::to_string(&eagon_northcott_resolution(n, quadrics)?)?))
}

/// The `(k-1)^n` grid node set in `P^n`, as a point-set document.
///
/// # Safety
/// `out` as in [`nic_ic_stalk`].
#[no_mangle]
pub unsafe extern "C" fn nic_grid(n: u32, k: u32, out: *mut *mut NicReport) -> NicStatus {
    produce(out, || Ok(serde_json::to_string(&grid_nodes(n as usize, k, None)?)?))
}

/// `h^q(P^n, O(a))`, written to `value`.
///
/// # Safety
/// `value` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn nic_bott_h(n: u64, q: u64, a: i64, value: *mut u64) -> NicStatus {
    if value.is_null() {
        set_last_error("value pointer is null");
        return NicStatus::NullPointer;
    }
    match bott_h(n, q, a) {
        Ok(h) => {
            clear_last_error();
            *value = h;
            NicStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Borrowed JSON text of a report, valid until the report is freed. Null if
/// `report` is null.
///
/// # Safety
/// `report` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn nic_report_json(report: *const NicReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nic_report_free(report: *mut NicReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn nic_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

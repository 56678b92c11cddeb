//! C ABI for `ordsum`.
//!
//! Every call returns an [`OrdsumStatus`]; on failure the message is
//! available from [`ordsum_last_error`] on the same thread. Exact rationals
//! cross the boundary as `"p/q"` strings; reports cross as JSON. Strings
//! returned through `char **` are owned by the caller and released with
//! [`ordsum_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use num_rational::BigRational;

use ordsum::bounds::{self, Status};
use ordsum::classcount::{self, ClassData};
use ordsum::exact;
use ordsum::gsum::{self, DecompositionConfig};
use ordsum::quadfield::{self, QuadField};
use ordsum::Error;

/// Result codes. `ORDSUM_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdsumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Range = 4,
    WorkBudget = 5,
    Uncertified = 6,
    PrecisionExhausted = 7,
    Integrality = 8,
    Internal = 9,
    Panic = 10,
}

/// Outcome of a certified comparison.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdsumVerdict {
    Holds = 0,
    Fails = 1,
    Undecided = 2,
}

/// Opaque handle to a real quadratic field `Q(√d)`.
pub struct OrdsumField {
    field: QuadField,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OrdsumStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) | Error::DimensionMismatch { .. } => OrdsumStatus::Domain,
            Error::Range(_) => OrdsumStatus::Range,
            Error::WorkBudget { .. } => OrdsumStatus::WorkBudget,
            Error::Uncertified(_) => OrdsumStatus::Uncertified,
            Error::PrecisionExhausted { .. } => OrdsumStatus::PrecisionExhausted,
            Error::Integrality(_) => OrdsumStatus::Integrality,
            Error::Invariant(_) => OrdsumStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn guard<F>(f: F) -> OrdsumStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OrdsumStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OrdsumStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OrdsumStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OrdsumStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn rational_arg(p: *const c_char, what: &str) -> Result<BigRational, Failure> {
    Ok(exact::parse_rational(str_arg(p, what)?)?)
}

unsafe fn field_arg<'a>(p: *const OrdsumField) -> Result<&'a QuadField, Failure> {
    p.as_ref().map(|f| &f.field).ok_or_else(|| null("field"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("library strings have no NUL").into_raw()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report types serialize")
}

fn class_data(field: &QuadField, h: u64) -> Result<ClassData, Failure> {
    Ok(if h == 0 {
        classcount::narrow_class_number(field)?
    } else {
        ClassData::supplied(field, h)?
    })
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next `ordsum_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ordsum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ordsum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ordsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `G_a(x)` as `"p/q"`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordsum_g_direct(a: u64, x: u64, out: *mut *mut c_char) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_c(exact::format_rational(&gsum::g_direct(a, x)?));
        Ok(())
    })
}

/// The decomposition report of `G_a(x)` as JSON. `beta` may be NULL for the
/// default `(alpha - 1)/2`; `alpha` and `beta` are rationals like `"3/2"`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_decompose_json(
    a: u64,
    x: u64,
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut c_char,
) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let alpha = rational_arg(alpha, "alpha")?;
        let cfg = if beta.is_null() {
            DecompositionConfig::new(a, x, alpha)?
        } else {
            DecompositionConfig::with_beta(a, x, alpha, rational_arg(beta, "beta")?)?
        };
        *out = to_c(json(&gsum::decompose(&cfg)?));
        Ok(())
    })
}

/// Builds `Q(√d)` for squarefree `d >= 2`.
///
/// # Safety
/// `out` must be valid; release the handle with [`ordsum_field_free`].
#[no_mangle]
pub unsafe extern "C" fn ordsum_field_new(d: u64, out: *mut *mut OrdsumField) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let field = quadfield::make_field(d)?;
        *out = Box::into_raw(Box::new(OrdsumField { field }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`ordsum_field_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ordsum_field_free(field: *mut OrdsumField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Discriminant of the field.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_field_disc(field: *const OrdsumField, out: *mut u64) -> OrdsumStatus {
    guard(|| {
        *out_ref(out, "out")? = field_arg(field)?.disc();
        Ok(())
    })
}

/// Fundamental unit `u + vω` as decimal strings, and its norm.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_field_unit(
    field: *const OrdsumField,
    u: *mut *mut c_char,
    v: *mut *mut c_char,
    norm: *mut i8,
) -> OrdsumStatus {
    guard(|| {
        let k = field_arg(field)?;
        let (u, v, norm) = (out_ref(u, "u")?, out_ref(v, "v")?, out_ref(norm, "norm")?);
        *u = to_c(k.eps().u.to_string());
        *v = to_c(k.eps().v.to_string());
        *norm = k.eps_norm();
        Ok(())
    })
}

/// `h` and `h^+`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_class_number(field: *const OrdsumField, h: *mut u64, h_plus: *mut u64) -> OrdsumStatus {
    guard(|| {
        let cd = classcount::narrow_class_number(field_arg(field)?)?;
        *out_ref(h, "h")? = cd.h;
        *out_ref(h_plus, "h_plus")? = cd.h_plus;
        Ok(())
    })
}

/// `P_K(x)` as `"p/q"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_pk_direct(field: *const OrdsumField, x: u64, out: *mut *mut c_char) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_c(exact::format_rational(&classcount::pk_direct(field_arg(field)?, x)?));
        Ok(())
    })
}

/// The decomposition report of `P_K(x)` as JSON; `beta` may be NULL.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ordsum_pk_decompose_json(
    field: *const OrdsumField,
    x: u64,
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut c_char,
) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let k = field_arg(field)?;
        let alpha = rational_arg(alpha, "alpha")?;
        let r = if beta.is_null() {
            classcount::pk_decompose(k, x, &alpha)?
        } else {
            classcount::pk_decompose_with_beta(k, x, &alpha, &rational_arg(beta, "beta")?)?
        };
        *out = to_c(json(&r));
        Ok(())
    })
}

/// `Σ_{N I <= x} h^nar(I)`; pass `h = 0` to compute the class number.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_hnar_sum(field: *const OrdsumField, x: u64, h: u64, out: *mut u64) -> OrdsumStatus {
    guard(|| {
        let k = field_arg(field)?;
        *out_ref(out, "out")? = classcount::hnar_sum(k, x, &class_data(k, h)?)?;
        Ok(())
    })
}

/// Primitive ray class characters of conductor norm `<= x`; `h = 0`
/// computes the class number.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_delta_quadratic(
    field: *const OrdsumField,
    x: u64,
    h: u64,
    out: *mut u64,
) -> OrdsumStatus {
    guard(|| {
        let k = field_arg(field)?;
        *out_ref(out, "out")? = classcount::delta_quadratic(k, x, &class_data(k, h)?)?;
        Ok(())
    })
}

/// Primitive Dirichlet characters of conductor `<= x`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_delta_rationals(x: u64, out: *mut u64) -> OrdsumStatus {
    guard(|| {
        *out_ref(out, "out")? = classcount::delta_rationals(x)?;
        Ok(())
    })
}

/// `j_K(x) = Σ_{N I <= x} ω(I)^2`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ordsum_jk_sum(field: *const OrdsumField, x: u64, out: *mut u64) -> OrdsumStatus {
    guard(|| {
        *out_ref(out, "out")? = quadfield::jk_sum(field_arg(field)?, x)?;
        Ok(())
    })
}

/// Certified entropy bound for rationals `x`, `y` given as strings.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ordsum_check_lemma1(
    x: *const c_char,
    y: *const c_char,
    precision_bits: u32,
    out: *mut OrdsumVerdict,
) -> OrdsumStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let v = bounds::check_lemma1(&rational_arg(x, "x")?, &rational_arg(y, "y")?, precision_bits)?;
        *out = match v.status {
            Status::Holds => OrdsumVerdict::Holds,
            Status::Fails => OrdsumVerdict::Fails,
            Status::Undecided => OrdsumVerdict::Undecided,
        };
        Ok(())
    })
}

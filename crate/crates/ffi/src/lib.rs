//! C ABI over `opcong`.
//!
//! Every fallible function returns an [`OpcongStatus`]; on anything other
//! than `OPCONG_STATUS_OK` a message is available from
//! [`opcong_last_error`] on the same thread until the next call. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `_free` function. Strings returned through `char **` out-parameters are
//! released with [`opcong_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use opcong::congruence::{check_claim, ClaimSource, CongruenceClaim};
use opcong::dissection::{extract, Progression};
use opcong::series::{LaurentSeries, Ring};
use opcong::witness::{builtin_certificate, verify_witness, WitnessCertificate};
use opcong::{overpartition_gf, EtaQuotient, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpcongStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Truncation = 5,
    Ring = 6,
    NotUnit = 7,
    Certificate = 8,
    Budget = 9,
    Io = 10,
    OutOfRange = 11,
    Panic = 12,
}

/// A truncated Laurent series.
pub struct OpcongSeries(LaurentSeries);

/// A witness certificate.
pub struct OpcongCertificate(WitnessCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(OpcongStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::RingMismatch { .. } | Error::InvalidRing(_) => OpcongStatus::Ring,
            Error::NotUnit { .. } | Error::ZeroSeries => OpcongStatus::NotUnit,
            Error::Truncation(_) | Error::NegativeExponents { .. } => OpcongStatus::Truncation,
            Error::Parse { .. } => OpcongStatus::Parse,
            Error::InvalidArgument(_) | Error::NotPrime(_) => OpcongStatus::InvalidArgument,
            Error::BudgetExceeded { .. } => OpcongStatus::Budget,
            Error::Certificate(_) => OpcongStatus::Certificate,
            Error::Io(_) => OpcongStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status and a last-error
/// message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OpcongStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OpcongStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OpcongStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OpcongStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OpcongStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is NULL or a valid, live handle.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is NULL or writable.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(OpcongStatus::InvalidArgument, "string contains NUL".into()))
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn opcong_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread, or NULL. Valid until the
/// next `opcong_*` call on this thread.
#[no_mangle]
pub extern "C" fn opcong_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn opcong_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expand an eta quotient such as `"q^-1 * f2^1 * f1^-2"` in `ring`
/// (`"exact"` or `"mod2k:K"`) through `q^(trunc-1)`.
///
/// # Safety
/// `quotient` and `ring` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_eta_expand(
    quotient: *const c_char,
    ring: *const c_char,
    trunc: i64,
    out: *mut *mut OpcongSeries,
) -> OpcongStatus {
    guard(|| {
        let q: EtaQuotient = text(quotient, "quotient")?.parse()?;
        let ring: Ring = text(ring, "ring")?.parse()?;
        let s = q.expand(ring, trunc)?;
        put(out, Box::into_raw(Box::new(OpcongSeries(s))), "out")
    })
}

/// `f_2^t / f_1^(2t)` through `q^(trunc-1)`.
///
/// # Safety
/// `ring` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_overpartition_gf(
    t: u32,
    ring: *const c_char,
    trunc: i64,
    out: *mut *mut OpcongSeries,
) -> OpcongStatus {
    guard(|| {
        let ring: Ring = text(ring, "ring")?.parse()?;
        let s = overpartition_gf(t, ring, trunc)?;
        put(out, Box::into_raw(Box::new(OpcongSeries(s))), "out")
    })
}

/// `sum_n a(m n + j) q^n`.
///
/// # Safety
/// `series` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_extract(
    series: *const OpcongSeries,
    m: u64,
    j: u64,
    out: *mut *mut OpcongSeries,
) -> OpcongStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let e = extract(&s.0, Progression::new(m, j)?)?;
        put(out, Box::into_raw(Box::new(OpcongSeries(e))), "out")
    })
}

/// Product of two series over the same ring.
///
/// # Safety
/// `a` and `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_mul(
    a: *const OpcongSeries,
    b: *const OpcongSeries,
    out: *mut *mut OpcongSeries,
) -> OpcongStatus {
    guard(|| {
        let p = borrow(a, "a")?.0.mul(&borrow(b, "b")?.0)?;
        put(out, Box::into_raw(Box::new(OpcongSeries(p))), "out")
    })
}

/// Lowest stored exponent and the truncation: coefficients are known for
/// `offset <= e < trunc`.
///
/// # Safety
/// `series` is a live handle; `offset` and `trunc` are writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_bounds(
    series: *const OpcongSeries,
    offset: *mut i64,
    trunc: *mut i64,
) -> OpcongStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        put(offset, s.0.offset(), "offset")?;
        put(trunc, s.0.trunc(), "trunc")
    })
}

/// Coefficient of `q^e` as an `int64_t`. Fails with
/// `OPCONG_STATUS_OUT_OF_RANGE` when `e` is not below the truncation or the
/// value does not fit.
///
/// # Safety
/// `series` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_coeff_i64(
    series: *const OpcongSeries,
    e: i64,
    out: *mut i64,
) -> OpcongStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let c = s.0.coeff(e).ok_or_else(|| {
            Failure(OpcongStatus::OutOfRange, format!("q^{e} is at or past the truncation q^{}", s.0.trunc()))
        })?;
        let v = i64::try_from(&c)
            .map_err(|_| Failure(OpcongStatus::OutOfRange, format!("coefficient {c} does not fit in int64")))?;
        put(out, v, "out")
    })
}

/// Coefficient of `q^e` as a decimal string.
///
/// # Safety
/// `series` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_coeff_str(
    series: *const OpcongSeries,
    e: i64,
    out: *mut *mut c_char,
) -> OpcongStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let c = s.0.coeff(e).ok_or_else(|| {
            Failure(OpcongStatus::OutOfRange, format!("q^{e} is at or past the truncation q^{}", s.0.trunc()))
        })?;
        put(out, owned_string(c.to_string())?, "out")
    })
}

/// # Safety
/// `series` is NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn opcong_series_free(series: *mut OpcongSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// The builtin certificate for `p̄_{-5}(8n+7) = 0 (mod 128)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_certificate_builtin(out: *mut *mut OpcongCertificate) -> OpcongStatus {
    guard(|| put(out, Box::into_raw(Box::new(OpcongCertificate(builtin_certificate()))), "out"))
}

/// Parse a certificate in the text format.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_certificate_parse(
    source: *const c_char,
    out: *mut *mut OpcongCertificate,
) -> OpcongStatus {
    guard(|| {
        let c = WitnessCertificate::parse(text(source, "source")?)?;
        put(out, Box::into_raw(Box::new(OpcongCertificate(c))), "out")
    })
}

/// Serialize a certificate to the text format.
///
/// # Safety
/// `cert` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_certificate_to_text(
    cert: *const OpcongCertificate,
    out: *mut *mut c_char,
) -> OpcongStatus {
    guard(|| put(out, owned_string(borrow(cert, "cert")?.0.to_text())?, "out"))
}

/// Check the certificate identity through `q^(trunc-1)`. `two_adic_valuation`
/// receives the valuation of the polynomial's gcd, or -1 when the gcd is 0.
///
/// # Safety
/// `cert` is a live handle; `matched` and `two_adic_valuation` are writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_verify_witness(
    cert: *const OpcongCertificate,
    trunc: i64,
    matched: *mut bool,
    two_adic_valuation: *mut i64,
) -> OpcongStatus {
    guard(|| {
        let r = verify_witness(&borrow(cert, "cert")?.0, trunc)?;
        put(matched, r.identity.matched, "matched")?;
        let v = r.common_factor.two_adic_valuation.map_or(-1, |v| v as i64);
        put(two_adic_valuation, v, "two_adic_valuation")
    })
}

/// # Safety
/// `cert` is NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn opcong_certificate_free(cert: *mut OpcongCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Check `p̄_{-t}(m n + j) = 0 (mod 2^k)` for `n = 0..=n_max`.
/// `counterexample_n` receives the first failing `n`, or `UINT64_MAX`.
///
/// # Safety
/// `holds` and `counterexample_n` are writable.
#[no_mangle]
pub unsafe extern "C" fn opcong_check_claim(
    t: u32,
    m: u64,
    j: u64,
    k: u32,
    n_max: u64,
    holds: *mut bool,
    counterexample_n: *mut u64,
) -> OpcongStatus {
    guard(|| {
        let claim = CongruenceClaim::new(t, m, j, k, ClaimSource::UserSupplied)?;
        let r = check_claim(&claim, n_max)?;
        put(holds, r.holds(), "holds")?;
        put(counterexample_n, r.counterexample.map_or(u64::MAX, |c| c.n), "counterexample_n")
    })
}

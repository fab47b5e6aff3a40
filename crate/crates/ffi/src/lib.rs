//! C ABI for `arithdyn`.
//!
//! Naturals cross the boundary as opaque `AdNatural` handles. Every entry
//! point returns an [`AdStatus`]; on anything but `AD_STATUS_OK` a message is kept
//! for the calling thread and can be read with [`ad_last_error`]. Strings
//! and arrays handed out must be released with the matching `*_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arithdyn::arithfun::{eval, FunctionId};
use arithdyn::cli::{verify_lemma, LemmaArgs};
use arithdyn::config::Config;
use arithdyn::dynamics::{family_term, FamilyScheme, FamilySpec};
use arithdyn::factorint::{factorize, FactoredNatural};
use arithdyn::preimage::inverse_phi;
use arithdyn::Error;

/// Opaque handle to a natural number in factored form.
pub struct AdNatural(FactoredNatural);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InvalidFunction = 4,
    ValueTooLarge = 5,
    Budget = 6,
    NotSupported = 7,
    Undecidable = 8,
    Panic = 99,
}

impl From<&Error> for AdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidFunction(_) | Error::SchemeMismatch { .. } | Error::MixedSchemes(..) => {
                AdStatus::InvalidFunction
            }
            Error::ValueTooLarge(_) | Error::IntervalUnsupported(_) => AdStatus::ValueTooLarge,
            Error::DepthCap { .. }
            | Error::InversePhiBudget { .. }
            | Error::HorizonBudget { .. }
            | Error::OracleBudget { .. }
            | Error::PrimeBudget { .. } => AdStatus::Budget,
            Error::NotExpansive { .. }
            | Error::NotFiniteFibre { .. }
            | Error::IncompletePreimage { .. }
            | Error::UnsupportedFibre(_) => AdStatus::NotSupported,
            Error::Undecidable(_) => AdStatus::Undecidable,
            _ => AdStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `body`, turning errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), AdStatus>) -> AdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            AdStatus::Panic
        }
    }
}

fn fail(e: Error) -> AdStatus {
    let s = AdStatus::from(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> AdStatus {
    set_error(format!("{what} is null"));
    AdStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, AdStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        AdStatus::InvalidUtf8
    })
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), AdStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = value;
    Ok(())
}

fn handle(x: FactoredNatural) -> *mut AdNatural {
    Box::into_raw(Box::new(AdNatural(x)))
}

unsafe fn natural<'a>(p: *const AdNatural) -> Result<&'a FactoredNatural, AdStatus> {
    p.as_ref().map(|n| &n.0).ok_or_else(|| null("natural"))
}

/// Last error message on this thread, or null. Valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn ad_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `n >= 1` as a new handle.
#[no_mangle]
pub unsafe extern "C" fn ad_natural_from_u64(n: u64, out: *mut *mut AdNatural) -> AdStatus {
    guard(|| {
        if n == 0 {
            return Err(fail(Error::InvalidArgument("naturals start at 1".into())));
        }
        write_out(out, handle(factorize(n as u128)), "out")
    })
}

/// Parses a decimal integer or a factored form such as `2^11*3`.
#[no_mangle]
pub unsafe extern "C" fn ad_natural_parse(
    text: *const c_char,
    out: *mut *mut AdNatural,
) -> AdStatus {
    guard(|| {
        let s = read_str(text, "text")?;
        let x = match s.trim().parse::<u128>() {
            Ok(0) => return Err(fail(Error::InvalidArgument("naturals start at 1".into()))),
            Ok(v) => factorize(v),
            Err(_) => s.parse().map_err(fail)?,
        };
        write_out(out, handle(x), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ad_natural_free(n: *mut AdNatural) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Factored form, e.g. `2^11*3`. Free with [`ad_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ad_natural_to_string(
    n: *const AdNatural,
    out: *mut *mut c_char,
) -> AdStatus {
    guard(|| {
        let s = CString::new(natural(n)?.to_string()).expect("no interior nul");
        write_out(out, s.into_raw(), "out")
    })
}

/// `AD_STATUS_VALUE_TOO_LARGE` when the value does not fit in 64 bits.
#[no_mangle]
pub unsafe extern "C" fn ad_natural_to_u64(n: *const AdNatural, out: *mut u64) -> AdStatus {
    guard(|| {
        let x = natural(n)?;
        let v = x
            .to_u128()
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| fail(Error::ValueTooLarge(x.to_string())))?;
        write_out(out, v, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ad_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `f(n)` for a function id such as `phi`, `J2`, `sigma1` or `Omega`.
#[no_mangle]
pub unsafe extern "C" fn ad_eval(
    function: *const c_char,
    n: *const AdNatural,
    out: *mut *mut AdNatural,
) -> AdStatus {
    guard(|| {
        let f: FunctionId = read_str(function, "function")?.parse().map_err(fail)?;
        let v = eval(f, natural(n)?)
            .and_then(|v| v.into_factored())
            .map_err(fail)?;
        write_out(out, handle(v), "out")
    })
}

/// `phi^-1(m)` in ascending order. Free with [`ad_u64_array_free`].
#[no_mangle]
pub unsafe extern "C" fn ad_inverse_phi(
    m: u64,
    out: *mut *mut u64,
    out_len: *mut usize,
) -> AdStatus {
    guard(|| {
        if out.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let r = inverse_phi(m as u128).map_err(fail)?;
        let v: Vec<u64> = r
            .members
            .iter()
            .map(|&x| u64::try_from(x))
            .collect::<Result<_, _>>()
            .map_err(|_| fail(Error::ValueTooLarge("preimage member above 2^64".into())))?;
        let boxed = v.into_boxed_slice();
        *out_len = boxed.len();
        *out = Box::into_raw(boxed) as *mut u64;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ad_u64_array_free(p: *mut u64, len: usize) {
    if !p.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, len)));
    }
}

/// Term `n >= 1` of family `index` of a scheme such as `PHI_ANTI`.
#[no_mangle]
pub unsafe extern "C" fn ad_family_term(
    scheme: *const c_char,
    index: u64,
    n: u64,
    out: *mut *mut AdNatural,
) -> AdStatus {
    guard(|| {
        let scheme: FamilyScheme = read_str(scheme, "scheme")?.parse().map_err(fail)?;
        let spec = FamilySpec::new(scheme, index).map_err(fail)?;
        let t = family_term(&spec, n).map_err(fail)?;
        write_out(out, handle(t), "out")
    })
}

/// Runs a named check and writes its JSON report. Zero `families`, `depth`
/// or `bound` selects the check's default. A failing check still returns
/// `AD_STATUS_OK`; its outcome is the report's `status`. Free with
/// [`ad_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ad_verify_lemma(
    id: *const c_char,
    families: u64,
    depth: u64,
    bound: u64,
    out_json: *mut *mut c_char,
) -> AdStatus {
    guard(|| {
        let id = read_str(id, "id")?;
        let some = |v: u64| (v != 0).then_some(v);
        let args = LemmaArgs {
            families: some(families),
            depth: some(depth),
            bound: some(bound),
            ..LemmaArgs::default()
        };
        let (report, _) = verify_lemma(id, &args, &Config::default()).map_err(fail)?;
        let json = serde_json::to_string(&report).expect("report serializes");
        write_out(
            out_json,
            CString::new(json).expect("no interior nul").into_raw(),
            "out_json",
        )
    })
}

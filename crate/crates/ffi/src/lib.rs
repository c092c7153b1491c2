//! C ABI over `rmwd`.
//!
//! Every fallible call returns an [`RmwdStatus`]; on failure a message is
//! kept per thread and read with [`rmwd_last_error`]. Enumerators are opaque
//! handles released with [`rmwd_enumerator_free`]; strings returned to the
//! caller are released with [`rmwd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmwd::boolfn::{parse_anf, truth_table_from_anf};
use rmwd::classify::classify_quotient;
use rmwd::cosetenum::coset_enumerator;
use rmwd::oracle::{brute_force_distribution, min_weight_count, validate_reference};
use rmwd::pipeline::{run_pipeline, PipelineConfig, Strategy};
use rmwd::{Error, WeightEnumerator};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmwdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    CapExceeded = 4,
    NotFound = 5,
    OutOfRange = 6,
    Overflow = 7,
    Io = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmwdStrategy {
    Direct = 0,
    Blocks = 1,
}

/// Opaque weight enumerator.
pub struct RmwdEnumerator(WeightEnumerator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> RmwdStatus {
    match err {
        Error::AnfParse { .. } | Error::MatrixParse(_) | Error::Format { .. } => RmwdStatus::Parse,
        Error::CapExceeded { .. } => RmwdStatus::CapExceeded,
        Error::NotFound(..) => RmwdStatus::NotFound,
        Error::Io(_) => RmwdStatus::Io,
        _ => RmwdStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (RmwdStatus, String)>) -> RmwdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmwdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RmwdStatus::Internal
        }
    }
}

fn lift<T>(r: rmwd::Result<T>) -> Result<T, (RmwdStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RmwdStatus, String) {
    (RmwdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (RmwdStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (RmwdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn store(out: *mut *mut RmwdEnumerator, w: WeightEnumerator) -> Result<(), (RmwdStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(RmwdEnumerator(w)));
    Ok(())
}

unsafe fn handle<'a>(e: *const RmwdEnumerator) -> Result<&'a WeightEnumerator, (RmwdStatus, String)> {
    e.as_ref().map(|h| &h.0).ok_or_else(|| null("enumerator"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rmwd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Weight distribution of R(r,m) by enumerating every codeword.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn rmwd_brute_force(r: usize, m: usize, out: *mut *mut RmwdEnumerator) -> RmwdStatus {
    guard(|| store(out, lift(brute_force_distribution(r, m))?))
}

/// Weight distribution of the coset `anf + R(r,m)`.
///
/// # Safety
/// `anf` must be a nul-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_coset_enumerator(
    anf: *const c_char,
    r: usize,
    m: usize,
    out: *mut *mut RmwdEnumerator,
) -> RmwdStatus {
    guard(|| {
        let f = lift(parse_anf(read_str(anf, "anf")?, m))?;
        store(out, lift(coset_enumerator(&truth_table_from_anf(&f), r, m))?)
    })
}

/// W[R(r,m)] through the class-weighted recursion, classifying H^(r)(m-1)
/// internally. `jobs = 0` uses the default worker count.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn rmwd_pipeline(
    r: usize,
    m: usize,
    strategy: RmwdStrategy,
    seed: u64,
    jobs: usize,
    out: *mut *mut RmwdEnumerator,
) -> RmwdStatus {
    guard(|| {
        if m == 0 {
            return Err((RmwdStatus::InvalidArgument, "m must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let classes = lift(classify_quotient(r, m - 1, &mut rng))?;
        let mut cfg = PipelineConfig::new(r, m);
        cfg.strategy = match strategy {
            RmwdStrategy::Direct => Strategy::Direct,
            RmwdStrategy::Blocks => Strategy::Blocks,
        };
        cfg.seed = seed;
        cfg.jobs = (jobs > 0).then_some(jobs);
        store(out, lift(run_pipeline(&classes, &cfg))?.enumerator)
    })
}

/// Parses a two- or three-column distribution for a code of length `n`.
///
/// # Safety
/// `text` must be nul-terminated; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_from_text(
    text: *const c_char,
    n: usize,
    out: *mut *mut RmwdEnumerator,
) -> RmwdStatus {
    guard(|| store(out, lift(WeightEnumerator::from_text(read_str(text, "text")?, n))?))
}

/// # Safety
/// `e` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_free(e: *mut RmwdEnumerator) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of coefficients, `n + 1`.
///
/// # Safety
/// `e` must be a live handle; `len` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_length(e: *const RmwdEnumerator, len: *mut usize) -> RmwdStatus {
    guard(|| {
        let w = handle(e)?;
        if len.is_null() {
            return Err(null("len"));
        }
        *len = w.n() + 1;
        Ok(())
    })
}

/// Coefficient `i` as `u64`; `RMWD_STATUS_OVERFLOW` if it does not fit.
///
/// # Safety
/// `e` must be a live handle; `value` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_coefficient_u64(
    e: *const RmwdEnumerator,
    i: usize,
    value: *mut u64,
) -> RmwdStatus {
    guard(|| {
        let w = handle(e)?;
        if value.is_null() {
            return Err(null("value"));
        }
        if i > w.n() {
            return Err((RmwdStatus::OutOfRange, format!("weight {i} exceeds length {}", w.n())));
        }
        *value = u64::try_from(w.coeff(i))
            .map_err(|_| (RmwdStatus::Overflow, format!("coefficient {i} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Coefficient `i` in decimal, or null on error. Free with [`rmwd_string_free`].
///
/// # Safety
/// `e` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_coefficient_string(e: *const RmwdEnumerator, i: usize) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let w = handle(e)?;
        if i > w.n() {
            return Err((RmwdStatus::OutOfRange, format!("weight {i} exceeds length {}", w.n())));
        }
        out = into_c_string(w.coeff(i).to_string());
        Ok(())
    });
    out
}

/// The enumerator as "weight count" lines, optionally folded into
/// "weight n-weight count" pairs. Free with [`rmwd_string_free`].
///
/// # Safety
/// `e` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_to_text(e: *const RmwdEnumerator, folded: bool) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        out = into_c_string(handle(e)?.to_text(folded));
        Ok(())
    });
    out
}

/// Coefficient-exact equality.
///
/// # Safety
/// `a` and `b` must be live handles; `equal` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_enumerator_equal(
    a: *const RmwdEnumerator,
    b: *const RmwdEnumerator,
    equal: *mut bool,
) -> RmwdStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        if equal.is_null() {
            return Err(null("equal"));
        }
        *equal = a == b;
        Ok(())
    })
}

/// Number of minimum-weight codewords of R(r,m) in decimal, or null.
#[no_mangle]
pub extern "C" fn rmwd_min_weight_count(r: usize, m: usize) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        if r > m {
            return Err((RmwdStatus::InvalidArgument, format!("order {r} exceeds {m} variables")));
        }
        out = into_c_string(min_weight_count(r, m).to_string());
        Ok(())
    });
    out
}

/// Checks a distribution text against every identity R(r,m) satisfies.
/// `passed` receives the verdict; a returned error means the text could not
/// be checked at all.
///
/// # Safety
/// `text` must be nul-terminated; `passed` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rmwd_verify_distribution(
    text: *const c_char,
    r: usize,
    m: usize,
    passed: *mut bool,
) -> RmwdStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        if m > 16 {
            return Err((RmwdStatus::InvalidArgument, format!("m = {m} exceeds 16")));
        }
        let report = lift(validate_reference(text, r, m))?;
        if let Some(c) = report.first_failure() {
            set_error(format!("{}: {}", c.name, c.detail));
        }
        *passed = report.passed();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rmwd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C interface to `afsplit`.
//!
//! Frameworks are opaque `AfFramework` handles created by one of the
//! `af_framework_*` constructors and released with [`af_framework_free`].
//! Every fallible function returns an [`AfStatus`]; on failure a description is
//! available from [`af_last_error_message`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`af_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{Duration, Instant};

use afsplit::apx::{parse_apx, render_result, serialize_apx, SolveMeta};
use afsplit::bench::{solve, Method, SolveOptions};
use afsplit::cuts::{balanced_cut, hao_orlin_min_cut};
use afsplit::generator::random_framework;
use afsplit::{ArgumentId, Attack, Error, Framework, Labeling};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    TimedOut = 5,
    /// A combined labeling failed the final stability check.
    InvariantViolation = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfMethod {
    Direct = 0,
    SplitHo = 1,
    SplitBc = 2,
}

impl From<AfMethod> for Method {
    fn from(m: AfMethod) -> Self {
        match m {
            AfMethod::Direct => Method::Direct,
            AfMethod::SplitHo => Method::SplitHo,
            AfMethod::SplitBc => Method::SplitBc,
        }
    }
}

/// Opaque framework handle.
pub struct AfFramework {
    inner: Framework,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn fail(status: AfStatus, message: impl Into<String>) -> AfStatus {
    set_error(message);
    status
}

fn status_of(e: &Error) -> AfStatus {
    match e {
        Error::Parse { .. } => AfStatus::ParseError,
        Error::TimedOut => AfStatus::TimedOut,
        _ => AfStatus::InvalidInput,
    }
}

fn from_error(e: Error) -> AfStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `body`, turning panics into `AfStatus::Internal`.
fn guard(body: impl FnOnce() -> AfStatus) -> AfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == AfStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            status
        }
        Err(_) => fail(AfStatus::Internal, "internal error"),
    }
}

unsafe fn framework<'a>(f: *const AfFramework) -> Result<&'a Framework, AfStatus> {
    f.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(AfStatus::NullPointer, "framework handle is null"))
}

unsafe fn emit<T>(out: *mut T, value: T) -> AfStatus {
    if out.is_null() {
        return fail(AfStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    AfStatus::Ok
}

unsafe fn emit_handle(out: *mut *mut AfFramework, f: Framework) -> AfStatus {
    if out.is_null() {
        return fail(AfStatus::NullPointer, "output pointer is null");
    }
    out.write(Box::into_raw(Box::new(AfFramework { inner: f })));
    AfStatus::Ok
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> AfStatus {
    match CString::new(s) {
        Ok(c) => emit(out, c.into_raw()),
        Err(_) => fail(AfStatus::Internal, "string contains a NUL byte"),
    }
}

fn deadline(timeout_ms: u64) -> Option<Instant> {
    (timeout_ms > 0).then(|| Instant::now() + Duration::from_millis(timeout_ms))
}

/// Parses apx text (`arg(a).` / `att(a,b).` facts, one per line).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_framework_parse_apx(text: *const c_char, out: *mut *mut AfFramework) -> AfStatus {
    guard(|| {
        if text.is_null() {
            return fail(AfStatus::NullPointer, "text is null");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(AfStatus::InvalidUtf8, "text is not valid UTF-8");
        };
        match parse_apx(text) {
            Ok(f) => emit_handle(out, f),
            Err(e) => from_error(e),
        }
    })
}

/// Builds a framework on arguments `0..n` from `attack_count` (source, target)
/// pairs stored flat in `attacks` (`2 * attack_count` entries).
///
/// # Safety
/// `attacks` must point to `2 * attack_count` readable values (or be null when
/// `attack_count` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_framework_from_attacks(
    n: u32,
    attacks: *const u32,
    attack_count: usize,
    out: *mut *mut AfFramework,
) -> AfStatus {
    guard(|| {
        let pairs: &[u32] = if attack_count == 0 {
            &[]
        } else if attacks.is_null() {
            return fail(AfStatus::NullPointer, "attacks is null");
        } else {
            std::slice::from_raw_parts(attacks, 2 * attack_count)
        };
        let attacks = pairs.chunks_exact(2).map(|p| Attack::new(p[0], p[1]));
        match Framework::new((0..n).map(ArgumentId), attacks) {
            Ok(f) => emit_handle(out, f),
            Err(e) => from_error(e),
        }
    })
}

/// `m` distinct attacks on `n` arguments drawn from `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_framework_generate_random(
    n: u32,
    m: usize,
    seed: u64,
    out: *mut *mut AfFramework,
) -> AfStatus {
    guard(|| match random_framework(n, m, seed) {
        Ok(f) => emit_handle(out, f),
        Err(e) => from_error(e),
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from an `af_framework_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn af_framework_free(f: *mut AfFramework) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of arguments; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn af_framework_argument_count(f: *const AfFramework) -> usize {
    f.as_ref().map_or(0, |h| h.inner.len())
}

/// Number of attacks; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn af_framework_attack_count(f: *const AfFramework) -> usize {
    f.as_ref().map_or(0, |h| h.inner.attack_count())
}

/// Serializes to apx text.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_framework_to_apx(f: *const AfFramework, out: *mut *mut c_char) -> AfStatus {
    guard(|| match framework(f) {
        Ok(f) => emit_string(out, serialize_apx(f)),
        Err(s) => s,
    })
}

unsafe fn run<'a>(
    f: *const AfFramework,
    method: AfMethod,
    timeout_ms: u64,
) -> Result<(&'a Framework, Vec<Labeling>, u64), AfStatus> {
    let f = framework(f)?;
    let start = Instant::now();
    let opts = SolveOptions {
        deadline: deadline(timeout_ms),
        ..SolveOptions::default()
    };
    let solution = solve(f, method.into(), &opts).map_err(from_error)?;
    if let Some(split) = &solution.split {
        if split.discarded > 0 {
            return Err(fail(
                AfStatus::InvariantViolation,
                format!("{} combined labelings failed the stability check", split.discarded),
            ));
        }
    }
    Ok((f, solution.labelings, start.elapsed().as_millis() as u64))
}

/// Counts stable labelings. `timeout_ms = 0` means no limit.
///
/// # Safety
/// `f` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_count_stable(
    f: *const AfFramework,
    method: AfMethod,
    timeout_ms: u64,
    out_count: *mut usize,
) -> AfStatus {
    guard(|| match run(f, method, timeout_ms) {
        Ok((_, labelings, _)) => emit(out_count, labelings.len()),
        Err(s) => s,
    })
}

/// Solves and renders the result as one JSON object:
/// `{"framework":"","method":..,"elapsed_ms":..,"censored":false,"seed":null,"stable_labelings":[{"in":[..],"out":[..]}]}`.
///
/// # Safety
/// `f` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_solve_json(
    f: *const AfFramework,
    method: AfMethod,
    timeout_ms: u64,
    out_json: *mut *mut c_char,
) -> AfStatus {
    guard(|| match run(f, method, timeout_ms) {
        Ok((fw, labelings, elapsed_ms)) => {
            let meta = SolveMeta {
                framework: String::new(),
                method: Method::from(method).to_string(),
                elapsed_ms,
                censored: false,
                seed: None,
            };
            emit_string(out_json, render_result(fw, &labelings, &meta))
        }
        Err(s) => s,
    })
}

/// Size `k` of the directed minimum cut (attacks from the second side into
/// the first).
///
/// # Safety
/// `f` must be a live handle and `out_k` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn af_min_cut_k(f: *const AfFramework, out_k: *mut usize) -> AfStatus {
    guard(|| match framework(f) {
        Ok(f) => match hao_orlin_min_cut(f) {
            Ok(cut) => emit(out_k, cut.k),
            Err(e) => from_error(e),
        },
        Err(s) => s,
    })
}

/// Balanced cut grown from argument id `start` (negative: lowest id).
///
/// The ids of the first side are written to `a1` in ascending order and their
/// number to `a1_len`. If `capacity` is too small, only `a1_len` is written
/// and `BufferTooSmall` is returned.
///
/// # Safety
/// `f` must be a live handle, `a1` must have room for `capacity` values (or be
/// null when `capacity` is 0) and `a1_len`, `out_k` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn af_balanced_cut(
    f: *const AfFramework,
    start: i64,
    a1: *mut u32,
    capacity: usize,
    a1_len: *mut usize,
    out_k: *mut usize,
) -> AfStatus {
    guard(|| {
        let f = match framework(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let start = match u32::try_from(start) {
            Ok(id) => Some(ArgumentId(id)),
            Err(_) if start < 0 => None,
            Err(_) => return fail(AfStatus::InvalidInput, "start id out of range"),
        };
        let cut = match balanced_cut(f, start) {
            Ok(cut) => cut,
            Err(e) => return from_error(e),
        };
        let status = emit(a1_len, cut.a1.len());
        if status != AfStatus::Ok {
            return status;
        }
        if capacity < cut.a1.len() {
            return fail(AfStatus::BufferTooSmall, format!("{} slots needed", cut.a1.len()));
        }
        if a1.is_null() {
            return fail(AfStatus::NullPointer, "a1 is null");
        }
        for (i, id) in cut.a1.iter().enumerate() {
            a1.add(i).write(id.0);
        }
        emit(out_k, cut.k)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn af_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the last failure on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn af_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

//! C ABI over `lcycle`.
//!
//! Every handle is opaque and owned by the caller once returned; free it
//! with the matching `*_free`. Functions return an [`LcycleStatus`]; on
//! anything but `LCYCLE_STATUS_OK` a message is available from
//! [`lcycle_last_error`] on the same thread. Strings returned through
//! `char **` out-parameters are freed with [`lcycle_string_free`].
//!
//! Integers cross the boundary as `uint64_t`; the core works in `u128`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lcycle::construct::{construct_gadget_witness, construct_wall_witness, ConstructError};
use lcycle::io::{parse_document, to_json, IoError, Witness};
use lcycle::lset::{parse_set_spec, IntSet, LsetError};
use lcycle::verify::{verify_gadget, verify_wall, VerificationReport, VerifyError, VerifyMode, VerifyOptions};

/// Result of every fallible call. Values match the CLI exit codes where
/// they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcycleStatus {
    Ok = 0,
    /// Verification ran and at least one check failed.
    VerificationFailed = 1,
    /// Bad argument, malformed input, or null pointer.
    InvalidArgument = 2,
    /// A search bound or cap ran out before an answer was found.
    BoundExhausted = 3,
    /// A panic was caught at the boundary.
    Internal = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcycleVerifyMode {
    Exhaustive = 0,
    Certificate = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcycleVerifyOptions {
    pub mode: LcycleVerifyMode,
    pub cycle_cap: u64,
    pub subset_cap: u64,
    pub case_cap: u64,
    pub path_cap: u64,
}

/// Opaque integer set.
pub struct LcycleSet(IntSet);

/// Opaque gadget or wall witness.
pub struct LcycleWitness(Witness);

/// Opaque verification report.
pub struct LcycleReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(LcycleStatus, String);

impl From<LsetError> for Failure {
    fn from(e: LsetError) -> Self {
        let code = if e.is_bound_exhausted() { LcycleStatus::BoundExhausted } else { LcycleStatus::InvalidArgument };
        Failure(code, e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        let code = if e.is_bound_exhausted() { LcycleStatus::BoundExhausted } else { LcycleStatus::InvalidArgument };
        Failure(code, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = if matches!(e, VerifyError::CycleCapExceeded { .. }) || e.is_bound_exhausted() {
            LcycleStatus::BoundExhausted
        } else {
            LcycleStatus::InvalidArgument
        };
        Failure(code, e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure(LcycleStatus::InvalidArgument, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LcycleStatus::InvalidArgument, msg.into())
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<LcycleStatus, Failure>) -> LcycleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == LcycleStatus::Ok {
                set_last_error("");
            }
            status
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal error: panic caught at the C boundary");
            LcycleStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<LcycleStatus, Failure> {
    *out = Box::into_raw(Box::new(value));
    Ok(LcycleStatus::Ok)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<LcycleStatus, Failure> {
    let c = CString::new(s).map_err(|_| invalid("output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(LcycleStatus::Ok)
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    Ok(())
}

/// Message for the last failed call on this thread, or `""`. Valid until
/// the next call on this thread; do not free.
#[no_mangle]
pub extern "C" fn lcycle_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lcycle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a set spec such as `"primes"`, `"powers:10"` or
/// `"explicit:10,100"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_set_parse(spec: *const c_char, out: *mut *mut LcycleSet) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let set = parse_set_spec(str_arg(spec, "spec")?)?;
        put(out, LcycleSet(set))
    })
}

/// Writes 1 to `out` if `n` is in the set, else 0.
///
/// # Safety
/// `set` must come from [`lcycle_set_parse`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_set_contains(set: *const LcycleSet, n: u64, out: *mut u8) -> LcycleStatus {
    guard(|| {
        let set = ref_arg(set, "set")?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = set.0.contains(n as u128)? as u8;
        Ok(LcycleStatus::Ok)
    })
}

/// # Safety
/// `set` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lcycle_set_free(set: *mut LcycleSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Builds the gadget witness (the grid with each edge replaced by paths
/// of lengths `x-1`, `x`, `x+1`).
///
/// # Safety
/// `set` must be a live set handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_gadget_construct(
    set: *const LcycleSet,
    t: u64,
    s: u64,
    x_bound: u64,
    a_max: u64,
    out: *mut *mut LcycleWitness,
) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let set = ref_arg(set, "set")?;
        let w = construct_gadget_witness(&set.0, t as u128, s as u128, x_bound as u128, a_max as u128)?;
        put(out, LcycleWitness(Witness::Gadget(w)))
    })
}

/// Builds the weighted wall witness. `search_bound` is a decimal string
/// (chord lengths routinely exceed 64 bits), or null for `10^30`.
///
/// # Safety
/// `set` must be a live set handle; `search_bound` null or NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_wall_construct(
    set: *const LcycleSet,
    ell: u64,
    search_bound: *const c_char,
    out: *mut *mut LcycleWitness,
) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let set = ref_arg(set, "set")?;
        let ell = usize::try_from(ell).map_err(|_| invalid("ell does not fit in usize"))?;
        let bound = if search_bound.is_null() {
            10u128.pow(30)
        } else {
            let text = str_arg(search_bound, "search_bound")?;
            text.trim()
                .parse::<u128>()
                .map_err(|_| invalid(format!("search_bound `{text}` is not a u128")))?
        };
        let w = construct_wall_witness(&set.0, ell, bound)?;
        put(out, LcycleWitness(Witness::Wall(w)))
    })
}

/// # Safety
/// `w` must be a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn lcycle_witness_vertex_count(w: *const LcycleWitness) -> u64 {
    w.as_ref().map_or(0, |w| w.0.graph().vertex_count() as u64)
}

/// # Safety
/// `w` must be a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn lcycle_witness_edge_count(w: *const LcycleWitness) -> u64 {
    w.as_ref().map_or(0, |w| w.0.graph().edge_count() as u64)
}

/// Serializes the witness alone (without a document envelope).
///
/// # Safety
/// `w` must be a live witness handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_witness_to_json(w: *const LcycleWitness, out: *mut *mut c_char) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let w = ref_arg(w, "witness")?;
        put_string(out, to_json(&w.0))
    })
}

/// Parses a witness written by [`lcycle_witness_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_witness_from_json(json: *const c_char, out: *mut *mut LcycleWitness) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(json, "json")?;
        let w: Witness = serde_json::from_str(text).map_err(|e| invalid(format!("invalid witness JSON: {e}")))?;
        put(out, LcycleWitness(w))
    })
}

/// # Safety
/// `w` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lcycle_witness_free(w: *mut LcycleWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

#[no_mangle]
pub extern "C" fn lcycle_verify_options_default() -> LcycleVerifyOptions {
    let d = VerifyOptions::default();
    LcycleVerifyOptions {
        mode: LcycleVerifyMode::Exhaustive,
        cycle_cap: d.cycle_cap,
        subset_cap: d.subset_cap,
        case_cap: d.case_cap,
        path_cap: d.path_cap,
    }
}

fn options(o: &LcycleVerifyOptions) -> VerifyOptions {
    VerifyOptions {
        mode: match o.mode {
            LcycleVerifyMode::Exhaustive => VerifyMode::Exhaustive,
            LcycleVerifyMode::Certificate => VerifyMode::Certificate,
        },
        cycle_cap: o.cycle_cap,
        subset_cap: o.subset_cap,
        case_cap: o.case_cap,
        path_cap: o.path_cap,
        extra_t: Vec::new(),
    }
}

fn run_verify(w: &Witness, opts: &VerifyOptions) -> Result<VerificationReport, Failure> {
    Ok(match w {
        Witness::Gadget(g) => verify_gadget(g, opts)?,
        Witness::Wall(wall) => verify_wall(wall, opts)?,
    })
}

fn verdict(r: &VerificationReport) -> LcycleStatus {
    if r.passed() {
        LcycleStatus::Ok
    } else {
        set_last_error("verification failed");
        LcycleStatus::VerificationFailed
    }
}

/// Verifies a witness. The report is written to `out` whenever
/// verification ran, including on `LCYCLE_STATUS_VERIFICATION_FAILED`. `opts`
/// may be null for the defaults.
///
/// # Safety
/// `w` must be a live witness handle; `opts` null or readable; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_verify(
    w: *const LcycleWitness,
    opts: *const LcycleVerifyOptions,
    out: *mut *mut LcycleReport,
) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let w = ref_arg(w, "witness")?;
        let opts = opts.as_ref().copied().unwrap_or_else(|| lcycle_verify_options_default());
        let report = run_verify(&w.0, &options(&opts))?;
        let status = verdict(&report);
        put(out, LcycleReport(report))?;
        Ok(status)
    })
}

/// JSON in, JSON out. `witness_json` is a witness document as written by
/// `lcycle construct-*` (or a bare witness); `options_json` is null or an
/// object with any of `mode`, `cycle_cap`, `subset_cap`, `case_cap`,
/// `path_cap`, `extra_t`.
///
/// # Safety
/// String arguments must be NUL-terminated (`options_json` may be null);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_verify_json(
    witness_json: *const c_char,
    options_json: *const c_char,
    out: *mut *mut c_char,
) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(witness_json, "witness_json")?;
        let witness = parse_witness(text)?;
        let opts = if options_json.is_null() {
            VerifyOptions::default()
        } else {
            let o = str_arg(options_json, "options_json")?;
            let mut v: serde_json::Value =
                serde_json::from_str(o).map_err(|e| invalid(format!("invalid options JSON: {e}")))?;
            let mut full = serde_json::to_value(VerifyOptions::default()).expect("options serialize");
            if let (Some(base), Some(given)) = (full.as_object_mut(), v.as_object_mut()) {
                for (k, val) in std::mem::take(given) {
                    if !base.contains_key(&k) {
                        return Err(invalid(format!("unknown option `{k}`")));
                    }
                    base.insert(k, val);
                }
            } else {
                return Err(invalid("options JSON must be an object"));
            }
            serde_json::from_value(full).map_err(|e| invalid(format!("invalid options: {e}")))?
        };
        let report = run_verify(&witness, &opts)?;
        let status = verdict(&report);
        put_string(out, to_json(&report))?;
        Ok(status)
    })
}

fn parse_witness(text: &str) -> Result<Witness, Failure> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| invalid(format!("invalid JSON: {e}")))?;
    if v.get("format_version").is_some() {
        let doc: lcycle::io::WitnessDocument = parse_document(text, "witness_json")?;
        Ok(doc.witness)
    } else {
        serde_json::from_str(text).map_err(|e| invalid(format!("invalid witness JSON: {e}")))
    }
}

/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn lcycle_report_passed(r: *const LcycleReport) -> u8 {
    r.as_ref().is_some_and(|r| r.0.passed()) as u8
}

/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn lcycle_report_check_count(r: *const LcycleReport) -> u64 {
    r.as_ref().map_or(0, |r| r.0.checks.len() as u64)
}

/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_report_to_json(r: *const LcycleReport, out: *mut *mut c_char) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, to_json(&ref_arg(r, "report")?.0))
    })
}

/// Human-readable report, one line per check.
///
/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcycle_report_to_text(r: *const LcycleReport, out: *mut *mut c_char) -> LcycleStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, ref_arg(r, "report")?.0.to_text())
    })
}

/// # Safety
/// `r` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lcycle_report_free(r: *mut LcycleReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

//! C ABI for zenosim.
//!
//! Machines are opaque [`ZsMachine`] handles created by [`zs_machine_parse`]
//! and released with [`zs_machine_free`]. Every fallible call returns a
//! [`ZsStatus`]; on failure [`zs_last_error`] describes the most recent error
//! on the calling thread. Strings returned through `char **` out-parameters
//! are owned by the caller and must be released with [`zs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zenosim::format::{parse, serialize_program, Program};
use zenosim::tm::{run, RunResult, StepOutcome};
use zenosim::{zeno_halt_check, HalvingCounter, Seconds, ZenoOutcome, ZenoSchedule};

/// Opaque handle to a parsed machine and its optional input.
pub struct ZsMachine {
    program: Program,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    /// The fuel ran out before a result was reached.
    Exhausted = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZsRunOutcome {
    Accept = 0,
    Stuck = 1,
    Exhausted = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZsRunResult {
    pub outcome: ZsRunOutcome,
    pub steps: u64,
    pub head1: i64,
    pub head2: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NULs were removed")));
}

fn fail(status: ZsStatus, msg: impl Into<String>) -> ZsStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ZsStatus) -> ZsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ZsStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ZsStatus> {
    if p.is_null() {
        return Err(fail(ZsStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ZsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> ZsStatus {
    if out.is_null() {
        return fail(ZsStatus::NullPointer, "output pointer is NULL");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ZsStatus::Ok
        }
        Err(_) => fail(ZsStatus::InvalidArgument, "result contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a `.tm` document. On success `*out` receives a new handle.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_machine_parse(src: *const c_char, out: *mut *mut ZsMachine) -> ZsStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZsStatus::NullPointer, "output pointer is NULL");
        }
        let src = match str_arg(src, "source") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse(src) {
            Ok(program) => {
                *out = Box::into_raw(Box::new(ZsMachine { program }));
                ZsStatus::Ok
            }
            Err(e) => fail(ZsStatus::ParseError, e.to_string()),
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `m` must come from [`zs_machine_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zs_machine_free(m: *mut ZsMachine) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Canonical text of the machine and its input.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_machine_serialize(m: *const ZsMachine, out: *mut *mut c_char) -> ZsStatus {
    guard(|| match m.as_ref() {
        None => fail(ZsStatus::NullPointer, "machine is NULL"),
        Some(m) => write_string(out, serialize_program(&m.program)),
    })
}

/// Runs the machine on its `tape1:` input for at most `fuel` steps.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_run(m: *const ZsMachine, fuel: u64, out: *mut ZsRunResult) -> ZsStatus {
    guard(|| {
        let (Some(m), false) = (m.as_ref(), out.is_null()) else {
            return fail(ZsStatus::NullPointer, "machine or output is NULL");
        };
        let p = &m.program;
        let result = match run(&p.machine, p.input_or_empty(), fuel) {
            Ok(r) => r,
            Err(e) => return fail(ZsStatus::InvalidArgument, e.to_string()),
        };
        let (h1, h2) = result.config().heads();
        let outcome = match &result {
            RunResult::Halted { outcome: StepOutcome::AcceptHalt, .. } => ZsRunOutcome::Accept,
            RunResult::Halted { .. } => ZsRunOutcome::Stuck,
            RunResult::Exhausted { .. } => ZsRunOutcome::Exhausted,
        };
        *out = ZsRunResult {
            outcome,
            steps: result.steps_used(),
            head1: h1,
            head2: h2,
        };
        ZsStatus::Ok
    })
}

/// Zeno halting check with a one-second first step. `*json_out` receives the
/// verdict object. Without the limit stage a non-halting run returns
/// `ZS_STATUS_EXHAUSTED` and leaves `*json_out` untouched.
///
/// # Safety
/// `m` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_zeno_check(
    m: *const ZsMachine,
    fuel: u64,
    limit_stage: bool,
    json_out: *mut *mut c_char,
) -> ZsStatus {
    guard(|| {
        let Some(m) = m.as_ref() else {
            return fail(ZsStatus::NullPointer, "machine is NULL");
        };
        let p = &m.program;
        match zeno_halt_check(&p.machine, p.input_or_empty(), fuel, limit_stage, &ZenoSchedule::default()) {
            Ok(ZenoOutcome::Verdict(v)) => write_string(json_out, v.to_json().to_string()),
            Ok(ZenoOutcome::Exhausted { .. }) => fail(ZsStatus::Exhausted, "fuel exhausted without a verdict"),
            Err(e) => fail(ZsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Counter after `n` halvings, or at the limit when `limit` is set (then `n` is ignored).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_counter_render(n: u64, limit: bool, out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let mut c = HalvingCounter::new();
        if limit {
            c = c.take_limit().expect("fresh counters can take the limit");
        } else {
            for _ in 0..n {
                c = c.halve().expect("finite counters can halve");
            }
        }
        write_string(out, c.to_string())
    })
}

/// Observer time after `n` steps when the first step takes `num/den` seconds,
/// as an exact fraction.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_wall_time(n: u64, num: i64, den: i64, out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        if den == 0 {
            return fail(ZsStatus::InvalidArgument, "denominator is zero");
        }
        match ZenoSchedule::new(Seconds::ratio(num, den)) {
            Ok(s) => write_string(out, s.wall_time(n).to_string()),
            Err(e) => fail(ZsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// The two-row contradiction table for the diagonal program, as JSON.
///
/// # Safety
/// `json_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_paradox_report(fuel: u64, w: u64, json_out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let report = zenosim::dovetail::paradox_report(fuel, w);
        write_string(json_out, serde_json::to_string(&report).expect("reports serialize"))
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C ABI over `moufkit`.
//!
//! Loops are opaque `MkLoop` handles owned by the caller and released with
//! `mk_loop_free`. Every fallible call returns an `MkStatus`; on failure the
//! message is available from `mk_last_error` on the same thread. Strings
//! returned through out-pointers are released with `mk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use moufkit::commutator::{commutator, congruence_solvable};
use moufkit::fixtures::fixture;
use moufkit::format::{parse_loop, to_loop_string};
use moufkit::report::{analyze, to_json, ReportOptions};
use moufkit::subloops::normal_closure;
use moufkit::{FiniteLoop, IdentityScheme, LoopError};

/// Opaque loop handle.
pub struct MkLoop(FiniteLoop);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidLoop = 4,
    /// The inputs were well formed but the operation does not apply.
    Domain = 5,
    CapExceeded = 6,
    /// `out_len` holds the required length.
    BufferTooSmall = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MkStatus, msg: impl Into<String>) -> MkStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &LoopError) -> MkStatus {
    match e {
        LoopError::Parse { .. } | LoopError::IdentityNotFirst(_) => MkStatus::Parse,
        LoopError::Empty
        | LoopError::NotSquare { .. }
        | LoopError::EntryOutOfRange { .. }
        | LoopError::OrderTooLarge(_)
        | LoopError::NotLatinSquare { .. }
        | LoopError::NoTwoSidedIdentity => MkStatus::InvalidLoop,
        LoopError::OrderCapExceeded { .. } | LoopError::CapExceeded { .. } => MkStatus::CapExceeded,
        _ => MkStatus::Domain,
    }
}

fn from_loop_error(e: LoopError) -> MkStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, converting a panic into `MkStatus::Panic`.
fn guarded(f: impl FnOnce() -> MkStatus) -> MkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(MkStatus::Panic, msg)
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, MkStatus> {
    if p.is_null() {
        return Err(fail(MkStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MkStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn slice_arg<'a>(p: *const usize, len: usize) -> Result<&'a [usize], MkStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(MkStatus::NullArgument, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn loop_arg<'a>(q: *const MkLoop) -> Result<&'a FiniteLoop, MkStatus> {
    q.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| fail(MkStatus::NullArgument, "null loop handle"))
}

unsafe fn put_loop(out: *mut *mut MkLoop, r: Result<FiniteLoop, LoopError>) -> MkStatus {
    match r {
        Ok(q) => {
            *out = Box::into_raw(Box::new(MkLoop(q)));
            MkStatus::Ok
        }
        Err(e) => from_loop_error(e),
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> MkStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MkStatus::Ok
        }
        Err(_) => fail(MkStatus::Domain, "output contains NUL"),
    }
}

macro_rules! try_arg {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(MkStatus::NullArgument, concat!("null ", stringify!($p)));
        })+
    };
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn mk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a loop from a row-major `order × order` table whose element 0 is
/// the identity.
///
/// # Safety
/// `entries` points to `order * order` readable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_from_table(
    entries: *const usize,
    order: usize,
    out: *mut *mut MkLoop,
) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let Some(cells) = order.checked_mul(order) else {
            return fail(MkStatus::InvalidLoop, "order overflows");
        };
        let flat = try_arg!(slice_arg(entries, cells));
        let rows: Vec<Vec<usize>> = flat.chunks(order.max(1)).map(<[usize]>::to_vec).collect();
        let r = FiniteLoop::from_table_reporting(&rows).and_then(|(q, relabel)| match relabel {
            Some(r) => Err(LoopError::IdentityNotFirst(r.original_identity)),
            None => Ok(q),
        });
        put_loop(out, r)
    })
}

/// Parses `.loop` text.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_parse(text: *const c_char, out: *mut *mut MkLoop) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let text = try_arg!(str_arg(text));
        put_loop(out, parse_loop(text))
    })
}

/// Builds a named fixture such as `"cyclic:7"` or `"paige-M2"`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_fixture(name: *const c_char, out: *mut *mut MkLoop) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let name = try_arg!(str_arg(name));
        put_loop(out, fixture(name))
    })
}

/// # Safety
/// `q` is NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_free(q: *mut MkLoop) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Order of the loop, or 0 for a NULL handle.
///
/// # Safety
/// `q` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_order(q: *const MkLoop) -> usize {
    q.as_ref().map_or(0, |h| h.0.order())
}

/// # Safety
/// `q` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_mul(
    q: *const MkLoop,
    a: usize,
    b: usize,
    out: *mut usize,
) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let q = try_arg!(loop_arg(q));
        if let Err(e) = q.check_element(a).and_then(|_| q.check_element(b)) {
            return from_loop_error(e);
        }
        *out = q.mul(a, b);
        MkStatus::Ok
    })
}

/// Checks an identity scheme by name, e.g. `"moufang-1"` or `"extra"`. When
/// it fails and `witness` is non-NULL, up to `witness_cap` witness elements
/// are written and `witness_len` receives the witness length.
///
/// # Safety
/// `q` is a live handle; `scheme` is NUL-terminated; `holds` is writable;
/// `witness` is NULL or has room for `witness_cap` values; `witness_len` is
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_satisfies_identity(
    q: *const MkLoop,
    scheme: *const c_char,
    holds: *mut bool,
    witness: *mut usize,
    witness_cap: usize,
    witness_len: *mut usize,
) -> MkStatus {
    guarded(|| {
        non_null!(holds);
        let q = try_arg!(loop_arg(q));
        let name = try_arg!(str_arg(scheme));
        let scheme: IdentityScheme = match name.parse() {
            Ok(s) => s,
            Err(e) => return from_loop_error(e),
        };
        let check = q.satisfies_identity(scheme);
        *holds = check.holds;
        let w = check.witness.unwrap_or_default();
        if !witness_len.is_null() {
            *witness_len = w.len();
        }
        if !witness.is_null() {
            for (i, &e) in w.iter().take(witness_cap).enumerate() {
                *witness.add(i) = e;
            }
        }
        MkStatus::Ok
    })
}

/// `.loop` text for the loop.
///
/// # Safety
/// `q` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_serialize(q: *const MkLoop, out: *mut *mut c_char) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let q = try_arg!(loop_arg(q));
        put_string(out, to_loop_string(q))
    })
}

/// The JSON analysis report. Zero caps select the defaults.
///
/// # Safety
/// `q` is a live handle; `source` is NULL or NUL-terminated; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mk_loop_analyze_json(
    q: *const MkLoop,
    source: *const c_char,
    max_order: usize,
    max_inn: usize,
    max_normal_lattice: usize,
    out: *mut *mut c_char,
) -> MkStatus {
    guarded(|| {
        non_null!(out);
        let q = try_arg!(loop_arg(q));
        let source = if source.is_null() {
            ""
        } else {
            try_arg!(str_arg(source))
        };
        let d = ReportOptions::default();
        let pick = |v: usize, default: usize| if v == 0 { default } else { v };
        let opts = ReportOptions {
            max_order: pick(max_order, d.max_order),
            max_inn: pick(max_inn, d.max_inn),
            max_normal_lattice: pick(max_normal_lattice, d.max_normal_lattice),
        };
        put_string(out, to_json(&analyze(q, source, &opts)))
    })
}

/// `[X, Y]` for the normal closures of the two element sets, written sorted
/// into `out`. `out_len` always receives the commutator's size; if it exceeds
/// `out_cap` nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `q` is a live handle; `x`, `y` point to `x_len`, `y_len` values; `out` has
/// room for `out_cap` values; `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_commutator(
    q: *const MkLoop,
    x: *const usize,
    x_len: usize,
    y: *const usize,
    y_len: usize,
    out: *mut usize,
    out_cap: usize,
    out_len: *mut usize,
) -> MkStatus {
    guarded(|| {
        non_null!(out_len);
        let q = try_arg!(loop_arg(q));
        let xs = try_arg!(slice_arg(x, x_len));
        let ys = try_arg!(slice_arg(y, y_len));
        for &e in xs.iter().chain(ys) {
            if let Err(e) = q.check_element(e) {
                return from_loop_error(e);
            }
        }
        let c = match commutator(q, &normal_closure(q, xs), &normal_closure(q, ys)) {
            Ok(c) => c,
            Err(e) => return from_loop_error(e),
        };
        *out_len = c.len();
        if c.len() > out_cap {
            return fail(
                MkStatus::BufferTooSmall,
                format!("need room for {} elements", c.len()),
            );
        }
        if out.is_null() {
            return fail(MkStatus::NullArgument, "null out");
        }
        ptr::copy_nonoverlapping(c.elements().as_ptr(), out, c.len());
        MkStatus::Ok
    })
}

/// Congruence solvability; `max_order` 0 selects the default cap.
///
/// # Safety
/// `q` is a live handle; `solvable` is writable.
#[no_mangle]
pub unsafe extern "C" fn mk_congruence_solvable(
    q: *const MkLoop,
    max_order: usize,
    solvable: *mut bool,
) -> MkStatus {
    guarded(|| {
        non_null!(solvable);
        let q = try_arg!(loop_arg(q));
        let cap = if max_order == 0 {
            ReportOptions::default().max_order
        } else {
            max_order
        };
        match congruence_solvable(q, cap) {
            Ok(w) => {
                *solvable = w.is_some();
                MkStatus::Ok
            }
            Err(e) => from_loop_error(e),
        }
    })
}

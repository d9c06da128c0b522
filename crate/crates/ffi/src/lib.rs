//! C ABI for `clforms`.
//!
//! Objects are opaque handles created by `*_new` / constructor functions and
//! released with the matching `*_free`. Every fallible function returns a
//! `ClfStatus`; on failure `clf_last_error` describes the problem for the
//! calling thread. Strings handed out by the library are released with
//! `clf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clforms::cli::format;
use clforms::clsets::{self, ClContext, Level};
use clforms::{Error, SpaceParams, VertexSet};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    CapExceeded = 5,
    NotCl = 6,
    Internal = 7,
}

/// Verification depth for `clf_context_new`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClfLevel {
    /// Counting test and sampled spreads only.
    Fast = 0,
    /// Also the exact linear-algebra tests.
    Full = 1,
}

/// Example families for `clf_construct`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClfKind {
    /// `arg`: index of the point in canonical order.
    Pencil = 0,
    /// `arg`: number of pencils.
    FootnotePencils = 1,
    /// `arg`: hyperplane index.
    Hyperplane = 2,
    /// `arg`: number of hyperplanes.
    HyperplaneUnion = 3,
    /// `arg`: the family parameter `y`.
    NontrivialFamily = 4,
    /// `arg`: multiplier seed of the field spread.
    Spread = 5,
}

/// Parameters `(q, n, l)` of a bilinear forms graph.
pub struct ClfSpace(SpaceParams);

/// A set of vertices.
pub struct ClfSet(VertexSet);

/// Precomputed tables for deciding membership.
pub struct ClfContext(ClContext);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(ClfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => ClfStatus::Parse,
            Error::CapExceeded { .. } => ClfStatus::CapExceeded,
            Error::NotCL => ClfStatus::NotCl,
            _ => ClfStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ClfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ClfStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(ClfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(ClfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ClfStatus::NullPointer, "string is null".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(ClfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(ClfStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failure on this thread, or NULL. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn clf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn clf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_space_new(q: u32, n: usize, l: usize, out: *mut *mut ClfSpace) -> ClfStatus {
    guard(|| {
        let sp = SpaceParams::new(q, n, l)?;
        sp.check_cap(sp.num_vertices_u128())?;
        put(out, boxed(ClfSpace(sp)))
    })
}

/// # Safety
/// `space` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn clf_space_free(space: *mut ClfSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_space_num_vertices(space: *const ClfSpace, out: *mut usize) -> ClfStatus {
    guard(|| put(out, deref(space, "space")?.0.num_vertices()))
}

/// # Safety
/// `space` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_new_empty(space: *const ClfSpace, out: *mut *mut ClfSet) -> ClfStatus {
    guard(|| put(out, boxed(ClfSet(VertexSet::empty(&deref(space, "space")?.0)))))
}

/// Parses the vertex-set text format.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_parse(src: *const c_char, out: *mut *mut ClfSet) -> ClfStatus {
    guard(|| put(out, boxed(ClfSet(format::parse_vertex_set(text(src)?)?))))
}

/// Writes `set` in the vertex-set text format; free the result with `clf_string_free`.
///
/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_to_text(set: *const ClfSet, out: *mut *mut c_char) -> ClfStatus {
    guard(|| put(out, to_c(format::write_vertex_set(&deref(set, "set")?.0))))
}

/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn clf_set_free(set: *mut ClfSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

fn check_index(set: &VertexSet, idx: usize) -> Result<(), Fail> {
    let nv = set.params().num_vertices();
    if idx >= nv {
        return Err(Fail(ClfStatus::InvalidArgument, format!("vertex index {idx} out of range {nv}")));
    }
    Ok(())
}

/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn clf_set_insert(set: *mut ClfSet, idx: usize) -> ClfStatus {
    guard(|| {
        let s = &mut deref_mut(set, "set")?.0;
        check_index(s, idx)?;
        s.insert(idx);
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_contains(set: *const ClfSet, idx: usize, out: *mut bool) -> ClfStatus {
    guard(|| {
        let s = &deref(set, "set")?.0;
        check_index(s, idx)?;
        put(out, s.contains(idx))
    })
}

/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_len(set: *const ClfSet, out: *mut usize) -> ClfStatus {
    guard(|| put(out, deref(set, "set")?.0.len()))
}

/// Copies up to `cap` member indices (ascending) into `buf`; `out_len` receives the set size.
///
/// # Safety
/// `set` must be a live handle, `buf` valid for `cap` writes (or NULL when `cap` is 0)
/// and `out_len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_set_members(
    set: *const ClfSet,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> ClfStatus {
    guard(|| {
        let s = &deref(set, "set")?.0;
        if cap > 0 && buf.is_null() {
            return Err(Fail(ClfStatus::NullPointer, "buffer is null".into()));
        }
        for (i, m) in s.members().take(cap).enumerate() {
            buf.add(i).write(m);
        }
        put(out_len, s.len())
    })
}

/// Builds one of the example families.
///
/// # Safety
/// `space` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_construct(
    space: *const ClfSpace,
    kind: ClfKind,
    arg: u64,
    out: *mut *mut ClfSet,
) -> ClfStatus {
    guard(|| {
        let sp = &deref(space, "space")?.0;
        let set = match kind {
            ClfKind::Pencil => {
                let pts = sp.enumerate_points()?;
                let p = pts
                    .get(arg as usize)
                    .ok_or_else(|| Fail(ClfStatus::InvalidArgument, format!("point index {arg} out of range")))?;
                clsets::point_pencil(sp, p)
            }
            ClfKind::FootnotePencils => clsets::footnote_pencil_union(sp, arg)?,
            ClfKind::Hyperplane => clsets::hyperplane_set(sp, &clsets::footnote_hyperplane(sp, arg)?)?,
            ClfKind::HyperplaneUnion => clsets::hyperplane_union(sp, arg)?,
            ClfKind::NontrivialFamily => clsets::nontrivial_family(sp, arg)?,
            ClfKind::Spread => clsets::spread(sp, arg)?.to_set(),
        };
        put(out, boxed(ClfSet(set)))
    })
}

/// # Safety
/// `space` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_context_new(
    space: *const ClfSpace,
    level: ClfLevel,
    seed: u64,
    out: *mut *mut ClfContext,
) -> ClfStatus {
    guard(|| {
        let level = match level {
            ClfLevel::Fast => Level::Fast,
            ClfLevel::Full => Level::Full,
        };
        put(out, boxed(ClfContext(ClContext::new(&deref(space, "space")?.0, level, seed)?)))
    })
}

/// # Safety
/// `ctx` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn clf_context_free(ctx: *mut ClfContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

fn same_space(ctx: &ClContext, set: &VertexSet) -> Result<(), Fail> {
    if ctx.params() != set.params() {
        return Err(Fail(ClfStatus::InvalidArgument, "set and context have different parameters".into()));
    }
    Ok(())
}

/// Decides membership. `out_x` (optional) receives the parameter as a decimal
/// or `p/q` string; free it with `clf_string_free`.
///
/// # Safety
/// `ctx` and `set` must be live handles, `out_is_cl` valid for writes, `out_x` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_verdict(
    ctx: *const ClfContext,
    set: *const ClfSet,
    out_is_cl: *mut bool,
    out_x: *mut *mut c_char,
) -> ClfStatus {
    guard(|| {
        let (c, s) = (&deref(ctx, "context")?.0, &deref(set, "set")?.0);
        same_space(c, s)?;
        let v = c.verdict(s);
        put(out_is_cl, v.is_cl)?;
        if !out_x.is_null() {
            let x = serde_json::to_value(&v).ok().and_then(|j| j["x"].as_str().map(String::from)).unwrap_or_default();
            out_x.write(to_c(x));
        }
        Ok(())
    })
}

/// The full verdict, with per-test outcomes and witnesses, as JSON.
///
/// # Safety
/// `ctx` and `set` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_verdict_json(
    ctx: *const ClfContext,
    set: *const ClfSet,
    out: *mut *mut c_char,
) -> ClfStatus {
    guard(|| {
        let (c, s) = (&deref(ctx, "context")?.0, &deref(set, "set")?.0);
        same_space(c, s)?;
        let json = serde_json::to_string(&c.verdict(s)).map_err(|e| Fail(ClfStatus::Internal, e.to_string()))?;
        put(out, to_c(json))
    })
}

/// Runs the command-line interface in-process. `argv` excludes the program
/// name. Captured output goes to `out_stdout` / `out_stderr` (free both with
/// `clf_string_free`); `out_exit` receives the exit code.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clf_cli_run(
    argv: *const *const c_char,
    argc: usize,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
    out_exit: *mut i32,
) -> ClfStatus {
    guard(|| {
        if argc > 0 && argv.is_null() {
            return Err(Fail(ClfStatus::NullPointer, "argv is null".into()));
        }
        let mut args = vec!["clforms".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let (mut so, mut se) = (Vec::new(), Vec::new());
        let code = clforms::cli::run(args, &mut so, &mut se);
        let utf8 = |v: Vec<u8>| String::from_utf8(v).map_err(|e| Fail(ClfStatus::InvalidUtf8, e.to_string()));
        put(out_exit, code)?;
        put(out_stdout, to_c(utf8(so)?))?;
        put(out_stderr, to_c(utf8(se)?))
    })
}

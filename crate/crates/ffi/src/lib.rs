//! C ABI for `sxl-core`.
//!
//! Graphs cross the boundary as opaque `SxlGraph` handles. Every fallible function returns an
//! [`SxlStatus`]; on failure a message is available from [`sxl_last_error_message`] on the same
//! thread until the next failing call. Strings returned by the library must be released with
//! [`sxl_string_free`], graphs with [`sxl_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sxl::enumeration::{self, EnumSpec};
use sxl::spectral::{self, BoundKind};
use sxl::{patterns, Error, FamilySpec, Graph, Pattern};

/// Opaque graph handle.
pub struct SxlGraph {
    inner: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SxlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    VertexLimitExceeded = 10,
    InvalidEdge = 11,
    InvalidParameter = 12,
    Divisibility = 13,
    ConvergenceFailure = 14,
    InvalidPattern = 15,
    SizeLimitExceeded = 16,
    MalformedGraph6 = 17,
    SizeUnsupported = 18,
    InvalidWeights = 19,
    InvalidRotation = 20,
    Parse = 21,
    BoundViolation = 22,
    Panic = 99,
}

impl From<&Error> for SxlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::VertexLimitExceeded { .. } => SxlStatus::VertexLimitExceeded,
            Error::InvalidEdge(..) => SxlStatus::InvalidEdge,
            Error::InvalidParameter(_) => SxlStatus::InvalidParameter,
            Error::Divisibility { .. } => SxlStatus::Divisibility,
            Error::ConvergenceFailure { .. } => SxlStatus::ConvergenceFailure,
            Error::InvalidPattern(_) => SxlStatus::InvalidPattern,
            Error::SizeLimitExceeded(_) => SxlStatus::SizeLimitExceeded,
            Error::MalformedGraph6(_) => SxlStatus::MalformedGraph6,
            Error::SizeUnsupported(_) => SxlStatus::SizeUnsupported,
            Error::InvalidWeights(_) => SxlStatus::InvalidWeights,
            Error::InvalidRotation(_) => SxlStatus::InvalidRotation,
            Error::Parse { .. } => SxlStatus::Parse,
            Error::BoundViolation { .. } => SxlStatus::BoundViolation,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(SxlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(SxlStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SxlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SxlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SxlStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(SxlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SxlStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn graph_arg<'a>(g: *const SxlGraph) -> Result<&'a Graph, Fail> {
    g.as_ref().map(|g| &g.inner).ok_or_else(null)
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

fn into_handle(g: Graph) -> *mut SxlGraph {
    Box::into_raw(Box::new(SxlGraph { inner: g }))
}

/// Message for the most recent failure on this thread, or null. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sxl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in `edges`
/// (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be null when `edge_count` is
/// 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut SxlGraph,
) -> SxlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        *out = into_handle(Graph::from_edges(n, &pairs)?);
        Ok(())
    })
}

/// Parses one graph6 line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_from_graph6(
    text: *const c_char,
    out: *mut *mut SxlGraph,
) -> SxlStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = into_handle(enumeration::parse_graph6(str_arg(text)?)?);
        Ok(())
    })
}

/// Builds a named family member such as `"K4"`, `"W6"` or `"ext{k=3,m=12}"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_from_family(
    spec: *const c_char,
    out: *mut *mut SxlGraph,
) -> SxlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let spec: FamilySpec = str_arg(spec)?.parse()?;
        *out = into_handle(spec.build()?);
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_free(g: *mut SxlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_vertex_count(g: *const SxlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Edge count, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_edge_count(g: *const SxlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.m())
}

/// Largest adjacency eigenvalue.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_spectral_radius(g: *const SxlGraph, out: *mut f64) -> SxlStatus {
    guard(|| {
        let g = graph_arg(g)?;
        *out_arg(out)? = spectral::spectral_radius(g)?.lambda;
        Ok(())
    })
}

/// Writes the Perron vector (max entry 1) into `buf`, which must hold at least as many
/// entries as the graph has vertices.
///
/// # Safety
/// `g` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sxl_perron_vector(
    g: *const SxlGraph,
    buf: *mut f64,
    len: usize,
) -> SxlStatus {
    guard(|| {
        let g = graph_arg(g)?;
        if len < g.n() {
            return Err(Fail(
                SxlStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {}", g.n()),
            ));
        }
        if buf.is_null() && g.n() > 0 {
            return Err(null());
        }
        let perron = spectral::spectral_radius(g)?.perron;
        if !perron.is_empty() {
            std::slice::from_raw_parts_mut(buf, perron.len()).copy_from_slice(&perron);
        }
        Ok(())
    })
}

/// Sets `*out` to whether `g` contains `pattern` (a family spec or a graph6 string) as a
/// subgraph.
///
/// # Safety
/// `g` must be a live handle, `pattern` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_contains(
    g: *const SxlGraph,
    pattern: *const c_char,
    out: *mut bool,
) -> SxlStatus {
    guard(|| {
        let g = graph_arg(g)?;
        let pattern: Pattern = str_arg(pattern)?.parse()?;
        *out_arg(out)? = patterns::contains(g, &pattern)?.is_some();
        Ok(())
    })
}

fn give_string(s: String, out: &mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(SxlStatus::Panic, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// graph6 encoding of `g` as labeled. Release with [`sxl_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_to_graph6(
    g: *const SxlGraph,
    out: *mut *mut c_char,
) -> SxlStatus {
    guard(|| {
        let g = graph_arg(g)?;
        give_string(enumeration::write_graph6(g)?, out_arg(out)?)
    })
}

/// graph6 encoding of the canonical relabeling of `g`; equal strings mean isomorphic graphs.
/// Release with [`sxl_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_graph_canonical_graph6(
    g: *const SxlGraph,
    out: *mut *mut c_char,
) -> SxlStatus {
    guard(|| {
        let g = graph_arg(g)?;
        give_string(
            enumeration::write_graph6(&enumeration::canonical_graph(g))?,
            out_arg(out)?,
        )
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sxl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates a bound such as `"zls"`, `"nikiforov:3"` or `"fk:4"` at edge count `m`.
///
/// # Safety
/// `kind` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_bound_value(
    kind: *const c_char,
    m: usize,
    out: *mut f64,
) -> SxlStatus {
    guard(|| {
        let kind: BoundKind = str_arg(kind)?.parse()?;
        *out_arg(out)? = spectral::bound_value(kind, m)?;
        Ok(())
    })
}

/// Number of isomorphism classes of graphs with `m` edges, connected ones only when
/// `connected` is set.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sxl_count_graphs(m: usize, connected: bool, out: *mut usize) -> SxlStatus {
    guard(|| {
        let spec = if connected {
            EnumSpec::connected(m)
        } else {
            EnumSpec::all(m)
        };
        *out_arg(out)? = enumeration::count(&spec)?;
        Ok(())
    })
}

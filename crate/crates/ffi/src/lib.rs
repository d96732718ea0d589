//! C interface to `adg-core`.
//!
//! Graphs are opaque `AdgGraph` handles created by `adg_graph_new` or
//! `adg_graph_from_system` and released with `adg_graph_free`. Every other
//! call returns an `AdgStatus`; on failure `adg_last_error` describes the
//! problem. Outputs go through caller-provided pointers and are written only
//! on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use adg_core::algorithms::{components, default_cap, girth, shortest_cycle_through, GirthMode, GirthValue};
use adg_core::covering::{lemma21_map, verify_builtin_covering, Policy};
use adg_core::equations::parse_system;
use adg_core::extremal::turan_bounds;
use adg_core::spectral::{lambda2, Method, SpectralOptions};
use adg_core::{Budget, Error, Family, Field, ImplicitGraph};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdgStatus {
    Ok = 0,
    /// Bad parameters, malformed equations, or a non prime power order.
    InvalidArgument = 1,
    /// The instance is too large for the id space, a size limit or the
    /// memory budget.
    ResourceRefusal = 2,
    /// The eigensolver did not reach its tolerance.
    NotConverged = 3,
    NullPointer = 4,
    /// The output buffer cannot hold the result; the needed length was written.
    BufferTooSmall = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdgFamily {
    D = 0,
    A = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdgMethod {
    Auto = 0,
    Dense = 1,
    Iterative = 2,
}

/// A cycle length or, when `exact` is false, a lower bound (the cap).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AdgGirth {
    pub value: u32,
    pub exact: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AdgSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `2 sqrt(q)`.
    pub bound: f64,
    pub margin: f64,
    /// Final residual of the iterative method, negative for the dense one.
    pub residual: f64,
    pub components: u64,
}

/// Opaque graph handle.
pub struct AdgGraph {
    inner: ImplicitGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> AdgStatus {
    if e.is_resource_refusal() {
        AdgStatus::ResourceRefusal
    } else if matches!(e, Error::NotConverged { .. }) {
        AdgStatus::NotConverged
    } else {
        AdgStatus::InvalidArgument
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), AdgStatus>) -> AdgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            AdgStatus::Internal
        }
    }
}

fn fail(e: impl Into<Error>) -> AdgStatus {
    let e = e.into();
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> AdgStatus {
    set_error(format!("{what} is null"));
    AdgStatus::NullPointer
}

unsafe fn graph_ref<'a>(g: *const AdgGraph) -> Result<&'a ImplicitGraph, AdgStatus> {
    // SAFETY: the caller passes a handle from adg_graph_new that has not been freed.
    unsafe { g.as_ref() }.map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), AdgStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn girth_value(v: GirthValue) -> AdgGirth {
    AdgGirth {
        value: v.bound(),
        exact: v.exact().is_some(),
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn adg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn adg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `D(n, q)` or `A(n, q)` over the default field of order `q`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_new(family: AdgFamily, n: usize, q: u64, out: *mut *mut AdgGraph) -> AdgStatus {
    guard(|| {
        let family = match family {
            AdgFamily::D => Family::D,
            AdgFamily::A => Family::A,
        };
        let inner = ImplicitGraph::family(family, n, q).map_err(fail)?;
        unsafe { write(out, Box::into_raw(Box::new(AdgGraph { inner }))) }
    })
}

/// Builds a graph from equation text (`p2 + l2 = p1*l1` lines) over the
/// default field of order `q`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_from_system(text: *const c_char, q: u64, out: *mut *mut AdgGraph) -> AdgStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        // SAFETY: non-null and nul-terminated per the contract.
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| fail(Error::invalid("equation text is not UTF-8")))?;
        let system = parse_system(text).map_err(fail)?;
        let field = Field::with_order(q).map_err(fail)?;
        let inner = ImplicitGraph::new(&field, system, Family::Custom).map_err(fail)?;
        unsafe { write(out, Box::into_raw(Box::new(AdgGraph { inner }))) }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_free(g: *mut AdgGraph) {
    if !g.is_null() {
        // SAFETY: created by Box::into_raw in adg_graph_new.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of vertices, `2 q^n`. Points have ids below `q^n`, lines the rest.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_order(g: *const AdgGraph, out: *mut u64) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        unsafe { write(out, g.order()) }
    })
}

/// Neighbor ids of vertex `id`, ordered by the neighbor's first coordinate.
/// Writes the neighbor count to `len`; if `cap` is smaller, returns
/// `BufferTooSmall` without touching `buf`.
///
/// # Safety
/// `g` must be a live handle, `buf` valid for `cap` writes, `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_neighbors(
    g: *const AdgGraph,
    id: u64,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        if id >= g.order() {
            return Err(fail(Error::invalid(format!("vertex id {id} out of range"))));
        }
        let nbrs = g.neighbor_ids(id);
        unsafe { write(len, nbrs.len()) }?;
        if cap < nbrs.len() {
            set_error(format!("buffer holds {cap} ids, {} needed", nbrs.len()));
            return Err(AdgStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        // SAFETY: buf is valid for cap >= nbrs.len() writes.
        unsafe { std::ptr::copy_nonoverlapping(nbrs.as_ptr(), buf, nbrs.len()) };
        Ok(())
    })
}

/// Whether point id `point` and line id `line` are adjacent.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_graph_adjacent(g: *const AdgGraph, point: u64, line: u64, out: *mut bool) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let p = g.decode(point).map_err(fail)?;
        let l = g.decode(line).map_err(fail)?;
        let adjacent = g.adjacent(&p, &l).map_err(fail)?;
        unsafe { write(out, adjacent) }
    })
}

/// Girth below `cap` (0 selects `2n + 8`). With `full` false only cycles
/// through the origin are searched.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_girth(g: *const AdgGraph, cap: u32, full: bool, out: *mut AdgGirth) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let cap = if cap == 0 { default_cap(g.dimension()) } else { cap };
        let mode = if full { GirthMode::Full } else { GirthMode::SingleSource };
        let r = girth(g, cap, mode, &Budget::from_env()).map_err(fail)?;
        unsafe { write(out, girth_value(r.value)) }
    })
}

/// Shortest cycle through the origin point (0 selects cap `2n + 8`).
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_cycle_through_origin(g: *const AdgGraph, cap: u32, out: *mut AdgGirth) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let cap = if cap == 0 { default_cap(g.dimension()) } else { cap };
        let r = shortest_cycle_through(g, &g.origin(), cap, &Budget::from_env()).map_err(fail)?;
        unsafe { write(out, girth_value(r.value)) }
    })
}

/// Number of connected components.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_components(g: *const AdgGraph, out: *mut u64) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let c = components(g, &Budget::from_env()).map_err(fail)?;
        unsafe { write(out, c.count) }
    })
}

/// Two largest adjacency eigenvalues.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_lambda2(
    g: *const AdgGraph,
    method: AdgMethod,
    per_component: bool,
    seed: u64,
    out: *mut AdgSpectrum,
) -> AdgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let opts = SpectralOptions {
            method: match method {
                AdgMethod::Auto => Method::Auto,
                AdgMethod::Dense => Method::Dense,
                AdgMethod::Iterative => Method::Iterative,
            },
            per_component,
            seed,
            ..Default::default()
        };
        let r = lambda2(g, &opts, &Budget::from_env()).map_err(fail)?;
        let spectrum = AdgSpectrum {
            lambda1: r.lambda1,
            lambda2: r.lambda2,
            bound: r.bound,
            margin: r.margin,
            residual: r.residual.unwrap_or(-1.0),
            components: r.components,
        };
        unsafe { write(out, spectrum) }
    })
}

/// Checks the coordinate map `D(2k+1, q) -> A(k+2, q)` for the covering
/// property. `samples` of 0 checks exhaustively.
///
/// # Safety
/// `passed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_cover_check_lemma21(
    k: usize,
    q: u64,
    samples: u64,
    seed: u64,
    passed: *mut bool,
) -> AdgStatus {
    guard(|| {
        let map = lemma21_map(k, q).map_err(fail)?;
        let policy = if samples == 0 {
            Policy::Exhaustive
        } else {
            Policy::Sampled { count: samples, seed }
        };
        let verdict = verify_builtin_covering(&map, policy).map_err(fail)?;
        unsafe { write(passed, verdict.passed()) }
    })
}

/// Lower and upper bounds on the largest edge count of an `n`-vertex graph
/// with no cycle of length at most `2k + 1`.
///
/// # Safety
/// `lower` and `upper` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn adg_turan_bounds(n: u64, k: u32, lower: *mut f64, upper: *mut f64) -> AdgStatus {
    guard(|| {
        let b = turan_bounds(n, k).map_err(fail)?;
        if upper.is_null() {
            return Err(null("upper"));
        }
        unsafe { write(lower, b.lower) }?;
        unsafe { write(upper, b.upper) }
    })
}

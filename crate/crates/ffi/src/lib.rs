//! C interface to `contrast-core`.
//!
//! Groups and results are opaque heap handles released with their `*_free` function. Every
//! call returns a [`CsStatus`]; on failure [`cs_last_error`] describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use contrast_core::contrast::{extract, extract_symmetric, AlphaSpec, ContrastResult};
use contrast_core::graph::{GraphGroup, Label, LabelAliases, ObservationGraph};
use contrast_core::io::{load_group, Ingest};
use contrast_core::solver::{solve, GoqcInstance, Method, SolverConfig};
use contrast_core::{Error, SymMatrix};

/// Outcome of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    Io = 3,
    Parse = 4,
    Graph = 5,
    TimeSeries = 6,
    Dimension = 7,
    Alpha = 8,
    Argument = 9,
    Solver = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsLabel {
    A = 0,
    B = 1,
}

impl From<CsLabel> for Label {
    fn from(l: CsLabel) -> Self {
        match l {
            CsLabel::A => Label::A,
            CsLabel::B => Label::B,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsMethod {
    LocalSearch = 0,
    Sdp = 1,
    SdpLocalSearch = 2,
}

/// Solver settings; obtain defaults from [`cs_solver_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsSolverConfig {
    pub restarts: usize,
    pub local_search_max_passes: usize,
    /// 0 selects the rank from the instance size.
    pub sdp_rank: usize,
    pub sdp_max_iters: usize,
    pub sdp_tol: f64,
    pub rounding_samples: usize,
    pub rng_seed: u64,
    pub method: CsMethod,
}

impl From<&CsSolverConfig> for SolverConfig {
    fn from(c: &CsSolverConfig) -> Self {
        SolverConfig {
            restarts: c.restarts,
            local_search_max_passes: c.local_search_max_passes,
            sdp_rank: (c.sdp_rank > 0).then_some(c.sdp_rank),
            sdp_max_iters: c.sdp_max_iters,
            sdp_tol: c.sdp_tol,
            rounding_samples: c.rounding_samples,
            rng_seed: c.rng_seed,
            method: match c.method {
                CsMethod::LocalSearch => Method::LocalSearch,
                CsMethod::Sdp => Method::Sdp,
                CsMethod::SdpLocalSearch => Method::SdpLocalSearch,
            },
        }
    }
}

/// A group under construction or loaded from a manifest.
pub struct CsGroup {
    label: Label,
    n: usize,
    members: Vec<ObservationGraph>,
}

impl CsGroup {
    fn build(&self) -> Result<GraphGroup, Error> {
        GraphGroup::new(self.label, self.members.clone())
    }
}

pub struct CsResult {
    inner: ContrastResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CsStatus {
    match e.code() {
        "E_IO" => CsStatus::Io,
        "E_PARSE" => CsStatus::Parse,
        "E_GRAPH" => CsStatus::Graph,
        "E_TIMESERIES" => CsStatus::TimeSeries,
        "E_DIMENSION" => CsStatus::Dimension,
        "E_ALPHA" => CsStatus::Alpha,
        "E_SOLVER" => CsStatus::Solver,
        _ => CsStatus::Argument,
    }
}

enum Fail {
    Status(CsStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(CsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic for [`cs_last_error`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(&format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(CsStatus::Utf8, format!("{what} is not valid UTF-8")))
}

/// Message for the last failed call on this thread; empty if none. Valid until the next
/// call on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn cs_solver_config_default() -> CsSolverConfig {
    let d = SolverConfig::default();
    CsSolverConfig {
        restarts: d.restarts,
        local_search_max_passes: d.local_search_max_passes,
        sdp_rank: d.sdp_rank.unwrap_or(0),
        sdp_max_iters: d.sdp_max_iters,
        sdp_tol: d.sdp_tol,
        rounding_samples: d.rounding_samples,
        rng_seed: d.rng_seed,
        method: CsMethod::SdpLocalSearch,
    }
}

/// Empty group of graphs over `n` vertices.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cs_group_new(label: CsLabel, n: usize, out: *mut *mut CsGroup) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let group = CsGroup {
            label: label.into(),
            n,
            members: Vec::new(),
        };
        *out = Box::into_raw(Box::new(group));
        Ok(())
    })
}

/// Adds an unweighted subject graph given as `edge_count` pairs in `edges`
/// (`u0, v0, u1, v1, ...`, 0-based).
///
/// # Safety
/// `group` must come from this library; `subject_id` must be a NUL-terminated string;
/// `edges` must point to `2 * edge_count` readable values (may be null when the count is 0).
#[no_mangle]
pub unsafe extern "C" fn cs_group_add_graph(
    group: *mut CsGroup,
    subject_id: *const c_char,
    edges: *const usize,
    edge_count: usize,
) -> CsStatus {
    guard(|| {
        let group = group.as_mut().ok_or_else(|| null("group"))?;
        let id = str_arg(subject_id, "subject_id")?;
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs = flat.chunks_exact(2).map(|p| (p[0], p[1]));
        let g = ObservationGraph::new(group.n, pairs, id, group.label)?;
        group.members.push(g);
        Ok(())
    })
}

/// Loads a group from a manifest of edge lists or adjacency CSVs. `aliases` may be null or
/// a string such as `TD=A,ASD=B`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_group_load(
    manifest: *const c_char,
    aliases: *const c_char,
    out: *mut *mut CsGroup,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(manifest, "manifest")?;
        let aliases: LabelAliases = if aliases.is_null() {
            LabelAliases::default()
        } else {
            str_arg(aliases, "aliases")?.parse()?
        };
        let g = load_group(Path::new(path), &aliases, Ingest::Graphs)?;
        let group = CsGroup {
            label: g.label(),
            n: g.n(),
            members: g.members().to_vec(),
        };
        *out = Box::into_raw(Box::new(group));
        Ok(())
    })
}

/// Number of subjects; 0 for a null handle.
///
/// # Safety
/// `group` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_group_len(group: *const CsGroup) -> usize {
    group.as_ref().map_or(0, |g| g.members.len())
}

/// # Safety
/// `group` must be null or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_group_free(group: *mut CsGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Contrast subgraph dense in `a` and sparse in `b`, or the symmetric variant. `alpha` uses
/// the command-line syntax (`0.8`, `80`, `p90`). `config` may be null for defaults.
///
/// # Safety
/// Handles must come from this library; `alpha` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_extract(
    a: *const CsGroup,
    b: *const CsGroup,
    alpha: *const c_char,
    symmetric: bool,
    config: *const CsSolverConfig,
    out: *mut *mut CsResult,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = a.as_ref().ok_or_else(|| null("a"))?.build()?;
        let b = b.as_ref().ok_or_else(|| null("b"))?.build()?;
        let alpha: AlphaSpec = str_arg(alpha, "alpha")?.parse()?;
        let cfg = config
            .as_ref()
            .map_or_else(SolverConfig::default, SolverConfig::from);
        let inner = if symmetric {
            extract_symmetric(&a, &b, &alpha, &cfg)?
        } else {
            extract(&a, &b, &alpha, &cfg)?
        };
        *out = Box::into_raw(Box::new(CsResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_result_len(result: *const CsResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.vertices.len())
}

/// # Safety
/// `result` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_result_objective(result: *const CsResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.inner.objective)
}

/// # Safety
/// `result` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_result_alpha(result: *const CsResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.inner.alpha_resolved)
}

/// Copies the sorted vertex ids into `buf`, which must hold `cs_result_len` values.
///
/// # Safety
/// `buf` must point to `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn cs_result_vertices(
    result: *const CsResult,
    buf: *mut usize,
    cap: usize,
) -> CsStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let v = &r.inner.vertices;
        if v.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < v.len() {
            return Err(Fail::Status(
                CsStatus::BufferTooSmall,
                format!("buffer holds {cap} values, need {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// JSON rendering of the result; release with [`cs_string_free`].
///
/// # Safety
/// `result` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_result_to_json(result: *const CsResult, out: *mut *mut c_char) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let text = serde_json::to_string(&r.inner).map_err(Error::from)?;
        *out = CString::new(text).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// # Safety
/// `result` must be null or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cs_result_free(result: *mut CsResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Maximizes `sum_{u<v in S} (w[u][v] - alpha)` over vertex sets. `weights` is a row-major
/// symmetric `n x n` matrix (diagonal ignored). Writes the set to `out_vertices` (room for
/// `n` values), its size to `out_len` and the value to `out_value`.
///
/// # Safety
/// `weights` must hold `n * n` readable values; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_solve_goqc(
    n: usize,
    weights: *const f64,
    alpha: f64,
    config: *const CsSolverConfig,
    out_vertices: *mut usize,
    out_len: *mut usize,
    out_value: *mut f64,
) -> CsStatus {
    guard(|| {
        if out_len.is_null() || out_value.is_null() {
            return Err(null("output"));
        }
        if n > 0 && (weights.is_null() || out_vertices.is_null()) {
            return Err(null("weights or out_vertices"));
        }
        let dense = if n == 0 {
            Vec::new()
        } else {
            let mut d = std::slice::from_raw_parts(weights, n * n).to_vec();
            (0..n).for_each(|i| d[i * n + i] = 0.0);
            d
        };
        let w = SymMatrix::from_dense(n, dense, 1e-9)?;
        let inst = GoqcInstance::with_constant_alpha(w, alpha)?;
        let cfg = config
            .as_ref()
            .map_or_else(SolverConfig::default, SolverConfig::from);
        let (vertices, value, _) = solve(&inst, &cfg)?;
        if !vertices.is_empty() {
            ptr::copy_nonoverlapping(vertices.as_ptr(), out_vertices, vertices.len());
        }
        *out_len = vertices.len();
        *out_value = value;
        Ok(())
    })
}

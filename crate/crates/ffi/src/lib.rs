//! C ABI over the commgraph library.
//!
//! Every fallible call returns a [`CgStatus`]; on failure a message is kept
//! for the calling thread and can be read with [`cg_last_error`]. Strings
//! handed out by the library must be released with [`cg_string_free`], and
//! each handle with its own `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use commgraph::io::{export_dot, to_json_text, AnalysisDoc, GraphDoc, GroupInfo, LatticeCacheFile};
use commgraph::verify::{self, Suite, VerifyOptions};
use commgraph::{construct, enumerate_subgroups, CommGraph, Error, GraphAnalysis, GraphKind, GroupSpec, GroupTable, Lattice};

/// Status codes; the first five match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    VerdictFail = 1,
    Parse = 2,
    OrderCap = 3,
    LatticeCap = 4,
    InvalidArgument = 5,
    NullPointer = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgGraphKind {
    Commensurability = 0,
    Containment = 1,
}

/// A constructed group.
pub struct CgGroup {
    spec: GroupSpec,
    table: Arc<GroupTable>,
}

/// The complete subgroup lattice of a group.
pub struct CgLattice {
    spec: GroupSpec,
    lattice: Arc<Lattice>,
}

/// A graph on a lattice together with its component analysis.
pub struct CgGraph {
    spec: GroupSpec,
    graph: CommGraph,
    analysis: GraphAnalysis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CgStatus {
    match e {
        Error::OrderCapExceeded { .. } => CgStatus::OrderCap,
        Error::LatticeCapExceeded { .. } => CgStatus::LatticeCap,
        Error::Syntax { .. } | Error::InvalidSpec(_) | Error::InvalidCache(_) => CgStatus::Parse,
        Error::Io(_) => CgStatus::Io,
        _ => CgStatus::InvalidArgument,
    }
}

struct Fail(CgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(CgStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<CgStatus, Fail>) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(CgStatus::Parse, "argument is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<CgStatus, Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(CgStatus::Ok)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<CgStatus, Fail> {
    let c = CString::new(s).map_err(|_| Fail(CgStatus::InvalidArgument, "output contains a nul byte".into()))?;
    put(out, c.into_raw())
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from a spec document such as `{"sym":4}`.
///
/// # Safety
/// `spec_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_group_new(spec_json: *const c_char, order_cap: usize, out: *mut *mut CgGroup) -> CgStatus {
    guard(|| {
        let spec = GroupSpec::parse(str_arg(spec_json)?)?;
        let table = Arc::new(construct(&spec, order_cap)?);
        put(out, Box::into_raw(Box::new(CgGroup { spec, table })))
    })
}

/// # Safety
/// `g` must be null or a live handle from [`cg_group_new`].
#[no_mangle]
pub unsafe extern "C" fn cg_group_free(g: *mut CgGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Group order, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn cg_group_order(g: *const CgGroup) -> usize {
    g.as_ref().map_or(0, |g| g.table.order())
}

/// Order, factorization, structure flags and derived-series orders as JSON.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_group_info_json(g: *const CgGroup, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        put_string(out, to_json_text(&GroupInfo::new(&g.spec, &g.table)))
    })
}

/// Label of element `id`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_group_element_label(g: *const CgGroup, id: u32, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        g.table.check_id(id)?;
        put_string(out, g.table.label(id).to_string())
    })
}

/// Enumerates every subgroup of `g`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_new(g: *const CgGroup, lattice_cap: usize, out: *mut *mut CgLattice) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        let lattice = Arc::new(enumerate_subgroups(&g.table, lattice_cap)?);
        put(out, Box::into_raw(Box::new(CgLattice { spec: g.spec.clone(), lattice })))
    })
}

/// Restores a lattice from cache-file text, validating it against `g`.
///
/// # Safety
/// `g` must be a live group handle; `cache_json` a nul-terminated string;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_from_cache(g: *const CgGroup, cache_json: *const c_char, out: *mut *mut CgLattice) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        let file = LatticeCacheFile::parse(str_arg(cache_json)?)?;
        if file.spec != g.spec {
            return Err(Fail(CgStatus::Parse, format!("cache holds {} but the group is {}", file.spec, g.spec)));
        }
        let lattice = Arc::new(file.to_lattice(&g.table)?);
        put(out, Box::into_raw(Box::new(CgLattice { spec: g.spec.clone(), lattice })))
    })
}

/// # Safety
/// `l` must be null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_free(l: *mut CgLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Number of subgroups, or 0 for a null handle.
///
/// # Safety
/// `l` must be null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_len(l: *const CgLattice) -> usize {
    l.as_ref().map_or(0, |l| l.lattice.len())
}

/// Order of subgroup `index` in canonical order.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_subgroup_order(l: *const CgLattice, index: usize, out: *mut usize) -> CgStatus {
    guard(|| {
        let l = handle(l)?;
        if index >= l.lattice.len() {
            return Err(Fail(CgStatus::InvalidArgument, format!("subgroup index {index} out of range")));
        }
        put(out, l.lattice.get(index).order())
    })
}

/// The lattice in cache-file form.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_cache_json(l: *const CgLattice, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let l = handle(l)?;
        put_string(out, LatticeCacheFile::from_lattice(&l.spec, &l.lattice).to_json())
    })
}

/// Builds the p-local graph of the given kind (a [`CgGraphKind`] value) and
/// analyses its components.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_new(l: *const CgLattice, p: u64, kind: u32, out: *mut *mut CgGraph) -> CgStatus {
    guard(|| {
        let l = handle(l)?;
        let kind = match kind {
            k if k == CgGraphKind::Commensurability as u32 => GraphKind::Commensurability,
            k if k == CgGraphKind::Containment as u32 => GraphKind::Containment,
            k => return Err(Fail(CgStatus::InvalidArgument, format!("unknown graph kind {k}"))),
        };
        let graph = CommGraph::build(&l.lattice, p, kind)?;
        let analysis = graph.analyze();
        put(out, Box::into_raw(Box::new(CgGraph { spec: l.spec.clone(), graph, analysis })))
    })
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_free(g: *mut CgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_vertex_count(g: *const CgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_edge_count(g: *const CgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.edges().len())
}

/// Edge `index` as vertex ids `i < j` with index exponents `a`, `b`.
///
/// # Safety
/// `g` must be a live graph handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_edge(
    g: *const CgGraph,
    index: usize,
    i: *mut usize,
    j: *mut usize,
    a: *mut u32,
    b: *mut u32,
) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        let e = g
            .graph
            .edges()
            .get(index)
            .ok_or_else(|| Fail(CgStatus::InvalidArgument, format!("edge index {index} out of range")))?;
        if i.is_null() || j.is_null() || a.is_null() || b.is_null() {
            return Err(null());
        }
        i.write(e.i);
        j.write(e.j);
        a.write(e.a);
        b.write(e.b);
        Ok(CgStatus::Ok)
    })
}

/// Largest diameter over all components.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_connected_diameter(g: *const CgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.analysis.connected_diameter)
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_component_count(g: *const CgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.analysis.components.len())
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_dot(g: *const CgGraph, out: *mut *mut c_char) -> CgStatus {
    guard(|| put_string(out, export_dot(&handle(g)?.graph)))
}

/// Vertices, edges and components as JSON.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_json(g: *const CgGraph, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        put_string(out, to_json_text(&GraphDoc::new(&g.spec, &g.graph, &g.analysis)))
    })
}

/// Components with classes and diameters as JSON.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_analysis_json(g: *const CgGraph, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let g = handle(g)?;
        put_string(out, to_json_text(&AnalysisDoc::new(&g.spec, &g.graph, &g.analysis)))
    })
}

/// Runs a verification suite over the default corpus and returns the report
/// (a JSON array for `all`) without timings. Returns `VerdictFail` with the
/// report still written when any check fails.
///
/// # Safety
/// `suite` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_verify(suite: *const c_char, trials: usize, seed: u64, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let suite: Suite = str_arg(suite)?.parse()?;
        let opts = VerifyOptions {
            trials,
            seed,
            ..VerifyOptions::default()
        };
        let reports: Vec<_> = verify::run(suite, &opts)?.into_iter().map(|r| r.without_timing()).collect();
        let pass = reports.iter().all(|r| r.pass);
        let text = if suite == Suite::All {
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        } else {
            reports[0].to_json()
        };
        put_string(out, text)?;
        Ok(if pass { CgStatus::Ok } else { CgStatus::VerdictFail })
    })
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

//! C ABI over `regcount`.
//!
//! Every fallible call returns an [`RcStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! can be fetched with [`rc_last_error_message`]. Handles are opaque and
//! must be released with their matching `*_free` function; strings handed
//! out by the library are released with [`rc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use regcount::count::{count_polynomial, CountKind, CountPolynomial};
use regcount::generator::{canonical_form, for_each_graph, GenSpec};
use regcount::graph::{build_dk, build_kdd, parse_graphs};
use regcount::report::{run_to, Command, Format, GraphSource, RunConfig};
use regcount::{Error, Graph};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGraph = 4,
    Divisibility = 5,
    Parity = 6,
    OutOfRange = 7,
    Scale = 8,
    TooLarge = 9,
    Domain = 10,
    Structure = 11,
    Io = 12,
    Panic = 13,
}

impl From<&Error> for RcStatus {
    fn from(e: &Error) -> RcStatus {
        match e {
            Error::EndpointOutOfRange { .. } | Error::DuplicateEdge(..) | Error::LoopNotAllowed(_) | Error::HasLoops => {
                RcStatus::InvalidGraph
            }
            Error::Divisibility { .. } => RcStatus::Divisibility,
            Error::Parity { .. } => RcStatus::Parity,
            Error::OutOfRange { .. } => RcStatus::OutOfRange,
            Error::Scale(_) => RcStatus::Scale,
            Error::TooLarge(_) => RcStatus::TooLarge,
            Error::Domain(_) | Error::Degenerate(_) => RcStatus::Domain,
            Error::NotRegular | Error::Edgeless | Error::NoPerfectMatching | Error::NotBipartite => RcStatus::Structure,
            Error::Parse { .. } => RcStatus::Parse,
            Error::Io(_) => RcStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcKind {
    Matching = 0,
    IndependentSet = 1,
}

impl From<RcKind> for CountKind {
    fn from(k: RcKind) -> CountKind {
        match k {
            RcKind::Matching => CountKind::Matching,
            RcKind::IndependentSet => CountKind::IndependentSet,
        }
    }
}

/// Verification commands run over every d-regular graph on n vertices.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcCheck {
    Umc = 0,
    Kahn = 1,
    Suite = 2,
    Roots = 3,
    Hom = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcFormat {
    Json = 0,
    Csv = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RcSummary {
    pub records: usize,
    pub failed: usize,
}

pub struct RcGraph(Graph);

pub struct RcPoly(CountPolynomial);

pub struct RcGraphList(Vec<Graph>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure(RcStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RcStatus {
    let (status, message) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (RcStatus::Ok, None),
        Ok(Err(Failure(s, m))) => (s, Some(m)),
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (RcStatus::Panic, Some(m))
        }
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = message.map(|m| CString::new(m.replace('\0', " ")).unwrap()));
    status
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(RcStatus::InvalidUtf8, "interior nul".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(RcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(null("out"))
    } else {
        Ok(())
    }
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a
/// success. The caller frees it with [`rc_string_free`].
#[no_mangle]
pub extern "C" fn rc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a simple graph from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be NULL
/// when `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_new(
    vertex_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut RcGraph,
) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let g = Graph::new(vertex_count, flat.chunks_exact(2).map(|e| (e[0], e[1])), false)?;
        put(out, RcGraph(g));
        Ok(())
    })
}

/// Parses one graph in the `n m loops` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_parse(text: *const c_char, out: *mut *mut RcGraph) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let g = Graph::from_text(read_str(text, "text")?)?;
        put(out, RcGraph(g));
        Ok(())
    })
}

/// K_{d,d}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_kdd(d: usize, out: *mut *mut RcGraph) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put(out, RcGraph(build_kdd(d)?));
        Ok(())
    })
}

/// n/2d disjoint copies of K_{d,d}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_dk(n: usize, d: usize, out: *mut *mut RcGraph) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put(out, RcGraph(build_dk(n, d)?));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_vertex_count(g: *const RcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_edge_count(g: *const RcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_to_text(g: *const RcGraph, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, borrow(g, "graph")?.0.to_text())
    })
}

/// Isomorphism-invariant label, `n:bits`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_canonical_label(g: *const RcGraph, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let label = canonical_form(&borrow(g, "graph")?.0)?;
        put_string(out, label.to_string())
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_free(g: *mut RcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Exact matching or independence polynomial of `g`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_count_polynomial(g: *const RcGraph, kind: RcKind, out: *mut *mut RcPoly) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let p = count_polynomial(&borrow(g, "graph")?.0, kind.into())?;
        put(out, RcPoly(p));
        Ok(())
    })
}

/// Number of coefficients, one more than the degree.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_poly_len(p: *const RcPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.coefficients().len())
}

/// Coefficient `k` as a decimal string; zero past the degree.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_poly_coefficient(p: *const RcPoly, k: usize, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, borrow(p, "poly")?.0.coefficient(k).to_string())
    })
}

/// Coefficient `k` as an integer; `RC_STATUS_TOO_LARGE` if it overflows.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_poly_coefficient_u64(p: *const RcPoly, k: usize, out: *mut u64) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let c = borrow(p, "poly")?.0.coefficient(k);
        *out = u64::try_from(&c).map_err(|_| Failure(RcStatus::TooLarge, format!("{c} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Coefficients as a JSON array of decimal strings.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_poly_to_json(p: *const RcPoly, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, borrow(p, "poly")?.0.to_json())
    })
}

/// # Safety
/// `p` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_poly_free(p: *mut RcPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// All d-regular graphs on n vertices up to isomorphism.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_generate(n: usize, d: usize, bipartite_only: bool, out: *mut *mut RcGraphList) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let mut graphs = Vec::new();
        for_each_graph(&GenSpec::new(n, d).bipartite_only(bipartite_only), |g| graphs.push(g))?;
        put(out, RcGraphList(graphs));
        Ok(())
    })
}

/// Parses graphs separated by `---` lines.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_list_parse(text: *const c_char, out: *mut *mut RcGraphList) -> RcStatus {
    guard(|| {
        check_out(out)?;
        put(out, RcGraphList(parse_graphs(read_str(text, "text")?)?));
        Ok(())
    })
}

/// # Safety
/// `list` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_list_len(list: *const RcGraphList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// Copies graph `i` into a new handle owned by the caller.
///
/// # Safety
/// `list` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_list_get(list: *const RcGraphList, i: usize, out: *mut *mut RcGraph) -> RcStatus {
    guard(|| {
        check_out(out)?;
        let l = borrow(list, "list")?;
        let g = l.0.get(i).ok_or_else(|| {
            Failure(RcStatus::OutOfRange, format!("index {i} out of range for {} graphs", l.0.len()))
        })?;
        put(out, RcGraph(g.clone()));
        Ok(())
    })
}

/// # Safety
/// `list` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_graph_list_free(list: *mut RcGraphList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

fn run_report(config: RunConfig, out: *mut *mut c_char, summary: *mut RcSummary) -> Result<(), Failure> {
    let mut buf = Vec::new();
    let outcome = run_to(&config, &mut buf)?;
    // SAFETY: the caller contract makes each pointer null or writable.
    unsafe {
        if !summary.is_null() {
            *summary = RcSummary { records: outcome.records, failed: outcome.failed };
        }
        if !out.is_null() {
            put_string(out, String::from_utf8(buf).map_err(|_| Failure(RcStatus::InvalidUtf8, "report".into()))?)?;
        }
    }
    Ok(())
}

fn format(f: RcFormat) -> Format {
    match f {
        RcFormat::Json => Format::Json,
        RcFormat::Csv => Format::Csv,
    }
}

/// Runs a verification command over the (n, d) corpus with default grids.
/// `report` receives the full report when non-NULL; `summary` receives the
/// record and failure counts when non-NULL.
///
/// # Safety
/// `report` and `summary` must each be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rc_verify(
    check: RcCheck,
    n: usize,
    d: usize,
    fmt: RcFormat,
    report: *mut *mut c_char,
    summary: *mut RcSummary,
) -> RcStatus {
    guard(|| {
        let source = GraphSource::Generated { n, d };
        let command = match check {
            RcCheck::Umc => Command::VerifyUmc { n, d },
            RcCheck::Kahn => Command::VerifyKahn { n, d },
            RcCheck::Suite => Command::VerifySuite { source },
            RcCheck::Roots => Command::VerifyRoots { source },
            RcCheck::Hom => Command::VerifyHom { source },
        };
        let mut config = RunConfig::new(command);
        config.format = format(fmt);
        run_report(config, report, summary)
    })
}

/// Every bound formula at (n, d). Pass `SIZE_MAX` as `size` for all sizes.
///
/// # Safety
/// `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_bounds_report(n: usize, d: usize, size: usize, fmt: RcFormat, report: *mut *mut c_char) -> RcStatus {
    guard(|| {
        check_out(report)?;
        let size = (size != usize::MAX).then_some(size);
        let mut config = RunConfig::new(Command::Bounds { n, d, size });
        config.format = format(fmt);
        run_report(config, report, ptr::null_mut())
    })
}

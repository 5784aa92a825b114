//! C ABI over the `ctqw` library.
//!
//! Graphs and sweep results cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns a [`CtqwStatus`]; on failure, [`ctqw_last_error`] describes the
//! most recent error on the calling thread. Node labels and edge indices
//! are 1-based, as in the edge-list format. Caller-provided output buffers
//! are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ctqw::datasets::{self, GeneratorParams};
use ctqw::experiments;
use ctqw::spectral::exact_time_average;
use ctqw::walk::{average_populations, Walk};
use ctqw::{Error, Generator, Graph, InitialState, WalkConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtqwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Io = 4,
    Parse = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtqwGenerator {
    /// exp(-iAt)
    Adjacency = 0,
    /// exp(+iLt)
    Laplacian = 1,
}

/// Walk parameters. `initial_node` is a 1-based node for a localized
/// start, or 0 for the uniform superposition.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CtqwWalkConfig {
    pub generator: CtqwGenerator,
    pub total_time: f64,
    pub dt: f64,
    pub initial_node: usize,
}

/// Opaque graph handle.
pub struct CtqwGraph {
    inner: Graph,
}

/// Opaque edge-removal sweep handle.
pub struct CtqwSweep {
    inner: experiments::SweepResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CtqwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::SelfLoop(_) | Error::DuplicateEdge(..) | Error::TooFewNodes { .. } | Error::NoEdges => {
                CtqwStatus::InvalidGraph
            }
            Error::NodeOutOfRange { .. }
            | Error::EdgeIndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidParams(_)
            | Error::MissingLabels => CtqwStatus::InvalidArgument,
            Error::Asymmetric { .. } | Error::NoConvergence { .. } => CtqwStatus::Numerical,
            Error::Parse { .. } => CtqwStatus::Parse,
            Error::Io { .. } => CtqwStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard<F>(f: F) -> CtqwStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CtqwStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CtqwStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CtqwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_buffer<'a, T>(p: *mut T, len: usize, needed: usize) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(null("output buffer"));
    }
    if len < needed {
        return Err(Failure(
            CtqwStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {needed} required"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn walk_config(cfg: &CtqwWalkConfig) -> Result<WalkConfig, Failure> {
    let cfg = WalkConfig {
        generator: generator(cfg.generator),
        total_time: cfg.total_time,
        dt: cfg.dt,
        initial: initial_state(cfg.initial_node),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn generator(g: CtqwGenerator) -> Generator {
    match g {
        CtqwGenerator::Adjacency => Generator::Adjacency,
        CtqwGenerator::Laplacian => Generator::Laplacian,
    }
}

fn initial_state(node: usize) -> InitialState {
    if node == 0 {
        InitialState::Uniform
    } else {
        InitialState::Localized(node)
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ctqw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library from the
/// same thread.
#[no_mangle]
pub extern "C" fn ctqw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Adjacency walk from the uniform state, T = 100π, dt = T/1000.
#[no_mangle]
pub extern "C" fn ctqw_walk_config_default() -> CtqwWalkConfig {
    let d = WalkConfig::default();
    CtqwWalkConfig {
        generator: CtqwGenerator::Adjacency,
        total_time: d.total_time,
        dt: d.dt,
        initial_node: 0,
    }
}

/// Builds a graph from `n_pairs` 1-based pairs stored as
/// `pairs[2k], pairs[2k+1]`. `n_nodes == 0` infers the node count from the
/// largest label.
///
/// # Safety
/// `pairs` must point to `2 * n_pairs` readable values (it may be null when
/// `n_pairs == 0`); `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_from_edges(
    pairs: *const usize,
    n_pairs: usize,
    n_nodes: usize,
    out: *mut *mut CtqwGraph,
) -> CtqwStatus {
    guard(|| {
        let flat: &[usize] = if n_pairs == 0 {
            &[]
        } else if pairs.is_null() {
            return Err(null("pairs"));
        } else {
            std::slice::from_raw_parts(pairs, 2 * n_pairs)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let n = (n_nodes > 0).then_some(n_nodes);
        let graph = Graph::from_edge_list(&pairs, n)?;
        put_handle(out, CtqwGraph { inner: graph })
    })
}

/// Zachary's karate club (34 nodes, 78 edges).
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_karate(out: *mut *mut CtqwGraph) -> CtqwStatus {
    guard(|| put_handle(out, CtqwGraph { inner: datasets::karate_club().graph }))
}

/// Faction of each karate-club member: 0 with node 1, 1 with node 34.
///
/// # Safety
/// `labels` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_karate_labels(labels: *mut usize, len: usize) -> CtqwStatus {
    guard(|| {
        let src = datasets::karate_club().labels.unwrap_or_default();
        out_buffer(labels, len, src.len())?.copy_from_slice(&src);
        Ok(())
    })
}

/// Loads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_load(path: *const c_char, out: *mut *mut CtqwGraph) -> CtqwStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(CtqwStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let net = datasets::load_edge_list(path)?;
        put_handle(out, CtqwGraph { inner: net.graph })
    })
}

/// Planted-partition graph; community ids are written to `labels` when it
/// is non-null (`communities * size` values).
///
/// # Safety
/// `out` must be a valid handle slot; `labels`, if non-null, must point to
/// `labels_len` writable values. `connected`, if non-null, receives whether
/// the returned draw is connected.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_planted_partition(
    communities: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
    labels: *mut usize,
    labels_len: usize,
    connected: *mut bool,
    out: *mut *mut CtqwGraph,
) -> CtqwStatus {
    guard(|| {
        let generated = datasets::planted_partition(&GeneratorParams {
            communities,
            size,
            p_in,
            p_out,
            seed,
        })?;
        if out.is_null() {
            return Err(null("output handle"));
        }
        if !labels.is_null() {
            let src = generated.network.labels.as_deref().unwrap_or_default();
            out_buffer(labels, labels_len, src.len())?.copy_from_slice(src);
        }
        if !connected.is_null() {
            *connected = generated.connected;
        }
        put_handle(out, CtqwGraph { inner: generated.network.graph })
    })
}

/// # Safety
/// `graph` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_free(graph: *mut CtqwGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_node_count(graph: *const CtqwGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.node_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_edge_count(graph: *const CtqwGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Endpoints of 1-based edge `k`.
///
/// # Safety
/// `graph` must be a live handle; `u` and `v` valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_edge(
    graph: *const CtqwGraph,
    k: usize,
    u: *mut usize,
    v: *mut usize,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        if u.is_null() || v.is_null() {
            return Err(null("endpoint output"));
        }
        let (a, b) = g.inner.edge(k)?;
        *u = a;
        *v = b;
        Ok(())
    })
}

/// New graph without 1-based edge `k`; the input handle is unchanged.
///
/// # Safety
/// `graph` must be a live handle; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_remove_edge(
    graph: *const CtqwGraph,
    k: usize,
    out: *mut *mut CtqwGraph,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        let h = g.inner.remove_edge(k)?;
        put_handle(out, CtqwGraph { inner: h })
    })
}

/// # Safety
/// `graph` must be a live handle; `connected` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ctqw_graph_is_connected(graph: *const CtqwGraph, connected: *mut bool) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        if connected.is_null() {
            return Err(null("connected"));
        }
        *connected = g.inner.is_connected();
        Ok(())
    })
}

/// Time-averaged populations (trapezoid over `0, dt, …, T`) into `out`
/// (`node_count` values).
///
/// # Safety
/// `graph` and `config` must be valid; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_average_populations(
    graph: *const CtqwGraph,
    config: *const CtqwWalkConfig,
    out: *mut f64,
    len: usize,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        let cfg = walk_config(borrow(config, "config")?)?;
        let p = average_populations(&g.inner, &cfg)?;
        out_buffer(out, len, p.len())?.copy_from_slice(p.as_slice());
        Ok(())
    })
}

/// Infinite-time populations from the spectrum, with degenerate levels
/// grouped.
///
/// # Safety
/// `graph` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_exact_time_average(
    graph: *const CtqwGraph,
    generator_kind: CtqwGenerator,
    initial_node: usize,
    out: *mut f64,
    len: usize,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        let walk = Walk::new(&g.inner, generator(generator_kind), initial_state(initial_node))?;
        let p = exact_time_average(walk.decomposition(), walk.initial_state())?;
        out_buffer(out, len, p.len())?.copy_from_slice(p.as_slice());
        Ok(())
    })
}

/// Degree centralities and populations into two `node_count` buffers.
/// `rho` receives the Spearman rank correlation, or NaN when undefined.
///
/// # Safety
/// `graph`, `config` and `rho` must be valid; buffers must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_centrality_report(
    graph: *const CtqwGraph,
    config: *const CtqwWalkConfig,
    centrality: *mut f64,
    population: *mut f64,
    len: usize,
    rho: *mut f64,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        let cfg = walk_config(borrow(config, "config")?)?;
        if rho.is_null() {
            return Err(null("rho"));
        }
        let report = experiments::centrality_population_report(&g.inner, &cfg)?;
        let n = report.rows.len();
        let c = out_buffer(centrality, len, n)?;
        let p = out_buffer(population, len, n)?;
        for (i, row) in report.rows.iter().enumerate() {
            c[i] = row.centrality;
            p[i] = row.population;
        }
        *rho = report.spearman_rho.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Runs the single-edge-removal sweep on `jobs` workers (0 uses the
/// default pool). Results do not depend on `jobs`.
///
/// # Safety
/// `graph` and `config` must be valid; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_run(
    graph: *const CtqwGraph,
    config: *const CtqwWalkConfig,
    jobs: usize,
    out: *mut *mut CtqwSweep,
) -> CtqwStatus {
    guard(|| {
        let g = borrow(graph, "graph")?;
        let cfg = walk_config(borrow(config, "config")?)?;
        if out.is_null() {
            return Err(null("output handle"));
        }
        let result = if jobs == 0 {
            experiments::edge_removal_sweep(&g.inner, &cfg)?
        } else {
            experiments::edge_removal_sweep_with_jobs(&g.inner, &cfg, jobs)?
        };
        put_handle(out, CtqwSweep { inner: result })
    })
}

/// # Safety
/// `sweep` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_free(sweep: *mut CtqwSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_node_count(sweep: *const CtqwSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.node_count())
}

/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_edge_count(sweep: *const CtqwSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.edge_count())
}

/// Baseline populations (`node_count` values).
///
/// # Safety
/// `sweep` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_baseline(sweep: *const CtqwSweep, out: *mut f64, len: usize) -> CtqwStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        out_buffer(out, len, s.inner.node_count())?.copy_from_slice(s.inner.baseline.as_slice());
        Ok(())
    })
}

/// Population changes, row-major `edge_count × node_count`.
///
/// # Safety
/// `sweep` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_deltas(sweep: *const CtqwSweep, out: *mut f64, len: usize) -> CtqwStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        let n = s.inner.node_count();
        let buf = out_buffer(out, len, n * s.inner.edge_count())?;
        for (dst, r) in buf.chunks_exact_mut(n.max(1)).zip(&s.inner.per_edge) {
            dst.copy_from_slice(&r.deltas);
        }
        Ok(())
    })
}

/// Flow signs (+1 / −1), row-major `edge_count × node_count`.
///
/// # Safety
/// `sweep` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_flow_signs(sweep: *const CtqwSweep, out: *mut i8, len: usize) -> CtqwStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        let n = s.inner.node_count();
        let buf = out_buffer(out, len, n * s.inner.edge_count())?;
        for (dst, row) in buf.chunks_exact_mut(n.max(1)).zip(&s.inner.flow_signs) {
            dst.copy_from_slice(row);
        }
        Ok(())
    })
}

/// Node affinity, row-major `node_count × node_count`.
///
/// # Safety
/// `sweep` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ctqw_sweep_affinity(sweep: *const CtqwSweep, out: *mut f64, len: usize) -> CtqwStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        let alpha = experiments::affinity(&s.inner);
        let n = alpha.node_count();
        out_buffer(out, len, n * n)?.copy_from_slice(alpha.matrix().as_slice());
        Ok(())
    })
}

//! Level-by-level search for tropical crossing numbers.
//!
//! Level `c` sweeps every nodal subdivision with `c` parallelograms of every
//! maximal non-hyperelliptic polygon of genus `g + c`. Skeletons are matched
//! by canonical key, and only matches are tested for regularity.

mod audit;
mod classify;
mod stitch;

pub use audit::{audit_sweep, hyperelliptic_chain_audit, parity_violations, AuditReport};
pub use classify::{troplanar_classify, ClassEntry, Verdict};
pub use stitch::{block_polygon, find_blocks, stitch_construction, BlockKind, StitchBlocks, StitchReport};

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::cached_triangulations;
use crate::dual::{dualize_nodal, skeleton_of, skeletonize, SkeletonResult};
use crate::error::{Error, Result};
use crate::graph::{canonical_key, is_chain, tcn_lower_bound, CanonicalKey, Multigraph};
use crate::lattice::{enumerate_maximal_nonhyperelliptic, LatticePoint, LatticePolygon};
use crate::regularity::{check_regular, HeightCertificate, Regularity};
use crate::subdivision::{
    for_each_nodal_in, for_each_triangulation, EnumerationBudget, Mesh, NodalView, PointSet, Subdivision,
    SweepControl,
};

/// Sweep settings shared by the driver entry points.
#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Stop a level after this many nodal subdivisions.
    pub max_subdivisions: Option<u64>,
    /// Read triangulations through the flip-BFS log in this directory.
    pub cache: Option<PathBuf>,
    /// Record finished polygons here and skip them when rerun.
    pub checkpoint: Option<PathBuf>,
}

/// Counters for one polygon of a level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonStats {
    pub polygon: Vec<LatticePoint>,
    pub triangulations: u64,
    pub subdivisions: u64,
    pub completed: bool,
}

pub(crate) struct LevelOutcome {
    pub stats: Vec<PolygonStats>,
    /// Index of the first polygon whose visitor asked to stop.
    pub stopped_at: Option<usize>,
    pub budget_hit: bool,
}

/// Runs `visit` on every `c`-node subdivision of each polygon, polygons in
/// parallel. A `Stop` from polygon `i` cancels polygons after `i` but lets
/// earlier ones finish, so the first hit is the same for any thread count.
pub(crate) fn sweep_level<F>(polygons: &[LatticePolygon], c: usize, opts: &SweepOptions, visit: F) -> Result<LevelOutcome>
where
    F: Fn(usize, &NodalView) -> SweepControl + Sync,
{
    let first_stop = AtomicUsize::new(usize::MAX);
    let seen = AtomicU64::new(0);
    let over = AtomicBool::new(false);
    let stats = polygons
        .par_iter()
        .enumerate()
        .map(|(i, p)| -> Result<PolygonStats> {
            let mut st = PolygonStats { polygon: p.vertices().to_vec(), ..Default::default() };
            let mut stopped = false;
            let mut on_mesh = |mesh: &Mesh| {
                st.triangulations += 1;
                if first_stop.load(Ordering::Relaxed) < i || over.load(Ordering::Relaxed) {
                    stopped = true;
                    return SweepControl::Stop;
                }
                let ctl = for_each_nodal_in(mesh, c, &mut |v| {
                    st.subdivisions += 1;
                    let n = seen.fetch_add(1, Ordering::Relaxed) + 1;
                    if opts.max_subdivisions.is_some_and(|m| n > m) {
                        over.store(true, Ordering::Relaxed);
                        return SweepControl::Stop;
                    }
                    visit(i, v)
                });
                if ctl == SweepControl::Stop {
                    stopped = true;
                    if !over.load(Ordering::Relaxed) {
                        first_stop.fetch_min(i, Ordering::Relaxed);
                    }
                }
                ctl
            };
            match &opts.cache {
                Some(dir) => {
                    let ps = PointSet::new(p)?;
                    for t in cached_triangulations(p, &EnumerationBudget::unlimited(), dir)? {
                        if on_mesh(&Mesh::from_subdivision(ps.clone(), &t)?) == SweepControl::Stop {
                            break;
                        }
                    }
                }
                None => {
                    for_each_triangulation(p, on_mesh)?;
                }
            }
            st.completed = !stopped;
            Ok(st)
        })
        .collect::<Result<Vec<_>>>()?;
    let stop = first_stop.load(Ordering::Relaxed);
    Ok(LevelOutcome { stats, stopped_at: (stop != usize::MAX).then_some(stop), budget_hit: over.load(Ordering::Relaxed) })
}

/// A subdivision whose dual curve skeletonizes to the query graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub subdivision: Subdivision,
    pub heights: HeightCertificate,
    pub skeleton: Multigraph,
}

/// Re-checks a witness from scratch: structure, heights, skeleton through
/// the subdivision path, isomorphism and node count.
pub fn verify_witness(g: &Multigraph, w: &Witness, nodes: usize) -> Result<()> {
    let s = &w.subdivision;
    s.validate()?;
    w.heights.verify(s)?;
    if s.node_count() != nodes {
        return Err(Error::AuditViolation(format!("witness has {} nodes, expected {nodes}", s.node_count())));
    }
    let sk = skeleton_of(s)?;
    let Some(h) = sk.result.connected() else {
        return Err(Error::AuditViolation("witness skeleton is not connected".into()));
    };
    if canonical_key(h)? != canonical_key(g)? || canonical_key(&w.skeleton)? != canonical_key(g)? {
        return Err(Error::AuditViolation("witness skeleton is not isomorphic to the graph".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelStatus {
    /// Every subdivision was visited without a regular match.
    Exhausted,
    Matched,
    BudgetLimited,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub c: usize,
    pub polygon_genus: usize,
    pub polygons: usize,
    /// Polygons skipped because a checkpoint recorded them as exhausted.
    pub resumed_polygons: usize,
    pub triangulations: u64,
    pub subdivisions: u64,
    /// Skeletons with the query's key that came from non-regular subdivisions.
    pub nonregular_matches: u64,
    pub disconnected: u64,
    pub status: LevelStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tcn {
    Exact(usize),
    /// Levels `0..=c` were exhausted (`None` if not even level 0 was).
    Unresolved { exhausted_through: Option<usize> },
}

#[derive(Clone, Debug)]
pub struct TcnResult {
    pub graph_key: CanonicalKey,
    pub genus: usize,
    pub tcn: Tcn,
    pub witness: Option<Witness>,
    pub levels: Vec<LevelReport>,
    pub lower_bound: BigRational,
    pub notes: Vec<String>,
}

/// Shape check shared by the entry points taking a query graph.
pub(crate) fn check_query(g: &Multigraph) -> Result<usize> {
    if !g.is_connected() || !g.is_trivalent() {
        return Err(Error::InvalidGraph("expected a connected trivalent multigraph".into()));
    }
    let genus = g.genus();
    if genus < 2 {
        return Err(Error::InvalidGraph(format!("genus {genus} is below 2")));
    }
    Ok(genus as usize)
}

#[derive(Serialize, Deserialize)]
struct CheckpointLine {
    graph: String,
    c: usize,
    #[serde(flatten)]
    stats: PolygonStats,
}

fn load_checkpoint(path: &PathBuf, key: &str, c: usize) -> Result<Vec<PolygonStats>> {
    let Ok(f) = File::open(path) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        // a torn last line from an interrupted run is ignored
        let Ok(rec) = serde_json::from_str::<CheckpointLine>(&line) else {
            continue;
        };
        if rec.graph == key && rec.c == c && rec.stats.completed {
            out.push(rec.stats);
        }
    }
    Ok(out)
}

/// Computes TCN(g) by sweeping levels `c = 0..=max_c`.
pub fn compute_tcn(g: &Multigraph, max_c: usize, opts: &SweepOptions) -> Result<TcnResult> {
    let genus = check_query(g)?;
    let key = canonical_key(g)?;
    let lower_bound = tcn_lower_bound(g)?;
    let mut result = TcnResult {
        graph_key: key.clone(),
        genus,
        tcn: Tcn::Unresolved { exhausted_through: None },
        witness: None,
        levels: Vec::new(),
        lower_bound,
        notes: Vec::new(),
    };
    if is_chain(g)? {
        result.tcn = Tcn::Exact(0);
        result.notes.push("chain: arises from triangulations of hyperelliptic polygons".into());
        return Ok(result);
    }
    result.notes.push("levels sweep maximal non-hyperelliptic polygons only".into());
    let loops = g.edges().iter().filter(|(u, v)| u == v).count();
    let key_hex = key.to_string();
    for c in 0..=max_c {
        let pg = genus + c;
        let all = enumerate_maximal_nonhyperelliptic(pg)?;
        let done = match &opts.checkpoint {
            Some(p) => load_checkpoint(p, &key_hex, c)?,
            None => Vec::new(),
        };
        let done_set: HashSet<&Vec<LatticePoint>> = done.iter().map(|s| &s.polygon).collect();
        let todo: Vec<LatticePolygon> = all.iter().filter(|p| !done_set.contains(&p.vertices().to_vec())).cloned().collect();

        let nonregular = AtomicU64::new(0);
        let disconnected = AtomicU64::new(0);
        let hits: Mutex<Vec<(usize, Witness)>> = Mutex::new(Vec::new());
        let outcome = sweep_level(&todo, c, opts, |i, v| {
            let sk = skeletonize(&dualize_nodal(v));
            let h = match sk.result {
                SkeletonResult::Connected(h) => h,
                SkeletonResult::Disconnected(_) => {
                    disconnected.fetch_add(1, Ordering::Relaxed);
                    return SweepControl::Continue;
                }
                SkeletonResult::Trivial(_) => return SweepControl::Continue,
            };
            if h.vertex_count() != g.vertex_count()
                || h.edges().iter().filter(|(u, v)| u == v).count() != loops
                || canonical_key(&h).ok().as_ref() != Some(&key)
            {
                return SweepControl::Continue;
            }
            let s = v.to_subdivision();
            match check_regular(&s) {
                Ok(Regularity::Regular(heights)) => {
                    hits.lock().unwrap().push((i, Witness { subdivision: s, heights, skeleton: h }));
                    SweepControl::Stop
                }
                _ => {
                    nonregular.fetch_add(1, Ordering::Relaxed);
                    SweepControl::Continue
                }
            }
        })?;
        if let Some(path) = &opts.checkpoint {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            for st in outcome.stats.iter().filter(|s| s.completed) {
                let line = CheckpointLine { graph: key_hex.clone(), c, stats: st.clone() };
                writeln!(f, "{}", serde_json::to_string(&line)?)?;
            }
        }
        let mut stats = outcome.stats;
        stats.extend(done.iter().cloned());
        let status = if outcome.stopped_at.is_some() {
            LevelStatus::Matched
        } else if outcome.budget_hit {
            LevelStatus::BudgetLimited
        } else {
            LevelStatus::Exhausted
        };
        result.levels.push(LevelReport {
            c,
            polygon_genus: pg,
            polygons: all.len(),
            resumed_polygons: done.len(),
            triangulations: stats.iter().map(|s| s.triangulations).sum(),
            subdivisions: stats.iter().map(|s| s.subdivisions).sum(),
            nonregular_matches: nonregular.into_inner(),
            disconnected: disconnected.into_inner(),
            status,
        });
        match status {
            LevelStatus::Matched => {
                let stop = outcome.stopped_at.unwrap();
                let mut hits = hits.into_inner().unwrap();
                hits.retain(|(i, _)| *i == stop);
                let w = hits.swap_remove(0).1;
                verify_witness(g, &w, c)?;
                result.tcn = Tcn::Exact(c);
                result.witness = Some(w);
                return Ok(result);
            }
            LevelStatus::BudgetLimited => return Ok(result),
            LevelStatus::Exhausted => result.tcn = Tcn::Unresolved { exhausted_through: Some(c) },
        }
    }
    Ok(result)
}

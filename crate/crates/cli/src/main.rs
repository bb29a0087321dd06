//! `tcnkit`: polygons, subdivisions, skeletons and crossing-number sweeps
//! from the command line. Results go to stdout as JSON; failures go to
//! stderr as `{"error": kind, "message": ...}` with a nonzero exit code.

mod render;

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use tcnkit::cache::cached_triangulations;
use tcnkit::driver::{
    audit_sweep, compute_tcn, find_blocks, hyperelliptic_chain_audit, stitch_construction, troplanar_classify,
    verify_witness, LevelStatus, StitchBlocks, SweepOptions, Tcn, Verdict, Witness,
};
use tcnkit::dual::{skeleton_of, SkeletonResult, TrivialKind};
use tcnkit::graph::{canonical_key, is_chain, is_crowded, is_planar, is_sprawling, tcn_lower_bound, treewidth_exact, Multigraph};
use tcnkit::lattice::{enumerate_maximal_nonhyperelliptic, hyperelliptic_polygon, LatticePoint, LatticePolygon};
use tcnkit::regularity::{check_regular, HeightCertificate, Regularity};
use tcnkit::subdivision::{enumerate_nodal_subdivisions, enumerate_unimodular_triangulations, EnumerationBudget, Subdivision};
use tcnkit::{fixtures, rational, Error, Result};

use render::{render_svg, RenderSpec};

#[derive(Parser)]
#[command(name = "tcnkit", version, about = "Tropical crossing numbers of trivalent graphs")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PolygonInput {
    /// Polygon JSON file (`-` for stdin).
    #[arg(long)]
    polygon: Option<PathBuf>,
    /// Vertices inline, e.g. "0,0 4,0 0,4".
    #[arg(long)]
    vertices: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Multigraph JSON file (`-` for stdin).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// A built-in graph.
    #[arg(long, value_enum)]
    named: Option<NamedGraph>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedGraph {
    Theta,
    Dumbbell,
    K4,
    K33,
    Lollipop,
    CrowdedGenus5,
}

#[derive(Args)]
struct SweepArgs {
    /// Directory for the triangulation cache.
    #[arg(long, env = "TCNKIT_CACHE")]
    cache: Option<PathBuf>,
    /// Give up a level after this many nodal subdivisions.
    #[arg(long)]
    max_subdivisions: Option<u64>,
}

impl SweepArgs {
    fn options(&self, checkpoint: Option<PathBuf>) -> SweepOptions {
        SweepOptions { max_subdivisions: self.max_subdivisions, cache: self.cache.clone(), checkpoint }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditLevel {
    /// Genus identity and two-crossing parity over a polygon catalog.
    Sweep,
    /// Chain property on the hyperelliptic polygon.
    Hyperelliptic,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal non-hyperelliptic polygons of a genus, in normal form.
    Polygons {
        #[arg(long)]
        genus: usize,
        /// Print the hyperelliptic rectangle of this genus instead.
        #[arg(long)]
        hyperelliptic: bool,
    },
    /// Unimodular triangulations of a polygon.
    Triangulate {
        #[command(flatten)]
        input: PolygonInput,
        #[arg(long)]
        regular_only: bool,
        /// Only report counts.
        #[arg(long, alias = "count-only")]
        count: bool,
        #[arg(long)]
        max_triangulations: Option<u64>,
        /// Limit on the flip-search frontier.
        #[arg(long)]
        max_queue: Option<usize>,
        #[arg(long, env = "TCNKIT_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Regular nodal subdivisions with a given number of parallelograms.
    Nodal {
        #[command(flatten)]
        input: PolygonInput,
        #[arg(long)]
        nodes: usize,
        #[arg(long, alias = "count-only")]
        count: bool,
        /// Limit on the number of candidate subdivisions.
        #[arg(long)]
        max_subdivisions: Option<u64>,
        #[arg(long)]
        max_queue: Option<usize>,
    },
    /// Regularity verdict with a height or Farkas certificate.
    CheckRegular {
        #[arg(long)]
        subdivision: PathBuf,
    },
    /// Skeleton of the dual curve of a subdivision.
    Skeleton {
        #[arg(long)]
        subdivision: PathBuf,
    },
    /// Structural report on a graph; with a subdivision, also verifies that
    /// it is a regular witness for the graph.
    Check {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long)]
        subdivision: Option<PathBuf>,
        /// Height certificate; computed when omitted.
        #[arg(long)]
        heights: Option<PathBuf>,
        /// Required number of parallelograms.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Tropical crossing number by sweeping levels c = 0, 1, ...
    Tcn {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long)]
        max_nodes: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        /// JSON-lines file of finished polygons; rerunning skips them.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Allow levels with two or more nodes, which can run for hours.
        #[arg(long)]
        deep: bool,
    },
    /// Troplanarity of every trivalent graph of a genus (3 to 5).
    Classify {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Invariant audits over whole sweeps.
    Audit {
        #[arg(long, value_enum)]
        level: AuditLevel,
        #[arg(long)]
        genus: usize,
        /// Nodes per subdivision (sweep) or maximum nodes (hyperelliptic).
        #[arg(long)]
        nodes: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Stacks 1-node blocks into a bridge path of non-planar and crowded blocks.
    Stitch {
        /// Number of non-planar blocks.
        #[arg(long, required_unless_present = "search")]
        d: Option<usize>,
        /// Total number of blocks.
        #[arg(long, required_unless_present = "search")]
        k: Option<usize>,
        /// Blocks JSON; the built-in pair is used when omitted.
        #[arg(long)]
        blocks: Option<PathBuf>,
        /// Search block polygons up to this height and print the first pair.
        #[arg(long, conflicts_with_all = ["d", "k", "blocks"])]
        search: Option<i64>,
    },
    /// SVG of a regular subdivision and its tropical curve.
    Render {
        #[arg(long)]
        subdivision: PathBuf,
        /// Height certificate; computed when omitted.
        #[arg(long)]
        heights: Option<PathBuf>,
        /// Pixels per lattice unit.
        #[arg(long, default_value_t = 40)]
        scale: u32,
        #[arg(long)]
        no_subdivision: bool,
        #[arg(long)]
        no_curve: bool,
        #[arg(long)]
        no_rays: bool,
        #[arg(long)]
        no_nodes: bool,
        #[arg(long)]
        no_skeleton: bool,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// A successful run: JSON for stdout and the exit code to finish with.
struct Outcome {
    value: Value,
    code: u8,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::AuditViolation(_) => 4,
        _ => 2,
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn parse_vertices(s: &str) -> Result<LatticePolygon> {
    let bad = || Error::InvalidArgument(format!("expected vertices like \"0,0 4,0 0,4\", got {s:?}"));
    let pts = s
        .split_whitespace()
        .map(|tok| {
            let (x, y) = tok.split_once(',').ok_or_else(bad)?;
            Ok(LatticePoint::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<_>>>()?;
    LatticePolygon::new(pts)
}

impl PolygonInput {
    fn load(&self) -> Result<LatticePolygon> {
        match (&self.polygon, &self.vertices) {
            (Some(p), _) => read_json(p),
            (_, Some(v)) => parse_vertices(v),
            _ => unreachable!("clap requires one polygon source"),
        }
    }
}

impl GraphInput {
    fn load(&self) -> Result<Multigraph> {
        match (&self.graph, self.named) {
            (Some(p), _) => read_json(p),
            (_, Some(n)) => Ok(match n {
                NamedGraph::Theta => fixtures::theta(),
                NamedGraph::Dumbbell => fixtures::dumbbell(),
                NamedGraph::K4 => fixtures::k4(),
                NamedGraph::K33 => fixtures::k33(),
                NamedGraph::Lollipop => fixtures::lollipop(),
                NamedGraph::CrowdedGenus5 => fixtures::crowded_genus5(),
            }),
            _ => unreachable!("clap requires one graph source"),
        }
    }
}

/// A subdivision document, optionally wrapped as `{"subdivision": ...,
/// "heights": ...}` the way witnesses are printed.
fn load_subdivision(path: &Path) -> Result<(Subdivision, Option<HeightCertificate>)> {
    let v: Value = serde_json::from_str(&read_text(path)?)?;
    match v.get("subdivision") {
        Some(inner) => {
            let s = serde_json::from_value(inner.clone())?;
            let h = v.get("heights").map(|h| serde_json::from_value(h.clone())).transpose()?;
            Ok((s, h))
        }
        None => Ok((serde_json::from_value(v)?, None)),
    }
}

fn heights_for(s: &Subdivision, given: Option<HeightCertificate>, file: Option<&PathBuf>) -> Result<HeightCertificate> {
    if let Some(f) = file {
        return read_json(f);
    }
    if let Some(h) = given {
        return Ok(h);
    }
    match check_regular(s)? {
        Regularity::Regular(h) => Ok(h),
        Regularity::NotRegular(_) => Err(Error::InvalidSubdivision("subdivision is not regular".into())),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn skeleton_json(s: &Subdivision) -> Result<Value> {
    let sk = skeleton_of(s)?;
    let mut out = Map::new();
    match &sk.result {
        SkeletonResult::Connected(g) => {
            out.insert("kind".into(), json!("connected"));
            if let Value::Object(m) = to_value(g) {
                out.extend(m);
            }
            out.insert("genus".into(), json!(g.genus()));
        }
        SkeletonResult::Trivial(TrivialKind::Point) => {
            out.insert("kind".into(), json!("point"));
        }
        SkeletonResult::Trivial(TrivialKind::Cycle) => {
            out.insert("kind".into(), json!("cycle"));
        }
        SkeletonResult::Disconnected(parts) => {
            out.insert("kind".into(), json!("disconnected"));
            out.insert("components".into(), to_value(parts));
        }
    }
    out.insert("dropped_nodes".into(), to_value(&sk.dropped_nodes));
    out.insert("free_strands".into(), to_value(&sk.free_strands));
    Ok(Value::Object(out))
}

/// `Ok(None)` when a check gives up on a graph that is too large.
fn bounded<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::BudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn graph_report(g: &Multigraph) -> Result<Value> {
    let lower_bound = bounded(tcn_lower_bound(g))?;
    let planar = bounded(is_planar(g))?;
    // crowdedness only makes sense for planar graphs
    let crowded = match planar {
        Some(true) => bounded(is_crowded(g))?,
        _ => None,
    };
    Ok(json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "genus": g.genus(),
        "connected": g.is_connected(),
        "trivalent": g.is_trivalent(),
        "graph_key": bounded(canonical_key(g))?.map(|k| k.to_string()),
        "chain": bounded(is_chain(g))?,
        "sprawling": is_sprawling(g),
        "planar": planar,
        "crowded": crowded,
        "treewidth": bounded(treewidth_exact(g))?,
        "lower_bound": lower_bound.as_ref().map(rational::format),
    }))
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("--jobs: {e}")))?;
    }
    match cli.command {
        Command::Polygons { genus, hyperelliptic } => {
            let polys = if hyperelliptic { vec![hyperelliptic_polygon(genus)?] } else { enumerate_maximal_nonhyperelliptic(genus)? };
            let list: Vec<Value> = polys
                .iter()
                .map(|p| json!({"vertices": p.vertices(), "lattice_points": p.lattice_points().len()}))
                .collect();
            Ok(json!({"genus": genus, "count": list.len(), "polygons": list}).into())
        }
        Command::Triangulate { input, regular_only, count, max_triangulations, max_queue, cache } => {
            let p = input.load()?;
            let budget = EnumerationBudget { max_triangulations, max_queue };
            let records: Vec<(Subdivision, bool)> = match cache {
                Some(dir) => cached_triangulations(&p, &budget, &dir)?
                    .into_par_iter()
                    .map(|t| Ok((check_regular(&t)?.is_regular(), t)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .map(|(r, t)| (t, r))
                    .collect(),
                None => enumerate_unimodular_triangulations(&p, &budget)?
                    .into_iter()
                    .map(|r| (r.triangulation, r.regular))
                    .collect(),
            };
            let regular = records.iter().filter(|r| r.1).count();
            let mut out = json!({"polygon": p.vertices(), "count": records.len(), "regular": regular});
            if !count {
                let list: Vec<Value> = records
                    .iter()
                    .filter(|r| r.1 || !regular_only)
                    .map(|(t, r)| json!({"subdivision": t, "regular": r}))
                    .collect();
                out["triangulations"] = Value::Array(list);
            }
            Ok(out.into())
        }
        Command::Nodal { input, nodes, count, max_subdivisions, max_queue } => {
            let p = input.load()?;
            let budget = EnumerationBudget { max_triangulations: max_subdivisions, max_queue };
            let subs = enumerate_nodal_subdivisions(&p, nodes, &budget)?;
            let mut out = json!({"polygon": p.vertices(), "nodes": nodes, "count": subs.len()});
            if !count {
                let list: Vec<Value> = subs.iter().map(|(s, h)| json!({"subdivision": s, "heights": h})).collect();
                out["subdivisions"] = Value::Array(list);
            }
            Ok(out.into())
        }
        Command::CheckRegular { subdivision } => {
            let (s, _) = load_subdivision(&subdivision)?;
            Ok(match check_regular(&s)? {
                Regularity::Regular(h) => json!({"regular": true, "heights": h}),
                Regularity::NotRegular(f) => json!({"regular": false, "farkas": f}),
            }
            .into())
        }
        Command::Skeleton { subdivision } => {
            let (s, _) = load_subdivision(&subdivision)?;
            Ok(skeleton_json(&s)?.into())
        }
        Command::Check { graph, subdivision, heights, nodes } => {
            let g = graph.load()?;
            let mut out = graph_report(&g)?;
            let Some(path) = subdivision else {
                return Ok(out.into());
            };
            let (s, given) = load_subdivision(&path)?;
            let h = heights_for(&s, given, heights.as_ref())?;
            let skeleton = match skeleton_of(&s)?.result {
                SkeletonResult::Connected(k) => k,
                _ => return Err(Error::AuditViolation("skeleton is not a connected graph of genus at least 2".into())),
            };
            let n = nodes.unwrap_or(s.node_count());
            let w = Witness { subdivision: s, heights: h, skeleton };
            verify_witness(&g, &w, n)?;
            out["valid"] = json!(true);
            out["nodes"] = json!(n);
            Ok(out.into())
        }
        Command::Tcn { graph, max_nodes, sweep, checkpoint, deep } => {
            if max_nodes >= 2 && !deep {
                return Err(Error::InvalidArgument("--max-nodes 2 or more sweeps for hours; pass --deep".into()));
            }
            let g = graph.load()?;
            let r = compute_tcn(&g, max_nodes, &sweep.options(checkpoint))?;
            let (tcn, exhausted) = match r.tcn {
                Tcn::Exact(c) => (json!(c), Value::Null),
                Tcn::Unresolved { exhausted_through } => (Value::Null, json!(exhausted_through)),
            };
            let budget_hit = r.levels.iter().any(|l| l.status == LevelStatus::BudgetLimited);
            let value = json!({
                "graph_key": r.graph_key.to_string(),
                "genus": r.genus,
                "tcn": tcn,
                "exhausted_through": exhausted,
                "lower_bound": rational::format(&r.lower_bound),
                "witness": r.witness,
                "levels": r.levels,
                "notes": r.notes,
            });
            Ok(Outcome { value, code: if budget_hit { 3 } else { 0 } })
        }
        Command::Classify { genus, sweep } => {
            let entries = troplanar_classify(genus, &sweep.options(None))?;
            let mut counts = [0usize; 3];
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let (verdict, w) = match &e.verdict {
                        Verdict::Troplanar(w) => (0, Some(w)),
                        Verdict::Chain(w) => (1, w.as_ref()),
                        Verdict::NonTroplanar => (2, None),
                    };
                    counts[verdict] += 1;
                    let name = ["troplanar", "chain", "non_troplanar"][verdict];
                    json!({
                        "key": e.key.to_string(),
                        "graph": e.graph,
                        "verdict": name,
                        "witness": w,
                    })
                })
                .collect();
            Ok(json!({
                "genus": genus,
                "troplanar": counts[0],
                "chains": counts[1],
                "non_troplanar": counts[2],
                "graphs": list,
            })
            .into())
        }
        Command::Audit { level, genus, nodes, sweep } => {
            let opts = sweep.options(None);
            let report = match level {
                AuditLevel::Sweep => audit_sweep(genus, nodes, &opts)?,
                AuditLevel::Hyperelliptic => hyperelliptic_chain_audit(genus, nodes, &opts)?,
            };
            let code = if !report.violations.is_empty() {
                4
            } else if !report.complete {
                3
            } else {
                0
            };
            Ok(Outcome { value: to_value(&report), code })
        }
        Command::Stitch { d, k, blocks, search } => {
            if let Some(max_h) = search {
                return match find_blocks(max_h)? {
                    Some(b) => Ok(to_value(&b).into()),
                    None => Err(Error::BudgetExceeded(format!("no block pair with height up to {max_h}"))),
                };
            }
            let b: StitchBlocks = match blocks {
                Some(f) => read_json(&f)?,
                None => fixtures::stitch_blocks(),
            };
            let (d, k) = (d.expect("clap requires --d"), k.expect("clap requires --k"));
            let r = stitch_construction(d, k, &b)?;
            Ok(json!({
                "d": d,
                "k": k,
                "nodes": r.subdivision.node_count(),
                "blocks": r.blocks,
                "lower_bound": rational::format(&r.lower_bound),
                "subdivision": r.subdivision,
                "heights": r.heights,
                "skeleton": r.skeleton,
            })
            .into())
        }
        Command::Render { subdivision, heights, scale, no_subdivision, no_curve, no_rays, no_nodes, no_skeleton, output } => {
            let (s, given) = load_subdivision(&subdivision)?;
            let h = heights_for(&s, given, heights.as_ref())?;
            let spec = RenderSpec {
                scale,
                subdivision: !no_subdivision,
                curve: !no_curve,
                rays: !no_rays,
                nodes: !no_nodes,
                skeleton: !no_skeleton,
            };
            let svg = render_svg(&s, &h, &spec)?;
            match output {
                Some(path) => {
                    fs::write(&path, &svg)?;
                    Ok(json!({"written": path, "bytes": svg.len()}).into())
                }
                None => {
                    let _ = std::io::stdout().lock().write_all(svg.as_bytes());
                    Ok(Outcome { value: Value::Null, code: 0 })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", json!({"error": "usage", "message": first}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            if !out.value.is_null() {
                let _ = writeln!(std::io::stdout().lock(), "{}", out.value);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(exit_code(&e))
        }
    }
}

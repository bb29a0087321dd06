//! Invariant audits over whole sweeps.

use std::collections::BTreeSet;
use std::sync::Mutex;

use serde::Serialize;

use crate::dual::{dualize_nodal, skeletonize, SkeletonResult};
use crate::error::{Error, Result};
use crate::graph::{is_chain, two_connected_components, Multigraph};
use crate::lattice::{enumerate_maximal_nonhyperelliptic, hyperelliptic_polygon, LatticePolygon};
use crate::regularity::check_regular;
use crate::subdivision::{NodalView, SweepControl};

use super::{sweep_level, SweepOptions};

#[derive(Clone, Debug, Default, Serialize)]
pub struct AuditReport {
    pub audit: String,
    pub polygon_genus: usize,
    pub max_nodes: usize,
    pub polygons: usize,
    pub subdivisions: u64,
    pub connected: u64,
    pub disconnected: u64,
    pub trivial: u64,
    /// Connected skeletons with at least two 2-connected components.
    pub multi_block: u64,
    /// Failed checks on subdivisions that turned out not to be regular;
    /// these are not tropical curves and do not count as violations.
    pub nonregular_exceptions: u64,
    pub violations: Vec<String>,
    pub complete: bool,
}

impl AuditReport {
    /// Turns recorded violations into an error.
    pub fn into_result(self) -> Result<AuditReport> {
        match self.violations.first() {
            Some(v) => Err(Error::AuditViolation(format!("{} violations, first: {v}", self.violations.len()))),
            None => Ok(self),
        }
    }
}

/// Pairs of distinct 2-connected components of `g` that share exactly one
/// node, reading nodes off the edge provenance.
pub fn parity_violations(g: &Multigraph) -> Vec<(usize, usize)> {
    let blocks = two_connected_components(g);
    let nodes: Vec<BTreeSet<usize>> =
        blocks.iter().map(|b| b.edges.iter().flat_map(|&e| g.provenance()[e].iter().copied()).collect()).collect();
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if nodes[i].intersection(&nodes[j]).count() == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    subdivisions: u64,
    connected: u64,
    disconnected: u64,
    trivial: u64,
    multi_block: u64,
    nonregular_exceptions: u64,
    violations: Vec<String>,
}

/// Calls `check` on every connected skeleton; a returned complaint becomes a
/// violation if the subdivision is regular.
fn run(
    polygons: &[LatticePolygon],
    cs: std::ops::RangeInclusive<usize>,
    opts: &SweepOptions,
    report: &mut AuditReport,
    check: impl Fn(&NodalView, &Multigraph, &mut Tally) -> Option<String> + Sync,
) -> Result<()> {
    report.polygons = polygons.len();
    report.complete = true;
    for c in cs {
        let tally = Mutex::new(Tally::default());
        let out = sweep_level(polygons, c, opts, |_, v| {
            let sk = skeletonize(&dualize_nodal(v));
            let mut local = Tally { subdivisions: 1, ..Default::default() };
            match &sk.result {
                SkeletonResult::Connected(g) => {
                    local.connected = 1;
                    if let Some(why) = check(v, g, &mut local) {
                        let s = v.to_subdivision();
                        match check_regular(&s) {
                            Ok(r) if r.is_regular() => local.violations.push(format!("{why}: {s}")),
                            Ok(_) => local.nonregular_exceptions += 1,
                            Err(e) => local.violations.push(format!("{e}: {s}")),
                        }
                    }
                }
                SkeletonResult::Disconnected(_) => local.disconnected = 1,
                SkeletonResult::Trivial(_) => local.trivial = 1,
            }
            let mut t = tally.lock().unwrap();
            t.subdivisions += local.subdivisions;
            t.connected += local.connected;
            t.disconnected += local.disconnected;
            t.trivial += local.trivial;
            t.multi_block += local.multi_block;
            t.nonregular_exceptions += local.nonregular_exceptions;
            t.violations.append(&mut local.violations);
            SweepControl::Continue
        })?;
        let t = tally.into_inner().unwrap();
        report.subdivisions += t.subdivisions;
        report.connected += t.connected;
        report.disconnected += t.disconnected;
        report.trivial += t.trivial;
        report.multi_block += t.multi_block;
        report.nonregular_exceptions += t.nonregular_exceptions;
        report.violations.extend(t.violations);
        report.complete &= !out.budget_hit;
    }
    report.violations.sort();
    Ok(())
}

/// Checks, over every `c`-node subdivision of the maximal polygons of genus
/// `polygon_genus`, that connected skeletons have genus `i - c` and that no
/// two of their 2-connected components share exactly one node.
pub fn audit_sweep(polygon_genus: usize, c: usize, opts: &SweepOptions) -> Result<AuditReport> {
    let polygons = enumerate_maximal_nonhyperelliptic(polygon_genus)?;
    let mut report = AuditReport { audit: "sweep".into(), polygon_genus, max_nodes: c, ..Default::default() };
    let expected = polygon_genus as i64 - c as i64;
    run(&polygons, c..=c, opts, &mut report, |_, g, t| {
        if g.genus() != expected {
            return Some(format!("skeleton genus {} differs from {expected}", g.genus()));
        }
        if two_connected_components(g).len() >= 2 {
            t.multi_block += 1;
        }
        let bad = parity_violations(g);
        (!bad.is_empty()).then(|| format!("components {:?} share exactly one node", bad[0]))
    })?;
    Ok(report)
}

/// Checks that every connected skeleton of a nodal subdivision of the
/// hyperelliptic genus-`g` polygon with at most `c_max` nodes is a chain.
pub fn hyperelliptic_chain_audit(g: usize, c_max: usize, opts: &SweepOptions) -> Result<AuditReport> {
    if g < 3 || c_max + 2 > g {
        return Err(Error::InvalidArgument(format!("need g >= 3 and c_max <= g - 2, got g = {g}, c_max = {c_max}")));
    }
    let polygon = hyperelliptic_polygon(g)?;
    let mut report = AuditReport { audit: "hyperelliptic".into(), polygon_genus: g, max_nodes: c_max, ..Default::default() };
    run(&[polygon], 0..=c_max, opts, &mut report, |_, h, _| match is_chain(h) {
        Ok(true) => None,
        Ok(false) => Some("skeleton is not a chain".into()),
        Err(e) => Some(e.to_string()),
    })?;
    Ok(report)
}

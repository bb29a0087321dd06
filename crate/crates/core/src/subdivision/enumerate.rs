//! Enumeration of unimodular triangulations and nodal subdivisions.
//!
//! Two traversals of the flip graph are provided. The breadth-first one keeps
//! a visited set keyed by edge sets, can persist its state to a cache and is
//! used for small polygons and explicit listings. Sweeps over large polygons
//! use [`ReverseSearch`], which needs no visited set.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cache::TriangulationLog;
use crate::error::{Error, Result};
use crate::lattice::LatticePolygon;
use crate::regularity::{check_regular, HeightCertificate, Regularity};

use super::mesh::{EdgeSet, Mesh, PointSet, ReverseSearch};
use super::placing::placing_triangulation_of;
use super::Subdivision;

/// Limits for enumeration; `None` means unlimited.
#[derive(Clone, Debug, Default)]
pub struct EnumerationBudget {
    pub max_triangulations: Option<u64>,
    pub max_queue: Option<usize>,
}

impl EnumerationBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    fn check_count(&self, n: u64) -> Result<()> {
        match self.max_triangulations {
            Some(m) if n > m => Err(Error::BudgetExceeded(format!("more than {m} triangulations"))),
            _ => Ok(()),
        }
    }

    fn check_queue(&self, n: usize) -> Result<()> {
        match self.max_queue {
            Some(m) if n > m => Err(Error::BudgetExceeded(format!("flip queue exceeds {m}"))),
            _ => Ok(()),
        }
    }
}

/// A triangulation with its regularity verdict.
#[derive(Clone, Debug)]
pub struct TriangulationRecord {
    pub triangulation: Subdivision,
    pub regular: bool,
}

/// Seed triangulation: placing in lexicographic order.
pub fn seed_mesh(ps: &Arc<PointSet>) -> Result<Mesh> {
    let t = placing_triangulation_of(ps.polygon(), ps.points())?;
    Mesh::from_subdivision(ps.clone(), &t)
}

/// Breadth-first flip closure from `seed`, optionally resuming from and
/// appending to `log`. Returns the edge sets of all triangulations, sorted.
pub fn flip_bfs(
    seed: Mesh,
    budget: &EnumerationBudget,
    mut log: Option<&mut TriangulationLog>,
) -> Result<Vec<EdgeSet>> {
    let ps = seed.point_set().clone();
    let mut seen: HashSet<EdgeSet> = HashSet::new();
    let mut frontier: Vec<EdgeSet> = Vec::new();
    if let Some(log) = log.as_deref_mut() {
        let state = log.load()?;
        for k in &state.discovered {
            seen.insert(*k);
        }
        frontier = state.discovered.iter().filter(|k| !state.expanded.contains(k)).copied().collect();
        frontier.sort();
    }
    if seen.is_empty() {
        let k = seed.key();
        seen.insert(k);
        frontier.push(k);
        if let Some(log) = log.as_deref_mut() {
            log.append_discovered(&[k])?;
        }
    }
    budget.check_count(seen.len() as u64)?;
    while !frontier.is_empty() {
        budget.check_queue(frontier.len())?;
        let neighbours: Vec<Vec<EdgeSet>> = frontier
            .par_iter()
            .map(|k| {
                let mut mesh = Mesh::from_edges(ps.clone(), *k).expect("stored triangulation");
                let mut out = Vec::new();
                for e in k.iter() {
                    if mesh.is_flippable(e) {
                        let f = mesh.flip(e);
                        out.push(mesh.key());
                        mesh.flip(f);
                    }
                }
                out
            })
            .collect();
        let mut next = Vec::new();
        for ns in neighbours {
            for k in ns {
                if seen.insert(k) {
                    next.push(k);
                }
            }
        }
        budget.check_count(seen.len() as u64)?;
        if let Some(log) = log.as_deref_mut() {
            log.append_discovered(&next)?;
            log.append_expanded(&frontier)?;
        }
        frontier = next;
    }
    let mut all: Vec<EdgeSet> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// All unimodular triangulations of `polygon`, each tagged with its
/// regularity verdict, in canonical order.
pub fn enumerate_unimodular_triangulations(
    polygon: &LatticePolygon,
    budget: &EnumerationBudget,
) -> Result<Vec<TriangulationRecord>> {
    let ps = PointSet::new(polygon)?;
    let keys = flip_bfs(seed_mesh(&ps)?, budget, None)?;
    let mut out: Vec<TriangulationRecord> = keys
        .into_par_iter()
        .map(|k| {
            let t = Mesh::from_edges(ps.clone(), k)?.to_subdivision(&[]);
            let regular = check_regular(&t)?.is_regular();
            Ok(TriangulationRecord { triangulation: t, regular })
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.triangulation.cells().cmp(b.triangulation.cells()));
    Ok(out)
}

/// Whether a sweep callback wants more items.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepControl {
    Continue,
    Stop,
}

/// Visits every unimodular triangulation of `polygon` by reverse search.
/// Returns the number visited and whether the traversal completed.
pub fn for_each_triangulation(
    polygon: &LatticePolygon,
    mut f: impl FnMut(&Mesh) -> SweepControl,
) -> Result<(u64, bool)> {
    let ps = PointSet::new(polygon)?;
    let mut rs = ReverseSearch::new(seed_mesh(&ps)?);
    let mut n = 0;
    while rs.advance() {
        n += 1;
        if f(rs.mesh()) == SweepControl::Stop {
            return Ok((n, false));
        }
    }
    Ok((n, true))
}

/// A nodal subdivision presented as a triangulation plus the deleted
/// parallelogram diagonals.
#[derive(Clone, Copy, Debug)]
pub struct NodalView<'a> {
    pub mesh: &'a Mesh,
    pub picks: &'a [usize],
}

impl NodalView<'_> {
    pub fn to_subdivision(&self) -> Subdivision {
        self.mesh.to_subdivision(self.picks)
    }
}

/// Calls `f` on every `c`-subset of pairwise cell-disjoint canonical
/// parallelogram diagonals of `mesh`. Across all triangulations each nodal
/// subdivision with `c` parallelograms is produced exactly once.
pub fn for_each_nodal_in(mesh: &Mesh, c: usize, f: &mut dyn FnMut(&NodalView) -> SweepControl) -> SweepControl {
    if c == 0 {
        return f(&NodalView { mesh, picks: &[] });
    }
    let cands = mesh.canonical_parallelograms();
    if cands.len() < c {
        return SweepControl::Continue;
    }
    let quads: Vec<[usize; 4]> = cands.iter().map(|&e| mesh.quad_edges(e)).collect();
    let mut picks = Vec::with_capacity(c);
    let mut chosen = Vec::with_capacity(c);
    subsets(mesh, &cands, &quads, c, 0, &mut picks, &mut chosen, f)
}

#[allow(clippy::too_many_arguments)]
fn subsets(
    mesh: &Mesh,
    cands: &[usize],
    quads: &[[usize; 4]],
    c: usize,
    start: usize,
    picks: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&NodalView) -> SweepControl,
) -> SweepControl {
    if picks.len() == c {
        return f(&NodalView { mesh, picks });
    }
    for i in start..cands.len() {
        if cands.len() - i < c - picks.len() {
            break;
        }
        let clash = chosen.iter().any(|&j: &usize| quads[j].contains(&cands[i]) || quads[i].contains(&cands[j]));
        if clash {
            continue;
        }
        picks.push(cands[i]);
        chosen.push(i);
        let ctl = subsets(mesh, cands, quads, c, i + 1, picks, chosen, f);
        picks.pop();
        chosen.pop();
        if ctl == SweepControl::Stop {
            return ctl;
        }
    }
    SweepControl::Continue
}

/// Visits every nodal subdivision of `polygon` with exactly `c` unit
/// parallelograms, regular or not. Returns the number of triangulations
/// visited and whether the traversal completed.
pub fn for_each_nodal(
    polygon: &LatticePolygon,
    c: usize,
    mut f: impl FnMut(&NodalView) -> SweepControl,
) -> Result<(u64, bool)> {
    let mut stopped = false;
    let (n, _) = for_each_triangulation(polygon, |mesh| {
        let ctl = for_each_nodal_in(mesh, c, &mut f);
        if ctl == SweepControl::Stop {
            stopped = true;
        }
        ctl
    })?;
    Ok((n, !stopped))
}

/// All regular nodal subdivisions of `polygon` with exactly `c` unit
/// parallelograms, each with its height certificate, in canonical order.
pub fn enumerate_nodal_subdivisions(
    polygon: &LatticePolygon,
    c: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<(Subdivision, HeightCertificate)>> {
    let mut candidates = Vec::new();
    let mut over = false;
    for_each_nodal(polygon, c, |v| {
        candidates.push(v.to_subdivision());
        if budget.check_count(candidates.len() as u64).is_err() {
            over = true;
            return SweepControl::Stop;
        }
        SweepControl::Continue
    })?;
    if over {
        budget.check_count(candidates.len() as u64)?;
    }
    let mut out: Vec<(Subdivision, HeightCertificate)> = candidates
        .into_par_iter()
        .map(|s| Ok((check_regular(&s)?, s)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(r, s)| match r {
            Regularity::Regular(h) => Some((s, h)),
            Regularity::NotRegular(_) => None,
        })
        .collect();
    out.sort_by(|a, b| a.0.cells().cmp(b.0.cells()));
    Ok(out)
}

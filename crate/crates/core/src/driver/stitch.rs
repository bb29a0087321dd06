//! Stacking 1-node blocks along unit edges into bridge paths of blocks.
//!
//! Blocks live on `conv{(0,0), (1,0), (s+1,h), (s,h)}`, whose bottom and top
//! edges are unit segments; copy `i` is translated by `i * (s, h)`, so the
//! union of `k` copies is again a parallelogram of the same shape.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dual::skeleton_of;
use crate::error::{Error, Result};
use crate::graph::{
    bridges, canonical_key, is_crowded, is_planar, lower_bound_formula, treewidth_exact, two_connected_components,
    Multigraph,
};
use crate::lattice::{LatticePoint, LatticePolygon, UnimodularMap};
use crate::regularity::{check_regular, HeightCertificate};
use crate::subdivision::{for_each_nodal, patch, CellKind, Gluing, Subdivision, SweepControl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    NonPlanar,
    Crowded,
}

/// A non-planar and a crowded 1-node block on a common polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchBlocks {
    pub s: i64,
    pub h: i64,
    pub np: Subdivision,
    pub cr: Subdivision,
}

#[derive(Clone, Debug)]
pub struct StitchReport {
    pub subdivision: Subdivision,
    pub heights: HeightCertificate,
    pub skeleton: Multigraph,
    /// Kind of each 2-connected component, in the order they are listed by
    /// [`two_connected_components`].
    pub blocks: Vec<BlockKind>,
    /// Treewidth lower bound on the TCN of the stitched skeleton.
    pub lower_bound: BigRational,
}

pub fn block_polygon(s: i64, h: i64) -> Result<LatticePolygon> {
    if h < 1 {
        return Err(Error::InvalidArgument(format!("block height must be positive, got {h}")));
    }
    LatticePolygon::from_coords(&[(0, 0), (1, 0), (s + 1, h), (s, h)])
}

/// Smoothed kind of a bridgeless skeleton or block, if it is one of the two.
fn kind_of(g: &Multigraph) -> Result<Option<BlockKind>> {
    let g = g.smoothed();
    if !g.is_connected() || !g.is_trivalent() || g.genus() < 2 {
        return Ok(None);
    }
    if !is_planar(&g)? {
        return Ok(Some(BlockKind::NonPlanar));
    }
    Ok(is_crowded(&g)?.then_some(BlockKind::Crowded))
}

fn glue_cells_are_triangles(s: &Subdivision, bottom: (LatticePoint, LatticePoint), top: (LatticePoint, LatticePoint)) -> bool {
    [bottom, top].iter().all(|&(a, b)| {
        s.cells().iter().any(|c| {
            c.kind() == CellKind::Triangle && c.vertices().contains(&a) && c.vertices().contains(&b)
        })
    })
}

/// Checks that `b` is a regular 1-node subdivision of `block_polygon(s, h)`
/// with a bridgeless skeleton of the given kind and triangles on both
/// gluing edges.
fn check_block(b: &Subdivision, s: i64, h: i64, kind: BlockKind) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidArgument(format!("{kind:?} block: {m}")));
    if *b.polygon() != block_polygon(s, h)? {
        return bad("polygon is not the block polygon");
    }
    if b.node_count() != 1 {
        return bad("expected exactly one parallelogram");
    }
    let p = LatticePoint::new;
    if !glue_cells_are_triangles(b, (p(0, 0), p(1, 0)), (p(s, h), p(s + 1, h))) {
        return bad("gluing edges must border triangles");
    }
    if !check_regular(b)?.is_regular() {
        return bad("not regular");
    }
    let sk = skeleton_of(b)?;
    let Some(g) = sk.result.connected() else {
        return bad("skeleton is not connected");
    };
    if !bridges(g).is_empty() {
        return bad("skeleton has a bridge");
    }
    if kind_of(g)? != Some(kind) {
        return bad("skeleton has the wrong kind");
    }
    Ok(())
}

/// Scans block polygons of height up to `max_h` for a pair of 1-node blocks,
/// one non-planar and one crowded, each of which also stitches cleanly to
/// itself. Returns the first polygon that has both.
pub fn find_blocks(max_h: i64) -> Result<Option<StitchBlocks>> {
    for h in 1..=max_h {
        for s in 0..h {
            let poly = block_polygon(s, h)?;
            if poly.genus() < 5 {
                continue;
            }
            let mut kinds: HashMap<crate::graph::CanonicalKey, Option<BlockKind>> = HashMap::new();
            let mut found: HashMap<BlockKind, Subdivision> = HashMap::new();
            let mut err = None;
            for_each_nodal(&poly, 1, |v| {
                let sd = v.to_subdivision();
                let mut attempt = || -> Result<()> {
                    let sk = skeleton_of(&sd)?;
                    let Some(g) = sk.result.connected() else { return Ok(()) };
                    if !bridges(g).is_empty() {
                        return Ok(());
                    }
                    let key = canonical_key(g)?;
                    let kind = match kinds.get(&key) {
                        Some(k) => *k,
                        None => {
                            let k = kind_of(g)?;
                            kinds.insert(key, k);
                            k
                        }
                    };
                    let Some(kind) = kind else { return Ok(()) };
                    if found.contains_key(&kind) || check_block(&sd, s, h, kind).is_err() {
                        return Ok(());
                    }
                    let pair = StitchBlocks { s, h, np: sd.clone(), cr: sd.clone() };
                    let d = if kind == BlockKind::NonPlanar { 2 } else { 0 };
                    if stitch_construction(d, 2, &pair).is_ok() {
                        found.insert(kind, sd.clone());
                    }
                    Ok(())
                };
                if let Err(e) = attempt() {
                    err = Some(e);
                    return SweepControl::Stop;
                }
                if found.len() == 2 {
                    SweepControl::Stop
                } else {
                    SweepControl::Continue
                }
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            if found.len() == 2 {
                let np = found.remove(&BlockKind::NonPlanar).unwrap();
                let cr = found.remove(&BlockKind::Crowded).unwrap();
                return Ok(Some(StitchBlocks { s, h, np, cr }));
            }
        }
    }
    Ok(None)
}

/// Stacks `d` copies of the non-planar block followed by `k - d` copies of
/// the crowded one and checks the outcome: a regular subdivision with `k`
/// nodes whose skeleton is a path of `k` blocks joined by bridges, `d` of
/// them non-planar and the rest crowded.
pub fn stitch_construction(d: usize, k: usize, blocks: &StitchBlocks) -> Result<StitchReport> {
    if k == 0 || d > k {
        return Err(Error::InvalidArgument(format!("need 1 <= k and d <= k, got d = {d}, k = {k}")));
    }
    let (s, h) = (blocks.s, blocks.h);
    if d > 0 {
        check_block(&blocks.np, s, h, BlockKind::NonPlanar)?;
    }
    if d < k {
        check_block(&blocks.cr, s, h, BlockKind::Crowded)?;
    }
    let pick = |i: usize| if i < d { &blocks.np } else { &blocks.cr };
    let mut current = pick(0).clone();
    for i in 1..k {
        let (x, y) = (i as i64 * s, i as i64 * h);
        let gluing = Gluing {
            edge: (LatticePoint::new(x + 1, y), LatticePoint::new(x, y)),
            map: UnimodularMap::translation(LatticePoint::new(x, y)),
        };
        current = patch(&current, pick(i), &gluing)?;
    }
    let fail = |m: String| Err(Error::AuditViolation(format!("stitch d={d} k={k}: {m}")));
    let heights = match check_regular(&current)?.heights() {
        Some(hc) => hc.clone(),
        None => return fail("stitched subdivision is not regular".into()),
    };
    if current.node_count() != k {
        return fail(format!("{} nodes", current.node_count()));
    }
    let sk = skeleton_of(&current)?;
    let Some(g) = sk.result.connected().cloned() else {
        return fail("skeleton is not connected".into());
    };
    let comps = two_connected_components(&g);
    if comps.len() != k {
        return fail(format!("{} 2-connected components", comps.len()));
    }
    let mut kinds = Vec::with_capacity(k);
    for b in &comps {
        match kind_of(&b.graph)? {
            Some(kind) => kinds.push(kind),
            None => return fail("a component is neither non-planar nor crowded".into()),
        }
    }
    if kinds.iter().filter(|&&x| x == BlockKind::NonPlanar).count() != d {
        return fail("wrong number of non-planar components".into());
    }
    // bridges must join the components in a path
    let block_of = |v: usize| comps.iter().position(|b| b.vertices.contains(&v));
    let br = bridges(&g);
    if br.len() != k - 1 {
        return fail(format!("{} bridges", br.len()));
    }
    let mut deg = vec![0; k];
    for &e in &br {
        let (u, v) = g.edges()[e];
        match (block_of(u), block_of(v)) {
            (Some(a), Some(b)) if a != b => {
                deg[a] += 1;
                deg[b] += 1;
            }
            _ => return fail("a bridge does not join two components".into()),
        }
    }
    if deg.iter().any(|&x| x > 2) {
        return fail("components are not joined in a path".into());
    }
    let tw = comps.iter().map(|b| treewidth_exact(&b.graph)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(1);
    let bound = lower_bound_formula(tw, g.genus());
    let lower_bound = if bound < BigRational::zero() { BigRational::from_integer(BigInt::zero()) } else { bound };
    Ok(StitchReport { subdivision: current, heights, skeleton: g, blocks: kinds, lower_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_polygons_stack() {
        let p = block_polygon(2, 7).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(block_polygon(0, 0).is_err());
    }

    #[test]
    fn single_blocks_reproduce_their_skeletons() {
        let b = crate::fixtures::stitch_blocks();
        for (d, block) in [(1, &b.np), (0, &b.cr)] {
            let r = stitch_construction(d, 1, &b).unwrap();
            let g = skeleton_of(block).unwrap().result.connected().unwrap().clone();
            assert_eq!(canonical_key(&r.skeleton).unwrap(), canonical_key(&g).unwrap());
            assert_eq!(r.subdivision, *block);
        }
    }

    #[test]
    fn mixed_pair_is_joined_by_one_bridge() {
        let r = stitch_construction(1, 2, &crate::fixtures::stitch_blocks()).unwrap();
        assert_eq!(r.subdivision.node_count(), 2);
        assert_eq!(bridges(&r.skeleton).len(), 1);
        let mut kinds = r.blocks.clone();
        kinds.sort_by_key(|k| *k == BlockKind::Crowded);
        assert_eq!(kinds, vec![BlockKind::NonPlanar, BlockKind::Crowded]);
        r.heights.verify(&r.subdivision).unwrap();
    }

    #[test]
    fn swapped_blocks_are_rejected() {
        let b = crate::fixtures::stitch_blocks();
        let swapped = StitchBlocks { np: b.cr.clone(), cr: b.np.clone(), ..b };
        assert!(stitch_construction(1, 1, &swapped).is_err());
        assert!(stitch_construction(0, 1, &swapped).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let t = Subdivision::trivial(LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()).unwrap();
        let b = StitchBlocks { s: 0, h: 1, np: t.clone(), cr: t };
        assert!(stitch_construction(0, 0, &b).is_err());
        assert!(stitch_construction(3, 2, &b).is_err());
        assert!(matches!(stitch_construction(1, 1, &b), Err(Error::InvalidArgument(_))));
    }
}

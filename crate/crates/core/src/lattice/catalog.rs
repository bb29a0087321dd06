use std::collections::BTreeSet;

use super::{convex_hull, InteriorHull, LatticePoint, LatticePolygon};
use crate::error::{Error, Result};

/// Largest genus the polygon catalog is computed for.
pub const MAX_CATALOG_GENUS: usize = 7;

/// All two-dimensional lattice polygons with exactly `k` lattice points, in normal form.
///
/// Grown one point at a time: removing a suitable vertex of a polygon with
/// `k + 1` points always leaves a two-dimensional polygon with `k` points.
pub fn enumerate_lattice_polygons(k: usize) -> Vec<LatticePolygon> {
    if k < 3 {
        return Vec::new();
    }
    let unit = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
    let mut level: BTreeSet<Vec<LatticePoint>> = BTreeSet::new();
    level.insert(unit.normal_form().vertices().to_vec());
    for size in 3..k {
        let mut next = BTreeSet::new();
        for verts in &level {
            let q = LatticePolygon { vertices: verts.clone() };
            let pts = q.lattice_points();
            // the new point lies within Euclidean distance 2*size of q
            let margin = 2 * size as i64 + 1;
            let (lo, hi) = q.bounding_box();
            let mut with = pts.clone();
            for x in lo.x - margin..=hi.x + margin {
                for y in lo.y - margin..=hi.y + margin {
                    let p = LatticePoint::new(x, y);
                    if q.contains(p) {
                        continue;
                    }
                    with.push(p);
                    let grown = LatticePolygon { vertices: convex_hull(&with) };
                    with.pop();
                    if grown.lattice_points().len() == size + 1 {
                        next.insert(grown.normal_form().vertices().to_vec());
                    }
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|vertices| LatticePolygon { vertices }).collect()
}

/// Maximal non-hyperelliptic lattice polygons of genus `g`, in normal form.
///
/// Every such polygon is obtained by moving out the edges of its interior
/// polygon, so the candidates are the two-dimensional polygons with exactly
/// `g` lattice points.
pub fn enumerate_maximal_nonhyperelliptic(g: usize) -> Result<Vec<LatticePolygon>> {
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be positive".into()));
    }
    if g > MAX_CATALOG_GENUS {
        return Err(Error::BudgetExceeded(format!(
            "polygon catalog supports genus up to {MAX_CATALOG_GENUS}, requested {g}"
        )));
    }
    let mut out: BTreeSet<Vec<LatticePoint>> = BTreeSet::new();
    for q in enumerate_lattice_polygons(g) {
        if let Some(p) = q.relax() {
            debug_assert!(matches!(p.interior_hull(), InteriorHull::Polygon(_)));
            out.insert(p.normal_form().vertices().to_vec());
        }
    }
    Ok(out.into_iter().map(|vertices| LatticePolygon { vertices }).collect())
}

/// The rectangle obtained by moving out the bounding lines of the segment
/// from `(0,0)` to `(g-1,0)`; a hyperelliptic polygon of genus `g`.
pub fn hyperelliptic_polygon(g: usize) -> Result<LatticePolygon> {
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be positive".into()));
    }
    let w = g as i64 + 1;
    LatticePolygon::from_coords(&[(0, 0), (w, 0), (w, 2), (0, 2)])
}

//! Triangulations by exact cover: tile the polygon with unimodular
//! triangles, always filling the smallest open frontier edge first. Shares
//! nothing with the flip machinery, so it serves as an oracle for it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon};

use super::{Cell, Subdivision};

type Tri = [LatticePoint; 3];

/// Whether the interiors of two counterclockwise triangles meet.
fn overlaps(a: &Tri, b: &Tri) -> bool {
    for (t, u) in [(a, b), (b, a)] {
        for i in 0..3 {
            let (p, q) = (t[i], t[(i + 1) % 3]);
            if u.iter().all(|&x| orient(p, q, x) <= 0) {
                return false;
            }
        }
    }
    true
}

fn search(
    pts: &[LatticePoint],
    open: &mut Vec<(LatticePoint, LatticePoint)>,
    placed: &mut Vec<Tri>,
    out: &mut BTreeSet<Vec<Tri>>,
) {
    // open edges have the unfilled region on their left
    let Some(i) = (0..open.len()).min_by_key(|&i| open[i]) else {
        let mut key: Vec<Tri> = placed
            .iter()
            .map(|t| {
                let mut t = *t;
                t.sort();
                t
            })
            .collect();
        key.sort();
        out.insert(key);
        return;
    };
    let (a, b) = open[i];
    for &c in pts {
        if orient(a, b, c) != 1 {
            continue;
        }
        let t = [a, b, c];
        if placed.iter().any(|u| overlaps(&t, u)) {
            continue;
        }
        let saved = open.clone();
        open.swap_remove(i);
        for e in [(b, c), (c, a)] {
            match open.iter().position(|&o| o == e) {
                Some(j) => {
                    open.swap_remove(j);
                }
                None => open.push((e.1, e.0)),
            }
        }
        placed.push(t);
        search(pts, open, placed, out);
        placed.pop();
        *open = saved;
    }
}

/// All unimodular triangulations of `polygon`, in canonical order.
/// Exponential; intended for polygons with a handful of points.
pub fn exact_cover_triangulations(polygon: &LatticePolygon) -> Result<Vec<Subdivision>> {
    let pts = polygon.lattice_points();
    if pts.len() > 16 {
        return Err(Error::BudgetExceeded(format!("exact cover limited to 16 points, got {}", pts.len())));
    }
    let mut open = Vec::new();
    for (a, b) in polygon.edges() {
        let d = b - a;
        let g = d.lattice_length();
        let step = LatticePoint::new(d.x / g, d.y / g);
        for i in 0..g {
            let p = LatticePoint::new(a.x + step.x * i, a.y + step.y * i);
            open.push((p, LatticePoint::new(p.x + step.x, p.y + step.y)));
        }
    }
    let mut keys = BTreeSet::new();
    search(&pts, &mut open, &mut Vec::new(), &mut keys);
    let mut out = keys
        .into_iter()
        .map(|k| {
            let cells = k.into_iter().map(|[a, b, c]| Cell::triangle(a, b, c)).collect::<Result<Vec<_>>>()?;
            Subdivision::new(polygon.clone(), cells)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.cells().cmp(b.cells()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let count = |c: &[(i64, i64)]| exact_cover_triangulations(&LatticePolygon::from_coords(c).unwrap()).unwrap().len();
        assert_eq!(count(&[(0, 0), (1, 0), (0, 1)]), 1);
        assert_eq!(count(&[(0, 0), (1, 0), (1, 1), (0, 1)]), 2);
        assert_eq!(count(&[(0, 0), (2, 0), (0, 2)]), 4);
    }
}

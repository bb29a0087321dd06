//! Placing triangulations: insert points one at a time, coning each new
//! point over the visible boundary or splitting the cells containing it.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon};

use super::{Cell, Subdivision};

/// Incremental placing state over an arbitrary point sequence.
#[derive(Clone, Debug, Default)]
pub struct PlacingState {
    points: Vec<LatticePoint>,
    /// Points placed while everything is still collinear.
    line: Vec<usize>,
    /// Counterclockwise triangles as indices into `points`.
    triangles: Vec<[usize; 3]>,
}

impl PlacingState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Current triangles as counterclockwise point triples.
    pub fn triangles(&self) -> Vec<[LatticePoint; 3]> {
        self.triangles.iter().map(|t| t.map(|i| self.points[i])).collect()
    }

    /// Order-independent key of the current triangulation.
    pub fn key(&self) -> Vec<[LatticePoint; 3]> {
        let mut k: Vec<[LatticePoint; 3]> = self
            .triangles()
            .into_iter()
            .map(|mut t| {
                t.sort();
                t
            })
            .collect();
        k.sort();
        k
    }

    pub fn place(&mut self, p: LatticePoint) {
        let i = self.points.len();
        self.points.push(p);
        if self.triangles.is_empty() {
            self.place_on_line(i);
        } else {
            self.place_in_plane(i);
        }
    }

    fn place_on_line(&mut self, i: usize) {
        let pts = &self.points;
        if self.line.len() < 2 || orient(pts[self.line[0]], pts[self.line[1]], pts[i]) == 0 {
            self.line.push(i);
            return;
        }
        let mut line = std::mem::take(&mut self.line);
        let (o, d) = (pts[line[0]], pts[line[1]] - pts[line[0]]);
        line.sort_by_key(|&j| (pts[j] - o).dot(d));
        for w in line.windows(2) {
            let (u, v) = (w[0], w[1]);
            if orient(pts[u], pts[v], pts[i]) > 0 {
                self.triangles.push([u, v, i]);
            } else {
                self.triangles.push([v, u, i]);
            }
        }
    }

    fn place_in_plane(&mut self, i: usize) {
        let pts = &self.points;
        let p = pts[i];
        let mut directed = HashSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                directed.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let visible: Vec<(usize, usize)> = directed
            .iter()
            .filter(|&&(u, v)| !directed.contains(&(v, u)) && orient(pts[u], pts[v], p) < 0)
            .copied()
            .collect();
        if !visible.is_empty() {
            let mut visible = visible;
            visible.sort();
            for (u, v) in visible {
                self.triangles.push([v, u, i]);
            }
            return;
        }
        let mut kept = Vec::with_capacity(self.triangles.len() + 2);
        for &t in &self.triangles {
            let o = [0, 1, 2].map(|k| orient(pts[t[k]], pts[t[(k + 1) % 3]], p));
            if o.iter().any(|&x| x < 0) {
                kept.push(t);
                continue;
            }
            for k in 0..3 {
                if o[k] > 0 {
                    kept.push([t[k], t[(k + 1) % 3], i]);
                }
            }
        }
        self.triangles = kept;
    }
}

/// Placing triangulation of `polygon` inserting its lattice points in `order`.
///
/// The result uses every lattice point, so all triangles are unimodular.
pub fn placing_triangulation(polygon: &LatticePolygon, order: &[LatticePoint]) -> Result<Subdivision> {
    let mut expect = polygon.lattice_points();
    let mut given = order.to_vec();
    expect.sort();
    given.sort();
    if expect != given {
        return Err(Error::InvalidArgument(
            "placing order must be a permutation of the polygon's lattice points".into(),
        ));
    }
    placing_triangulation_of(polygon, order)
}

/// Placing triangulation without the permutation check.
pub fn placing_triangulation_of(polygon: &LatticePolygon, order: &[LatticePoint]) -> Result<Subdivision> {
    let mut state = PlacingState::new();
    for &p in order {
        state.place(p);
    }
    let cells = state
        .triangles()
        .into_iter()
        .map(|[a, b, c]| Cell::triangle(a, b, c))
        .collect::<Result<Vec<_>>>()?;
    Subdivision::new(polygon.clone(), cells)
}

/// Every distinct placing triangulation of `polygon` over all insertion
/// orders, by depth-first search over orders with states merged on (placed
/// set, current triangles). Exponential; meant as an oracle for small
/// polygons.
pub fn placing_permutation_triangulations(polygon: &LatticePolygon) -> Result<Vec<Subdivision>> {
    let pts = polygon.lattice_points();
    if pts.len() > 16 {
        return Err(Error::BudgetExceeded(format!("placing oracle limited to 16 points, got {}", pts.len())));
    }
    fn go(
        pts: &[LatticePoint],
        mask: u16,
        state: &PlacingState,
        seen: &mut HashSet<(u16, Vec<[LatticePoint; 3]>)>,
        out: &mut HashSet<Vec<[LatticePoint; 3]>>,
    ) {
        if !seen.insert((mask, state.key())) {
            return;
        }
        if mask.count_ones() as usize == pts.len() {
            out.insert(state.key());
            return;
        }
        for (i, &p) in pts.iter().enumerate() {
            if mask & (1 << i) == 0 {
                let mut next = state.clone();
                next.place(p);
                go(pts, mask | (1 << i), &next, seen, out);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut keys = HashSet::new();
    go(&pts, 0, &PlacingState::new(), &mut seen, &mut keys);
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

    fn poly(c: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::from_coords(c).unwrap()
    }

    #[test]
    fn square_any_order() {
        let sq = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let mut pts = sq.lattice_points();
        let a = placing_triangulation(&sq, &pts).unwrap();
        pts.swap(2, 3);
        let b = placing_triangulation(&sq, &pts).unwrap();
        assert_eq!(a.cells().len(), 2);
        assert_ne!(a, b);
    }

    #[test]
    fn unique_triangulation_of_thin_triangle() {
        let p = poly(&[(0, 0), (2, 0), (0, 1)]);
        let mut pts = p.lattice_points();
        let first = placing_triangulation(&p, &pts).unwrap();
        pts.reverse();
        assert_eq!(placing_triangulation(&p, &pts).unwrap(), first);
        assert_eq!(first.cells().len(), 2);
    }

    #[test]
    fn collinear_prefix_and_interior_points() {
        let p = poly(&[(0, 0), (4, 0), (0, 4)]);
        let mut pts = p.lattice_points();
        pts.sort_by_key(|q| (q.y, q.x));
        let t = placing_triangulation(&p, &pts).unwrap();
        assert_eq!(t.cells().len(), 16);
        pts.reverse();
        assert_eq!(placing_triangulation(&p, &pts).unwrap().cells().len(), 16);
    }

    #[test]
    fn oracle_counts_small_triangles() {
        // one triangulation of the unit triangle, two of the unit square
        assert_eq!(placing_permutation_triangulations(&poly(&[(0, 0), (1, 0), (0, 1)])).unwrap().len(), 1);
        assert_eq!(placing_permutation_triangulations(&poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_permutation() {
        let p = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert!(placing_triangulation(&p, &[LatticePoint::new(0, 0)]).is_err());
    }
}

//! Compact triangulation state over a fixed point set.
//!
//! Points are the lattice points of a polygon in lexicographic order and are
//! addressed by `u8` index. Every primitive segment between two points gets an
//! edge id; a triangulation is the set of present edges plus, per edge, the
//! vertex opposite it on each side. Flips are O(1).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon};

use super::{Cell, CellKind, Subdivision};

/// Marker for "no vertex" (boundary side) in the opposite-vertex table.
pub const NONE: u8 = u8::MAX;

const WORDS: usize = 8;
const MAX_EDGES: usize = 64 * WORDS;

/// Fixed-size bitset over edge ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet([u64; WORDS]);

impl EdgeSet {
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|w| format!("{w:016x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<EdgeSet> {
        if s.len() != 16 * WORDS {
            return None;
        }
        let mut out = [0u64; WORDS];
        for (i, w) in out.iter_mut().enumerate() {
            *w = u64::from_str_radix(&s[16 * i..16 * (i + 1)], 16).ok()?;
        }
        Some(EdgeSet(out))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The lattice points of a polygon with their primitive segments.
#[derive(Debug)]
pub struct PointSet {
    polygon: LatticePolygon,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, u8>,
    edge_id: Vec<u16>,
    ends: Vec<(u8, u8)>,
    lift: Vec<i64>,
    boundary_edges: usize,
}

impl PointSet {
    pub fn new(polygon: &LatticePolygon) -> Result<Arc<PointSet>> {
        let points = polygon.lattice_points();
        let n = points.len();
        if n >= NONE as usize {
            return Err(Error::BudgetExceeded(format!("{polygon} has {n} lattice points")));
        }
        let index = points.iter().enumerate().map(|(i, &p)| (p, i as u8)).collect();
        let mut edge_id = vec![u16::MAX; n * n];
        let mut ends = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if (points[j] - points[i]).lattice_length() == 1 {
                    if ends.len() == MAX_EDGES {
                        return Err(Error::BudgetExceeded(format!(
                            "{polygon} has more than {MAX_EDGES} primitive segments"
                        )));
                    }
                    edge_id[i * n + j] = ends.len() as u16;
                    edge_id[j * n + i] = ends.len() as u16;
                    ends.push((i as u8, j as u8));
                }
            }
        }
        let lift = points.iter().map(|p| p.dot(*p)).collect();
        let boundary_edges = polygon.boundary_point_count() as usize;
        Ok(Arc::new(PointSet {
            polygon: polygon.clone(),
            points,
            index,
            edge_id,
            ends,
            lift,
            boundary_edges,
        }))
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: u8) -> LatticePoint {
        self.points[i as usize]
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<u8> {
        self.index.get(&p).copied()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    /// Edge id of the primitive segment `i`-`j`.
    pub fn edge(&self, i: u8, j: u8) -> Option<usize> {
        let id = self.edge_id[i as usize * self.points.len() + j as usize];
        (id != u16::MAX).then_some(id as usize)
    }

    pub fn ends(&self, e: usize) -> (u8, u8) {
        self.ends[e]
    }

    fn orient(&self, a: u8, b: u8, c: u8) -> i64 {
        orient(self.point(a), self.point(b), self.point(c))
    }

    /// True when `d` lies strictly below the plane through the lifted
    /// triangle `a, b, c` (counterclockwise) for the lift `|p|^2` with a
    /// symbolic perturbation favouring smaller point indices.
    fn below(&self, a: u8, b: u8, c: u8, d: u8) -> bool {
        let o = self.orient(a, b, c);
        let coef = [
            (a, -self.orient(d, b, c)),
            (b, -self.orient(a, d, c)),
            (c, -self.orient(a, b, d)),
            (d, o),
        ];
        let w = |i: u8| self.lift[i as usize];
        let f0: i64 = coef.iter().map(|&(i, k)| k * w(i)).sum();
        if f0 != 0 {
            return f0 < 0;
        }
        let mut sorted = coef;
        sorted.sort_by_key(|&(i, _)| i);
        let (_, k) = *sorted.iter().find(|&&(_, k)| k != 0).expect("non-degenerate triangle");
        k < 0
    }
}

/// A unimodular triangulation of a [`PointSet`].
#[derive(Clone)]
pub struct Mesh {
    ps: Arc<PointSet>,
    present: EdgeSet,
    /// `opp[e] = [left, right]` relative to `ends(e).0 -> ends(e).1`.
    opp: Vec<[u8; 2]>,
}

impl fmt::Debug for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mesh").field("triangles", &self.triangles()).finish()
    }
}

impl Mesh {
    /// Builds a mesh from counterclockwise or clockwise point-index triangles.
    pub fn from_triangles(ps: Arc<PointSet>, triangles: &[[u8; 3]]) -> Result<Mesh> {
        let mut present = EdgeSet::default();
        let mut opp = vec![[NONE; 2]; ps.num_edges()];
        for &[a, b, c] in triangles {
            let (b, c) = if ps.orient(a, b, c) > 0 { (b, c) } else { (c, b) };
            if ps.orient(a, b, c) != 1 {
                return Err(Error::InvalidSubdivision("triangle is not unimodular".into()));
            }
            for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
                let e = ps.edge(u, v).expect("unimodular triangle sides are primitive");
                let side = if u < v { 0 } else { 1 };
                if opp[e][side] != NONE {
                    return Err(Error::InvalidSubdivision("overlapping triangles".into()));
                }
                opp[e][side] = w;
                present.insert(e);
            }
        }
        let mesh = Mesh { ps, present, opp };
        let expected = mesh.ps.polygon.twice_area() as usize;
        if triangles.len() != expected {
            return Err(Error::InvalidSubdivision(format!(
                "{} triangles for a polygon of area {expected}/2",
                triangles.len()
            )));
        }
        let open = mesh.present.iter().filter(|&e| mesh.opp[e].contains(&NONE)).count();
        if open != mesh.ps.boundary_edges {
            return Err(Error::InvalidSubdivision("triangles do not tile the polygon".into()));
        }
        Ok(mesh)
    }

    pub fn from_subdivision(ps: Arc<PointSet>, t: &Subdivision) -> Result<Mesh> {
        if !t.is_triangulation() {
            return Err(Error::InvalidArgument("expected a triangulation".into()));
        }
        let idx = |p: LatticePoint| {
            ps.index_of(p).ok_or_else(|| Error::InvalidSubdivision(format!("{p} is not a point")))
        };
        let mut tris = Vec::new();
        for c in t.cells() {
            let v = c.vertices();
            tris.push([idx(v[0])?, idx(v[1])?, idx(v[2])?]);
        }
        Mesh::from_triangles(ps, &tris)
    }

    /// Rebuilds a mesh from its set of edges.
    pub fn from_edges(ps: Arc<PointSet>, present: EdgeSet) -> Result<Mesh> {
        let n = ps.len() as u8;
        let mut tris = Vec::new();
        for e in present.iter() {
            if e >= ps.num_edges() {
                return Err(Error::Cache("edge id out of range".into()));
            }
            let (a, b) = ps.ends(e);
            for c in 0..n {
                if c > a && ps.orient(a, b, c) == 1 {
                    let ok = |u, v| ps.edge(u, v).is_some_and(|f| present.contains(f));
                    if ok(a, c) && ok(b, c) {
                        tris.push([a, b, c]);
                    }
                }
            }
        }
        let mesh = Mesh::from_triangles(ps, &tris)?;
        if mesh.present != present {
            return Err(Error::Cache("edge set is not a triangulation".into()));
        }
        Ok(mesh)
    }

    pub fn point_set(&self) -> &Arc<PointSet> {
        &self.ps
    }

    /// The edge set, a canonical key for the triangulation.
    pub fn key(&self) -> EdgeSet {
        self.present
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.present.contains(e)
    }

    /// Opposite vertices `[left, right]` of edge `e`.
    pub fn opposite(&self, e: usize) -> [u8; 2] {
        self.opp[e]
    }

    pub fn is_interior(&self, e: usize) -> bool {
        self.present.contains(e) && !self.opp[e].contains(&NONE)
    }

    /// Counterclockwise triangles, each listed once starting at its smallest vertex.
    pub fn triangles(&self) -> Vec<[u8; 3]> {
        let mut out = Vec::new();
        for e in self.present.iter() {
            let (a, b) = self.ps.ends(e);
            let c = self.opp[e][0];
            if c != NONE && c > a {
                out.push([a, b, c]);
            }
        }
        out
    }

    pub fn is_flippable(&self, e: usize) -> bool {
        if !self.is_interior(e) {
            return false;
        }
        let (a, b) = self.ps.ends(e);
        let [c, d] = self.opp[e];
        self.ps.orient(c, d, a) < 0 && self.ps.orient(c, d, b) > 0
    }

    /// Flips edge `e` and returns the id of the new diagonal.
    pub fn flip(&mut self, e: usize) -> usize {
        debug_assert!(self.is_flippable(e));
        let (a, b) = self.ps.ends(e);
        let [c, d] = self.opp[e];
        let f = self.ps.edge(c, d).expect("diagonal of a unimodular quadrilateral");
        self.replace(a, c, b, d);
        self.replace(b, c, a, d);
        self.replace(a, d, b, c);
        self.replace(b, d, a, c);
        self.present.remove(e);
        self.opp[e] = [NONE; 2];
        self.present.insert(f);
        // a lies to the right of c -> d
        self.opp[f] = if c < d { [b, a] } else { [a, b] };
        f
    }

    fn replace(&mut self, u: u8, v: u8, old: u8, new: u8) {
        let e = self.ps.edge(u, v).unwrap();
        let slot = self.opp[e].iter_mut().find(|x| **x == old).expect("quad edge adjacency");
        *slot = new;
    }

    /// Edges of the quadrilateral around interior edge `e`.
    pub fn quad_edges(&self, e: usize) -> [usize; 4] {
        let (a, b) = self.ps.ends(e);
        let [c, d] = self.opp[e];
        let ed = |u, v| self.ps.edge(u, v).unwrap();
        [ed(a, c), ed(b, c), ed(a, d), ed(b, d)]
    }

    /// True when `e` is interior and its lifted fold is not convex.
    pub fn is_illegal(&self, e: usize) -> bool {
        if !self.is_interior(e) {
            return false;
        }
        let (a, b) = self.ps.ends(e);
        let [c, d] = self.opp[e];
        self.ps.below(a, b, c, d)
    }

    pub fn illegal_edges(&self) -> EdgeSet {
        let mut s = EdgeSet::default();
        for e in self.present.iter() {
            if self.is_illegal(e) {
                s.insert(e);
            }
        }
        s
    }

    /// Interior edges `a-b` whose quadrilateral is a unit parallelogram and
    /// that contain the smallest of the four vertices. Each parallelogram of
    /// a nodal subdivision has exactly one such diagonal.
    pub fn canonical_parallelograms(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for e in self.present.iter() {
            let [c, d] = self.opp[e];
            if c == NONE || d == NONE {
                continue;
            }
            let (a, b) = self.ps.ends(e);
            if a < c && a < d && self.ps.point(a) + self.ps.point(b) == self.ps.point(c) + self.ps.point(d)
            {
                out.push(e);
            }
        }
        out
    }

    /// All interior edges whose quadrilateral is a unit parallelogram.
    pub fn parallelogram_diagonals(&self) -> Vec<usize> {
        self.present
            .iter()
            .filter(|&e| {
                let [c, d] = self.opp[e];
                let (a, b) = self.ps.ends(e);
                c != NONE
                    && d != NONE
                    && self.ps.point(a) + self.ps.point(b) == self.ps.point(c) + self.ps.point(d)
            })
            .collect()
    }

    /// The subdivision obtained by deleting the diagonals `picks`.
    pub fn to_subdivision(&self, picks: &[usize]) -> Subdivision {
        let mut merged = Vec::new();
        let mut cells = Vec::new();
        for &e in picks {
            let (a, b) = self.ps.ends(e);
            let [c, d] = self.opp[e];
            merged.push(sorted_tri(a, b, c));
            merged.push(sorted_tri(a, b, d));
            let p = |i: u8| self.ps.point(i);
            cells.push(Cell::parallelogram([p(a), p(b), p(c), p(d)]).expect("unit parallelogram"));
        }
        for t in self.triangles() {
            if merged.contains(&sorted_tri(t[0], t[1], t[2])) {
                continue;
            }
            let v = t.iter().map(|&i| self.ps.point(i)).collect();
            cells.push(Cell::new(CellKind::Triangle, v).expect("unimodular triangle"));
        }
        cells.sort();
        Subdivision::from_sorted_unchecked(self.ps.polygon.clone(), cells)
    }
}

fn sorted_tri(a: u8, b: u8, c: u8) -> [u8; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

/// Depth-first reverse search over the flip graph.
///
/// The tree is rooted at the regular triangulation of a generic lift of
/// `|p|^2`; the parent of a triangulation is obtained by flipping its
/// smallest illegal edge. No visited set is kept, and the traversal state is
/// just the current triangulation plus an edge cursor.
pub struct ReverseSearch {
    mesh: Mesh,
    illegal: EdgeSet,
    cursor: usize,
    started: bool,
    done: bool,
}

impl ReverseSearch {
    /// Starts from the root reached by Lawson flips from `seed`.
    pub fn new(seed: Mesh) -> ReverseSearch {
        let mut mesh = seed;
        let mut illegal = mesh.illegal_edges();
        while let Some(e) = illegal.first() {
            flip_tracking(&mut mesh, &mut illegal, e);
        }
        ReverseSearch { mesh, illegal, cursor: 0, started: false, done: false }
    }

    /// Resumes at a saved position; `current` was already visited.
    pub fn resume(current: Mesh, cursor: usize) -> ReverseSearch {
        let illegal = current.illegal_edges();
        ReverseSearch { mesh: current, illegal, cursor, started: true, done: false }
    }

    /// Position to pass to [`ReverseSearch::resume`].
    pub fn position(&self) -> (EdgeSet, usize) {
        (self.mesh.key(), self.cursor)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Moves to the next triangulation; false once the tree is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let m = self.mesh.ps.num_edges();
        loop {
            while self.cursor < m {
                let e = self.cursor;
                self.cursor += 1;
                if !self.mesh.present.contains(e) || self.illegal.contains(e) || !self.mesh.is_flippable(e) {
                    continue;
                }
                let f = flip_tracking(&mut self.mesh, &mut self.illegal, e);
                if self.illegal.first() == Some(f) {
                    self.cursor = 0;
                    return true;
                }
                flip_tracking(&mut self.mesh, &mut self.illegal, f);
            }
            let Some(f) = self.illegal.first() else {
                self.done = true;
                return false;
            };
            let e = flip_tracking(&mut self.mesh, &mut self.illegal, f);
            self.cursor = e + 1;
        }
    }
}

fn flip_tracking(mesh: &mut Mesh, illegal: &mut EdgeSet, e: usize) -> usize {
    let f = mesh.flip(e);
    illegal.remove(e);
    for g in mesh.quad_edges(f).into_iter().chain([f]) {
        if mesh.is_illegal(g) {
            illegal.insert(g);
        } else {
            illegal.remove(g);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::placing_triangulation_of;

    fn mesh_of(coords: &[(i64, i64)]) -> Mesh {
        let p = LatticePolygon::from_coords(coords).unwrap();
        let ps = PointSet::new(&p).unwrap();
        let t = placing_triangulation_of(&p, &p.lattice_points()).unwrap();
        Mesh::from_subdivision(ps, &t).unwrap()
    }

    #[test]
    fn edge_set_bits() {
        let mut s = EdgeSet::default();
        s.insert(3);
        s.insert(200);
        s.insert(511);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 200, 511]);
        assert_eq!(s.first(), Some(3));
        s.remove(3);
        assert_eq!(s.first(), Some(200));
        assert_eq!(EdgeSet::from_hex(&s.to_hex()), Some(s));
    }

    #[test]
    fn flip_is_an_involution() {
        let mut m = mesh_of(&[(0, 0), (3, 0), (0, 3)]);
        let start = m.key();
        let fl: Vec<usize> = (0..m.ps.num_edges()).filter(|&e| m.is_flippable(e)).collect();
        assert!(!fl.is_empty());
        for e in fl {
            let f = m.flip(e);
            let back = m.flip(f);
            assert_eq!(back, e);
            assert_eq!(m.key(), start);
            let rebuilt = Mesh::from_edges(m.ps.clone(), m.key()).unwrap();
            assert_eq!(rebuilt.opp, m.opp);
        }
    }

    #[test]
    fn reverse_search_counts() {
        for (coords, n) in [
            (vec![(0, 0), (1, 0), (1, 1), (0, 1)], 2),
            (vec![(0, 0), (2, 0), (0, 1)], 1),
            (vec![(0, 0), (2, 0), (0, 2)], 4),
            (vec![(0, 0), (2, 0), (2, 2), (0, 2)], 64),
        ] {
            let mut rs = ReverseSearch::new(mesh_of(&coords));
            let mut seen = std::collections::HashSet::new();
            while rs.advance() {
                assert!(seen.insert(rs.mesh().key()));
            }
            assert_eq!(seen.len(), n, "{coords:?}");
        }
    }

    #[test]
    fn reverse_search_resumes() {
        let coords = [(0, 0), (3, 0), (0, 3)];
        let mut full = Vec::new();
        let mut rs = ReverseSearch::new(mesh_of(&coords));
        while rs.advance() {
            full.push(rs.mesh().key());
        }
        let mut rs = ReverseSearch::new(mesh_of(&coords));
        let mut part = Vec::new();
        for _ in 0..7 {
            rs.advance();
            part.push(rs.mesh().key());
        }
        let (edges, cursor) = rs.position();
        let ps = rs.mesh().point_set().clone();
        let mut rs = ReverseSearch::resume(Mesh::from_edges(ps, edges).unwrap(), cursor);
        while rs.advance() {
            part.push(rs.mesh().key());
        }
        assert_eq!(part, full);
    }
}

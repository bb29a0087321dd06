//! Nodal subdivisions of lattice polygons: unimodular triangles and unit
//! parallelograms, flips, coarsening and patching.

mod cover;
mod enumerate;
mod mesh;
mod patch;
mod placing;

pub use cover::exact_cover_triangulations;
pub use enumerate::{
    enumerate_nodal_subdivisions, enumerate_unimodular_triangulations, flip_bfs, for_each_nodal,
    for_each_nodal_in, for_each_triangulation, seed_mesh, EnumerationBudget, NodalView, SweepControl,
    TriangulationRecord,
};
pub use mesh::{EdgeSet, Mesh, PointSet, ReverseSearch, NONE};
pub use patch::{glue_maps, patch, Gluing};
pub use placing::{placing_permutation_triangulations, placing_triangulation, placing_triangulation_of, PlacingState};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Triangle,
    Parallelogram,
}

/// A unimodular triangle or a unit parallelogram, vertices counterclockwise
/// starting from the lexicographically smallest one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    kind: CellKind,
    vertices: Vec<LatticePoint>,
}

impl Cell {
    pub fn new(kind: CellKind, mut vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.len();
        let shown = format!("{vertices:?}");
        let bad = |msg: &str| Error::InvalidSubdivision(format!("{msg}: {shown}"));
        match kind {
            CellKind::Triangle if n != 3 => return Err(bad("triangle needs 3 vertices")),
            CellKind::Parallelogram if n != 4 => return Err(bad("parallelogram needs 4 vertices")),
            _ => {}
        }
        let twice: i64 = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum();
        if twice < 0 {
            vertices.reverse();
        }
        for i in 0..n {
            if orient(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) <= 0 {
                return Err(bad("cell is not strictly convex"));
            }
        }
        match kind {
            CellKind::Triangle if twice.abs() != 1 => return Err(bad("triangle is not unimodular")),
            CellKind::Parallelogram => {
                if twice.abs() != 2 {
                    return Err(bad("parallelogram does not have area 1"));
                }
                if vertices[1] - vertices[0] != vertices[2] - vertices[3] {
                    return Err(bad("opposite edges are not parallel"));
                }
            }
            _ => {}
        }
        let start = (0..n).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        Ok(Cell { kind, vertices })
    }

    pub fn triangle(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Self> {
        Cell::new(CellKind::Triangle, vec![a, b, c])
    }

    /// Unit parallelogram from its four vertices in any order.
    pub fn parallelogram(points: [LatticePoint; 4]) -> Result<Self> {
        let hull = crate::lattice::convex_hull(&points);
        if hull.len() != 4 {
            return Err(Error::InvalidSubdivision(format!(
                "points {points:?} are not in convex position"
            )));
        }
        Cell::new(CellKind::Parallelogram, hull)
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Directed counterclockwise sides.
    pub fn sides(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn sorted_vertices(&self) -> Vec<LatticePoint> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sorted_vertices()
            .cmp(&other.sorted_vertices())
            .then(self.kind.cmp(&other.kind))
    }
}

#[derive(Serialize, Deserialize)]
struct CellRepr {
    kind: CellKind,
    v: Vec<LatticePoint>,
}

/// A nodal subdivision: cells in canonical order (sorted by sorted vertex tuples).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubdivisionRepr", into = "SubdivisionRepr")]
pub struct Subdivision {
    polygon: LatticePolygon,
    cells: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionRepr {
    polygon: Vec<LatticePoint>,
    cells: Vec<CellRepr>,
}

impl TryFrom<SubdivisionRepr> for Subdivision {
    type Error = Error;
    fn try_from(r: SubdivisionRepr) -> Result<Self> {
        let polygon = LatticePolygon::new(r.polygon)?;
        let cells = r.cells.into_iter().map(|c| Cell::new(c.kind, c.v)).collect::<Result<_>>()?;
        Subdivision::new(polygon, cells)
    }
}

impl From<Subdivision> for SubdivisionRepr {
    fn from(s: Subdivision) -> Self {
        SubdivisionRepr {
            polygon: s.polygon.vertices().to_vec(),
            cells: s.cells.into_iter().map(|c| CellRepr { kind: c.kind, v: c.vertices }).collect(),
        }
    }
}

/// An interior edge together with the indices of the two cells sharing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteriorEdge {
    pub ends: (LatticePoint, LatticePoint),
    /// Cell to the left of `ends.0 -> ends.1`.
    pub left: usize,
    pub right: usize,
}

impl Subdivision {
    /// Validates that `cells` tile `polygon` face-to-face.
    pub fn new(polygon: LatticePolygon, mut cells: Vec<Cell>) -> Result<Self> {
        cells.sort();
        let s = Subdivision { polygon, cells };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_sorted_unchecked(polygon: LatticePolygon, cells: Vec<Cell>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] <= w[1]));
        Subdivision { polygon, cells }
    }

    /// The subdivision consisting of the single triangle or parallelogram `polygon`.
    pub fn trivial(polygon: LatticePolygon) -> Result<Self> {
        let kind = match polygon.vertices().len() {
            3 => CellKind::Triangle,
            4 => CellKind::Parallelogram,
            _ => return Err(Error::InvalidSubdivision(format!("{polygon} is not a single cell"))),
        };
        let cell = Cell::new(kind, polygon.vertices().to_vec())?;
        Subdivision::new(polygon, vec![cell])
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of unit parallelograms.
    pub fn node_count(&self) -> usize {
        self.cells.iter().filter(|c| c.kind == CellKind::Parallelogram).count()
    }

    pub fn is_triangulation(&self) -> bool {
        self.node_count() == 0
    }

    /// Structural check: cells lie in the polygon, every interior edge is
    /// shared by exactly two cells with opposite orientations and the
    /// remaining edges are exactly the unit segments of the boundary.
    ///
    /// With all cells positively oriented this makes the cells a tiling.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSubdivision(m));
        let mut area = 0;
        let mut directed: HashMap<(LatticePoint, LatticePoint), usize> = HashMap::new();
        for cell in &self.cells {
            for &v in cell.vertices() {
                if !self.polygon.contains(v) {
                    return bad(format!("vertex {v} lies outside {}", self.polygon));
                }
            }
            area += if cell.kind == CellKind::Triangle { 1 } else { 2 };
            for side in cell.sides() {
                *directed.entry(side).or_default() += 1;
            }
        }
        if area != self.polygon.twice_area() {
            return bad(format!(
                "cell areas sum to {}/2 but the polygon has area {}/2",
                area,
                self.polygon.twice_area()
            ));
        }
        let mut boundary = Vec::new();
        for (a, b) in self.polygon.edges() {
            let steps = (b - a).lattice_length();
            let unit = LatticePoint::new((b - a).x / steps, (b - a).y / steps);
            let mut p = a;
            for _ in 0..steps {
                boundary.push((p, p + unit));
                p = p + unit;
            }
        }
        for &(a, b) in &boundary {
            match directed.get(&(a, b)) {
                Some(1) => {}
                _ => return bad(format!("boundary segment {a}-{b} is not covered exactly once")),
            }
            if directed.contains_key(&(b, a)) {
                return bad(format!("a cell lies outside the polygon along {a}-{b}"));
            }
        }
        for (&(a, b), &n) in &directed {
            if n != 1 {
                return bad(format!("edge {a}-{b} is used {n} times in one direction"));
            }
            let on_boundary = !directed.contains_key(&(b, a));
            if on_boundary && !boundary.contains(&(a, b)) {
                return bad(format!("edge {a}-{b} has a cell on one side only"));
            }
        }
        let mut verts: Vec<LatticePoint> =
            self.cells.iter().flat_map(|c| c.vertices().iter().copied()).collect();
        verts.sort();
        verts.dedup();
        if verts != self.polygon.lattice_points() {
            return bad("some lattice point is not a cell vertex".into());
        }
        Ok(())
    }

    /// Interior edges with their two adjacent cells, sorted by endpoints.
    pub fn interior_edges(&self) -> Vec<InteriorEdge> {
        let mut side_of: HashMap<(LatticePoint, LatticePoint), usize> = HashMap::new();
        for (i, cell) in self.cells.iter().enumerate() {
            for side in cell.sides() {
                side_of.insert(side, i);
            }
        }
        let mut out = Vec::new();
        for (&(a, b), &left) in &side_of {
            if a < b {
                if let Some(&right) = side_of.get(&(b, a)) {
                    out.push(InteriorEdge { ends: (a, b), left, right });
                }
            }
        }
        out.sort_by_key(|e| e.ends);
        out
    }

    /// Canonical text form of the cell list, used as a cache record.
    pub fn cell_key(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            s.push(if c.kind == CellKind::Triangle { 'T' } else { 'P' });
            for v in c.vertices() {
                s.push_str(&format!(" {},{}", v.x, v.y));
            }
        }
        s
    }

    /// Inverse of [`Subdivision::cell_key`].
    pub fn from_cell_key(polygon: LatticePolygon, key: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for part in key.split('|') {
            let mut it = part.split(' ');
            let kind = match it.next() {
                Some("T") => CellKind::Triangle,
                Some("P") => CellKind::Parallelogram,
                _ => return Err(Error::InvalidSubdivision(format!("bad cell record {part:?}"))),
            };
            let mut vs = Vec::new();
            for tok in it {
                let (x, y) = tok
                    .split_once(',')
                    .and_then(|(x, y)| Some((x.parse().ok()?, y.parse().ok()?)))
                    .ok_or_else(|| Error::InvalidSubdivision(format!("bad point {tok:?}")))?;
                vs.push(LatticePoint::new(x, y));
            }
            cells.push(Cell::new(kind, vs)?);
        }
        Subdivision::new(polygon, cells)
    }

    /// Image under a lattice map.
    pub fn map(&self, m: &crate::lattice::UnimodularMap) -> Subdivision {
        let polygon = self.polygon.map(m);
        let mut cells: Vec<Cell> = self
            .cells
            .iter()
            .map(|c| Cell::new(c.kind, c.vertices.iter().map(|&p| m.apply(p)).collect()).unwrap())
            .collect();
        cells.sort();
        Subdivision { polygon, cells }
    }
}

impl fmt::Display for Subdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.polygon, self.cell_key())
    }
}

/// A bistellar flip: the two triangles on `shared_edge` are replaced by the
/// two triangles on `opposite_vertices`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flip {
    pub shared_edge: (LatticePoint, LatticePoint),
    pub opposite_vertices: (LatticePoint, LatticePoint),
}

impl Flip {
    /// True when the quadrilateral is a unit parallelogram.
    pub fn is_parallelogram(&self) -> bool {
        let (a, b) = self.shared_edge;
        let (c, d) = self.opposite_vertices;
        a + b == c + d
    }

    pub fn reversed(&self) -> Flip {
        Flip { shared_edge: self.opposite_vertices, opposite_vertices: self.shared_edge }
    }

    fn quad(&self) -> [LatticePoint; 4] {
        [self.shared_edge.0, self.shared_edge.1, self.opposite_vertices.0, self.opposite_vertices.1]
    }
}

fn require_triangulation(t: &Subdivision) -> Result<()> {
    if t.is_triangulation() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("expected a unimodular triangulation, found parallelograms".into()))
    }
}

/// All flips of a unimodular triangulation: interior edges whose two
/// triangles form a strictly convex quadrilateral.
pub fn flips(t: &Subdivision) -> Result<Vec<Flip>> {
    require_triangulation(t)?;
    let mut out = Vec::new();
    for e in t.interior_edges() {
        let (a, b) = e.ends;
        let c = third_vertex(&t.cells[e.left], a, b);
        let d = third_vertex(&t.cells[e.right], a, b);
        let convex = orient(c, d, a).signum() * orient(c, d, b).signum() == -1;
        if convex {
            out.push(Flip { shared_edge: (a, b), opposite_vertices: (c, d) });
        }
    }
    Ok(out)
}

fn third_vertex(cell: &Cell, a: LatticePoint, b: LatticePoint) -> LatticePoint {
    *cell.vertices().iter().find(|&&v| v != a && v != b).unwrap()
}

/// Applies a flip returned by [`flips`].
pub fn apply_flip(t: &Subdivision, flip: &Flip) -> Result<Subdivision> {
    require_triangulation(t)?;
    let (a, b) = flip.shared_edge;
    let (c, d) = flip.opposite_vertices;
    let old = [sorted3(a, b, c), sorted3(a, b, d)];
    let mut cells: Vec<Cell> =
        t.cells.iter().filter(|cell| !old.contains(&cell.sorted_vertices())).cloned().collect();
    if cells.len() + 2 != t.cells.len() {
        return Err(Error::InvalidArgument(format!("{flip:?} does not match the triangulation")));
    }
    cells.push(Cell::triangle(c, d, a)?);
    cells.push(Cell::triangle(c, d, b)?);
    Subdivision::new(t.polygon.clone(), cells)
}

fn sorted3(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Vec<LatticePoint> {
    let mut v = vec![a, b, c];
    v.sort();
    v
}

/// Adjacent triangle pairs whose union is a unit parallelogram.
pub fn unit_parallelogram_candidates(t: &Subdivision) -> Result<Vec<Flip>> {
    Ok(flips(t)?.into_iter().filter(Flip::is_parallelogram).collect())
}

/// Replaces each picked triangle pair by its parallelogram.
pub fn coarsen(t: &Subdivision, picks: &[Flip]) -> Result<Subdivision> {
    require_triangulation(t)?;
    let mut used: Vec<Vec<LatticePoint>> = Vec::new();
    let mut parallelograms = Vec::new();
    for p in picks {
        if !p.is_parallelogram() {
            return Err(Error::InvalidArgument(format!("{p:?} is not a unit parallelogram")));
        }
        let (a, b) = p.shared_edge;
        let (c, d) = p.opposite_vertices;
        for tri in [sorted3(a, b, c), sorted3(a, b, d)] {
            if used.contains(&tri) {
                return Err(Error::InvalidArgument("picked parallelograms overlap".into()));
            }
            if !t.cells.iter().any(|cell| cell.sorted_vertices() == tri) {
                return Err(Error::InvalidArgument(format!("{p:?} is not in the triangulation")));
            }
            used.push(tri);
        }
        parallelograms.push(Cell::parallelogram(p.quad())?);
    }
    let mut cells: Vec<Cell> =
        t.cells.iter().filter(|cell| !used.contains(&cell.sorted_vertices())).cloned().collect();
    cells.extend(parallelograms);
    Subdivision::new(t.polygon.clone(), cells)
}

/// Splits every parallelogram along the diagonal through its smallest vertex.
pub fn refine(s: &Subdivision) -> Subdivision {
    let mut cells = Vec::new();
    for c in &s.cells {
        match c.kind {
            CellKind::Triangle => cells.push(c.clone()),
            CellKind::Parallelogram => {
                let v = &c.vertices;
                cells.push(Cell::triangle(v[0], v[1], v[2]).unwrap());
                cells.push(Cell::triangle(v[0], v[2], v[3]).unwrap());
            }
        }
    }
    cells.sort();
    Subdivision { polygon: s.polygon.clone(), cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn square_with_diagonal() -> Subdivision {
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let cells = vec![
            Cell::triangle(pt(0, 0), pt(1, 0), pt(1, 1)).unwrap(),
            Cell::triangle(pt(0, 0), pt(1, 1), pt(0, 1)).unwrap(),
        ];
        Subdivision::new(sq, cells).unwrap()
    }

    #[test]
    fn cell_validation() {
        assert!(Cell::triangle(pt(0, 0), pt(2, 0), pt(0, 1)).is_err());
        assert!(Cell::triangle(pt(0, 0), pt(0, 1), pt(1, 0)).is_ok());
        assert!(Cell::parallelogram([pt(0, 0), pt(1, 0), pt(2, 1), pt(1, 1)]).is_ok());
        assert!(Cell::parallelogram([pt(0, 0), pt(2, 0), pt(2, 1), pt(0, 1)]).is_err());
        assert!(Cell::new(CellKind::Parallelogram, vec![pt(0, 0), pt(1, 0), pt(2, 1), pt(0, 1)])
            .is_err());
    }

    #[test]
    fn validator_rejects_overlap_and_gaps() {
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let overlap = vec![
            Cell::triangle(pt(0, 0), pt(1, 0), pt(1, 1)).unwrap(),
            Cell::triangle(pt(0, 0), pt(1, 0), pt(0, 1)).unwrap(),
        ];
        assert!(Subdivision::new(sq.clone(), overlap).is_err());
        let gap = vec![Cell::triangle(pt(0, 0), pt(1, 0), pt(1, 1)).unwrap()];
        assert!(Subdivision::new(sq, gap).is_err());
        assert_eq!(square_with_diagonal().cells().len(), 2);
    }

    #[test]
    fn flips_and_candidates_on_square() {
        let t = square_with_diagonal();
        let fl = flips(&t).unwrap();
        assert_eq!(fl.len(), 1);
        let back = apply_flip(&apply_flip(&t, &fl[0]).unwrap(), &fl[0].reversed()).unwrap();
        assert_eq!(back, t);
        let cands = unit_parallelogram_candidates(&t).unwrap();
        assert_eq!(cands.len(), 1);
        let s = coarsen(&t, &cands).unwrap();
        assert_eq!(s.node_count(), 1);
        assert_eq!(s.cells().len(), 1);
        assert_eq!(coarsen(&t, &[]).unwrap(), t);
        let r = refine(&s);
        assert!(r.is_triangulation());
        r.validate().unwrap();
    }

    #[test]
    fn thin_triangle_has_no_flips() {
        let p = LatticePolygon::from_coords(&[(0, 0), (2, 0), (0, 1)]).unwrap();
        let t = Subdivision::new(
            p,
            vec![
                Cell::triangle(pt(0, 0), pt(1, 0), pt(0, 1)).unwrap(),
                Cell::triangle(pt(1, 0), pt(2, 0), pt(0, 1)).unwrap(),
            ],
        )
        .unwrap();
        assert!(flips(&t).unwrap().is_empty());
        assert!(unit_parallelogram_candidates(&t).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let t = square_with_diagonal();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"polygon\":[[0,0],[1,0],[1,1],[0,1]],\"cells\":[{\"kind\":\"triangle\""));
        let back: Subdivision = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let key = t.cell_key();
        assert_eq!(Subdivision::from_cell_key(t.polygon().clone(), &key).unwrap(), t);
    }
}

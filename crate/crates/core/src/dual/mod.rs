//! Dual tropical curves of nodal subdivisions and their skeletons.
//!
//! Every unit segment of the subdivision is crossed by one piece of the
//! curve. Pieces are chained through parallelograms, entering by one side
//! and leaving by the opposite one, into strands; a strand ends at a
//! triangle (a trivalent curve vertex) or at the boundary (a ray). Each
//! parallelogram is a node where exactly two strands cross.

mod skeleton;

pub use skeleton::{skeleton_of, skeletonize, Skeleton, SkeletonResult, TrivialKind};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::regularity::HeightCertificate;
use crate::subdivision::{CellKind, NodalView, Subdivision};

const NONE: usize = usize::MAX;

/// Where a strand stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrandEnd {
    /// The curve vertex dual to a triangle, by triangle id.
    Vertex(usize),
    /// A ray leaving through this boundary segment.
    Boundary(LatticePoint, LatticePoint),
}

/// A maximal chain of curve pieces through parallelograms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub ends: [StrandEnd; 2],
    /// Node ids crossed, in order from `ends[0]` to `ends[1]`.
    pub nodes: Vec<usize>,
    /// Subdivision segments crossed, in the same order; each is stored with
    /// its smaller endpoint first.
    pub segments: Vec<(LatticePoint, LatticePoint)>,
}

impl Strand {
    pub fn is_bounded(&self) -> bool {
        self.ends.iter().all(|e| matches!(e, StrandEnd::Vertex(_)))
    }

    pub fn is_free(&self) -> bool {
        self.ends.iter().all(|e| matches!(e, StrandEnd::Boundary(..)))
    }

    pub fn is_ray(&self) -> bool {
        !self.is_bounded() && !self.is_free()
    }
}

/// Combinatorial dual curve. Triangle ids and node ids are indices among
/// the triangles and parallelograms of the subdivision, in cell order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCurve {
    /// Cell index of each triangle vertex.
    pub triangles: Vec<usize>,
    /// Cell index of each node.
    pub nodes: Vec<usize>,
    pub strands: Vec<Strand>,
    /// Tie point of every cell, by cell index, when heights were supplied.
    pub positions: Option<Vec<(BigRational, BigRational)>>,
}

impl DualCurve {
    pub fn bounded_edges(&self) -> impl Iterator<Item = &Strand> {
        self.strands.iter().filter(|s| s.is_bounded())
    }

    pub fn rays(&self) -> impl Iterator<Item = &Strand> {
        self.strands.iter().filter(|s| s.is_ray())
    }

    pub fn free_strands(&self) -> impl Iterator<Item = &Strand> {
        self.strands.iter().filter(|s| s.is_free())
    }
}

/// Cells and unit segments with their incidences, shared by both entry points.
struct Complex {
    /// `None` for triangles, `Some(node id)` for parallelograms.
    node_of: Vec<Option<usize>>,
    triangle_of: Vec<usize>,
    /// Counterclockwise sides of each cell as segment ids.
    sides: Vec<Vec<usize>>,
    /// The (up to two) cells on each segment.
    seg_cells: Vec<[usize; 2]>,
    seg_ends: Vec<(LatticePoint, LatticePoint)>,
}

impl Complex {
    /// `cells` must be in canonical order: `(kind, ccw vertices)`.
    fn new(cells: &[(CellKind, Vec<LatticePoint>)]) -> Complex {
        let mut seg_id: HashMap<(LatticePoint, LatticePoint), usize> = HashMap::new();
        let mut seg_cells = Vec::new();
        let mut seg_ends = Vec::new();
        let mut sides = Vec::with_capacity(cells.len());
        let mut node_of = Vec::with_capacity(cells.len());
        let mut triangle_of = Vec::with_capacity(cells.len());
        let (mut nt, mut nn) = (0, 0);
        for (ci, (kind, v)) in cells.iter().enumerate() {
            match kind {
                CellKind::Triangle => {
                    node_of.push(None);
                    triangle_of.push(nt);
                    nt += 1;
                }
                CellKind::Parallelogram => {
                    node_of.push(Some(nn));
                    triangle_of.push(NONE);
                    nn += 1;
                }
            }
            let k = v.len();
            let mut ss = Vec::with_capacity(k);
            for i in 0..k {
                let (a, b) = (v[i], v[(i + 1) % k]);
                let key = (a.min(b), a.max(b));
                let id = *seg_id.entry(key).or_insert_with(|| {
                    seg_cells.push([NONE, NONE]);
                    seg_ends.push(key);
                    seg_ends.len() - 1
                });
                let slot = if seg_cells[id][0] == NONE { 0 } else { 1 };
                seg_cells[id][slot] = ci;
                ss.push(id);
            }
            sides.push(ss);
        }
        Complex { node_of, triangle_of, sides, seg_cells, seg_ends }
    }

    /// Follows the curve from segment `s` into `cell` until it stops.
    fn walk(&self, mut s: usize, mut cell: usize, segs: &mut Vec<usize>, nodes: &mut Vec<usize>) -> StrandEnd {
        loop {
            if cell == NONE {
                let (a, b) = self.seg_ends[s];
                return StrandEnd::Boundary(a, b);
            }
            let Some(node) = self.node_of[cell] else {
                return StrandEnd::Vertex(self.triangle_of[cell]);
            };
            nodes.push(node);
            let sides = &self.sides[cell];
            let i = sides.iter().position(|&x| x == s).expect("segment is a side of its cell");
            s = sides[(i + 2) % 4];
            segs.push(s);
            let [c0, c1] = self.seg_cells[s];
            cell = if c0 == cell { c1 } else { c0 };
        }
    }

    fn curve(&self) -> DualCurve {
        let mut seen = vec![false; self.seg_ends.len()];
        let mut strands = Vec::new();
        for s in 0..self.seg_ends.len() {
            if seen[s] {
                continue;
            }
            let [c0, c1] = self.seg_cells[s];
            let (mut segs0, mut nodes0) = (Vec::new(), Vec::new());
            let end0 = self.walk(s, c0, &mut segs0, &mut nodes0);
            let (mut segs1, mut nodes1) = (Vec::new(), Vec::new());
            let end1 = self.walk(s, c1, &mut segs1, &mut nodes1);
            segs0.reverse();
            nodes0.reverse();
            segs0.push(s);
            segs0.extend(segs1);
            nodes0.extend(nodes1);
            for &x in &segs0 {
                seen[x] = true;
            }
            let mut st = Strand {
                ends: [end0, end1],
                nodes: nodes0,
                segments: segs0.iter().map(|&x| self.seg_ends[x]).collect(),
            };
            if st.ends[1] < st.ends[0] || (st.ends[1] == st.ends[0] && st.segments.last() < st.segments.first()) {
                st.ends.swap(0, 1);
                st.nodes.reverse();
                st.segments.reverse();
            }
            strands.push(st);
        }
        strands.sort_by(|a, b| (a.ends, &a.segments).cmp(&(b.ends, &b.segments)));
        let triangles = (0..self.node_of.len()).filter(|&c| self.node_of[c].is_none()).collect();
        let nodes = (0..self.node_of.len()).filter(|&c| self.node_of[c].is_some()).collect();
        DualCurve { triangles, nodes, strands, positions: None }
    }
}

/// Solves `(q - p) . x = h_p - h_q` for two independent sides at `p`.
fn tie_point(v: &[LatticePoint], h: &HeightCertificate) -> Result<(BigRational, BigRational)> {
    let height = |p: &LatticePoint| {
        h.heights.get(p).cloned().ok_or_else(|| Error::InvalidArgument(format!("no height for {p}")))
    };
    let (p, q, r) = (v[0], v[1], v[v.len() - 1]);
    let (hp, hq, hr) = (height(&p)?, height(&q)?, height(&r)?);
    let (u, w) = (q - p, r - p);
    let det = u.x * w.y - u.y * w.x;
    if det == 0 {
        return Err(Error::InvalidSubdivision("degenerate cell".into()));
    }
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    let (b1, b2) = (&hp - hq, &hp - hr);
    let x = (&b1 * int(w.y) - &b2 * int(u.y)) / int(det);
    let y = (&b2 * int(u.x) - &b1 * int(w.x)) / int(det);
    Ok((x, y))
}

/// The dual curve of `s`; with heights, every cell also gets its tie point.
pub fn dualize(s: &Subdivision, heights: Option<&HeightCertificate>) -> Result<DualCurve> {
    let cells: Vec<(CellKind, Vec<LatticePoint>)> = s.cells().iter().map(|c| (c.kind(), c.vertices().to_vec())).collect();
    let mut curve = Complex::new(&cells).curve();
    if let Some(h) = heights {
        let pos = cells.iter().map(|(_, v)| tie_point(v, h)).collect::<Result<Vec<_>>>()?;
        // the tie point of a cell must not be beaten by any other monomial
        for ((_, v), (x, y)) in cells.iter().zip(&pos) {
            let value = |p: &LatticePoint| &h.heights[p] + BigRational::from_integer(p.x.into()) * x + BigRational::from_integer(p.y.into()) * y;
            let top = value(&v[0]);
            if h.heights.keys().any(|p| value(p) > top) || v.iter().any(|p| value(p) != top) {
                return Err(Error::InvalidArgument("heights do not induce this subdivision".into()));
            }
        }
        curve.positions = Some(pos);
    }
    Ok(curve)
}

/// The dual curve of a nodal view, without building the subdivision. Gives
/// the same curve as [`dualize`] on `view.to_subdivision()`.
pub fn dualize_nodal(view: &NodalView) -> DualCurve {
    let ps = view.mesh.point_set();
    let p = |i: u8| ps.point(i);
    let mut merged: Vec<[u8; 3]> = Vec::with_capacity(2 * view.picks.len());
    let mut cells: Vec<(Vec<LatticePoint>, CellKind, Vec<LatticePoint>)> = Vec::new();
    for &e in view.picks {
        let (a, b) = ps.ends(e);
        let [c, d] = view.mesh.opposite(e);
        merged.push(sorted3(a, b, c));
        merged.push(sorted3(a, b, d));
        // opp = [left, right] of a -> b, so a, d, b, c runs counterclockwise
        let mut v = vec![p(a), p(d), p(b), p(c)];
        let start = (0..4).min_by_key(|&i| v[i]).unwrap();
        v.rotate_left(start);
        let mut sorted = v.clone();
        sorted.sort();
        cells.push((sorted, CellKind::Parallelogram, v));
    }
    for t in view.mesh.triangles() {
        let key = sorted3(t[0], t[1], t[2]);
        if merged.contains(&key) {
            continue;
        }
        // triangles() lists each ccw from its smallest index; indices follow point order
        let v = vec![p(t[0]), p(t[1]), p(t[2])];
        cells.push((key.iter().map(|&i| p(i)).collect(), CellKind::Triangle, v));
    }
    cells.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    let cells: Vec<(CellKind, Vec<LatticePoint>)> = cells.into_iter().map(|(_, k, v)| (k, v)).collect();
    Complex::new(&cells).curve()
}

fn sorted3(a: u8, b: u8, c: u8) -> [u8; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

/// Sanity data used by tests and audits: for each node, the strands that
/// cross it.
pub fn node_strands(c: &DualCurve) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); c.nodes.len()];
    for (i, s) in c.strands.iter().enumerate() {
        for &n in &s.nodes {
            out[n].push(i);
        }
    }
    out
}

impl DualCurve {
    /// Total number of node crossings along strands; twice the node count.
    pub fn crossing_count(&self) -> usize {
        self.strands.iter().map(|s| s.nodes.len()).sum()
    }
}

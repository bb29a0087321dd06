//! Lattice points, convex lattice polygons and their integer geometry.

mod catalog;
mod normal_form;

pub use catalog::{enumerate_lattice_polygons, enumerate_maximal_nonhyperelliptic, hyperelliptic_polygon};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn cross(self, other: LatticePoint) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: LatticePoint) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// Number of lattice steps along this vector, i.e. `gcd(|x|, |y|)`.
    pub fn lattice_length(self) -> i64 {
        self.x.gcd(&self.y)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from(v: [i64; 2]) -> Self {
        LatticePoint::new(v[0], v[1])
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from(v: (i64, i64)) -> Self {
        LatticePoint::new(v.0, v.1)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `a b c`; positive when counterclockwise.
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b - a).cross(c - a)
}

/// Convex hull in counterclockwise order without collinear vertices.
///
/// Degenerate inputs return one or two points.
pub fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// An affine lattice automorphism `p -> M p + t` with `det M = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMap {
    pub matrix: [[i64; 2]; 2],
    pub translation: LatticePoint,
}

impl UnimodularMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: LatticePoint) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det != 1 && det != -1 {
            return Err(Error::InvalidArgument(format!("matrix determinant {det} is not ±1")));
        }
        Ok(UnimodularMap { matrix, translation })
    }

    pub fn identity() -> Self {
        UnimodularMap { matrix: [[1, 0], [0, 1]], translation: LatticePoint::new(0, 0) }
    }

    pub fn translation(t: LatticePoint) -> Self {
        UnimodularMap { matrix: [[1, 0], [0, 1]], translation: t }
    }

    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn apply_linear(&self, p: LatticePoint) -> LatticePoint {
        let m = &self.matrix;
        LatticePoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        self.apply_linear(p) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        let a = &self.matrix;
        let b = &other.matrix;
        let mut m = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        UnimodularMap { matrix: m, translation: self.apply(other.translation) }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let d = self.det();
        let m = &self.matrix;
        // adjugate divided by ±1
        let inv = [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]];
        let lin = UnimodularMap { matrix: inv, translation: LatticePoint::new(0, 0) };
        let t = -lin.apply_linear(self.translation);
        UnimodularMap { matrix: inv, translation: t }
    }
}

/// Convex hull of the interior lattice points, tagged by dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorHull {
    Empty,
    Point(LatticePoint),
    Segment(LatticePoint, LatticePoint),
    Polygon(LatticePolygon),
}

/// A convex lattice polygon with vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<LatticePoint>,
}

impl TryFrom<PolygonRepr> for LatticePolygon {
    type Error = Error;
    fn try_from(r: PolygonRepr) -> Result<Self> {
        LatticePolygon::new(r.vertices)
    }
}

impl From<LatticePolygon> for PolygonRepr {
    fn from(p: LatticePolygon) -> Self {
        PolygonRepr { vertices: p.vertices }
    }
}

impl LatticePolygon {
    /// Validates that `vertices` form a strictly convex counterclockwise polygon.
    ///
    /// The stored order starts at the lexicographically smallest vertex.
    pub fn new(mut vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
        }
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if orient(a, b, c) <= 0 {
                return Err(Error::InvalidPolygon(format!(
                    "vertices {a} {b} {c} do not turn strictly left"
                )));
            }
        }
        // a strictly left-turning closed walk could still wind more than once
        let start = (0..n).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        let poly = LatticePolygon { vertices };
        if poly.twice_area() <= 0 || convex_hull(&poly.vertices).len() != n {
            return Err(Error::InvalidPolygon("vertices are not in convex position".into()));
        }
        Ok(poly)
    }

    /// Convex hull of arbitrary points; fails if the hull is not two-dimensional.
    pub fn hull(points: &[LatticePoint]) -> Result<Self> {
        let h = convex_hull(points);
        if h.len() < 3 {
            return Err(Error::InvalidPolygon("points do not span a two-dimensional hull".into()));
        }
        Ok(LatticePolygon { vertices: h })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        let pts: Vec<LatticePoint> = coords.iter().map(|&c| c.into()).collect();
        LatticePolygon::hull(&pts)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Directed edges `(v_i, v_{i+1})` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn twice_area(&self) -> i64 {
        self.edges().map(|(a, b)| a.cross(b)).sum()
    }

    pub fn boundary_point_count(&self) -> i64 {
        self.edges().map(|(a, b)| (b - a).lattice_length()).sum()
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p) >= 0)
    }

    pub fn strictly_contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p) > 0)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.contains(p) && !self.strictly_contains(p)
    }

    /// All lattice points of the closed polygon, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        self.lattice_points().into_iter().filter(|&p| self.strictly_contains(p)).collect()
    }

    /// Number of interior lattice points.
    pub fn genus(&self) -> usize {
        let g = self.interior_points().len();
        debug_assert_eq!(g as i64, self.pick_genus());
        g
    }

    /// Genus from Pick's theorem: `A - b/2 + 1`.
    pub fn pick_genus(&self) -> i64 {
        (self.twice_area() - self.boundary_point_count() + 2) / 2
    }

    pub fn interior_hull(&self) -> InteriorHull {
        let interior = self.interior_points();
        hull_of(&interior)
    }

    pub fn is_hyperelliptic(&self) -> Result<bool> {
        match self.interior_hull() {
            InteriorHull::Empty => {
                Err(Error::InvalidArgument("hyperellipticity is undefined for genus 0".into()))
            }
            InteriorHull::Polygon(_) => Ok(false),
            _ => Ok(true),
        }
    }

    pub fn map(&self, m: &UnimodularMap) -> LatticePolygon {
        let pts: Vec<LatticePoint> = self.vertices.iter().map(|&p| m.apply(p)).collect();
        LatticePolygon { vertices: convex_hull(&pts) }
    }

    pub fn translate(&self, t: LatticePoint) -> LatticePolygon {
        self.map(&UnimodularMap::translation(t))
    }

    /// Canonical representative of the lattice-equivalence class.
    pub fn normal_form(&self) -> LatticePolygon {
        normal_form::normal_form(self).0
    }

    /// Normal form together with a map sending `self` onto it.
    pub fn normal_form_with_map(&self) -> (LatticePolygon, UnimodularMap) {
        normal_form::normal_form(self)
    }

    /// Lattice automorphisms of the polygon.
    pub fn automorphisms(&self) -> Vec<UnimodularMap> {
        normal_form::automorphisms(self)
    }

    /// Moves every edge outward by lattice distance one.
    ///
    /// Returns the enlarged polygon only when it is a lattice polygon whose
    /// interior lattice points are exactly the lattice points of `self`.
    pub fn relax(&self) -> Option<LatticePolygon> {
        // half-planes a·x <= b + 1 with a the primitive outward normal
        let lines: Vec<(LatticePoint, i64)> = self
            .edges()
            .map(|(p, q)| {
                let e = q - p;
                let g = e.lattice_length();
                let a = LatticePoint::new(e.y / g, -e.x / g);
                (a, a.dot(p) + 1)
            })
            .collect();
        let mut corners = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, c1) = lines[i];
                let (a2, c2) = lines[j];
                let det = a1.cross(a2);
                if det == 0 {
                    continue;
                }
                let nx = c1 * a2.y - c2 * a1.y;
                let ny = a1.x * c2 - a2.x * c1;
                let feasible = lines.iter().all(|&(a, c)| {
                    let lhs = a.x * nx + a.y * ny;
                    if det > 0 {
                        lhs <= c * det
                    } else {
                        lhs >= c * det
                    }
                });
                if !feasible {
                    continue;
                }
                if nx % det != 0 || ny % det != 0 {
                    return None;
                }
                corners.push(LatticePoint::new(nx / det, ny / det));
            }
        }
        let relaxed = LatticePolygon::hull(&corners).ok()?;
        let mut inner = relaxed.interior_points();
        let mut own = self.lattice_points();
        inner.sort();
        own.sort();
        (inner == own).then_some(relaxed)
    }

    /// Lattice length of edge `i` (from vertex `i` to vertex `i+1`).
    pub fn edge_lattice_length(&self, i: usize) -> i64 {
        let n = self.vertices.len();
        (self.vertices[(i + 1) % n] - self.vertices[i]).lattice_length()
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

fn hull_of(points: &[LatticePoint]) -> InteriorHull {
    let h = convex_hull(points);
    match h.len() {
        0 => InteriorHull::Empty,
        1 => InteriorHull::Point(h[0]),
        2 => InteriorHull::Segment(h[0], h[1]),
        _ => InteriorHull::Polygon(LatticePolygon { vertices: h }),
    }
}

//! Gluing two subdivisions along a boundary edge of lattice length 1.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon, UnimodularMap};
use crate::regularity::check_regular;

use super::Subdivision;

/// Identifies the counterclockwise boundary edge `edge = (a, b)` of the
/// first polygon with the image under `map` of an edge of the second one,
/// traversed as `(b, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub edge: (LatticePoint, LatticePoint),
    pub map: UnimodularMap,
}

fn is_unit_edge(p: &LatticePolygon, a: LatticePoint, b: LatticePoint) -> bool {
    p.edges().any(|e| e == (a, b)) && (b - a).lattice_length() == 1
}

/// Some `w` with `cross(v, w) = 1`, for primitive `v`.
fn complement(v: LatticePoint) -> LatticePoint {
    let eg = v.x.extended_gcd(&v.y);
    debug_assert_eq!(eg.gcd.abs(), 1);
    // x*s + y*t = g, so cross(v, (-t, s)) = g
    LatticePoint::new(-eg.y * eg.gcd, eg.x * eg.gcd)
}

/// Linear map sending `u` to `v` and `w0` to `w`, where `cross(u, w0) = 1`.
fn linear(u: LatticePoint, w0: LatticePoint, v: LatticePoint, w: LatticePoint) -> [[i64; 2]; 2] {
    // M = [v w] * [u w0]^-1, and [u w0]^-1 = [[w0.y, -w0.x], [-u.y, u.x]]
    let inv = [[w0.y, -w0.x], [-u.y, u.x]];
    let cols = [[v.x, w.x], [v.y, w.y]];
    let mut m = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = cols[i][0] * inv[0][j] + cols[i][1] * inv[1][j];
        }
    }
    m
}

fn union_is_convex(p1: &LatticePolygon, p2: &LatticePolygon) -> Option<LatticePolygon> {
    let mut pts = p1.vertices().to_vec();
    pts.extend_from_slice(p2.vertices());
    let hull = LatticePolygon::hull(&pts).ok()?;
    (hull.twice_area() == p1.twice_area() + p2.twice_area()).then_some(hull)
}

/// All gluings of `p2` onto the unit edge `edge` of `p1` whose union is
/// convex, over every unit edge of `p2`, both orientations and all shears.
pub fn glue_maps(p1: &LatticePolygon, edge: (LatticePoint, LatticePoint), p2: &LatticePolygon) -> Result<Vec<Gluing>> {
    let (a, b) = edge;
    if !is_unit_edge(p1, a, b) {
        return Err(Error::InvalidArgument(format!("{a}-{b} is not a boundary edge of lattice length 1")));
    }
    let (lo1, hi1) = p1.bounding_box();
    let (lo2, hi2) = p2.bounding_box();
    let reach = (hi1.x - lo1.x) + (hi1.y - lo1.y) + (hi2.x - lo2.x) + (hi2.y - lo2.y) + 2;
    let mut out = Vec::new();
    for (c, d) in p2.edges() {
        if (d - c).lattice_length() != 1 {
            continue;
        }
        let u = d - c;
        let w0 = complement(u);
        // det +1 sends c to b; det -1 sends c to a
        for (sign, v, from) in [(1, a - b, b), (-1, b - a, a)] {
            let base = complement(v);
            let base = LatticePoint::new(base.x * sign, base.y * sign);
            for t in -reach..=reach {
                let w = LatticePoint::new(base.x + t * v.x, base.y + t * v.y);
                let lin = UnimodularMap::new(linear(u, w0, v, w), LatticePoint::new(0, 0))?;
                let map = UnimodularMap::translation(from - lin.apply_linear(c)).compose(&lin);
                if union_is_convex(p1, &p2.map(&map)).is_some() {
                    out.push(Gluing { edge, map });
                }
            }
        }
    }
    Ok(out)
}

/// The union of `s1` and the image of `s2` under `gluing.map`.
///
/// The result is checked for regularity; a non-regular union is reported as
/// an audit violation.
pub fn patch(s1: &Subdivision, s2: &Subdivision, gluing: &Gluing) -> Result<Subdivision> {
    let (a, b) = gluing.edge;
    if !is_unit_edge(s1.polygon(), a, b) {
        return Err(Error::InvalidArgument(format!("{a}-{b} is not a boundary edge of lattice length 1")));
    }
    let image = s2.map(&gluing.map);
    if !is_unit_edge(image.polygon(), b, a) {
        return Err(Error::InvalidArgument("gluing map does not carry an edge of the second polygon onto the edge".into()));
    }
    if image.polygon().vertices().iter().any(|&q| orient(a, b, q) > 0) {
        return Err(Error::InvalidArgument("glued polygons overlap".into()));
    }
    let polygon = union_is_convex(s1.polygon(), image.polygon())
        .ok_or_else(|| Error::InvalidArgument("glued polygon is not convex".into()))?;
    let mut cells = s1.cells().to_vec();
    cells.extend_from_slice(image.cells());
    let s = Subdivision::new(polygon, cells)?;
    if !check_regular(&s)?.is_regular() {
        return Err(Error::AuditViolation(format!("patched subdivision is not regular: {s}")));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::CellKind;

    fn poly(c: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::from_coords(c).unwrap()
    }

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn two_triangles_make_a_square() {
        let t = Subdivision::trivial(poly(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let gl = glue_maps(t.polygon(), (pt(1, 0), pt(0, 1)), t.polygon()).unwrap();
        assert!(!gl.is_empty());
        let mut squares = 0;
        for g in &gl {
            let s = patch(&t, &t, g).unwrap();
            assert_eq!(s.cells().len(), 2);
            if s.polygon().vertices().len() == 4 {
                squares += 1;
                assert_eq!(s.polygon().twice_area(), 2);
            }
        }
        assert!(squares > 0);
    }

    #[test]
    fn two_parallelograms_make_a_rectangle() {
        let sq = Subdivision::trivial(poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        let g = Gluing { edge: (pt(1, 0), pt(1, 1)), map: UnimodularMap::translation(pt(1, 0)) };
        let s = patch(&sq, &sq, &g).unwrap();
        assert_eq!(*s.polygon(), poly(&[(0, 0), (2, 0), (2, 1), (0, 1)]));
        assert_eq!(s.node_count(), 2);
        assert!(s.cells().iter().all(|c| c.kind() == CellKind::Parallelogram));
    }

    #[test]
    fn bad_gluings_rejected() {
        let sq = Subdivision::trivial(poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        // overlapping
        let g = Gluing { edge: (pt(1, 0), pt(1, 1)), map: UnimodularMap::identity() };
        assert!(patch(&sq, &sq, &g).is_err());
        // not a boundary edge
        let g = Gluing { edge: (pt(0, 0), pt(1, 1)), map: UnimodularMap::translation(pt(1, 0)) };
        assert!(patch(&sq, &sq, &g).is_err());
        // long edge
        let wide = Subdivision::trivial(poly(&[(0, 0), (2, 0), (0, 1)]));
        assert!(wide.is_err());
        let t = poly(&[(0, 0), (2, 0), (0, 1)]);
        assert!(glue_maps(&t, (pt(0, 0), pt(2, 0)), &t).is_err());
    }

    #[test]
    fn glue_maps_all_convex_and_valid() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        let sq = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        for g in glue_maps(&sq, (pt(1, 0), pt(1, 1)), &t).unwrap() {
            let img = t.map(&g.map);
            assert!(img.edges().any(|e| e == (pt(1, 1), pt(1, 0))));
            assert!(union_is_convex(&sq, &img).is_some());
        }
    }
}

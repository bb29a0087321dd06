//! The subdivision induced by a height function: project the upper faces of
//! the lifted point configuration.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{convex_hull, orient, LatticePoint, LatticePolygon};
use crate::subdivision::{Cell, CellKind, Subdivision};

/// Cells of an induced subdivision as arbitrary convex lattice polygons,
/// each given by its counterclockwise vertices; sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubdivision {
    pub polygon: LatticePolygon,
    pub cells: Vec<Vec<LatticePoint>>,
}

impl InducedSubdivision {
    /// True when the cells coincide with those of `s`.
    pub fn matches(&self, s: &Subdivision) -> bool {
        let mut theirs: Vec<Vec<LatticePoint>> = s.cells().iter().map(|c| c.sorted_vertices()).collect();
        theirs.sort();
        let mut ours: Vec<Vec<LatticePoint>> = self
            .cells
            .iter()
            .map(|c| {
                let mut v = c.clone();
                v.sort();
                v
            })
            .collect();
        ours.sort();
        self.polygon == *s.polygon() && ours == theirs
    }

    /// Converts to a nodal subdivision when every cell is a unimodular
    /// triangle or a unit parallelogram.
    pub fn to_subdivision(&self) -> Result<Subdivision> {
        let cells = self
            .cells
            .iter()
            .map(|c| match c.len() {
                3 => Cell::new(CellKind::Triangle, c.clone()),
                4 => Cell::new(CellKind::Parallelogram, c.clone()),
                n => Err(Error::InvalidSubdivision(format!("induced cell with {n} vertices"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Subdivision::new(self.polygon.clone(), cells)
    }
}

/// Upper-hull subdivision of `polygon` for the heights `h`.
///
/// Brute force over all triples of lifted points: a triple spans an upper
/// face when no lifted point lies strictly above its plane. Points strictly
/// below every upper face are left out of the cells.
pub fn subdivision_from_heights(
    polygon: &LatticePolygon,
    h: &BTreeMap<LatticePoint, BigRational>,
) -> Result<InducedSubdivision> {
    let points = polygon.lattice_points();
    let mut den = BigInt::one();
    for p in &points {
        let v = h.get(p).ok_or_else(|| Error::InvalidArgument(format!("no height for {p}")))?;
        den = den.lcm(v.denom());
    }
    let w: Vec<BigInt> = points.iter().map(|p| (&h[p] * BigRational::from_integer(den.clone())).to_integer()).collect();
    let n = points.len();
    let mut faces: BTreeSet<Vec<LatticePoint>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, mut b, mut c) = (i, j, k);
                let mut o = orient(points[a], points[b], points[c]);
                if o == 0 {
                    continue;
                }
                if o < 0 {
                    std::mem::swap(&mut b, &mut c);
                    o = -o;
                }
                let mut on = Vec::new();
                let mut upper = true;
                for l in 0..n {
                    let q = points[l];
                    // o * (w_l - plane(q)), positive when q lifts above the plane
                    let g = BigInt::from(o) * &w[l]
                        - BigInt::from(orient(q, points[b], points[c])) * &w[a]
                        - BigInt::from(orient(points[a], q, points[c])) * &w[b]
                        - BigInt::from(orient(points[a], points[b], q)) * &w[c];
                    if g.is_positive() {
                        upper = false;
                        break;
                    }
                    if g.sign() == num_bigint::Sign::NoSign {
                        on.push(q);
                    }
                }
                if upper {
                    faces.insert(convex_hull(&on));
                }
            }
        }
    }
    Ok(InducedSubdivision { polygon: polygon.clone(), cells: faces.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn flat_square_is_one_cell() {
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let h = sq.lattice_points().into_iter().map(|p| (p, q(0))).collect();
        let s = subdivision_from_heights(&sq, &h).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.to_subdivision().unwrap().node_count(), 1);
    }

    #[test]
    fn lowered_corners_give_diagonal() {
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let h: BTreeMap<_, _> = [((0, 0), 0), ((1, 1), 0), ((1, 0), -1), ((0, 1), -1)]
            .into_iter()
            .map(|(p, v)| (LatticePoint::from(p), q(v)))
            .collect();
        let s = subdivision_from_heights(&sq, &h).unwrap().to_subdivision().unwrap();
        assert_eq!(s.cells().len(), 2);
        for c in s.cells() {
            assert!(c.vertices().contains(&LatticePoint::new(0, 0)));
            assert!(c.vertices().contains(&LatticePoint::new(1, 1)));
        }
    }

    #[test]
    fn missing_height_rejected() {
        let t = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert!(subdivision_from_heights(&t, &BTreeMap::new()).is_err());
    }
}

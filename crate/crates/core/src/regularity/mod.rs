//! Regularity of nodal subdivisions, decided by an exact linear program.
//!
//! Heights `h_p >= 0` are assigned to every lattice point and a margin `eps`
//! is maximized subject to `eps <= 1`. Across every interior edge the affine
//! function of the left cell must exceed the height of an off-edge vertex of
//! the right cell by `eps` (upper hull convention), and each parallelogram is
//! kept flat by a pair of opposite inequalities. Every constraint row has
//! height coefficients summing to zero, so restricting to `h >= 0` loses
//! nothing. The optimum is 1 for regular subdivisions and 0 otherwise, in
//! which case the dual values form a Farkas certificate.

mod heights;
mod simplex;

pub use heights::{subdivision_from_heights, InducedSubdivision};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint};
use crate::rational;
use crate::subdivision::{Cell, CellKind, Subdivision};

use simplex::LpOutcome;

/// Heights lifting every lattice point, with the guaranteed fold margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCertificate {
    pub heights: BTreeMap<LatticePoint, BigRational>,
    pub margin: BigRational,
}

/// Identifies one row of the regularity system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintId {
    /// Strict fold across the interior edge `a-b`, `a < b`.
    Fold(LatticePoint, LatticePoint),
    /// Flatness of parallelogram `cell` (index into the cell list), as the
    /// `<=` half (`upper`) or the `>=` half.
    Flat { cell: usize, upper: bool },
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::Fold(a, b) => write!(f, "fold {},{} {},{}", a.x, a.y, b.x, b.y),
            ConstraintId::Flat { cell, upper: true } => write!(f, "flat+ {cell}"),
            ConstraintId::Flat { cell, upper: false } => write!(f, "flat- {cell}"),
        }
    }
}

impl FromStr for ConstraintId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad constraint id {s:?}"));
        let parts: Vec<&str> = s.split(' ').collect();
        let point = |t: &str| -> Result<LatticePoint> {
            let (x, y) = t.split_once(',').ok_or_else(bad)?;
            Ok(LatticePoint::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
        };
        match parts.as_slice() {
            ["fold", a, b] => Ok(ConstraintId::Fold(point(a)?, point(b)?)),
            ["flat+", k] => Ok(ConstraintId::Flat { cell: k.parse().map_err(|_| bad())?, upper: true }),
            ["flat-", k] => Ok(ConstraintId::Flat { cell: k.parse().map_err(|_| bad())?, upper: false }),
            _ => Err(bad()),
        }
    }
}

/// Nonnegative multipliers whose combination of constraint rows cancels every
/// height and leaves a positive multiple of `eps <= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: BTreeMap<ConstraintId, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular(HeightCertificate),
    NotRegular(FarkasCertificate),
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular(_))
    }

    pub fn heights(&self) -> Option<&HeightCertificate> {
        match self {
            Regularity::Regular(h) => Some(h),
            Regularity::NotRegular(_) => None,
        }
    }
}

/// One inequality `sum coef_p h_p + eps_coef * eps <= 0`.
#[derive(Clone, Debug)]
struct Row {
    id: ConstraintId,
    h: Vec<(LatticePoint, i64)>,
    eps: i64,
}

/// Vertices of a unimodular triangle inside `cell` spanning its affine hull.
fn reference_triangle(cell: &Cell) -> [LatticePoint; 3] {
    let v = cell.vertices();
    match cell.kind() {
        CellKind::Triangle => [v[0], v[1], v[2]],
        CellKind::Parallelogram => [v[0], v[1], v[3]],
    }
}

/// Integer barycentric coordinates of `q` in a unimodular triangle.
fn barycentric(t: [LatticePoint; 3], q: LatticePoint) -> [i64; 3] {
    let o = orient(t[0], t[1], t[2]);
    debug_assert_eq!(o.abs(), 1);
    [orient(q, t[1], t[2]) * o, orient(t[0], q, t[2]) * o, orient(t[0], t[1], q) * o]
}

/// Value at `q` of the affine function through the lifted reference triangle of `cell`.
fn affine_value(cell: &Cell, heights: &BTreeMap<LatticePoint, BigRational>, q: LatticePoint) -> BigRational {
    let t = reference_triangle(cell);
    let l = barycentric(t, q);
    (0..3).map(|k| &heights[&t[k]] * BigRational::from_integer(l[k].into())).sum()
}

fn fold_row(s: &Subdivision, a: LatticePoint, b: LatticePoint, left: usize, right: usize) -> Row {
    let cells = s.cells();
    let q = *cells[right].vertices().iter().find(|&&v| v != a && v != b).unwrap();
    let t = reference_triangle(&cells[left]);
    let l = barycentric(t, q);
    let mut h = vec![(q, 1)];
    for k in 0..3 {
        h.push((t[k], -l[k]));
    }
    Row { id: ConstraintId::Fold(a, b), h, eps: 1 }
}

fn flat_rows(cell: &Cell, k: usize) -> [Row; 2] {
    let v = cell.vertices();
    let up = vec![(v[0], 1), (v[2], 1), (v[1], -1), (v[3], -1)];
    let down = up.iter().map(|&(p, c)| (p, -c)).collect();
    [
        Row { id: ConstraintId::Flat { cell: k, upper: true }, h: up, eps: 0 },
        Row { id: ConstraintId::Flat { cell: k, upper: false }, h: down, eps: 0 },
    ]
}

fn build_rows(s: &Subdivision) -> Vec<Row> {
    let mut rows = Vec::new();
    for e in s.interior_edges() {
        rows.push(fold_row(s, e.ends.0, e.ends.1, e.left, e.right));
    }
    for (k, cell) in s.cells().iter().enumerate() {
        if cell.kind() == CellKind::Parallelogram {
            rows.extend(flat_rows(cell, k));
        }
    }
    rows
}

fn row_for(s: &Subdivision, id: ConstraintId) -> Option<Row> {
    match id {
        ConstraintId::Fold(a, b) => s
            .interior_edges()
            .into_iter()
            .find(|e| e.ends == (a, b))
            .map(|e| fold_row(s, a, b, e.left, e.right)),
        ConstraintId::Flat { cell, upper } => {
            let c = s.cells().get(cell)?;
            if c.kind() != CellKind::Parallelogram {
                return None;
            }
            let [u, d] = flat_rows(c, cell);
            Some(if upper { u } else { d })
        }
    }
}

/// Decides regularity of `s` exactly.
pub fn check_regular(s: &Subdivision) -> Result<Regularity> {
    s.validate()?;
    let points = s.polygon().lattice_points();
    let col: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = points.len();
    let rows = build_rows(s);
    let mut a = Vec::with_capacity(rows.len() + 1);
    for r in &rows {
        let mut line = vec![0i64; n + 1];
        for &(p, c) in &r.h {
            line[col[&p]] += c;
        }
        line[n] = r.eps;
        a.push(line);
    }
    let mut cap = vec![0i64; n + 1];
    cap[n] = 1;
    a.push(cap);
    let mut b = vec![0i64; rows.len()];
    b.push(1);
    let mut c = vec![0i64; n + 1];
    c[n] = 1;
    let LpOutcome::Optimal { value, x, y, .. } = simplex::maximize(&a, &b, &c) else {
        unreachable!("eps is capped and heights only appear in homogeneous rows");
    };
    if value.is_positive() {
        let heights = points.iter().zip(&x[..n]).map(|(&p, v)| (p, v.clone())).collect();
        let cert = HeightCertificate { heights, margin: value };
        debug_assert!(cert.verify(s).is_ok());
        Ok(Regularity::Regular(cert))
    } else {
        let multipliers = rows
            .iter()
            .zip(&y)
            .filter(|(_, v)| !v.is_zero())
            .map(|(r, v)| (r.id, v.clone()))
            .collect();
        let cert = FarkasCertificate { multipliers };
        debug_assert!(cert.verify(s).is_ok());
        Ok(Regularity::NotRegular(cert))
    }
}

impl HeightCertificate {
    /// Re-checks the certificate against `s` directly from the geometry:
    /// parallelograms are flat and every fold is strictly concave, with the
    /// left-cell fold of each interior edge at least `margin`.
    pub fn verify(&self, s: &Subdivision) -> Result<()> {
        let fail = |m: String| Err(Error::AuditViolation(m));
        if !self.margin.is_positive() {
            return fail("margin is not positive".into());
        }
        for p in s.polygon().lattice_points() {
            if !self.heights.contains_key(&p) {
                return fail(format!("no height for {p}"));
            }
        }
        let cells = s.cells();
        for cell in cells {
            if cell.kind() == CellKind::Parallelogram {
                let v = cell.vertices();
                let h = |i: usize| &self.heights[&v[i]];
                if h(0) + h(2) != h(1) + h(3) {
                    return fail(format!("parallelogram {v:?} is not flat"));
                }
            }
        }
        for e in s.interior_edges() {
            let (a, b) = e.ends;
            for (from, to) in [(e.left, e.right), (e.right, e.left)] {
                for &q in cells[to].vertices() {
                    if q == a || q == b {
                        continue;
                    }
                    let gap = affine_value(&cells[from], &self.heights, q) - &self.heights[&q];
                    if !gap.is_positive() {
                        return fail(format!("fold across {a}-{b} is not strictly concave at {q}"));
                    }
                }
            }
            let row = fold_row(s, a, b, e.left, e.right);
            let q = row.h[0].0;
            let gap = affine_value(&cells[e.left], &self.heights, q) - &self.heights[&q];
            if gap < self.margin {
                return fail(format!("fold across {a}-{b} is below the stated margin"));
            }
        }
        Ok(())
    }

    /// Applies `h -> scale * h + affine` (scale > 0), which preserves regularity.
    pub fn transformed(&self, scale: &BigRational, affine: [&BigRational; 3]) -> HeightCertificate {
        let heights = self
            .heights
            .iter()
            .map(|(p, h)| {
                let lin = affine[0] * BigRational::from_integer(p.x.into())
                    + affine[1] * BigRational::from_integer(p.y.into())
                    + affine[2];
                (*p, scale * h + lin)
            })
            .collect();
        HeightCertificate { heights, margin: scale * &self.margin }
    }
}

impl FarkasCertificate {
    /// Rebuilds each referenced row from `s` and checks that the weighted sum
    /// cancels every height while keeping a positive `eps` coefficient.
    pub fn verify(&self, s: &Subdivision) -> Result<()> {
        let fail = |m: String| Err(Error::AuditViolation(m));
        let mut total: BTreeMap<LatticePoint, BigRational> = BTreeMap::new();
        let mut eps = BigRational::zero();
        for (&id, y) in &self.multipliers {
            if y.is_negative() {
                return fail(format!("multiplier of {id} is negative"));
            }
            let Some(row) = row_for(s, id) else {
                return fail(format!("constraint {id} does not exist in this subdivision"));
            };
            for (p, c) in row.h {
                *total.entry(p).or_insert_with(BigRational::zero) += y * BigRational::from_integer(c.into());
            }
            eps += y * BigRational::from_integer(row.eps.into());
        }
        if let Some((p, _)) = total.iter().find(|(_, v)| !v.is_zero()) {
            return fail(format!("combination leaves a nonzero coefficient on {p}"));
        }
        if !eps.is_positive() {
            return fail("combination does not bound the margin".into());
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct HeightRepr {
    heights: BTreeMap<String, String>,
    margin: String,
}

impl Serialize for HeightCertificate {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let heights = self
            .heights
            .iter()
            .map(|(p, h)| (format!("{},{}", p.x, p.y), rational::format(h)))
            .collect();
        HeightRepr { heights, margin: rational::format(&self.margin) }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HeightCertificate {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = HeightRepr::deserialize(de)?;
        let mut heights = BTreeMap::new();
        for (k, v) in r.heights {
            let (x, y) = k.split_once(',').ok_or_else(|| D::Error::custom(format!("bad point key {k:?}")))?;
            let p = LatticePoint::new(
                x.trim().parse().map_err(D::Error::custom)?,
                y.trim().parse().map_err(D::Error::custom)?,
            );
            heights.insert(p, rational::parse(&v).map_err(D::Error::custom)?);
        }
        let margin = rational::parse(&r.margin).map_err(D::Error::custom)?;
        Ok(HeightCertificate { heights, margin })
    }
}

#[derive(Serialize, Deserialize)]
struct FarkasRepr {
    multipliers: BTreeMap<String, String>,
}

impl Serialize for FarkasCertificate {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let multipliers =
            self.multipliers.iter().map(|(id, y)| (id.to_string(), rational::format(y))).collect();
        FarkasRepr { multipliers }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FarkasCertificate {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = FarkasRepr::deserialize(de)?;
        let mut multipliers = BTreeMap::new();
        for (k, v) in r.multipliers {
            let id: ConstraintId = k.parse().map_err(D::Error::custom)?;
            multipliers.insert(id, rational::parse(&v).map_err(D::Error::custom)?);
        }
        Ok(FarkasCertificate { multipliers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePolygon;
    use crate::subdivision::{coarsen, unit_parallelogram_candidates};

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Cell {
        Cell::triangle(a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn single_triangle_is_regular() {
        let p = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let s = Subdivision::trivial(p).unwrap();
        let Regularity::Regular(c) = check_regular(&s).unwrap() else { panic!() };
        assert!(c.heights.values().all(|h| h.is_zero()));
        assert_eq!(c.margin, BigRational::from_integer(1.into()));
    }

    #[test]
    fn square_with_diagonal_is_regular() {
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let s = Subdivision::new(sq, vec![tri((0, 0), (1, 0), (1, 1)), tri((0, 0), (1, 1), (0, 1))]).unwrap();
        let Regularity::Regular(c) = check_regular(&s).unwrap() else { panic!() };
        c.verify(&s).unwrap();
        let induced = subdivision_from_heights(s.polygon(), &c.heights).unwrap();
        assert!(induced.matches(&s));
        let one = coarsen(&s, &unit_parallelogram_candidates(&s).unwrap()).unwrap();
        assert!(check_regular(&one).unwrap().is_regular());
    }

    #[test]
    fn pinwheel_is_not_regular() {
        let s = crate::fixtures::pinwheel_triangulation();
        let Regularity::NotRegular(f) = check_regular(&s).unwrap() else { panic!("pinwheel must fail") };
        f.verify(&s).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: FarkasCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let mut broken = f.clone();
        let first = *broken.multipliers.keys().next().unwrap();
        broken.multipliers.remove(&first);
        assert!(broken.verify(&s).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let p = LatticePolygon::from_coords(&[(0, 0), (2, 0), (0, 2)]).unwrap();
        let s = crate::subdivision::placing_triangulation(&p, &p.lattice_points()).unwrap();
        let Regularity::Regular(c) = check_regular(&s).unwrap() else { panic!() };
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"margin\":\"1\""));
        let back: HeightCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn constraint_ids_parse() {
        for id in [ConstraintId::Fold(pt(1, 2), pt(3, -4)), ConstraintId::Flat { cell: 7, upper: false }] {
            assert_eq!(id.to_string().parse::<ConstraintId>().unwrap(), id);
        }
    }
}

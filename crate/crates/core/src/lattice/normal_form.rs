use num_integer::Integer;

use super::{convex_hull, LatticePoint, LatticePolygon, UnimodularMap};

/// The unique map sending `v` to the origin, the edge `v -> next` onto the
/// positive x-axis and `prev` into the open upper half-plane with
/// `0 <= x < y`.
fn anchored_map(v: LatticePoint, next: LatticePoint, prev: LatticePoint) -> UnimodularMap {
    let e = next - v;
    let g = e.lattice_length();
    let (a, b) = (e.x / g, e.y / g);
    let ext = a.extended_gcd(&b);
    debug_assert_eq!(ext.gcd, 1);
    let (s, t) = (ext.x, ext.y);
    // rows (s, t) and (-b, a): sends (a, b) to (1, 0) with det 1
    let mut m = UnimodularMap { matrix: [[s, t], [-b, a]], translation: LatticePoint::new(0, 0) };
    let mut w = m.apply_linear(prev - v);
    if w.y < 0 {
        let flip = UnimodularMap { matrix: [[1, 0], [0, -1]], translation: LatticePoint::new(0, 0) };
        m = flip.compose(&m);
        w = LatticePoint::new(w.x, -w.y);
    }
    let k = -Integer::div_floor(&w.x, &w.y);
    let shear = UnimodularMap { matrix: [[1, k], [0, 1]], translation: LatticePoint::new(0, 0) };
    m = shear.compose(&m);
    let lin = m;
    UnimodularMap { matrix: lin.matrix, translation: -lin.apply_linear(v) }
}

fn candidates(p: &LatticePolygon) -> Vec<(Vec<LatticePoint>, UnimodularMap)> {
    let vs = p.vertices();
    let n = vs.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let v = vs[i];
        let ccw_next = vs[(i + 1) % n];
        let ccw_prev = vs[(i + n - 1) % n];
        for (next, prev) in [(ccw_next, ccw_prev), (ccw_prev, ccw_next)] {
            let m = anchored_map(v, next, prev);
            let mut image: Vec<LatticePoint> = vs.iter().map(|&q| m.apply(q)).collect();
            image.sort();
            out.push((image, m));
        }
    }
    out
}

pub(super) fn normal_form(p: &LatticePolygon) -> (LatticePolygon, UnimodularMap) {
    let (image, m) = candidates(p).into_iter().min_by(|a, b| a.0.cmp(&b.0)).unwrap();
    let nf = LatticePolygon { vertices: convex_hull(&image) };
    (nf, m)
}

pub(super) fn automorphisms(p: &LatticePolygon) -> Vec<UnimodularMap> {
    let cands = candidates(p);
    let best = cands.iter().map(|c| &c.0).min().unwrap().clone();
    let minimal: Vec<&UnimodularMap> =
        cands.iter().filter(|c| c.0 == best).map(|c| &c.1).collect();
    let base = minimal[0];
    let mut out: Vec<UnimodularMap> =
        minimal.iter().map(|m| m.inverse().compose(base)).collect();
    out.sort_by_key(|m| (m.matrix, m.translation));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::from_coords(c).unwrap()
    }

    #[test]
    fn shear_and_translation_invariance() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        let shear = UnimodularMap::new([[1, 1], [0, 1]], LatticePoint::new(0, 0)).unwrap();
        assert_eq!(t.normal_form(), t.map(&shear).normal_form());
        let q = poly(&[(0, 0), (3, 1), (2, 4), (-1, 2)]);
        assert_eq!(q.normal_form(), q.translate(LatticePoint::new(7, -3)).normal_form());
    }

    #[test]
    fn reflection_invariance() {
        let t = poly(&[(0, 0), (4, 0), (0, 4)]);
        let swap = UnimodularMap::new([[0, 1], [1, 0]], LatticePoint::new(0, 0)).unwrap();
        assert_eq!(t.normal_form(), t.map(&swap).normal_form());
    }

    #[test]
    fn distinguishes_inequivalent_polygons() {
        let a = poly(&[(0, 0), (2, 0), (0, 2)]);
        let b = poly(&[(0, 0), (2, 0), (2, 1), (0, 1)]);
        assert_ne!(a.normal_form(), b.normal_form());
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(poly(&[(0, 0), (1, 0), (0, 1)]).automorphisms().len(), 6);
        assert_eq!(poly(&[(0, 0), (3, 0), (3, 3), (0, 3)]).automorphisms().len(), 8);
        assert_eq!(poly(&[(0, 0), (2, 0), (0, 1)]).automorphisms().len(), 2);
        let t = poly(&[(0, 0), (4, 0), (0, 4)]);
        for m in t.automorphisms() {
            assert_eq!(t.map(&m), t);
        }
    }

    #[test]
    fn map_reaches_normal_form() {
        let q = poly(&[(2, 1), (5, 2), (3, 6), (1, 3)]);
        let (nf, m) = q.normal_form_with_map();
        assert_eq!(q.map(&m), nf);
    }

    fn random_map() -> impl Strategy<Value = UnimodularMap> {
        // products of elementary generators stay unimodular
        (prop::collection::vec(0u8..4, 0..12), -9i64..9, -9i64..9).prop_map(|(gens, tx, ty)| {
            let mut m = UnimodularMap::identity();
            for g in gens {
                let e = match g {
                    0 => [[1, 1], [0, 1]],
                    1 => [[1, 0], [1, 1]],
                    2 => [[0, 1], [1, 0]],
                    _ => [[1, -1], [0, 1]],
                };
                m = UnimodularMap { matrix: e, translation: LatticePoint::new(0, 0) }.compose(&m);
            }
            m.translation = LatticePoint::new(tx, ty);
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn normal_form_is_invariant_and_idempotent(m in random_map()) {
            for p in [
                poly(&[(0, 0), (4, 0), (0, 4)]),
                poly(&[(0, 0), (3, 0), (3, 3), (0, 3)]),
                poly(&[(0, 0), (6, 0), (0, 3)]),
                poly(&[(0, 1), (2, 0), (4, 1), (3, 3), (1, 3)]),
            ] {
                let nf = p.normal_form();
                prop_assert_eq!(&p.map(&m).normal_form(), &nf);
                prop_assert_eq!(&nf.normal_form(), &nf);
            }
        }
    }
}

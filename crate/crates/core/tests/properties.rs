//! Randomized invariants over small polygons.

use proptest::prelude::*;

use tcnkit::dual::{dualize, dualize_nodal, skeletonize, SkeletonResult};
use tcnkit::lattice::{LatticePoint, LatticePolygon, UnimodularMap};
use tcnkit::regularity::{check_regular, subdivision_from_heights, Regularity};
use tcnkit::subdivision::{
    coarsen, enumerate_unimodular_triangulations, for_each_nodal, glue_maps, patch, unit_parallelogram_candidates,
    EnumerationBudget, Subdivision, SweepControl,
};

fn polygons() -> Vec<LatticePolygon> {
    [
        &[(0, 0), (2, 0), (0, 2)][..],
        &[(0, 0), (3, 0), (0, 3)],
        &[(0, 0), (2, 0), (2, 2), (0, 2)],
        &[(0, 0), (3, 0), (3, 1), (0, 1)],
        &[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)],
        &[(0, 0), (2, 0), (3, 1), (0, 2)],
    ]
    .iter()
    .map(|c| LatticePolygon::from_coords(c).unwrap())
    .collect()
}

fn triangulations(p: &LatticePolygon) -> Vec<Subdivision> {
    enumerate_unimodular_triangulations(p, &EnumerationBudget::unlimited())
        .unwrap()
        .into_iter()
        .map(|r| r.triangulation)
        .collect()
}

/// A nodal subdivision from a triangulation and a bitmask over its
/// parallelogram candidates, dropping picks that clash with earlier ones.
fn nodal(t: &Subdivision, mask: u32) -> Subdivision {
    let mut picks = Vec::new();
    for (i, f) in unit_parallelogram_candidates(t).unwrap().into_iter().enumerate() {
        if mask & (1 << (i % 32)) != 0 {
            picks.push(f);
            if coarsen(t, &picks).is_err() {
                picks.pop();
            }
        }
    }
    coarsen(t, &picks).unwrap()
}

fn maps() -> impl Strategy<Value = UnimodularMap> {
    (prop::sample::select(vec![[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [-2, 1]], [[-1, 0], [0, 1]], [[2, 1], [1, 1]]]), -5i64..5, -5i64..5)
        .prop_map(|(m, x, y)| UnimodularMap::new(m, LatticePoint::new(x, y)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_verify_and_heights_round_trip(which in 0usize..6, idx in any::<usize>(), mask in any::<u32>()) {
        let p = &polygons()[which];
        let ts = triangulations(p);
        let s = nodal(&ts[idx % ts.len()], mask);
        match check_regular(&s).unwrap() {
            Regularity::Regular(h) => {
                h.verify(&s).unwrap();
                prop_assert!(subdivision_from_heights(p, &h.heights).unwrap().matches(&s));
            }
            Regularity::NotRegular(f) => f.verify(&s).unwrap(),
        }
    }

    #[test]
    fn fast_dual_path_and_genus_identity(which in 0usize..6, nodes in 0usize..3, skip in 0usize..200) {
        let p = &polygons()[which];
        let mut seen = 0;
        for_each_nodal(p, nodes, |v| {
            seen += 1;
            if seen <= skip {
                return SweepControl::Continue;
            }
            let s = v.to_subdivision();
            let fast = dualize_nodal(v);
            assert_eq!(fast, dualize(&s, None).unwrap());
            if let SkeletonResult::Connected(g) = skeletonize(&fast).result {
                assert_eq!(g.genus(), p.genus() as i64 - nodes as i64);
            }
            SweepControl::Stop
        }).unwrap();
    }

    #[test]
    fn patching_regular_pieces_stays_regular(a in 4usize..6, b in 4usize..6, ia in any::<usize>(), ib in any::<usize>(), ma in any::<u32>(), mb in any::<u32>(), pick in any::<usize>()) {
        // the last two polygons are the ones with unit edges
        let ps = polygons();
        let ta = triangulations(&ps[a]);
        let tb = triangulations(&ps[b]);
        let sa = nodal(&ta[ia % ta.len()], ma);
        let sb = nodal(&tb[ib % tb.len()], mb);
        prop_assume!(check_regular(&sa).unwrap().is_regular() && check_regular(&sb).unwrap().is_regular());
        let edges: Vec<_> = sa.polygon().edges().filter(|(u, v)| (*v - *u).lattice_length() == 1).collect();
        prop_assume!(!edges.is_empty());
        let edge = edges[pick % edges.len()];
        let gluings = glue_maps(sa.polygon(), edge, sb.polygon()).unwrap();
        prop_assume!(!gluings.is_empty());
        let g = &gluings[(pick / 7) % gluings.len()];
        let s = patch(&sa, &sb, g).unwrap();
        prop_assert_eq!(s.node_count(), sa.node_count() + sb.node_count());
        prop_assert!(check_regular(&s).unwrap().is_regular());
    }

    #[test]
    fn normal_form_is_a_lattice_invariant(which in 0usize..6, m in maps()) {
        let p = &polygons()[which];
        let q = p.map(&m);
        prop_assert_eq!(q.normal_form(), p.normal_form());
        prop_assert_eq!(q.genus(), p.genus());
    }
}

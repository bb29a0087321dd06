//! Triangulation enumeration against independent oracles.

use tcnkit::lattice::{enumerate_lattice_polygons, LatticePolygon};
use tcnkit::regularity::check_regular;
use tcnkit::subdivision::{
    enumerate_unimodular_triangulations, exact_cover_triangulations, for_each_triangulation,
    placing_permutation_triangulations, EnumerationBudget, Subdivision, SweepControl,
};

fn bfs(p: &LatticePolygon) -> Vec<Subdivision> {
    enumerate_unimodular_triangulations(p, &EnumerationBudget::unlimited())
        .unwrap()
        .into_iter()
        .map(|r| r.triangulation)
        .collect()
}

fn poly(c: &[(i64, i64)]) -> LatticePolygon {
    LatticePolygon::from_coords(c).unwrap()
}

#[test]
fn flip_bfs_matches_exact_cover_up_to_nine_points() {
    for k in 3..=9 {
        for p in enumerate_lattice_polygons(k) {
            assert_eq!(bfs(&p), exact_cover_triangulations(&p).unwrap(), "{p}");
        }
    }
}

#[test]
fn dilated_triangle_counts() {
    // counts for 3 and 4 times the unit triangle, from the exact cover
    for (k, n) in [(3, 79), (4, 7424)] {
        let p = poly(&[(0, 0), (k, 0), (0, k)]);
        assert_eq!(exact_cover_triangulations(&p).unwrap().len(), n);
        let (visited, complete) = for_each_triangulation(&p, |_| SweepControl::Continue).unwrap();
        assert!(complete);
        assert_eq!(visited, n as u64);
    }
    assert_eq!(bfs(&poly(&[(0, 0), (3, 0), (0, 3)])).len(), 79);
}

#[test]
fn placing_triangulations_are_a_subset() {
    for k in 3..=8 {
        for p in enumerate_lattice_polygons(k) {
            let all = bfs(&p);
            for t in placing_permutation_triangulations(&p).unwrap() {
                assert!(all.binary_search_by(|x| x.cells().cmp(t.cells())).is_ok(), "{t}");
            }
        }
    }
}

#[test]
fn hexagon_star_is_regular_but_not_placing() {
    let p = poly(&[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]);
    let placing = placing_permutation_triangulations(&p).unwrap();
    let all = bfs(&p);
    assert_eq!((all.len(), placing.len()), (18, 17));
    let missing: Vec<_> = all.iter().filter(|t| !placing.contains(t)).collect();
    assert_eq!(missing.len(), 1);
    // every triangle of the missing one uses the centre
    let centre = tcnkit::lattice::LatticePoint::new(1, 1);
    assert!(missing[0].cells().iter().all(|c| c.vertices().contains(&centre)));
    assert!(check_regular(missing[0]).unwrap().is_regular());
}

#[test]
fn reverse_search_matches_bfs() {
    for p in [poly(&[(0, 0), (3, 0), (3, 2), (0, 2)]), poly(&[(0, 0), (2, 0), (4, 6)])] {
        let mut keys = Vec::new();
        for_each_triangulation(&p, |m| {
            keys.push(m.to_subdivision(&[]));
            SweepControl::Continue
        })
        .unwrap();
        keys.sort_by(|a, b| a.cells().cmp(b.cells()));
        assert_eq!(keys, bfs(&p));
    }
}

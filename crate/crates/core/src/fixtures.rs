//! Small named graphs and subdivisions used by tests and the CLI.

use crate::driver::StitchBlocks;
use crate::graph::Multigraph;
use crate::lattice::LatticePolygon;
use crate::subdivision::Subdivision;

fn subdivision(vertices: &[(i64, i64)], key: &str) -> Subdivision {
    let p = LatticePolygon::from_coords(vertices).expect("fixture polygon");
    Subdivision::from_cell_key(p, key).expect("fixture subdivision")
}

/// A non-regular triangulation of conv{(0,0),(4,0),(0,4)} that contains the
/// inner triangle conv{(1,1),(2,1),(1,2)} and is invariant under the order-3
/// symmetry of the big triangle.
pub fn pinwheel_triangulation() -> Subdivision {
    subdivision(
        &[(0, 0), (4, 0), (0, 4)],
        "T 0,0 1,2 0,1|T 0,0 1,0 1,1|T 0,0 1,1 1,2|T 0,1 1,2 0,2|T 0,2 1,2 0,3|T 0,3 1,2 0,4|\
         T 0,4 1,2 2,1|T 0,4 2,1 1,3|T 1,0 2,0 1,1|T 1,1 2,1 1,2|T 1,1 2,0 3,0|T 1,1 4,0 2,1|\
         T 1,1 3,0 4,0|T 1,3 2,1 2,2|T 2,1 3,1 2,2|T 2,1 4,0 3,1",
    )
}

pub fn theta() -> Multigraph {
    Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
}

pub fn dumbbell() -> Multigraph {
    Multigraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap()
}

pub fn k4() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

pub fn k33() -> Multigraph {
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    Multigraph::new(6, edges).unwrap()
}

/// Three loops hanging off a common vertex: the only sprawling trivalent
/// graph of genus 3.
pub fn lollipop() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)]).unwrap()
}

/// Two vertices joined by three paths, each running through a doubled edge.
pub fn crowded_genus5() -> Multigraph {
    Multigraph::new(
        8,
        vec![(0, 2), (2, 3), (2, 3), (3, 1), (0, 4), (4, 5), (4, 5), (5, 1), (0, 6), (6, 7), (6, 7), (7, 1)],
    )
    .unwrap()
}

/// The first pair of 1-node blocks found by `find_blocks`, on
/// conv{(0,0),(1,0),(5,10),(4,10)}: the non-planar block first, then the
/// crowded one. Both skeletons have genus 7.
pub fn stitch_blocks() -> StitchBlocks {
    let poly = [(0, 0), (1, 0), (5, 10), (4, 10)];
    let np = subdivision(
        &poly,
        "T 0,0 1,0 1,1|T 0,0 1,1 1,2|T 0,0 1,2 2,5|T 1,0 2,3 1,1|T 1,0 3,5 2,3|T 1,1 2,3 1,2|\
         T 1,2 2,3 2,4|P 1,2 2,4 3,7 2,5|T 2,3 3,6 2,4|T 2,3 3,5 3,6|T 2,4 3,6 3,7|T 2,5 3,7 4,10|\
         T 3,5 4,8 3,6|T 3,5 5,10 4,8|T 3,6 4,8 3,7|T 3,7 4,8 4,9|T 3,7 4,9 4,10|T 4,8 5,10 4,9|\
         T 4,9 5,10 4,10",
    );
    let cr = subdivision(
        &poly,
        "T 0,0 1,0 1,1|T 0,0 1,1 1,2|T 0,0 1,2 2,5|T 1,0 2,3 1,1|T 1,0 3,5 2,3|T 1,1 2,5 1,2|\
         T 1,1 2,3 2,4|T 1,1 2,4 2,5|P 2,3 3,5 3,6 2,4|T 2,4 3,6 2,5|T 2,5 3,6 3,7|T 2,5 3,7 4,10|\
         T 3,5 4,8 3,6|T 3,5 5,10 4,8|T 3,6 4,8 3,7|T 3,7 4,8 4,9|T 3,7 4,9 4,10|T 4,8 5,10 4,9|\
         T 4,9 5,10 4,10",
    );
    StitchBlocks { s: 4, h: 10, np, cr }
}

/// A 1-node subdivision of conv{(0,0),(2,0),(4,4),(0,2)} whose skeleton is
/// K_{3,3}; the first hit of the level-1 sweep.
pub fn k33_witness() -> Subdivision {
    subdivision(
        &[(0, 0), (2, 0), (4, 4), (0, 2)],
        "T 0,0 1,0 0,1|T 0,1 1,1 0,2|T 0,1 1,0 1,1|T 0,2 1,1 1,2|T 0,2 1,2 2,3|T 1,0 2,0 1,1|\
         P 1,1 2,1 2,2 1,2|T 1,1 2,0 2,1|T 1,2 2,2 3,3|T 1,2 3,3 2,3|T 2,0 3,3 2,1|T 2,0 3,2 3,3|\
         T 2,1 3,3 2,2|T 2,3 3,3 4,4|T 3,2 4,4 3,3",
    )
}

/// A 3-node subdivision of conv{(0,0),(2,0),(4,6),(0,2)} whose skeleton is
/// the lollipop; the first hit of the level-3 sweep.
pub fn lollipop_witness() -> Subdivision {
    subdivision(
        &[(0, 0), (2, 0), (4, 6), (0, 2)],
        "T 0,0 1,2 0,1|T 0,0 1,0 1,1|T 0,0 1,1 2,3|T 0,0 3,5 1,2|T 0,0 2,3 3,5|T 0,1 1,2 0,2|\
         T 0,2 1,2 1,3|P 1,0 2,0 2,1 1,1|T 1,1 2,1 2,2|P 1,1 2,2 3,4 2,3|T 1,2 2,4 1,3|\
         T 1,2 3,5 2,4|T 2,0 3,3 2,1|P 2,1 3,3 3,4 2,2|T 2,3 3,4 3,5|T 3,3 4,6 3,4|T 3,4 4,6 3,5",
    )
}

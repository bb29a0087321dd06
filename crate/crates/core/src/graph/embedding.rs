//! Rotation systems, planar embeddings and crowdedness.
//!
//! Dart `2e` sits at the first endpoint of edge `e` and dart `2e + 1` at the
//! second; a loop has both darts at its vertex. Faces are the orbits of
//! "cross the edge, then turn to the next dart in the rotation".

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::Multigraph;

const MAX_ROTATION_SYSTEMS: u64 = 1 << 22;

/// Cyclic order of darts around each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
}

/// A rotation system of a connected graph together with its faces.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub rotation: RotationSystem,
    /// Darts of each face in traversal order.
    pub faces: Vec<Vec<usize>>,
    /// Face index of each dart.
    pub face_of: Vec<usize>,
}

impl Embedding {
    pub fn euler_characteristic(&self, g: &Multigraph) -> i64 {
        g.vertex_count() as i64 - g.edge_count() as i64 + self.faces.len() as i64
    }
}

fn darts_at(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        at[u].push(2 * e);
        at[v].push(2 * e + 1);
    }
    at
}

fn trace(g: &Multigraph, rot: &RotationSystem) -> Embedding {
    let m = 2 * g.edge_count();
    let mut next = vec![0; m];
    for r in &rot.rotation {
        for (i, &d) in r.iter().enumerate() {
            next[d] = r[(i + 1) % r.len()];
        }
    }
    let mut face_of = vec![usize::MAX; m];
    let mut faces = Vec::new();
    for start in 0..m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut face = Vec::new();
        let mut d = start;
        while face_of[d] == usize::MAX {
            face_of[d] = f;
            face.push(d);
            d = next[d ^ 1];
        }
        faces.push(face);
    }
    Embedding { rotation: rot.clone(), faces, face_of }
}

/// Calls `f` with every rotation system of `g`.
fn for_each_rotation(g: &Multigraph, f: &mut dyn FnMut(&RotationSystem) -> bool) -> Result<()> {
    let at = darts_at(g);
    let mut total: u64 = 1;
    for d in &at {
        for k in 2..d.len() as u64 {
            total = total.saturating_mul(k);
        }
    }
    if total > MAX_ROTATION_SYSTEMS {
        return Err(Error::BudgetExceeded(format!("{total} rotation systems")));
    }
    // per vertex, all cyclic orders with the first dart fixed
    let orders: Vec<Vec<Vec<usize>>> = at
        .iter()
        .map(|d| {
            if d.len() <= 2 {
                return vec![d.clone()];
            }
            let mut out = Vec::new();
            let mut rest = d[1..].to_vec();
            permute(&mut rest, 0, &mut |p| {
                let mut o = vec![d[0]];
                o.extend_from_slice(p);
                out.push(o);
            });
            out
        })
        .collect();
    let mut choice = vec![0usize; at.len()];
    loop {
        let rot = RotationSystem { rotation: (0..at.len()).map(|v| orders[v][choice[v]].clone()).collect() };
        if !f(&rot) {
            return Ok(());
        }
        let mut v = 0;
        loop {
            if v == at.len() {
                return Ok(());
            }
            choice[v] += 1;
            if choice[v] < orders[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Every rotation system of the connected graph `g` with Euler
/// characteristic 2.
pub fn planar_embeddings(g: &Multigraph) -> Result<Vec<Embedding>> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("planar embeddings need a connected graph".into()));
    }
    let mut out = Vec::new();
    for_each_rotation(g, &mut |rot| {
        let e = trace(g, rot);
        if e.euler_characteristic(g) == 2 {
            out.push(e);
        }
        true
    })?;
    Ok(out)
}

pub fn is_planar(g: &Multigraph) -> Result<bool> {
    for comp in g.components() {
        let h = g.induced(&comp);
        let mut found = false;
        for_each_rotation(&h, &mut |rot| {
            found = trace(&h, rot).euler_characteristic(&h) == 2;
            !found
        })?;
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn crowded_with_outer(g: &Multigraph, e: &Embedding, outer: usize) -> bool {
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..g.edge_count() {
        let (f1, f2) = (e.face_of[2 * i], e.face_of[2 * i + 1]);
        if f1 == outer || f2 == outer {
            continue;
        }
        if f1 == f2 {
            return true;
        }
        let c = shared.entry((f1.min(f2), f1.max(f2))).or_default();
        *c += 1;
        if *c >= 2 {
            return true;
        }
    }
    false
}

/// True when every planar embedding, with every choice of outer face, has
/// two bounded faces sharing at least two edges or a bounded face meeting
/// itself along an edge. Non-planar input is rejected.
pub fn is_crowded(g: &Multigraph) -> Result<bool> {
    let embeddings = planar_embeddings(g)?;
    if embeddings.is_empty() {
        return Err(Error::InvalidGraph("crowdedness is defined for planar graphs only".into()));
    }
    Ok(embeddings.iter().all(|e| (0..e.faces.len()).all(|outer| crowded_with_outer(g, e, outer))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn planarity_of_named_graphs() {
        assert!(is_planar(&fixtures::theta()).unwrap());
        assert!(is_planar(&fixtures::k4()).unwrap());
        assert!(is_planar(&fixtures::lollipop()).unwrap());
        assert!(!is_planar(&fixtures::k33()).unwrap());
    }

    #[test]
    fn crowdedness_of_named_graphs() {
        assert!(!is_crowded(&fixtures::k4()).unwrap());
        assert!(!is_crowded(&fixtures::theta()).unwrap());
        assert!(is_crowded(&fixtures::crowded_genus5()).unwrap());
        assert!(is_crowded(&fixtures::k33()).is_err());
    }

    #[test]
    fn euler_formula_holds_for_retained_embeddings() {
        for g in crate::graph::enumerate_trivalent(4).unwrap() {
            for e in planar_embeddings(&g).unwrap() {
                assert_eq!(g.vertex_count() as i64 - g.edge_count() as i64 + e.faces.len() as i64, 2);
                assert_eq!(e.faces.iter().map(Vec::len).sum::<usize>(), 2 * g.edge_count());
            }
        }
    }

    #[test]
    fn genus_five_counts() {
        // of the genus-5 trivalent graphs, 4 are non-planar and 7 are crowded
        let gs = crate::graph::enumerate_trivalent(5).unwrap();
        let planar: Vec<_> = gs.iter().filter(|g| is_planar(g).unwrap()).collect();
        assert_eq!(gs.len() - planar.len(), 4);
        assert_eq!(planar.iter().filter(|g| is_crowded(g).unwrap()).count(), 7);
    }

    #[test]
    fn k4_has_two_mirror_embeddings() {
        assert_eq!(planar_embeddings(&fixtures::k4()).unwrap().len(), 2);
    }
}

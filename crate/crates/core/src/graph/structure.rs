//! Bridges, 2-connected components, chains and sprawling graphs.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::error::Result;

use super::{canonical_key, chains, CanonicalKey, Multigraph};

fn component_count_without(g: &Multigraph, skip_edge: Option<usize>, skip_vertex: Option<usize>) -> usize {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if Some(i) == skip_edge || Some(u) == skip_vertex || Some(v) == skip_vertex {
            continue;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
        }
    }
    (0..n).filter(|&v| Some(v) != skip_vertex && find(&mut parent, v) == v).count()
}

/// Edge ids of all bridges.
pub fn bridges(g: &Multigraph) -> Vec<usize> {
    let base = component_count_without(g, None, None);
    (0..g.edge_count())
        .filter(|&i| {
            let (u, v) = g.edges()[i];
            u != v && component_count_without(g, Some(i), None) > base
        })
        .collect()
}

/// A 2-connected component: what remains of a connected piece after all
/// bridges are deleted, if it still has edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// The component, renumbered in the order of `vertices`.
    pub graph: Multigraph,
    /// Vertex ids in the original graph.
    pub vertices: Vec<usize>,
    /// Edge ids in the original graph.
    pub edges: Vec<usize>,
}

pub fn two_connected_components(g: &Multigraph) -> Vec<Block> {
    let bridge_set: HashSet<usize> = bridges(g).into_iter().collect();
    let keep: Vec<usize> = (0..g.edge_count()).filter(|i| !bridge_set.contains(i)).collect();
    let rest = g.edge_subgraph(&keep);
    let mut blocks = Vec::new();
    for comp in rest.components() {
        let inside: HashSet<usize> = comp.iter().copied().collect();
        let edges: Vec<usize> = keep.iter().copied().filter(|&i| inside.contains(&g.edges()[i].0)).collect();
        if edges.is_empty() {
            continue;
        }
        let graph = g.edge_subgraph(&edges).induced(&comp);
        blocks.push(Block { graph, vertices: comp, edges });
    }
    blocks
}

/// True when deleting some vertex leaves three components.
pub fn is_sprawling(g: &Multigraph) -> bool {
    (0..g.vertex_count()).any(|v| component_count_without(g, None, Some(v)) >= 3)
}

fn chain_keys(genus: usize) -> Result<HashSet<CanonicalKey>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, HashSet<CanonicalKey>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(k) = cache.lock().unwrap().get(&genus) {
        return Ok(k.clone());
    }
    let keys = chains(genus).iter().map(canonical_key).collect::<Result<HashSet<_>>>()?;
    cache.lock().unwrap().insert(genus, keys.clone());
    Ok(keys)
}

/// Recognizes chains by comparison with every chain of the same genus. A
/// single cycle counts as the genus-1 chain. Fails for graphs beyond the
/// canonical-form size limit.
pub fn is_chain(g: &Multigraph) -> Result<bool> {
    if !g.is_connected() {
        return Ok(false);
    }
    let genus = g.genus();
    if genus == 1 {
        let s = g.smoothed();
        return Ok(s.vertex_count() == 1 && s.edge_count() == 1);
    }
    if genus < 2 || !g.is_trivalent() {
        return Ok(false);
    }
    let key = canonical_key(&g.without_provenance())?;
    Ok(chain_keys(genus as usize)?.contains(&key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn predicates_on_named_graphs() {
        assert!(is_chain(&fixtures::dumbbell()).unwrap());
        assert!(is_chain(&fixtures::theta()).unwrap());
        assert!(!is_chain(&fixtures::k33()).unwrap());
        assert!(is_sprawling(&fixtures::lollipop()));
        assert!(!is_sprawling(&fixtures::theta()));
        assert!(!is_sprawling(&fixtures::k4()));
        assert!(is_chain(&Multigraph::new(1, vec![(0, 0)]).unwrap()).unwrap());
    }

    #[test]
    fn blocks_of_named_graphs() {
        let d = two_connected_components(&fixtures::dumbbell());
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|b| b.graph.vertex_count() == 1 && b.graph.edges() == [(0, 0)]));
        let t = two_connected_components(&fixtures::theta());
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].graph, fixtures::theta());
        // two thetas joined by a bridge between subdivided edges
        let g = Multigraph::new(6, vec![(0, 1), (0, 1), (0, 2), (2, 1), (2, 3), (3, 4), (3, 5), (4, 5), (4, 5)]).unwrap();
        assert_eq!(bridges(&g), vec![4]);
        let bs = two_connected_components(&g);
        assert_eq!(bs.len(), 2);
        for b in bs {
            assert_eq!(canonical_key(&b.graph.smoothed()).unwrap(), canonical_key(&fixtures::theta()).unwrap());
        }
    }

    #[test]
    fn lollipop_blocks_are_three_loops() {
        let bs = two_connected_components(&fixtures::lollipop());
        assert_eq!(bs.len(), 3);
    }
}

//! Finite multigraphs with loops, and the analyses run on skeletons.

mod canonical;
mod embedding;
mod generate;
mod structure;
mod treewidth;

pub use canonical::{canonical_key, CanonicalKey};
pub use embedding::{is_crowded, is_planar, planar_embeddings, Embedding, RotationSystem};
pub use generate::{chains, enumerate_trivalent};
pub use structure::{bridges, is_chain, is_sprawling, two_connected_components, Block};
pub use treewidth::{lower_bound_formula, tcn_lower_bound, treewidth_exact};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected multigraph. Loops are edges `(v, v)`; parallel edges are
/// repeated. Each edge may carry the ordered list of crossing nodes it
/// passes through, read from its first to its second endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    provenance: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, Vec<usize>>,
}

impl TryFrom<GraphRepr> for Multigraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        let mut prov = vec![Vec::new(); r.edges.len()];
        for (k, v) in r.provenance {
            let i: usize = k.parse().map_err(|_| Error::InvalidGraph(format!("bad edge index {k:?}")))?;
            *prov.get_mut(i).ok_or_else(|| Error::InvalidGraph(format!("edge index {i} out of range")))? = v;
        }
        Multigraph::with_provenance(r.vertices, r.edges.iter().map(|e| (e[0], e[1])).collect(), prov)
    }
}

impl From<Multigraph> for GraphRepr {
    fn from(g: Multigraph) -> Self {
        let provenance = g
            .provenance
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| (i.to_string(), p.clone()))
            .collect();
        GraphRepr { vertices: g.n, edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(), provenance }
    }
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let m = edges.len();
        Self::with_provenance(n, edges, vec![Vec::new(); m])
    }

    /// Edges are stored with the smaller endpoint first; provenance lists of
    /// swapped edges are reversed to keep their reading direction.
    pub fn with_provenance(n: usize, edges: Vec<(usize, usize)>, provenance: Vec<Vec<usize>>) -> Result<Self> {
        if provenance.len() != edges.len() {
            return Err(Error::InvalidGraph("provenance length differs from edge count".into()));
        }
        let mut es = Vec::with_capacity(edges.len());
        let mut ps = Vec::with_capacity(edges.len());
        for ((u, v), mut p) in edges.into_iter().zip(provenance) {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u > v {
                p.reverse();
                es.push((v, u));
            } else {
                es.push((u, v));
            }
            ps.push(p);
        }
        Ok(Multigraph { n, edges: es, provenance: ps })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn provenance(&self) -> &[Vec<usize>] {
        &self.provenance
    }

    /// First Betti number `|E| - |V| + c` with `c` components; equals
    /// `|E| - |V| + 1` for connected graphs.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.n as i64 + self.components().len() as i64
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    /// Incident edge ids per vertex; a loop is listed twice.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        inc
    }

    /// Symmetric edge-multiplicity matrix; loops are counted once on the diagonal.
    pub fn multiplicities(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.n]; self.n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Image under the vertex relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Multigraph::with_provenance(self.n, edges, self.provenance.clone()).expect("permutation")
    }

    pub fn without_provenance(&self) -> Multigraph {
        Multigraph { n: self.n, edges: self.edges.clone(), provenance: vec![Vec::new(); self.edges.len()] }
    }

    /// Subgraph on the given edges; vertices keep their ids.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> Multigraph {
        Multigraph {
            n: self.n,
            edges: edge_ids.iter().map(|&i| self.edges[i]).collect(),
            provenance: edge_ids.iter().map(|&i| self.provenance[i].clone()).collect(),
        }
    }

    /// Subgraph induced on `vertices` (renumbered in the given order),
    /// keeping only edges with both ends inside.
    pub fn induced(&self, vertices: &[usize]) -> Multigraph {
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            idx[v] = i;
        }
        let mut edges = Vec::new();
        let mut prov = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if idx[u] != usize::MAX && idx[v] != usize::MAX {
                edges.push((idx[u], idx[v]));
                prov.push(self.provenance[i].clone());
            }
        }
        Multigraph::with_provenance(vertices.len(), edges, prov).expect("induced subgraph")
    }

    /// Replaces every degree-2 vertex that is not on an isolated cycle by a
    /// single edge, concatenating provenance.
    pub fn smoothed(&self) -> Multigraph {
        let mut g = self.clone();
        loop {
            let inc = g.incidence();
            let Some(v) = (0..g.n).find(|&v| inc[v].len() == 2 && inc[v][0] != inc[v][1]) else {
                return g;
            };
            let (e1, e2) = (inc[v][0], inc[v][1]);
            // read e1 towards v and e2 away from v
            let (a, mut p1) = oriented(&g, e1, v, false);
            let (b, p2) = oriented(&g, e2, v, true);
            p1.extend(p2);
            let mut edges = Vec::new();
            let mut prov = Vec::new();
            for i in 0..g.edges.len() {
                if i != e1 && i != e2 {
                    edges.push(g.edges[i]);
                    prov.push(g.provenance[i].clone());
                }
            }
            edges.push((a, b));
            prov.push(p1);
            let keep: Vec<usize> = (0..g.n).filter(|&w| w != v).collect();
            let mut idx = vec![0; g.n];
            for (i, &w) in keep.iter().enumerate() {
                idx[w] = i;
            }
            let edges = edges.into_iter().map(|(x, y)| (idx[x], idx[y])).collect();
            g = Multigraph::with_provenance(keep.len(), edges, prov).expect("smoothing");
        }
    }
}

/// The far endpoint of edge `e` seen from `v`, with provenance read towards
/// `v` (`away = false`) or away from it.
fn oriented(g: &Multigraph, e: usize, v: usize, away: bool) -> (usize, Vec<usize>) {
    let (x, y) = g.edges[e];
    let mut p = g.provenance[e].clone();
    let (far, from_far) = if x == v { (y, false) } else { (x, true) };
    // stored order runs x -> y
    if from_far == away {
        p.reverse();
    }
    (far, p)
}

//! Skeletons: drop rays, prune leaves, smooth 2-valent vertices.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::Multigraph;
use crate::subdivision::Subdivision;

use super::{dualize, node_strands, DualCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialKind {
    Point,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonResult {
    /// A connected trivalent multigraph of genus at least 2.
    Connected(Multigraph),
    Trivial(TrivialKind),
    /// One skeleton per component of the curve. A component retracting to a
    /// point is a single vertex, a cycle is a single vertex with a loop.
    Disconnected(Vec<Multigraph>),
}

impl SkeletonResult {
    pub fn connected(&self) -> Option<&Multigraph> {
        match self {
            SkeletonResult::Connected(g) => Some(g),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub result: SkeletonResult,
    /// Nodes left out of the provenance because one of their strands was
    /// pruned or is not bounded.
    pub dropped_nodes: Vec<usize>,
    /// Node lists of strands running from boundary to boundary.
    pub free_strands: Vec<Vec<usize>>,
    /// Indices into the curve's strands of the bounded strands that survive
    /// pruning.
    pub skeletal_strands: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn skeletonize(c: &DualCurve) -> Skeleton {
    let n = c.triangles.len();
    // bounded strands as (u, v, strand index)
    let edges: Vec<(usize, usize, usize)> = c
        .strands
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_bounded())
        .map(|(i, s)| match s.ends {
            [super::StrandEnd::Vertex(u), super::StrandEnd::Vertex(v)] => (u, v, i),
            _ => unreachable!(),
        })
        .collect();

    let mut uf = UnionFind((0..n).collect());
    for &(u, v, _) in &edges {
        uf.union(u, v);
    }

    // prune leaves
    let mut alive_edge = vec![true; edges.len()];
    let mut alive_vertex = vec![true; n];
    let mut deg = vec![0usize; n];
    let mut inc = vec![Vec::new(); n];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        deg[u] += 1;
        deg[v] += 1;
        inc[u].push(k);
        inc[v].push(k);
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive_vertex[v] {
            continue;
        }
        alive_vertex[v] = false;
        for &k in &inc[v] {
            if alive_edge[k] {
                alive_edge[k] = false;
                let (a, b, _) = edges[k];
                let w = if a == v { b } else { a };
                deg[w] -= 1;
                if deg[w] <= 1 {
                    stack.push(w);
                }
            }
        }
    }

    let mut surviving = vec![false; c.strands.len()];
    for (k, &(_, _, s)) in edges.iter().enumerate() {
        surviving[s] = alive_edge[k];
    }
    let retained: Vec<bool> = node_strands(c).iter().map(|st| st.iter().all(|&s| surviving[s])).collect();
    let dropped_nodes = (0..c.nodes.len()).filter(|&k| !retained[k]).collect();
    let free_strands: Vec<Vec<usize>> = c.free_strands().map(|s| s.nodes.clone()).collect();

    let roots: BTreeSet<usize> = (0..n).map(|v| uf.find(v)).collect();
    let mut parts = Vec::new();
    for &r in &roots {
        let verts: Vec<usize> = (0..n).filter(|&v| alive_vertex[v] && uf.find(v) == r).collect();
        let mut idx = vec![usize::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            idx[v] = i;
        }
        let mut es = Vec::new();
        let mut prov = Vec::new();
        for (k, &(u, v, s)) in edges.iter().enumerate() {
            if alive_edge[k] && uf.find(u) == r {
                es.push((idx[u], idx[v]));
                prov.push(c.strands[s].nodes.iter().copied().filter(|&x| retained[x]).collect());
            }
        }
        let g = if verts.is_empty() {
            Multigraph::new(1, Vec::new())
        } else {
            Multigraph::with_provenance(verts.len(), es, prov)
        };
        parts.push(g.expect("skeleton edges stay in range").smoothed());
    }
    parts.extend(free_strands.iter().map(|_| Multigraph::new(1, Vec::new()).unwrap()));

    let result = if parts.len() == 1 {
        let g = parts.pop().unwrap();
        match g.genus() {
            0 => SkeletonResult::Trivial(TrivialKind::Point),
            1 => SkeletonResult::Trivial(TrivialKind::Cycle),
            _ => SkeletonResult::Connected(g),
        }
    } else {
        SkeletonResult::Disconnected(parts)
    };
    let skeletal_strands = (0..c.strands.len()).filter(|&s| surviving[s]).collect();
    Skeleton { result, dropped_nodes, free_strands, skeletal_strands }
}

pub fn skeleton_of(s: &Subdivision) -> Result<Skeleton> {
    Ok(skeletonize(&dualize(s, None)?))
}

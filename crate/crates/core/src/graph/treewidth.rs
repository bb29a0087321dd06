//! Exact treewidth by dynamic programming over vertex subsets, and the
//! treewidth lower bound on tropical crossing number.
//!
//! `TW(S)` is the best width of an elimination ordering that eliminates the
//! vertices of `S` first; eliminating `v` after `S` costs `|Q(S, v)|`, the
//! number of vertices outside `S + v` reachable from `v` through `S`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::Multigraph;

const MAX_VERTICES: usize = 14;

/// Adjacency bitmasks of the simple graph underlying `g`.
fn simple_adjacency(g: &Multigraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertex_count()];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    adj
}

fn q_size(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(x) = stack.pop() {
        let mut nb = adj[x] & !seen;
        seen |= nb;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if s >> y & 1 == 1 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out.count_ones()
}

pub fn treewidth_exact(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(Error::BudgetExceeded(format!("treewidth limited to {MAX_VERTICES} vertices, got {n}")));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = simple_adjacency(g);
    let full = (1u32 << n) - 1;
    let mut tw = vec![u32::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            best = best.min(tw[prev as usize].max(q_size(&adj, prev, v)));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// `3/8 (tw - 2)^2 - g + 1/2`, unclamped.
pub fn lower_bound_formula(tw: usize, genus: i64) -> BigRational {
    let d = BigInt::from(tw as i64 - 2);
    BigRational::new(BigInt::from(3) * &d * &d, BigInt::from(8)) - BigRational::from_integer(BigInt::from(genus))
        + BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Treewidth lower bound on the tropical crossing number, clamped at 0.
pub fn tcn_lower_bound(g: &Multigraph) -> Result<BigRational> {
    let b = lower_bound_formula(treewidth_exact(g)?, g.genus());
    Ok(if b < BigRational::zero() { BigRational::zero() } else { b })
}

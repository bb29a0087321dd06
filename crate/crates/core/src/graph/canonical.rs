//! Canonical labeling by colour refinement and individualization.
//!
//! The search tree is explored in full, without automorphism pruning; the
//! key is the smallest upper-triangular multiplicity encoding over all
//! leaves. That is plenty for trivalent graphs on at most 16 vertices.

use std::fmt;

use crate::error::{Error, Result};

use super::Multigraph;

pub const MAX_VERTICES: usize = 16;

/// Byte string that identifies a multigraph up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

pub fn canonical_key(g: &Multigraph) -> Result<CanonicalKey> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(Error::BudgetExceeded(format!("canonical form limited to {MAX_VERTICES} vertices, got {n}")));
    }
    let m = g.multiplicities();
    let mut colours = vec![0usize; n];
    refine(&m, &mut colours);
    let mut best: Option<Vec<u8>> = None;
    search(&m, colours, &mut best);
    let mut key = vec![n as u8];
    key.extend(best.unwrap_or_default());
    Ok(CanonicalKey(key))
}

/// Refines an ordered partition (colours `0..k`) until equitable. Cell
/// order is preserved, so the result depends only on the input colouring
/// up to isomorphism.
fn refine(m: &[Vec<u8>], colours: &mut [usize]) {
    let n = colours.len();
    let mut count = distinct(colours);
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(usize, u8)> = (0..n).filter(|&u| m[v][u] > 0).map(|u| (colours[u], m[v][u])).collect();
                s.sort_unstable();
                (colours[v], s)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        for (v, s) in sigs.drain(..).enumerate() {
            colours[v] = sorted.binary_search(&s).unwrap();
        }
        let next = sorted.len();
        if next == count {
            return;
        }
        count = next;
    }
}

fn distinct(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(m: &[Vec<u8>], colours: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let n = colours.len();
    // first smallest non-singleton cell
    let mut sizes = vec![0usize; n];
    for &c in &colours {
        sizes[c] += 1;
    }
    let target = (0..n).filter(|&c| sizes[c] > 1).min_by_key(|&c| (sizes[c], c));
    let Some(cell) = target else {
        let enc = encode(m, &colours);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    };
    for v in (0..n).filter(|&v| colours[v] == cell) {
        let mut c: Vec<usize> = colours.iter().enumerate().map(|(w, &k)| 2 * k + (k == cell && w != v) as usize).collect();
        refine(m, &mut c);
        search(m, c, best);
    }
}

/// Upper triangle (with diagonal) of the multiplicity matrix after moving
/// each vertex to the position given by its colour.
fn encode(m: &[Vec<u8>], colours: &[usize]) -> Vec<u8> {
    let n = colours.len();
    let mut inv = vec![0; n];
    for (v, &c) in colours.iter().enumerate() {
        inv[c] = v;
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(m[inv[i]][inv[j]]);
        }
    }
    out
}

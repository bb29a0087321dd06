//! Generation of connected trivalent multigraphs and of chains.
//!
//! Genus `g + 1` graphs come from genus `g` ones by two augmentations:
//! subdividing two edge positions and joining the new vertices, or
//! subdividing one edge and hanging a loop off the new vertex. Every
//! connected trivalent multigraph of genus at least 3 reduces by one of the
//! inverse moves, so starting from the theta and the dumbbell reaches all.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{canonical_key, Multigraph};

fn theta() -> Multigraph {
    Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
}

fn dumbbell() -> Multigraph {
    Multigraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap()
}

/// Join a new vertex on edge `i` to a new vertex on edge `j` (possibly the
/// same edge, subdivided twice).
fn join(g: &Multigraph, i: usize, j: usize) -> Multigraph {
    let n = g.vertex_count();
    let (x, y) = (n, n + 1);
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &e)| e).collect();
    let (u1, v1) = g.edges()[i];
    if i == j {
        edges.extend([(u1, x), (x, y), (y, v1), (x, y)]);
    } else {
        let (u2, v2) = g.edges()[j];
        edges.extend([(u1, x), (x, v1), (u2, y), (y, v2), (x, y)]);
    }
    Multigraph::new(n + 2, edges).unwrap()
}

/// Hang a loop off a new vertex on edge `i`.
fn hang(g: &Multigraph, i: usize) -> Multigraph {
    let n = g.vertex_count();
    let (x, y) = (n, n + 1);
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &e)| e).collect();
    let (u, v) = g.edges()[i];
    edges.extend([(u, x), (x, v), (x, y), (y, y)]);
    Multigraph::new(n + 2, edges).unwrap()
}

/// All connected trivalent multigraphs of genus `g` up to isomorphism, in
/// canonical-key order.
pub fn enumerate_trivalent(g: usize) -> Result<Vec<Multigraph>> {
    if !(2..=6).contains(&g) {
        return Err(Error::BudgetExceeded(format!("trivalent enumeration supports genus 2..=6, got {g}")));
    }
    let mut level: BTreeMap<_, Multigraph> = BTreeMap::new();
    for base in [theta(), dumbbell()] {
        level.insert(canonical_key(&base)?, base);
    }
    for _ in 2..g {
        let mut next = BTreeMap::new();
        for h in level.values() {
            let m = h.edge_count();
            for i in 0..m {
                for j in i..m {
                    let c = join(h, i, j);
                    next.entry(canonical_key(&c)?).or_insert(c);
                }
                let c = hang(h, i);
                next.entry(canonical_key(&c)?).or_insert(c);
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// Connector between consecutive cycles of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    Shared,
    Bridge,
}

fn chain(links: &[Link]) -> Multigraph {
    let mut n = 0;
    let mut fresh = || {
        n += 1;
        n - 1
    };
    let mut edges = Vec::new();
    // attachment vertices on the left and right of each cycle
    let mut left: Vec<Vec<usize>> = vec![Vec::new()];
    let mut right: Vec<Vec<usize>> = Vec::new();
    for &l in links {
        match l {
            Link::Shared => {
                let (a, b) = (fresh(), fresh());
                edges.push((a, b));
                right.push(vec![a, b]);
                left.push(vec![a, b]);
            }
            Link::Bridge => {
                let (p, q) = (fresh(), fresh());
                edges.push((p, q));
                right.push(vec![p]);
                left.push(vec![q]);
            }
        }
    }
    right.push(Vec::new());
    for (i, (l, r)) in left.iter().zip(&right).enumerate() {
        let shared_left = i > 0 && links[i - 1] == Link::Shared;
        let shared_right = i < links.len() && links[i] == Link::Shared;
        let cyc: Vec<usize> = l.iter().chain(r).copied().collect();
        let k = cyc.len();
        for s in 0..k {
            let skip = (shared_left && s == 0) || (shared_right && s == l.len());
            if !skip {
                edges.push((cyc[s], cyc[(s + 1) % k]));
            }
        }
    }
    Multigraph::new(n, edges).unwrap()
}

/// All chains of genus `g >= 2` up to isomorphism: one per connector word
/// up to reversal.
pub fn chains(g: usize) -> Vec<Multigraph> {
    assert!(g >= 2);
    let mut out = Vec::new();
    for mask in 0u32..(1 << (g - 1)) {
        let links: Vec<Link> =
            (0..g - 1).map(|i| if mask >> i & 1 == 1 { Link::Bridge } else { Link::Shared }).collect();
        let mut rev = links.clone();
        rev.reverse();
        let code = |ls: &[Link]| ls.iter().map(|&l| l == Link::Bridge).collect::<Vec<bool>>();
        if code(&rev) < code(&links) {
            continue;
        }
        out.push(chain(&links));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_sprawling;
    use std::collections::HashSet;

    #[test]
    fn counts_for_small_genus() {
        let counts: Vec<usize> = (2..=5).map(|g| enumerate_trivalent(g).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 5, 17, 71]);
    }

    #[test]
    fn genus_six_count() {
        assert_eq!(enumerate_trivalent(6).unwrap().len(), 388);
    }

    #[test]
    fn edge_count_and_connectivity() {
        for g in 2..=5 {
            for h in enumerate_trivalent(g).unwrap() {
                assert!(h.is_trivalent() && h.is_connected());
                assert_eq!(h.edge_count(), 3 * g - 3);
                assert_eq!(h.genus(), g as i64);
            }
        }
    }

    /// Independent oracle: scan symmetric multiplicity matrices with loop
    /// weight 2 and row sums 3, dedup by trying every permutation.
    fn matrix_scan(n: usize) -> usize {
        fn rec(m: &mut Vec<Vec<u8>>, cells: &[(usize, usize)], k: usize, out: &mut Vec<Vec<Vec<u8>>>) {
            let n = m.len();
            let deg = |m: &Vec<Vec<u8>>, v: usize| -> u8 { (0..n).map(|u| if u == v { 2 * m[v][v] } else { m[v][u] }).sum() };
            if k == cells.len() {
                if (0..n).all(|v| deg(m, v) == 3) {
                    out.push(m.clone());
                }
                return;
            }
            let (i, j) = cells[k];
            for mult in 0..=3u8 {
                m[i][j] = mult;
                m[j][i] = mult;
                if deg(m, i) <= 3 && deg(m, j) <= 3 {
                    rec(m, cells, k + 1, out);
                }
            }
            m[i][j] = 0;
            m[j][i] = 0;
        }
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut all = Vec::new();
        rec(&mut vec![vec![0; n]; n], &cells, 0, &mut all);
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        let mut seen = HashSet::new();
        for m in all {
            let edges: Vec<(usize, usize)> = cells.iter().flat_map(|&(i, j)| std::iter::repeat_n((i, j), m[i][j] as usize)).collect();
            if !Multigraph::new(n, edges).unwrap().is_connected() {
                continue;
            }
            let best = perms
                .iter()
                .map(|p| cells.iter().map(|&(i, j)| m[p[i]][p[j]]).collect::<Vec<u8>>())
                .min()
                .unwrap();
            seen.insert(best);
        }
        seen.len()
    }

    fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, out);
            p.swap(k, i);
        }
    }

    #[test]
    fn matches_matrix_scan_oracle() {
        assert_eq!(matrix_scan(2), 2);
        assert_eq!(matrix_scan(4), enumerate_trivalent(3).unwrap().len());
        assert_eq!(matrix_scan(6), enumerate_trivalent(4).unwrap().len());
    }

    #[test]
    fn genus_three_has_one_sprawling_graph() {
        let sprawling: Vec<_> = enumerate_trivalent(3).unwrap().into_iter().filter(is_sprawling).collect();
        assert_eq!(sprawling.len(), 1);
    }

    #[test]
    fn chain_shapes() {
        assert_eq!(chains(2).len(), 2);
        // 8 words of length 3, of which 4 are palindromes
        assert_eq!(chains(4).len(), 6);
        for g in 2..=6 {
            for c in chains(g) {
                assert!(c.is_trivalent() && c.is_connected());
                assert_eq!(c.genus(), g as i64);
            }
        }
    }
}

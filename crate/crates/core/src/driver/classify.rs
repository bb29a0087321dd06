//! Troplanarity classification of all trivalent graphs of one genus.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::dual::{dualize_nodal, skeletonize};
use crate::error::{Error, Result};
use crate::graph::{canonical_key, enumerate_trivalent, is_chain, CanonicalKey, Multigraph};
use crate::lattice::{enumerate_maximal_nonhyperelliptic, hyperelliptic_polygon, LatticePolygon};
use crate::regularity::Regularity;
use crate::subdivision::SweepControl;

use super::{sweep_level, verify_witness, SweepOptions, Witness};

#[derive(Clone, Debug)]
pub enum Verdict {
    /// Found as the skeleton of a regular triangulation of a maximal
    /// non-hyperelliptic polygon.
    Troplanar(Witness),
    /// A chain; the witness comes from the hyperelliptic polygon when the
    /// search found one within budget.
    Chain(Option<Witness>),
    NonTroplanar,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub graph: Multigraph,
    pub key: CanonicalKey,
    pub verdict: Verdict,
}

impl ClassEntry {
    pub fn is_troplanar(&self) -> bool {
        !matches!(self.verdict, Verdict::NonTroplanar)
    }
}

/// First regular witness per skeleton key over regular triangulations of
/// `polygons`, keeping the earliest polygon for each key.
fn witnesses(
    polygons: &[LatticePolygon],
    wanted: Option<&[CanonicalKey]>,
    opts: &SweepOptions,
) -> Result<(HashMap<CanonicalKey, Witness>, bool)> {
    let found: Mutex<HashMap<CanonicalKey, (usize, Witness)>> = Mutex::new(HashMap::new());
    let out = sweep_level(polygons, 0, opts, |i, v| {
        let sk = skeletonize(&dualize_nodal(v));
        let Some(h) = sk.result.connected() else {
            return SweepControl::Continue;
        };
        let Ok(key) = canonical_key(h) else {
            return SweepControl::Continue;
        };
        if wanted.is_some_and(|w| !w.contains(&key)) {
            return SweepControl::Continue;
        }
        if found.lock().unwrap().get(&key).is_some_and(|(j, _)| *j <= i) {
            return SweepControl::Continue;
        }
        let s = v.to_subdivision();
        if let Ok(Regularity::Regular(heights)) = crate::regularity::check_regular(&s) {
            let mut f = found.lock().unwrap();
            if f.get(&key).is_none_or(|(j, _)| *j > i) {
                f.insert(key, (i, Witness { subdivision: s, heights, skeleton: h.clone() }));
            }
        }
        SweepControl::Continue
    })?;
    let map = found.into_inner().unwrap().into_iter().map(|(k, (_, w))| (k, w)).collect();
    Ok((map, !out.budget_hit))
}

/// Classifies every connected trivalent graph of genus `g` as troplanar
/// (with a verified witness), a chain, or non-troplanar. The last verdict
/// rests on the maximal-polygon protocol and is only issued after a
/// complete sweep.
pub fn troplanar_classify(g: usize, opts: &SweepOptions) -> Result<Vec<ClassEntry>> {
    if !(3..=5).contains(&g) {
        return Err(Error::InvalidArgument(format!("classification supports genus 3..=5, got {g}")));
    }
    let graphs = enumerate_trivalent(g)?;
    let polygons = enumerate_maximal_nonhyperelliptic(g)?;
    let (mut found, complete) = witnesses(&polygons, None, opts)?;
    if !complete {
        return Err(Error::BudgetExceeded(format!("genus {g} triangulation sweep did not finish")));
    }
    let mut entries = Vec::with_capacity(graphs.len());
    let mut missing_chains = Vec::new();
    for h in graphs {
        let key = canonical_key(&h)?;
        let verdict = match found.remove(&key) {
            Some(w) => Verdict::Troplanar(w),
            None if is_chain(&h)? => {
                missing_chains.push(key.clone());
                Verdict::Chain(None)
            }
            None => Verdict::NonTroplanar,
        };
        entries.push(ClassEntry { graph: h, key, verdict });
    }
    if !missing_chains.is_empty() {
        let (mut chain_found, _) = witnesses(&[hyperelliptic_polygon(g)?], Some(&missing_chains), opts)?;
        for e in &mut entries {
            if let Verdict::Chain(w) = &mut e.verdict {
                *w = chain_found.remove(&e.key);
            }
        }
    }
    for e in &entries {
        if let Verdict::Troplanar(w) | Verdict::Chain(Some(w)) = &e.verdict {
            verify_witness(&e.graph, w, 0)?;
        }
    }
    Ok(entries)
}

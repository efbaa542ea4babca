//! Weak reduction bisimulation by partition refinement.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::Graph;

/// Which observables bisimilar states must agree on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observables {
    /// Reachability of success only.
    Success,
    /// Reachability of success and the weakly reachable barbs.
    SuccessAndBarbs,
}

/// Computes the coarsest weak reduction bisimulation of a finite graph.
///
/// States start in classes agreeing on whether success is reachable and,
/// when `barbs` is given, on the set of weakly reachable barbs. A class is
/// split until all its members reach (in zero or more steps) the same set
/// of classes. Returns the class index of every state.
pub fn weak_partition<S, L, B: Ord + Clone>(
    g: &Graph<S, L>,
    success: &[bool],
    barbs: Option<&[BTreeSet<B>]>,
) -> Vec<usize> {
    let reach = g.reach_sets();
    let n = g.len();
    let mut initial: Vec<(bool, BTreeSet<B>)> = Vec::with_capacity(n);
    for r in &reach {
        let may = r.ones().any(|j| success[j]);
        let mut weak = BTreeSet::new();
        if let Some(bs) = barbs {
            for j in r.ones() {
                weak.extend(bs[j].iter().cloned());
            }
        }
        initial.push((may, weak));
    }
    let mut blocks = number(&initial);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut seen: Vec<usize> = reach[i].ones().map(|j| blocks[j]).collect();
                seen.sort_unstable();
                seen.dedup();
                (blocks[i], seen)
            })
            .collect();
        let next = number(&sigs);
        let before = blocks.iter().copied().max().map_or(0, |m| m + 1);
        let after = next.iter().copied().max().map_or(0, |m| m + 1);
        blocks = next;
        if after == before {
            return blocks;
        }
    }
}

fn number<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut ids: BTreeMap<K, usize> = BTreeMap::new();
    for k in keys {
        let next = ids.len();
        ids.entry(k.clone()).or_insert(next);
    }
    keys.iter().map(|k| ids[k]).collect()
}

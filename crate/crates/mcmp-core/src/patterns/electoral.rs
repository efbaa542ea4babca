//! Electoral-system checking: every maximal execution announces exactly
//! one leader.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::Limits;
use crate::semantics::{barbs, explore_session, Barb, SemanticsError, StateGraph, Step};
use crate::syntax::{Label, ParticipantId, Session};

/// Outcome of an electoral check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElectoralReport {
    /// Every maximal execution announces exactly one leader.
    pub holds: bool,
    /// A maximal execution announcing no leader or several.
    pub counterexample: Option<Vec<Step>>,
    /// The leaders announced along the counterexample.
    pub announced: Vec<ParticipantId>,
}

fn announcers(m: &Session, station: &ParticipantId, elect: &Label) -> BTreeSet<ParticipantId> {
    barbs(m)
        .into_iter()
        .filter_map(|b| match b {
            Barb::Out {
                from, to, label, ..
            } if &to == station && &label == elect => Some(from),
            _ => None,
        })
        .collect()
}

/// Checks that every maximal execution of `m` exhibits, over its states,
/// output barbs `elect` toward `station` from exactly one participant.
pub fn is_electoral(
    m: &Session,
    station: &ParticipantId,
    elect: &Label,
    limits: Limits,
) -> Result<ElectoralReport, SemanticsError> {
    let g = explore_session(m, limits);
    if g.truncated {
        return Err(SemanticsError::Truncated);
    }
    if g.cycle_reachable(&[g.root()]) {
        return Err(SemanticsError::Divergent);
    }
    let local: Vec<BTreeSet<ParticipantId>> = g
        .states
        .iter()
        .map(|s| announcers(s, station, elect))
        .collect();
    let mut seen: BTreeMap<(usize, BTreeSet<ParticipantId>), ()> = BTreeMap::new();
    let mut path = Vec::new();
    let start: BTreeSet<ParticipantId> = local[g.root()].clone();
    match search(&g, &local, g.root(), start, &mut seen, &mut path) {
        None => Ok(ElectoralReport {
            holds: true,
            counterexample: None,
            announced: Vec::new(),
        }),
        Some(leaders) => Ok(ElectoralReport {
            holds: false,
            counterexample: Some(path.iter().map(|&e| g.edges[e].label.clone()).collect()),
            announced: leaders.into_iter().collect(),
        }),
    }
}

fn search(
    g: &StateGraph,
    local: &[BTreeSet<ParticipantId>],
    at: usize,
    leaders: BTreeSet<ParticipantId>,
    seen: &mut BTreeMap<(usize, BTreeSet<ParticipantId>), ()>,
    path: &mut Vec<usize>,
) -> Option<BTreeSet<ParticipantId>> {
    if g.is_terminal(at) {
        return (leaders.len() != 1).then_some(leaders);
    }
    if seen.insert((at, leaders.clone()), ()).is_some() {
        return None;
    }
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.from == at)
        .map(|(k, e)| (k, e.to))
        .collect();
    for (k, to) in edges {
        let mut next = leaders.clone();
        next.extend(local[to].iter().cloned());
        path.push(k);
        if next.len() > 1 {
            complete(g, to, path);
            return Some(next);
        }
        if let Some(bad) = search(g, local, to, next, seen, path) {
            return Some(bad);
        }
        path.pop();
    }
    None
}

fn complete(g: &StateGraph, mut at: usize, path: &mut Vec<usize>) {
    while let Some(k) = g.edges.iter().position(|e| e.from == at) {
        path.push(k);
        at = g.edges[k].to;
    }
}

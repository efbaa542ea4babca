//! Detection of the synchronisation patterns M and star among the steps
//! of a term, electoral-system checking, and the generators used for
//! exhaustive absence sweeps.

mod electoral;
pub mod sweep;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

pub use electoral::{is_electoral, ElectoralReport};

use crate::lcmv::{cmv_steps, CmvState, CmvStep};
use crate::semantics::{apply_step, enabled_steps, Step};
use crate::syntax::{state_key, Session};

/// Which pattern a witness exhibits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    /// Three steps, the middle one conflicting with the outer two.
    M,
    /// Five steps in a cycle of conflicts.
    Star,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::M => "m",
            PatternKind::Star => "star",
        })
    }
}

/// The steps forming a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness<S = Step> {
    /// The pattern.
    pub kind: PatternKind,
    /// The steps, in pattern order.
    pub steps: Vec<S>,
    /// Pairs of positions in `steps` that conflict.
    pub conflict_edges: Vec<(usize, usize)>,
}

/// Steps that consume capabilities.
pub trait Consuming {
    /// The consumed capabilities, sorted.
    fn consumed_caps(&self) -> Vec<u64>;
}

impl Consuming for Step {
    fn consumed_caps(&self) -> Vec<u64> {
        self.consumed.iter().map(|c| u64::from(c.0)).collect()
    }
}

impl Consuming for CmvStep {
    fn consumed_caps(&self) -> Vec<u64> {
        self.consumed.iter().map(|&i| i as u64).collect()
    }
}

fn conflict(a: &[u64], b: &[u64]) -> bool {
    a.iter().any(|c| b.contains(c))
}

/// Finds the first M among `steps`, given a function computing the
/// identity of each step's successor.
pub fn find_m<S: Consuming + Clone, K: Ord>(
    steps: &[S],
    mut successor: impl FnMut(&S) -> K,
) -> Option<PatternWitness<S>> {
    let caps: Vec<Vec<u64>> = steps.iter().map(Consuming::consumed_caps).collect();
    let mut keys: BTreeMap<usize, K> = BTreeMap::new();
    let n = steps.len();
    for b in 0..n {
        for a in 0..n {
            if a == b || !conflict(&caps[a], &caps[b]) {
                continue;
            }
            for c in (a + 1)..n {
                if c == b || !conflict(&caps[c], &caps[b]) || conflict(&caps[a], &caps[c]) {
                    continue;
                }
                for i in [a, b, c] {
                    keys.entry(i).or_insert_with(|| successor(&steps[i]));
                }
                if keys[&a] != keys[&b] && keys[&b] != keys[&c] && keys[&a] != keys[&c] {
                    return Some(PatternWitness {
                        kind: PatternKind::M,
                        steps: alloc::vec![steps[a].clone(), steps[b].clone(), steps[c].clone()],
                        conflict_edges: alloc::vec![(0, 1), (1, 2)],
                    });
                }
            }
        }
    }
    None
}

/// Finds the first star among `steps`.
pub fn find_star<S: Consuming + Clone, K: Ord>(
    steps: &[S],
    mut successor: impl FnMut(&S) -> K,
) -> Option<PatternWitness<S>> {
    let caps: Vec<Vec<u64>> = steps.iter().map(Consuming::consumed_caps).collect();
    let n = steps.len();
    if n < 5 {
        return None;
    }
    let conf: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && conflict(&caps[i], &caps[j]))
                .collect()
        })
        .collect();
    let mut keys: BTreeMap<usize, K> = BTreeMap::new();
    let mut cycle = Vec::with_capacity(5);
    for a in 0..n {
        cycle.clear();
        cycle.push(a);
        if let Some(found) = extend_cycle(&conf, &mut cycle, a, &mut |cyc: &[usize]| {
            for &i in cyc {
                keys.entry(i).or_insert_with(|| successor(&steps[i]));
            }
            (0..5).all(|i| ((i + 1)..5).all(|j| keys[&cyc[i]] != keys[&cyc[j]]))
        }) {
            return Some(PatternWitness {
                kind: PatternKind::Star,
                steps: found.iter().map(|&i| steps[i].clone()).collect(),
                conflict_edges: alloc::vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
            });
        }
    }
    None
}

fn extend_cycle(
    conf: &[Vec<bool>],
    cycle: &mut Vec<usize>,
    first: usize,
    distinct: &mut impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let last = *cycle.last().unwrap_or(&first);
    if cycle.len() == 5 {
        return (conf[last][first] && distinct(cycle)).then(|| cycle.clone());
    }
    for next in (first + 1)..conf.len() {
        if cycle.contains(&next) || !conf[last][next] {
            continue;
        }
        let pos = cycle.len();
        let ok = cycle.iter().enumerate().all(|(k, &s)| {
            let neighbour = k + 1 == pos || (pos == 4 && k == 0);
            neighbour || !conf[s][next]
        });
        if !ok {
            continue;
        }
        cycle.push(next);
        if let Some(found) = extend_cycle(conf, cycle, first, distinct) {
            return Some(found);
        }
        cycle.pop();
    }
    None
}

fn session_successor(m: &Session) -> impl FnMut(&Step) -> Option<crate::syntax::StateKey> + '_ {
    move |s| apply_step(m, s).ok().map(|n| state_key(&n))
}

/// The first M among the enabled steps of a session.
pub fn detect_m(m: &Session) -> Option<PatternWitness> {
    find_m(&enabled_steps(m), session_successor(m))
}

/// The first star among the enabled steps of a session.
pub fn detect_star(m: &Session) -> Option<PatternWitness> {
    find_star(&enabled_steps(m), session_successor(m))
}

/// The first M among the steps of a mixed-sessions state.
pub fn detect_m_cmv(s: &CmvState) -> Option<PatternWitness<CmvStep>> {
    let all = cmv_steps(s);
    let steps: Vec<CmvStep> = all.iter().map(|(st, _)| st.clone()).collect();
    find_m(&steps, |st| {
        all.iter()
            .find(|(x, _)| x == st)
            .map(|(_, next)| next.clone())
    })
}

/// The first M in any reachable state of a session.
pub fn detect_m_reachable(
    m: &Session,
    limits: crate::graph::Limits,
) -> Option<(Session, PatternWitness)> {
    let g = crate::semantics::explore_session(m, limits);
    g.states
        .iter()
        .find_map(|s| detect_m(s).map(|w| (s.clone(), w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcmv::parse_cmv;
    use crate::syntax::parse_session;

    #[test]
    fn chain_of_four_is_an_m() {
        let m = parse_session("role a = b!l role b = a?l + c!l role c = b?l + d!l role d = c?l")
            .unwrap();
        let w = detect_m(&m).unwrap();
        assert_eq!(w.steps.len(), 3);
        assert!(detect_star(&m).is_none());
        assert!(detect_m(&parse_session("role p = 0").unwrap()).is_none());
    }

    #[test]
    fn two_participants_have_no_m() {
        let m = parse_session("role a = b!l + b?k.ok role b = a?l + a!k").unwrap();
        assert!(detect_m(&m).is_none());
    }

    #[test]
    fn five_cycle_is_a_star() {
        let m = parse_session(
            "role a = b!l + e?l role b = c!l + a?l role c = d!l + b?l \
             role d = e!l + c?l role e = a!l + d?l",
        )
        .unwrap();
        let w = detect_star(&m).unwrap();
        assert_eq!(w.steps.len(), 5);
    }

    #[test]
    fn non_linear_mixed_session_has_an_m() {
        let p = parse_cmv(
            "(new x y)(lin x (l!tt.0) | lin y (l?z.(if z then 0 else 0)) \
             | lin x (l!ff.0) | lin y (l?z.(if z then 0 else ok)))",
        )
        .unwrap();
        let s = CmvState::from_program(&p).unwrap();
        assert!(detect_m_cmv(&s).is_some());
    }
}

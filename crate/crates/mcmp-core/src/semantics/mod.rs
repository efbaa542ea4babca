//! Reduction semantics of sessions: steps, exploration, success and barb
//! observables, conflicts between steps and weak bisimulation.

mod bisim;
mod steps;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

pub use bisim::{weak_partition, Observables};
pub use steps::{apply_step, enabled_steps, unfolded, Step, StepKind};

use crate::graph::{explore, Graph, Limits, TransitionSystem};
use crate::syntax::{state_key, Label, ParticipantId, Prefix, Process, Session, StateKey, Value};

/// Errors of the semantic analyses.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    /// The step is not enabled in the session.
    #[error("step {0} is not enabled")]
    StepNotEnabled(alloc::string::String),
    /// Exploration hit a limit, so the answer would be unsound.
    #[error("state space truncated by the exploration limits")]
    Truncated,
    /// The analysed subgraph has an infinite execution.
    #[error("state space contains a cycle")]
    Divergent,
}

/// The explored reduction graph of a session.
pub type StateGraph = Graph<Session, Step>;

/// Sessions as a transition system keyed by structural congruence.
#[derive(Clone, Copy, Debug, Default)]
pub struct SessionSystem;

impl TransitionSystem for SessionSystem {
    type State = Session;
    type Key = StateKey;
    type Label = Step;

    fn key(&self, s: &Session) -> StateKey {
        state_key(s)
    }

    fn successors(&self, s: &Session) -> Vec<(Step, Session)> {
        enabled_steps(s)
            .into_iter()
            .filter_map(|st| apply_step(s, &st).ok().map(|n| (st, n)))
            .collect()
    }
}

/// Breadth-first exploration of the reachable states of a session.
pub fn explore_session(m: &Session, limits: Limits) -> StateGraph {
    explore(&SessionSystem, alloc::vec![m.clone()], limits)
}

/// Explores from several roots at once, sharing states.
pub fn explore_sessions(roots: Vec<Session>, limits: Limits) -> StateGraph {
    explore(&SessionSystem, roots, limits)
}

/// True when some participant is an unguarded `ok`.
pub fn has_success(m: &Session) -> bool {
    unfolded(m).parts().values().any(|p| *p == Process::Success)
}

/// States of the graph that can reach a success state.
pub fn may_succeed_all<S, L>(g: &Graph<S, L>, success: impl Fn(&S) -> bool) -> Vec<bool> {
    let reach = g.reach_sets();
    let ok: Vec<bool> = g.states.iter().map(success).collect();
    reach.iter().map(|r| r.ones().any(|j| ok[j])).collect()
}

/// Some state reachable from `s` is a success state.
pub fn may_succeed(g: &StateGraph, s: usize) -> bool {
    g.reachable(&[s]).ones().any(|j| has_success(&g.states[j]))
}

/// Every maximal execution from `s` passes through a success state.
pub fn must_succeed(g: &StateGraph, s: usize) -> Result<bool, SemanticsError> {
    if g.truncated {
        return Err(SemanticsError::Truncated);
    }
    if g.cycle_reachable(&[s]) {
        return Err(SemanticsError::Divergent);
    }
    let mut memo: Vec<Option<bool>> = alloc::vec![None; g.len()];
    for comp in g.sccs() {
        for i in comp {
            let v = if has_success(&g.states[i]) {
                true
            } else {
                let succ = g.successors(i);
                !succ.is_empty() && succ.iter().all(|&j| memo[j] == Some(true))
            };
            memo[i] = Some(v);
        }
    }
    Ok(memo[s] == Some(true))
}

/// An unguarded communication capability of a session.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Barb {
    /// `from` can send `label(payload)` to `to`.
    Out {
        /// Sender.
        from: ParticipantId,
        /// Receiver.
        to: ParticipantId,
        /// Label.
        label: Label,
        /// Payload.
        payload: Value,
    },
    /// `at` can receive `label` from `from`.
    In {
        /// Receiver.
        at: ParticipantId,
        /// Sender.
        from: ParticipantId,
        /// Label.
        label: Label,
    },
}

/// The unguarded prefixes of a session, after unfolding top-level recursion.
pub fn barbs(m: &Session) -> BTreeSet<Barb> {
    let mut out = BTreeSet::new();
    for (p, proc_) in unfolded(m).parts() {
        if let Process::Choice(c) = proc_ {
            for b in &c.branches {
                match &b.prefix {
                    Prefix::Send { to, label, payload } => {
                        out.insert(Barb::Out {
                            from: p.clone(),
                            to: to.clone(),
                            label: label.clone(),
                            payload: payload.clone(),
                        });
                    }
                    Prefix::Recv { from, label, .. } => {
                        out.insert(Barb::In {
                            at: p.clone(),
                            from: from.clone(),
                            label: label.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Two steps conflict iff they consume a common capability.
pub fn in_conflict(s1: &Step, s2: &Step) -> bool {
    s1.consumed.iter().any(|c| s2.consumed.contains(c))
}

/// Two distinct steps that do not conflict.
pub fn distributable(s1: &Step, s2: &Step) -> bool {
    !in_conflict(s1, s2) && s1 != s2
}

/// The finest decomposition into parallel components: one per participant.
pub fn distributable_components(m: &Session) -> Vec<Session> {
    m.layout()
        .iter()
        .map(|p| {
            let mut keep = BTreeSet::new();
            keep.insert(p.clone());
            m.restrict(&keep)
        })
        .collect()
}

/// True iff the graph has no infinite execution.
pub fn is_convergent<S, L>(g: &Graph<S, L>) -> Result<bool, SemanticsError> {
    if g.truncated {
        return Err(SemanticsError::Truncated);
    }
    Ok(g.is_acyclic())
}

/// Weak reduction bisimilarity of two states of one graph.
pub fn weak_bisimilar(
    g: &StateGraph,
    s1: usize,
    s2: usize,
    observables: Observables,
) -> Result<bool, SemanticsError> {
    if g.truncated {
        return Err(SemanticsError::Truncated);
    }
    let blocks = session_partition(g, observables);
    Ok(blocks[s1] == blocks[s2])
}

/// Weak bisimulation classes of all states of a session graph.
pub fn session_partition(g: &StateGraph, observables: Observables) -> Vec<usize> {
    let success: Vec<bool> = g.states.iter().map(has_success).collect();
    let barb_sets: Option<Vec<BTreeSet<Barb>>> = match observables {
        Observables::Success => None,
        Observables::SuccessAndBarbs => Some(g.states.iter().map(barbs).collect()),
    };
    weak_partition(g, &success, barb_sets.as_deref())
}

/// The maximal executions of a convergent session.
#[derive(Clone, Debug)]
pub struct Executions {
    /// Number of maximal paths in the canonical graph.
    pub count: u128,
    /// Distinct terminal states.
    pub terminals: Vec<Session>,
}

/// Counts maximal paths from the session over its canonical state graph.
pub fn maximal_executions(m: &Session, limits: Limits) -> Result<Executions, SemanticsError> {
    let g = explore_session(m, limits);
    if g.truncated {
        return Err(SemanticsError::Truncated);
    }
    if !g.is_acyclic() {
        return Err(SemanticsError::Divergent);
    }
    let mut count: Vec<u128> = alloc::vec![0; g.len()];
    for comp in g.sccs() {
        for i in comp {
            count[i] = if g.is_terminal(i) {
                1
            } else {
                g.out_edges(i).map(|e| count[e.to]).sum()
            };
        }
    }
    let terminals = g
        .reachable(&[g.root()])
        .ones()
        .filter(|&i| g.is_terminal(i))
        .map(|i| g.states[i].clone())
        .collect();
    Ok(Executions {
        count: count[g.root()],
        terminals,
    })
}

//! Transitions of local types and contexts, and the safety and
//! deadlock-freedom checks over the reachable contexts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::ast::{LocalContext, LocalType, PayloadType};
use super::form::{canonical_type, unfold_all};
use crate::graph::{explore, Graph, Limits, TransitionSystem};
use crate::syntax::{Label, ParticipantId, Polarity};

/// An action of a type or a context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeAction {
    /// `subject` may send `label(payload)` to `peer`.
    Out {
        /// Acting participant.
        subject: ParticipantId,
        /// Receiver.
        peer: ParticipantId,
        /// Label.
        label: Label,
        /// Payload type.
        payload: PayloadType,
    },
    /// `subject` may receive `label(payload)` from `peer`.
    In {
        /// Acting participant.
        subject: ParticipantId,
        /// Sender.
        peer: ParticipantId,
        /// Label.
        label: Label,
        /// Payload type.
        payload: PayloadType,
    },
    /// `sender` and `receiver` synchronise on `label(payload)`.
    Comm {
        /// Sender.
        sender: ParticipantId,
        /// Receiver.
        receiver: ParticipantId,
        /// Label.
        label: Label,
        /// Payload type.
        payload: PayloadType,
    },
}

impl fmt::Display for TypeAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeAction::Out {
                subject,
                peer,
                label,
                payload,
            } => write!(f, "{subject}:{peer}!{label}({payload})"),
            TypeAction::In {
                subject,
                peer,
                label,
                payload,
            } => write!(f, "{subject}:{peer}?{label}({payload})"),
            TypeAction::Comm {
                sender,
                receiver,
                label,
                payload,
            } => write!(f, "{sender}->{receiver}:{label}({payload})"),
        }
    }
}

/// One action per summand of the unfolded top choice.
pub fn type_transitions(p: &ParticipantId, t: &LocalType) -> Vec<(TypeAction, LocalType)> {
    match unfold_all(t) {
        LocalType::Choice(bs) => bs
            .into_iter()
            .map(|b| {
                let act = match b.polarity {
                    Polarity::Out => TypeAction::Out {
                        subject: p.clone(),
                        peer: b.peer,
                        label: b.label,
                        payload: b.payload,
                    },
                    Polarity::In => TypeAction::In {
                        subject: p.clone(),
                        peer: b.peer,
                        label: b.label,
                        payload: b.payload,
                    },
                };
                (act, b.cont)
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// All synchronisations of the context.
pub fn context_steps(ctx: &LocalContext) -> Vec<(TypeAction, LocalContext)> {
    let mut out = Vec::new();
    for (p, tp) in ctx.entries() {
        for (act, p_next) in type_transitions(p, tp) {
            let TypeAction::Out {
                peer: q,
                label,
                payload,
                ..
            } = act
            else {
                continue;
            };
            if &q == p {
                continue;
            }
            let Some(tq) = ctx.get(&q) else {
                continue;
            };
            for (act2, q_next) in type_transitions(&q, tq) {
                if let TypeAction::In {
                    peer: from,
                    label: l2,
                    payload: u2,
                    ..
                } = &act2
                {
                    if from == p && *l2 == label && *u2 == payload {
                        let mut next = ctx.clone();
                        next.insert(p.clone(), p_next.clone());
                        next.insert(q.clone(), q_next);
                        out.push((
                            TypeAction::Comm {
                                sender: p.clone(),
                                receiver: q.clone(),
                                label: label.clone(),
                                payload,
                            },
                            next,
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Contexts as a transition system, keyed by the canonical forms of their
/// entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct ContextSystem;

impl TransitionSystem for ContextSystem {
    type State = LocalContext;
    type Key = BTreeMap<ParticipantId, LocalType>;
    type Label = TypeAction;

    fn key(&self, s: &LocalContext) -> Self::Key {
        s.entries()
            .iter()
            .map(|(p, t)| (p.clone(), canonical_type(t)))
            .collect()
    }

    fn successors(&self, s: &LocalContext) -> Vec<(TypeAction, LocalContext)> {
        context_steps(s)
    }
}

/// The reachable contexts.
pub type ContextGraph = Graph<LocalContext, TypeAction>;

/// Explores every context reachable from `ctx`.
pub fn explore_contexts(ctx: &LocalContext, limits: Limits) -> ContextGraph {
    explore(&ContextSystem, alloc::vec![ctx.clone()], limits)
}

/// Why a context fails a check, and how it gets there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Synchronisations from the initial context.
    pub path: Vec<TypeAction>,
    /// The offending context.
    pub state: LocalContext,
    /// The unmatched output, for safety violations.
    pub offending: Option<TypeAction>,
}

/// Result of a context check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    /// Whether the property holds.
    pub holds: bool,
    /// A witness when it does not.
    pub counterexample: Option<Counterexample>,
    /// True iff the exploration hit a limit.
    pub truncated: bool,
}

/// The first unmatched output of a context: an output to a peer that
/// listens to the sender, but not on this label and payload type.
pub fn unsafe_output(ctx: &LocalContext) -> Option<TypeAction> {
    let steps = context_steps(ctx);
    for (p, tp) in ctx.entries() {
        for (act, _) in type_transitions(p, tp) {
            let TypeAction::Out {
                peer,
                label,
                payload,
                ..
            } = &act
            else {
                continue;
            };
            let Some(tq) = ctx.get(peer) else {
                continue;
            };
            let listens = type_transitions(peer, tq)
                .iter()
                .any(|(a, _)| matches!(a, TypeAction::In { peer: from, .. } if from == p));
            if !listens {
                continue;
            }
            let matched = steps.iter().any(|(a, _)| {
                matches!(a, TypeAction::Comm { sender, receiver, label: l, payload: u }
                    if sender == p && receiver == peer && l == label && u == payload)
            });
            if !matched {
                return Some(act);
            }
        }
    }
    None
}

/// Safety: in every reachable context, each output to a listening peer can
/// synchronise with the very label and payload type it offers.
pub fn is_safe(ctx: &LocalContext, limits: Limits) -> CheckReport {
    let g = explore_contexts(ctx, limits);
    find(&g, |s| unsafe_output(s).map(Some))
}

/// Deadlock-freedom: every reachable stuck context types all
/// participants `end`.
pub fn is_deadlock_free(ctx: &LocalContext, limits: Limits) -> CheckReport {
    let g = explore_contexts(ctx, limits);
    find(&g, |s| {
        let stuck = context_steps(s).is_empty();
        let ended = s
            .entries()
            .values()
            .all(|t| unfold_all(t) == LocalType::End);
        (stuck && !ended).then_some(None)
    })
}

fn find(
    g: &ContextGraph,
    bad: impl Fn(&LocalContext) -> Option<Option<TypeAction>>,
) -> CheckReport {
    for i in 0..g.len() {
        if let Some(offending) = bad(&g.states[i]) {
            let edges = g.shortest_path(g.root(), 0, |j| j == i).unwrap_or_default();
            return CheckReport {
                holds: false,
                counterexample: Some(Counterexample {
                    path: edges.iter().map(|&e| g.edges[e].label.clone()).collect(),
                    state: g.states[i].clone(),
                    offending,
                }),
                truncated: g.truncated,
            };
        }
    }
    CheckReport {
        holds: true,
        counterexample: None,
        truncated: g.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse::parse_context;

    fn ctx(s: &str) -> LocalContext {
        parse_context(s).unwrap()
    }

    #[test]
    fn transitions_follow_summands() {
        let p = ParticipantId::new("p");
        let t = crate::types::parse_type("q!l(nat).end + q?l2(bool).end").unwrap();
        assert_eq!(type_transitions(&p, &t).len(), 2);
        assert!(type_transitions(&p, &LocalType::End).is_empty());
        let r = crate::types::parse_type("rec t. q!l(bool).t").unwrap();
        let ts = type_transitions(&p, &r);
        assert_eq!(ts.len(), 1);
        assert!(crate::types::types_equivalent(&ts[0].1, &r));
    }

    #[test]
    fn context_steps_require_matching_payloads() {
        let steps = context_steps(&ctx("p: q!l(bool).end; q: p?l(bool).end"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].1, ctx("p: end; q: end"));
        assert!(context_steps(&ctx("p: q!l(bool).end; q: p?l(nat).end")).is_empty());
    }

    #[test]
    fn exploration_is_canonical() {
        assert_eq!(explore_contexts(&ctx("p: end"), Limits::default()).len(), 1);
        let g = explore_contexts(&ctx("p: rec t. q!l.t; q: rec t. p?l.t"), Limits::default());
        assert_eq!(g.len(), 1);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn safety_and_deadlock_freedom() {
        let l = Limits::default();
        let d1 = ctx("p: q!l1 + q!l2; q: p?l1");
        assert!(!is_safe(&d1, l).holds);
        assert!(is_deadlock_free(&d1, l).holds);
        let d2 = ctx("p: q!l");
        assert!(is_safe(&d2, l).holds);
        assert!(!is_deadlock_free(&d2, l).holds);
    }
}

//! Strategies for local types, and construction of related types whose
//! subtyping verdict is known by construction.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mcmp_core::syntax::{
    Branch, Label, ParticipantId, Polarity, Prefix, Process, Session, Variable,
};
use mcmp_core::types::{LocalType, PayloadType, TBranch};
use proptest::prelude::*;

pub const LABELS: [&str; 3] = ["l1", "l2", "l3"];
const VAR: &str = "t";

type Key = (usize, bool, usize);

fn branch(peers: &[&str], (peer, out, label): Key, payload: bool, cont: LocalType) -> TBranch {
    TBranch::new(
        peers[peer],
        if out { Polarity::Out } else { Polarity::In },
        LABELS[label],
        if payload {
            PayloadType::Nat
        } else {
            PayloadType::Bool
        },
        cont,
    )
}

fn leaf(recursive: bool) -> BoxedStrategy<LocalType> {
    if recursive {
        prop_oneof![Just(LocalType::End), Just(LocalType::var(VAR))].boxed()
    } else {
        Just(LocalType::End).boxed()
    }
}

fn node(peers: &'static [&'static str], depth: u32, recursive: bool) -> BoxedStrategy<LocalType> {
    let key = (0..peers.len(), any::<bool>(), 0..LABELS.len());
    let cont = body(peers, depth.saturating_sub(1), recursive);
    prop::collection::btree_map(key, (any::<bool>(), cont), 1..=3)
        .prop_map(move |m| {
            LocalType::Choice(
                m.into_iter()
                    .map(|(k, (u, c))| branch(peers, k, u, c))
                    .collect(),
            )
        })
        .boxed()
}

fn body(peers: &'static [&'static str], depth: u32, recursive: bool) -> BoxedStrategy<LocalType> {
    if depth == 0 {
        leaf(recursive)
    } else {
        prop_oneof![1 => leaf(recursive), 3 => node(peers, depth, recursive)].boxed()
    }
}

/// Well-formed local types of depth three over peers `p`, `q` and three
/// labels, optionally under one recursion binder.
pub fn local_type() -> impl Strategy<Value = LocalType> {
    local_type_over(&["p", "q"], 3)
}

/// Well-formed local types over the given peers and three labels, of
/// prefix depth at most `depth`, optionally under one recursion binder.
pub fn local_type_over(
    peers: &'static [&'static str],
    depth: u32,
) -> impl Strategy<Value = LocalType> {
    any::<bool>().prop_flat_map(move |recursive| {
        node(peers, depth, recursive).prop_map(
            move |b| {
                if recursive {
                    LocalType::rec(VAR, b)
                } else {
                    b
                }
            },
        )
    })
}

/// A stream of decisions consumed by the constructions below.
#[derive(Clone, Debug)]
pub struct Coins {
    bits: Vec<bool>,
    at: usize,
}

impl Coins {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits, at: 0 }
    }

    pub fn flip(&mut self) -> bool {
        if self.bits.is_empty() {
            return false;
        }
        let b = self.bits[self.at % self.bits.len()];
        self.at += 1;
        b
    }
}

pub fn coins() -> impl Strategy<Value = Coins> {
    prop::collection::vec(any::<bool>(), 1..64).prop_map(Coins::new)
}

/// Whether a polarity may gain branches when moving toward a subtype.
fn may_grow(pol: Polarity, toward_sub: bool) -> bool {
    (pol == Polarity::In) == toward_sub
}

/// A type related to `t` by construction: a subtype when `toward_sub`,
/// a supertype otherwise. External blocks of a subtype may offer more
/// labels and internal blocks fewer, and dually for a supertype.
pub fn relate(t: &LocalType, toward_sub: bool, coins: &mut Coins) -> LocalType {
    match t {
        LocalType::End | LocalType::Var(_) => t.clone(),
        LocalType::Rec(v, b) => LocalType::Rec(v.clone(), Box::new(relate(b, toward_sub, coins))),
        LocalType::Choice(bs) => {
            let blocks: BTreeSet<(ParticipantId, Polarity)> =
                bs.iter().map(|b| (b.peer.clone(), b.polarity)).collect();
            let mut out = Vec::new();
            for (peer, pol) in &blocks {
                let mine: Vec<&TBranch> = bs
                    .iter()
                    .filter(|b| &b.peer == peer && b.polarity == *pol)
                    .collect();
                let mut kept: Vec<TBranch> = Vec::new();
                for (i, b) in mine.iter().enumerate() {
                    let last = i + 1 == mine.len() && kept.is_empty();
                    if !may_grow(*pol, toward_sub) && !last && coins.flip() {
                        continue;
                    }
                    let mut b = (*b).clone();
                    b.cont = relate(&b.cont, toward_sub, coins);
                    kept.push(b);
                }
                if may_grow(*pol, toward_sub) {
                    let used: BTreeSet<&Label> = mine.iter().map(|b| &b.label).collect();
                    for l in LABELS {
                        if !used.contains(&Label::new(l)) && coins.flip() {
                            kept.push(TBranch::new(
                                peer.as_str(),
                                *pol,
                                l,
                                PayloadType::Bool,
                                LocalType::End,
                            ));
                        }
                    }
                }
                out.extend(kept);
            }
            LocalType::Choice(out)
        }
    }
}

const ROLES: [&str; 4] = ["a", "b", "c", "d"];

fn payload() -> impl Strategy<Value = mcmp_core::Value> {
    prop_oneof![
        any::<bool>().prop_map(mcmp_core::Value::Bool),
        (0u64..3).prop_map(mcmp_core::Value::Nat),
    ]
}

fn summand(me: usize, roles: usize, cont: BoxedStrategy<Process>) -> BoxedStrategy<Branch> {
    let peers: Vec<usize> = (0..roles).filter(|&q| q != me).collect();
    (
        prop::sample::select(peers),
        any::<bool>(),
        0..2usize,
        payload(),
        cont,
    )
        .prop_map(|(q, out, l, v, cont)| {
            let peer = ParticipantId::new(ROLES[q]);
            let label = Label::new(LABELS[l]);
            let prefix = if out {
                Prefix::Send {
                    to: peer,
                    label,
                    payload: v,
                }
            } else {
                Prefix::Recv {
                    from: peer,
                    label,
                    var: Variable::new("x"),
                }
            };
            Branch::new(prefix, cont)
        })
        .boxed()
}

/// Closed, recursion-free processes of participant `me` among the first
/// `roles` names, of prefix depth at most `depth`.
pub fn process(me: usize, roles: usize, depth: u32) -> BoxedStrategy<Process> {
    let leaf = prop_oneof![3 => Just(Process::Nil), 1 => Just(Process::Success)].boxed();
    if depth == 0 {
        return leaf;
    }
    let below = process(me, roles, depth - 1);
    let choice =
        prop::collection::vec(summand(me, roles, below.clone()), 1..=3).prop_map(Process::choice);
    let cond = (any::<bool>(), below.clone(), below)
        .prop_map(|(g, t, e)| Process::cond(mcmp_core::Value::Bool(g), t, e));
    prop_oneof![1 => leaf, 4 => choice, 1 => cond].boxed()
}

/// Sessions of two to four participants whose processes have prefix
/// depth at most `depth`.
pub fn session(depth: u32) -> impl Strategy<Value = Session> {
    (2..=ROLES.len()).prop_flat_map(move |n| {
        let procs: Vec<BoxedStrategy<Process>> = (0..n).map(|i| process(i, n, depth)).collect();
        procs.prop_map(|ps| {
            Session::from_parts(
                ps.into_iter()
                    .enumerate()
                    .map(|(i, p)| (ParticipantId::new(ROLES[i]), p)),
            )
            .expect("distinct names")
        })
    })
}

/// Sessions over `a`, `b` and over `c`, `d` that never mention each other.
pub fn disjoint_pair(depth: u32) -> impl Strategy<Value = (Session, Session)> {
    let half = |first: usize| {
        (process(0, 2, depth), process(1, 2, depth)).prop_map(move |(p, q)| {
            let rename = |pr: &Process| {
                let mut sigma = mcmp_core::syntax::Renaming::new();
                sigma.insert(ParticipantId::new("a"), ParticipantId::new(ROLES[first]));
                sigma.insert(
                    ParticipantId::new("b"),
                    ParticipantId::new(ROLES[first + 1]),
                );
                mcmp_core::syntax::rename_process(pr, &sigma)
            };
            Session::from_parts([
                (ParticipantId::new(ROLES[first]), rename(&p)),
                (ParticipantId::new(ROLES[first + 1]), rename(&q)),
            ])
            .expect("distinct names")
        })
    };
    (half(0), half(2))
}

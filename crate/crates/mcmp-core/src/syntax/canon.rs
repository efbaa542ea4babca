//! Canonical forms deciding structural congruence without unfolding.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::ast::{
    Branch, CapId, Choice, ParticipantId, Prefix, ProcVar, Process, Session, Value, Variable,
};

/// Identity of a session state up to non-unfolding structural congruence.
pub type StateKey = BTreeMap<ParticipantId, Process>;

/// Canonical representative of a process: capabilities erased, bound names
/// replaced by their binding depth and summands sorted.
pub fn canonical_process(p: &Process) -> Process {
    canon(p, &mut Vec::new(), &mut Vec::new())
}

fn canon(
    p: &Process,
    vals: &mut Vec<(Variable, Variable)>,
    recs: &mut Vec<(ProcVar, ProcVar)>,
) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Success => Process::Success,
        Process::Var(x) => Process::Var(
            recs.iter()
                .rev()
                .find(|(from, _)| from == x)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| x.clone()),
        ),
        Process::Rec(x, body) => {
            let fresh = ProcVar::new(format!("%X{}", recs.len()));
            recs.push((x.clone(), fresh.clone()));
            let body = canon(body, vals, recs);
            recs.pop();
            Process::Rec(fresh, Box::new(body))
        }
        Process::Cond {
            guard, then, els, ..
        } => Process::Cond {
            guard: canon_value(guard, vals),
            then: Box::new(canon(then, vals, recs)),
            els: Box::new(canon(els, vals, recs)),
            cap: CapId(0),
        },
        Process::Choice(c) => {
            let mut branches: Vec<Branch> = c
                .branches
                .iter()
                .map(|b| match &b.prefix {
                    Prefix::Send { to, label, payload } => Branch::new(
                        Prefix::Send {
                            to: to.clone(),
                            label: label.clone(),
                            payload: canon_value(payload, vals),
                        },
                        canon(&b.cont, vals, recs),
                    ),
                    Prefix::Recv { from, label, var } => {
                        let fresh = Variable::new(format!("%v{}", vals.len()));
                        vals.push((var.clone(), fresh.clone()));
                        let cont = canon(&b.cont, vals, recs);
                        vals.pop();
                        Branch::new(
                            Prefix::Recv {
                                from: from.clone(),
                                label: label.clone(),
                                var: fresh,
                            },
                            cont,
                        )
                    }
                })
                .collect();
            branches.sort();
            Process::Choice(Choice {
                cap: CapId(0),
                branches,
            })
        }
    }
}

fn canon_value(v: &Value, vals: &[(Variable, Variable)]) -> Value {
    match v {
        Value::Var(x) => Value::Var(
            vals.iter()
                .rev()
                .find(|(from, _)| from == x)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| x.clone()),
        ),
        other => other.clone(),
    }
}

/// The congruence-class key of a session; `p◁0` entries are dropped.
pub fn state_key(s: &Session) -> StateKey {
    s.parts()
        .iter()
        .filter(|(_, p)| **p != Process::Nil)
        .map(|(q, p)| (q.clone(), canonical_process(p)))
        .collect()
}

/// Structural congruence restricted to alpha-conversion, commutativity and
/// associativity of `|` and `+`, and garbage collection of `p◁0`.
pub fn struct_congruent(m1: &Session, m2: &Session) -> bool {
    state_key(m1) == state_key(m2)
}

/// Alpha-equivalence of processes up to summand order.
pub fn alpha_equivalent(p: &Process, q: &Process) -> bool {
    canonical_process(p) == canonical_process(q)
}

//! Participant renaming and symmetry checking.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::ast::{Branch, Choice, ParticipantId, Prefix, Process, Session};
use super::canon::alpha_equivalent;
use super::classify::participants_involved;

/// A renaming of participants; names outside the domain are kept.
pub type Renaming = BTreeMap<ParticipantId, ParticipantId>;

/// Errors raised by renaming.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RenameError {
    /// Two names are sent to the same name.
    #[error("renaming is not injective: `{0}` is hit twice")]
    NotBijective(ParticipantId),
    /// A participant of the session has no image.
    #[error("renaming does not cover participant `{0}`")]
    NotTotal(ParticipantId),
    /// The image of a participant is not a participant of the session.
    #[error("image `{0}` of a participant is not a participant of the session")]
    NotClosed(ParticipantId),
}

fn image<'a>(sigma: &'a Renaming, p: &'a ParticipantId) -> &'a ParticipantId {
    sigma.get(p).unwrap_or(p)
}

/// Renames every occurrence of a participant name inside a process.
pub fn rename_process(p: &Process, sigma: &Renaming) -> Process {
    match p {
        Process::Nil | Process::Success | Process::Var(_) => p.clone(),
        Process::Rec(x, body) => Process::rec(x.clone(), rename_process(body, sigma)),
        Process::Cond {
            guard,
            then,
            els,
            cap,
        } => Process::Cond {
            guard: guard.clone(),
            then: alloc::boxed::Box::new(rename_process(then, sigma)),
            els: alloc::boxed::Box::new(rename_process(els, sigma)),
            cap: *cap,
        },
        Process::Choice(c) => Process::Choice(Choice {
            cap: c.cap,
            branches: c
                .branches
                .iter()
                .map(|b| {
                    let prefix = match &b.prefix {
                        Prefix::Send { to, label, payload } => Prefix::Send {
                            to: image(sigma, to).clone(),
                            label: label.clone(),
                            payload: payload.clone(),
                        },
                        Prefix::Recv { from, label, var } => Prefix::Recv {
                            from: image(sigma, from).clone(),
                            label: label.clone(),
                            var: var.clone(),
                        },
                    };
                    Branch::new(prefix, rename_process(&b.cont, sigma))
                })
                .collect(),
        }),
    }
}

/// Applies a bijective renaming to roles and prefixes; capabilities are kept.
pub fn apply_rename(m: &Session, sigma: &Renaming) -> Result<Session, RenameError> {
    for p in m.parts().keys() {
        if !sigma.contains_key(p) {
            return Err(RenameError::NotTotal(p.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for p in participants_involved(m) {
        let q = image(sigma, &p).clone();
        if !seen.insert(q.clone()) {
            return Err(RenameError::NotBijective(q));
        }
    }
    let mut img = BTreeSet::new();
    for q in sigma.values() {
        if !img.insert(q) {
            return Err(RenameError::NotBijective(q.clone()));
        }
    }
    let parts: BTreeMap<_, _> = m
        .parts()
        .iter()
        .map(|(p, proc_)| (image(sigma, p).clone(), rename_process(proc_, sigma)))
        .collect();
    let layout: Vec<_> = m.layout().iter().map(|p| image(sigma, p).clone()).collect();
    Ok(Session::from_raw(parts, layout, m.next_cap()))
}

/// True iff the process at `σ(i)` is the process at `i` renamed by `σ`,
/// for every participant `i`.
pub fn is_symmetric(m: &Session, sigma: &Renaming) -> Result<bool, RenameError> {
    for (p, proc_) in m.parts() {
        let q = sigma
            .get(p)
            .ok_or_else(|| RenameError::NotTotal(p.clone()))?;
        let target = m.get(q).ok_or_else(|| RenameError::NotClosed(q.clone()))?;
        if !alpha_equivalent(target, &rename_process(proc_, sigma)) {
            return Ok(false);
        }
    }
    Ok(true)
}

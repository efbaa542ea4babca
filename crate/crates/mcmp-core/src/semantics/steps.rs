//! Enabled steps and their application.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use super::SemanticsError;
use crate::syntax::{
    substitute_value, unfold, CapId, Label, ParticipantId, Prefix, Process, Session, Value,
};

/// What a step does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    /// `sender` passes `label(payload)` to `receiver`.
    Comm {
        /// Sending participant.
        sender: ParticipantId,
        /// Receiving participant.
        receiver: ParticipantId,
        /// Label.
        label: Label,
        /// Transmitted value.
        payload: Value,
    },
    /// The conditional of the participant takes its `then` branch.
    IfTrue(ParticipantId),
    /// The conditional of the participant takes its `else` branch.
    IfFalse(ParticipantId),
}

/// An identified reduction step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    /// What happens.
    pub kind: StepKind,
    /// The capabilities reduced, sorted.
    pub consumed: Vec<CapId>,
    /// Index of the chosen summand of the sender's choice.
    pub sender_branch: usize,
    /// Index of the chosen summand of the receiver's choice.
    pub receiver_branch: usize,
}

impl Step {
    /// Participants whose process changes.
    pub fn participants(&self) -> Vec<&ParticipantId> {
        match &self.kind {
            StepKind::Comm {
                sender, receiver, ..
            } => alloc::vec![sender, receiver],
            StepKind::IfTrue(p) | StepKind::IfFalse(p) => alloc::vec![p],
        }
    }

    /// The label of a communication step.
    pub fn label(&self) -> Option<&Label> {
        match &self.kind {
            StepKind::Comm { label, .. } => Some(label),
            _ => None,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Comm {
                sender,
                receiver,
                label,
                payload,
            } => write!(f, "{sender}->{receiver}:{label}({payload})"),
            StepKind::IfTrue(p) => write!(f, "if-tt({p})"),
            StepKind::IfFalse(p) => write!(f, "if-ff({p})"),
        }
    }
}

/// The session with every top-level recursion unfolded, in participant
/// name order, with fresh capabilities for the copies.
pub fn unfolded(m: &Session) -> Session {
    let mut out = m.clone();
    let names: Vec<ParticipantId> = m.parts().keys().cloned().collect();
    for p in names {
        if let Some(Process::Rec(..)) = m.get(&p) {
            let proc_ = m.get(&p).cloned().unwrap_or(Process::Nil);
            let u = unfold(&proc_, out.next_cap_mut());
            out.set(&p, u);
        }
    }
    out
}

/// All steps enabled in the session.
pub fn enabled_steps(m: &Session) -> Vec<Step> {
    let u = unfolded(m);
    let mut steps = Vec::new();
    for (p, proc_) in u.parts() {
        match proc_ {
            Process::Cond {
                guard: Value::Bool(b),
                cap,
                ..
            } => steps.push(Step {
                kind: if *b {
                    StepKind::IfTrue(p.clone())
                } else {
                    StepKind::IfFalse(p.clone())
                },
                consumed: alloc::vec![*cap],
                sender_branch: 0,
                receiver_branch: 0,
            }),
            Process::Choice(c) => {
                for (i, b) in c.branches.iter().enumerate() {
                    let Prefix::Send { to, label, payload } = &b.prefix else {
                        continue;
                    };
                    if to == p {
                        continue;
                    }
                    let Some(Process::Choice(d)) = u.get(to) else {
                        continue;
                    };
                    for (j, rb) in d.branches.iter().enumerate() {
                        if let Prefix::Recv {
                            from, label: l2, ..
                        } = &rb.prefix
                        {
                            if from == p && l2 == label {
                                let mut consumed = alloc::vec![c.cap, d.cap];
                                consumed.sort();
                                steps.push(Step {
                                    kind: StepKind::Comm {
                                        sender: p.clone(),
                                        receiver: to.clone(),
                                        label: label.clone(),
                                        payload: payload.clone(),
                                    },
                                    consumed,
                                    sender_branch: i,
                                    receiver_branch: j,
                                });
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    steps
}

/// Performs an enabled step. Participants not involved keep their folded
/// form.
pub fn apply_step(m: &Session, s: &Step) -> Result<Session, SemanticsError> {
    if !enabled_steps(m).contains(s) {
        return Err(SemanticsError::StepNotEnabled(s.to_string()));
    }
    let u = unfolded(m);
    let mut out = u.clone();
    for (p, proc_) in m.parts() {
        if !s.participants().contains(&p) {
            out.set(p, proc_.clone());
        }
    }
    match &s.kind {
        StepKind::IfTrue(p) | StepKind::IfFalse(p) => {
            if let Some(Process::Cond { then, els, .. }) = u.get(p) {
                let next = if matches!(s.kind, StepKind::IfTrue(_)) {
                    then
                } else {
                    els
                };
                out.set(p, (**next).clone());
            }
        }
        StepKind::Comm {
            sender,
            receiver,
            payload,
            ..
        } => {
            if let (Some(Process::Choice(c)), Some(Process::Choice(d))) =
                (u.get(sender), u.get(receiver))
            {
                out.set(sender, c.branches[s.sender_branch].cont.clone());
                let rb = &d.branches[s.receiver_branch];
                let cont = match &rb.prefix {
                    Prefix::Recv { var, .. } => substitute_value(&rb.cont, payload, var),
                    Prefix::Send { .. } => rb.cont.clone(),
                };
                out.set(receiver, cont);
            }
        }
    }
    Ok(out)
}

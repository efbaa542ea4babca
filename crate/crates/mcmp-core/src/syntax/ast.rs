//! Abstract syntax of processes and sessions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Wraps a name.
            pub fn new(name: impl Into<String>) -> Self {
                Self(name.into())
            }

            /// The underlying name.
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                Self::new(name)
            }
        }
    };
}

name_type!(
    /// A participant (role) of a session.
    ParticipantId
);
name_type!(
    /// A message label.
    Label
);
name_type!(
    /// A value variable bound by an input prefix.
    Variable
);
name_type!(
    /// A process variable bound by recursion.
    ProcVar
);

impl Label {
    /// Label announcing that the sender waits for an output.
    pub const ENC_OUT: &'static str = "enc_o";
    /// Label announcing that the sender waits for an input.
    pub const ENC_IN: &'static str = "enc_i";
    /// Label withdrawing a previous `enc_i` announcement.
    pub const RESET: &'static str = "reset";

    /// True for labels that never occur in source terms.
    pub fn is_reserved(&self) -> bool {
        let s = self.as_str();
        s == Self::ENC_OUT
            || s == Self::ENC_IN
            || s == Self::RESET
            || s.ends_with(".o")
            || s.ends_with(".i")
    }

    /// The reserved `enc_o` label.
    pub fn enc_out() -> Self {
        Self::new(Self::ENC_OUT)
    }

    /// The reserved `enc_i` label.
    pub fn enc_in() -> Self {
        Self::new(Self::ENC_IN)
    }

    /// The reserved `reset` label.
    pub fn reset() -> Self {
        Self::new(Self::RESET)
    }

    /// The composite label `l.o`.
    pub fn with_out_suffix(&self) -> Self {
        let mut s = String::from(self.as_str());
        s.push_str(".o");
        Self(s)
    }

    /// The composite label `l.i`.
    pub fn with_in_suffix(&self) -> Self {
        let mut s = String::from(self.as_str());
        s.push_str(".i");
        Self(s)
    }
}

/// Direction of a prefix or type action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    /// Sending.
    Out,
    /// Receiving.
    In,
}

impl Polarity {
    /// The opposite direction.
    pub fn dual(self) -> Self {
        match self {
            Polarity::Out => Polarity::In,
            Polarity::In => Polarity::Out,
        }
    }

    /// The surface symbol, `!` or `?`.
    pub fn symbol(self) -> char {
        match self {
            Polarity::Out => '!',
            Polarity::In => '?',
        }
    }
}

/// A payload or guard value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    /// A value variable.
    Var(Variable),
    /// A natural number.
    Nat(u64),
    /// A truth value.
    Bool(bool),
}

impl Value {
    /// True when the value contains no variable.
    pub fn is_closed(&self) -> bool {
        !matches!(self, Value::Var(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Var(x) => write!(f, "{x}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Bool(true) => f.write_str("tt"),
            Value::Bool(false) => f.write_str("ff"),
        }
    }
}

/// Identity of a choice or conditional occurrence, consumed by steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CapId(pub u32);

impl fmt::Display for CapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A communication prefix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prefix {
    /// `to!label(payload)`.
    Send {
        /// Receiving participant.
        to: ParticipantId,
        /// Message label.
        label: Label,
        /// Transmitted value.
        payload: Value,
    },
    /// `from?label(var)`; binds `var` in the continuation.
    Recv {
        /// Sending participant.
        from: ParticipantId,
        /// Message label.
        label: Label,
        /// Bound variable.
        var: Variable,
    },
}

impl Prefix {
    /// The participant on the other side of the prefix.
    pub fn peer(&self) -> &ParticipantId {
        match self {
            Prefix::Send { to, .. } => to,
            Prefix::Recv { from, .. } => from,
        }
    }

    /// The label of the prefix.
    pub fn label(&self) -> &Label {
        match self {
            Prefix::Send { label, .. } | Prefix::Recv { label, .. } => label,
        }
    }

    /// Whether the prefix sends or receives.
    pub fn polarity(&self) -> Polarity {
        match self {
            Prefix::Send { .. } => Polarity::Out,
            Prefix::Recv { .. } => Polarity::In,
        }
    }
}

/// One summand of a choice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    /// Guarding prefix.
    pub prefix: Prefix,
    /// Continuation after the prefix.
    pub cont: Process,
}

impl Branch {
    /// Builds a summand.
    pub fn new(prefix: Prefix, cont: Process) -> Self {
        Self { prefix, cont }
    }
}

/// A nonempty mixed choice with its capability.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Choice {
    /// Capability consumed when any summand fires.
    pub cap: CapId,
    /// Summands in stored order.
    pub branches: Vec<Branch>,
}

/// A participant process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    /// Inaction `0`.
    Nil,
    /// Success `ok`, behaving like `0`.
    Success,
    /// A process variable.
    Var(ProcVar),
    /// Recursion `rec X. P`.
    Rec(ProcVar, alloc::boxed::Box<Process>),
    /// A mixed choice.
    Choice(Choice),
    /// Conditional `if v then P else Q`.
    Cond {
        /// Guard value.
        guard: Value,
        /// Branch taken on `tt`.
        then: alloc::boxed::Box<Process>,
        /// Branch taken on `ff`.
        els: alloc::boxed::Box<Process>,
        /// Capability consumed when the conditional reduces.
        cap: CapId,
    },
}

impl Process {
    /// A choice from summands, with a placeholder capability.
    pub fn choice(branches: Vec<Branch>) -> Self {
        Process::Choice(Choice {
            cap: CapId(0),
            branches,
        })
    }

    /// A conditional with a placeholder capability.
    pub fn cond(guard: Value, then: Process, els: Process) -> Self {
        Process::Cond {
            guard,
            then: alloc::boxed::Box::new(then),
            els: alloc::boxed::Box::new(els),
            cap: CapId(0),
        }
    }

    /// Recursion with the given body.
    pub fn rec(var: ProcVar, body: Process) -> Self {
        Process::Rec(var, alloc::boxed::Box::new(body))
    }

    /// `to!label(payload).cont` as a one-summand choice.
    pub fn send(to: &str, label: &str, payload: Value, cont: Process) -> Self {
        Self::choice(alloc::vec![Branch::new(
            Prefix::Send {
                to: ParticipantId::new(to),
                label: Label::new(label),
                payload,
            },
            cont,
        )])
    }

    /// `from?label(var).cont` as a one-summand choice.
    pub fn recv(from: &str, label: &str, var: &str, cont: Process) -> Self {
        Self::choice(alloc::vec![Branch::new(
            Prefix::Recv {
                from: ParticipantId::new(from),
                label: Label::new(label),
                var: Variable::new(var),
            },
            cont,
        )])
    }

    /// True for `0` and `ok`, the terminated processes.
    pub fn is_terminated(&self) -> bool {
        matches!(self, Process::Nil | Process::Success)
    }

    /// Visits every choice in the process, including nested ones.
    pub fn for_each_choice<'a>(&'a self, f: &mut impl FnMut(&'a Choice)) {
        match self {
            Process::Nil | Process::Success | Process::Var(_) => {}
            Process::Rec(_, body) => body.for_each_choice(f),
            Process::Choice(c) => {
                f(c);
                for b in &c.branches {
                    b.cont.for_each_choice(f);
                }
            }
            Process::Cond { then, els, .. } => {
                then.for_each_choice(f);
                els.for_each_choice(f);
            }
        }
    }

    /// Collects every capability in the process.
    pub fn caps(&self, out: &mut Vec<CapId>) {
        match self {
            Process::Nil | Process::Success | Process::Var(_) => {}
            Process::Rec(_, body) => body.caps(out),
            Process::Choice(c) => {
                out.push(c.cap);
                for b in &c.branches {
                    b.cont.caps(out);
                }
            }
            Process::Cond { then, els, cap, .. } => {
                out.push(*cap);
                then.caps(out);
                els.caps(out);
            }
        }
    }

    /// Every participant named in a prefix of the process.
    pub fn mentioned(&self, out: &mut alloc::collections::BTreeSet<ParticipantId>) {
        self.for_each_choice(&mut |c| {
            for b in &c.branches {
                out.insert(b.prefix.peer().clone());
            }
        });
    }

    /// Gives every capability a fresh number drawn from `next`.
    pub fn relabel_caps(&mut self, next: &mut u32) {
        match self {
            Process::Nil | Process::Success | Process::Var(_) => {}
            Process::Rec(_, body) => body.relabel_caps(next),
            Process::Choice(c) => {
                c.cap = CapId(*next);
                *next += 1;
                for b in &mut c.branches {
                    b.cont.relabel_caps(next);
                }
            }
            Process::Cond { then, els, cap, .. } => {
                *cap = CapId(*next);
                *next += 1;
                then.relabel_caps(next);
                els.relabel_caps(next);
            }
        }
    }
}

/// A multiparty session: a parallel composition of participant processes.
///
/// `layout` records the declaration order, read as a left-nested parallel
/// composition; the encodings derive their participant order from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Session {
    parts: BTreeMap<ParticipantId, Process>,
    layout: Vec<ParticipantId>,
    next_cap: u32,
}

/// Errors raised when assembling a session.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    /// The participant already occurs in the session.
    #[error("participant `{0}` is declared twice")]
    DuplicateParticipant(ParticipantId),
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

impl Session {
    /// The empty (fully terminated) session.
    pub fn new() -> Self {
        Self {
            parts: BTreeMap::new(),
            layout: Vec::new(),
            next_cap: 1,
        }
    }

    /// Builds a session from participants in declaration order, assigning
    /// fresh capabilities.
    pub fn from_parts(
        parts: impl IntoIterator<Item = (ParticipantId, Process)>,
    ) -> Result<Self, SessionError> {
        let mut s = Self::new();
        for (p, proc_) in parts {
            s.add(p, proc_)?;
        }
        Ok(s)
    }

    /// Appends a participant, relabelling its capabilities freshly.
    pub fn add(&mut self, p: ParticipantId, mut proc_: Process) -> Result<(), SessionError> {
        if self.parts.contains_key(&p) {
            return Err(SessionError::DuplicateParticipant(p));
        }
        proc_.relabel_caps(&mut self.next_cap);
        self.layout.push(p.clone());
        self.parts.insert(p, proc_);
        Ok(())
    }

    /// Participants with their processes, sorted by name.
    pub fn parts(&self) -> &BTreeMap<ParticipantId, Process> {
        &self.parts
    }

    /// Participants in declaration order.
    pub fn layout(&self) -> &[ParticipantId] {
        &self.layout
    }

    /// The process of a participant.
    pub fn get(&self, p: &ParticipantId) -> Option<&Process> {
        self.parts.get(p)
    }

    /// Number of participants.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// True when the session has no participant.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Next unused capability number.
    pub fn next_cap(&self) -> u32 {
        self.next_cap
    }

    /// Replaces a participant's process, keeping its capabilities.
    pub fn set(&mut self, p: &ParticipantId, proc_: Process) {
        if let Some(slot) = self.parts.get_mut(p) {
            *slot = proc_;
        }
    }

    /// Reserves a fresh capability number.
    pub fn fresh_cap(&mut self) -> CapId {
        let c = CapId(self.next_cap);
        self.next_cap += 1;
        c
    }

    pub(crate) fn next_cap_mut(&mut self) -> &mut u32 {
        &mut self.next_cap
    }

    pub(crate) fn from_raw(
        parts: BTreeMap<ParticipantId, Process>,
        layout: Vec<ParticipantId>,
        next_cap: u32,
    ) -> Self {
        Self {
            parts,
            layout,
            next_cap,
        }
    }

    /// The sub-session of the given participants, in this session's order.
    pub fn restrict(&self, keep: &alloc::collections::BTreeSet<ParticipantId>) -> Session {
        let parts = self
            .parts
            .iter()
            .filter(|(p, _)| keep.contains(*p))
            .map(|(p, q)| (p.clone(), q.clone()))
            .collect();
        let layout = self
            .layout
            .iter()
            .filter(|p| keep.contains(*p))
            .cloned()
            .collect();
        Session::from_raw(parts, layout, self.next_cap)
    }

    /// Every capability occurring in the session.
    pub fn caps(&self) -> Vec<CapId> {
        let mut out = Vec::new();
        for p in self.parts.values() {
            p.caps(&mut out);
        }
        out
    }
}

//! Local types and local contexts.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Label, ParticipantId, Polarity};

/// A recursion variable of a local type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeVar(String);

impl TypeVar {
    /// Wraps a name.
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    /// The underlying name.
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Type of a transmitted value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PayloadType {
    /// Natural numbers.
    Nat,
    /// Truth values.
    Bool,
}

impl fmt::Display for PayloadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PayloadType::Nat => "nat",
            PayloadType::Bool => "bool",
        })
    }
}

/// One summand of a choice type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TBranch {
    /// The other participant.
    pub peer: ParticipantId,
    /// Sending or receiving.
    pub polarity: Polarity,
    /// Message label.
    pub label: Label,
    /// Payload type.
    pub payload: PayloadType,
    /// Continuation type.
    pub cont: LocalType,
}

impl TBranch {
    /// Builds a summand.
    pub fn new(
        peer: &str,
        polarity: Polarity,
        label: &str,
        payload: PayloadType,
        cont: LocalType,
    ) -> Self {
        Self {
            peer: ParticipantId::new(peer),
            polarity,
            label: Label::new(label),
            payload,
            cont,
        }
    }
}

/// An equi-recursive local type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocalType {
    /// Termination.
    End,
    /// A recursion variable.
    Var(TypeVar),
    /// Recursion `rec t. T`.
    Rec(TypeVar, Box<LocalType>),
    /// A nonempty mixed choice.
    Choice(Vec<TBranch>),
}

impl LocalType {
    /// Recursion with the given body.
    pub fn rec(var: &str, body: LocalType) -> Self {
        LocalType::Rec(TypeVar::new(var), Box::new(body))
    }

    /// A type variable.
    pub fn var(name: &str) -> Self {
        LocalType::Var(TypeVar::new(name))
    }
}

/// A local context: the declared types of the participants.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalContext {
    entries: BTreeMap<ParticipantId, LocalType>,
}

impl LocalContext {
    /// The empty context.
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps a map of entries.
    pub fn from_map(entries: BTreeMap<ParticipantId, LocalType>) -> Self {
        Self { entries }
    }

    /// Builds a context from pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (ParticipantId, LocalType)>) -> Self {
        Self {
            entries: pairs.into_iter().collect(),
        }
    }

    /// Entries sorted by participant.
    pub fn entries(&self) -> &BTreeMap<ParticipantId, LocalType> {
        &self.entries
    }

    /// The type of a participant.
    pub fn get(&self, p: &ParticipantId) -> Option<&LocalType> {
        self.entries.get(p)
    }

    /// Sets the type of a participant.
    pub fn insert(&mut self, p: ParticipantId, t: LocalType) {
        self.entries.insert(p, t);
    }

    /// The typed participants.
    pub fn domain(&self) -> BTreeSet<ParticipantId> {
        self.entries.keys().cloned().collect()
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True for the empty context.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

//! Workbench for the mixed-choice multiparty session calculus and its
//! subcalculi.
//!
//! The crate is `no_std` and only needs an allocator. It provides:
//!
//! * [`syntax`]: abstract syntax, parsing, printing, substitution,
//!   structural congruence, classification and renaming of sessions;
//! * [`semantics`]: reduction steps, state-space exploration, success
//!   predicates, barbs, conflicts and weak bisimulation;
//! * [`types`]: local types, subtyping and the safety and
//!   deadlock-freedom checks on local contexts;
//! * [`typing`]: algorithmic type checking of processes and sessions;
//! * [`encodings`]: the participant order, the encodings between
//!   subcalculi and the correspondence harness;
//! * [`lcmv`]: the linear single-session mixed-sessions fragment and its
//!   encoding into binary mixed-choice sessions;
//! * [`patterns`]: detection of the synchronisation patterns M and star,
//!   plus electoral-system checking.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod encodings;
pub mod graph;
pub mod lcmv;
pub mod patterns;
pub mod semantics;
pub mod syntax;
pub mod types;
pub mod typing;

pub use graph::{Graph, Limits};
pub use syntax::{
    parse_session, parse_source, render_process, render_session, Label, ParticipantId, Process,
    Session, SubcalculusId, Value, Variable,
};
pub use types::{parse_type, render_type, LocalContext, LocalType, PayloadType};

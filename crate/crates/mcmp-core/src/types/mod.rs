//! Local types: syntax, structural functions, subtyping, the type-level
//! transition system, and the safety and deadlock-freedom checks.
//!
//! The surface grammar:
//!
//! ```text
//! ltype   := "end" | IDENT | "rec" IDENT "." ltype | tsum | "(" ltype ")"
//! tsum    := tatom { "+" tatom }
//! tatom   := IDENT ("!" | "?") IDENT [ "(" ("nat" | "bool") ")" ] [ "." tunary ]
//! context := { IDENT ":" ltype [";"] }
//! ```
//!
//! An omitted payload type is `bool` and an omitted continuation is `end`.

mod ast;
mod form;
mod lts;
pub(crate) mod parse;
mod subtype;

pub use ast::{LocalContext, LocalType, PayloadType, TBranch, TypeVar};
pub use form::{
    canonical_type, ftv, guarded, prefix, pt, substitute_type, types_equivalent, unfold,
    unfold_all, validate, validate_context, well_formed, TypeFormError,
};
pub use lts::{
    context_steps, explore_contexts, is_deadlock_free, is_safe, type_transitions, unsafe_output,
    CheckReport, ContextGraph, ContextSystem, Counterexample, TypeAction,
};
pub use parse::{parse_context, parse_type, parse_type_with, render_context, render_type};
pub use subtype::{blocks, context_subtype, subtype};

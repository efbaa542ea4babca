//! Abstract syntax, parsing, printing, substitution, structural congruence,
//! classification and renaming of sessions.
//!
//! The surface grammar:
//!
//! ```text
//! session  := { "role" IDENT "=" process }+ [ "types" "{" { IDENT ":" ltype }+ "}" ]
//! process  := "0" | "ok" | IDENT | "rec" IDENT "." process | sum
//!           | "if" value "then" process "else" process | "(" process ")"
//! sum      := atom { "+" atom }
//! atom     := IDENT "!" IDENT [ "(" value ")" ] [ "." unary ]
//!           | IDENT "?" IDENT [ "(" IDENT ")" ] [ "." unary ]
//! value    := IDENT | NAT | "tt" | "ff"
//! ```
//!
//! An omitted payload is `tt`, an omitted input variable is `_` and an
//! omitted continuation is `0`. `#` starts a comment.

mod ast;
mod canon;
mod classify;
pub(crate) mod lexer;
mod parse;
mod rename;
mod render;
mod subst;

pub use ast::{
    Branch, CapId, Choice, Label, ParticipantId, Polarity, Prefix, ProcVar, Process, Session,
    SessionError, Value, Variable,
};
pub use canon::{alpha_equivalent, canonical_process, state_key, struct_congruent, StateKey};
pub use classify::{classify, participants_involved, SubcalculusId, UnknownSubcalculus};
pub(crate) use parse::{parse_label, parse_value};
pub use parse::{
    parse_process_text, parse_session, parse_source, parse_source_with, LabelMode, ParseError,
    SourceFile,
};
pub use rename::{apply_rename, is_symmetric, rename_process, RenameError, Renaming};
pub use render::{render_prefix, render_process, render_session, render_source};
pub use subst::{free_vars, is_guarded, substitute_proc, substitute_value, unfold};

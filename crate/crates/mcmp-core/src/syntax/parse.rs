//! Recursive-descent parser for sessions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{
    Branch, Label, ParticipantId, Prefix, ProcVar, Process, Session, Value, Variable,
};
use super::lexer::{Cursor, Tok};
use crate::types::{parse::parse_ltype, LocalContext, LocalType};

/// Errors reported by the front ends.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    /// Malformed input.
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        /// One-based line.
        line: usize,
        /// One-based column.
        col: usize,
        /// What went wrong.
        msg: String,
    },
    /// A label reserved for encodings appears in user source.
    #[error("reserved label `{label}` at {line}:{col}")]
    ReservedLabel {
        /// The offending label.
        label: String,
        /// One-based line.
        line: usize,
        /// One-based column.
        col: usize,
    },
    /// The same participant is declared twice.
    #[error("participant `{0}` is declared twice")]
    DuplicateParticipant(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Whether reserved labels are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    /// Reject reserved labels, as required for user source.
    UserOnly,
    /// Accept reserved labels, for re-reading encoder output.
    AllowReserved,
}

/// A parsed source file: a session plus its optional declared context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    /// The session.
    pub session: Session,
    /// The `types { .. }` block, if present.
    pub context: Option<LocalContext>,
}

/// Parses a session, rejecting reserved labels and ignoring any types block.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    Ok(parse_source(text)?.session)
}

/// Parses a session together with its optional `types` block.
pub fn parse_source(text: &str) -> Result<SourceFile, ParseError> {
    parse_source_with(text, LabelMode::UserOnly)
}

/// Parses a source file with the given label policy.
pub fn parse_source_with(text: &str, mode: LabelMode) -> Result<SourceFile, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut session = Session::new();
    while cur.eat_keyword("role") {
        let name = cur.ident("participant name")?;
        cur.expect(Tok::Eq, "`=`")?;
        let proc_ = parse_process(&mut cur, mode)?;
        session
            .add(ParticipantId::new(name.clone()), proc_)
            .map_err(|_| ParseError::DuplicateParticipant(name))?;
    }
    let context = if cur.eat_keyword("types") {
        Some(parse_types_block(&mut cur, mode)?)
    } else {
        None
    };
    if !cur.at_eof() {
        return Err(cur.unexpected("`role`, `types` or end of input"));
    }
    Ok(SourceFile { session, context })
}

/// Parses a single process term.
pub fn parse_process_text(text: &str, mode: LabelMode) -> Result<Process, ParseError> {
    let mut cur = Cursor::new(text)?;
    let p = parse_process(&mut cur, mode)?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(p)
}

fn parse_types_block(cur: &mut Cursor, mode: LabelMode) -> Result<LocalContext, ParseError> {
    cur.expect(Tok::LBrace, "`{`")?;
    let mut entries: BTreeMap<ParticipantId, LocalType> = BTreeMap::new();
    while !cur.eat(&Tok::RBrace) {
        let (line, col) = cur.here();
        let name = cur.ident("participant name")?;
        cur.expect(Tok::Colon, "`:`")?;
        let t = parse_ltype(cur, mode)?;
        if entries
            .insert(ParticipantId::new(name.clone()), t)
            .is_some()
        {
            return Err(ParseError::syntax(
                line,
                col,
                alloc::format!("participant `{name}` typed twice"),
            ));
        }
        while cur.eat(&Tok::Semi) || cur.eat(&Tok::Comma) {}
    }
    Ok(LocalContext::from_map(entries))
}

pub(crate) fn parse_label(cur: &mut Cursor, mode: LabelMode) -> Result<Label, ParseError> {
    let (line, col) = cur.here();
    let mut name = cur.ident("label")?;
    if *cur.peek() == Tok::Dot && *cur.peek_at(2) == Tok::LParen {
        if let Tok::Ident(s) = cur.peek_at(1) {
            if s == "o" || s == "i" {
                name.push('.');
                name.push_str(s);
                cur.bump();
                cur.bump();
            }
        }
    }
    let label = Label::new(name);
    if mode == LabelMode::UserOnly && label.is_reserved() {
        return Err(ParseError::ReservedLabel {
            label: label.as_str().into(),
            line,
            col,
        });
    }
    Ok(label)
}

pub(crate) fn parse_value(cur: &mut Cursor) -> Result<Value, ParseError> {
    match cur.peek().clone() {
        Tok::Number(n) => {
            cur.bump();
            Ok(Value::Nat(n))
        }
        Tok::Ident(s) if s == "tt" => {
            cur.bump();
            Ok(Value::Bool(true))
        }
        Tok::Ident(s) if s == "ff" => {
            cur.bump();
            Ok(Value::Bool(false))
        }
        _ => Ok(Value::Var(Variable::new(cur.ident("value")?))),
    }
}

pub(crate) fn parse_process(cur: &mut Cursor, mode: LabelMode) -> Result<Process, ParseError> {
    let (line, col) = cur.here();
    let first = parse_unary(cur, mode)?;
    if *cur.peek() != Tok::Plus {
        return Ok(first);
    }
    let mut branches = summands(first, line, col)?;
    while cur.eat(&Tok::Plus) {
        let (line, col) = cur.here();
        let next = parse_unary(cur, mode)?;
        branches.extend(summands(next, line, col)?);
    }
    Ok(Process::choice(branches))
}

fn summands(p: Process, line: usize, col: usize) -> Result<Vec<Branch>, ParseError> {
    match p {
        Process::Choice(c) => Ok(c.branches),
        _ => Err(ParseError::syntax(
            line,
            col,
            "every summand of a choice must start with a prefix",
        )),
    }
}

fn parse_unary(cur: &mut Cursor, mode: LabelMode) -> Result<Process, ParseError> {
    match cur.peek().clone() {
        Tok::Number(0) => {
            cur.bump();
            Ok(Process::Nil)
        }
        Tok::LParen => {
            cur.bump();
            let p = parse_process(cur, mode)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(p)
        }
        Tok::Ident(s) if s == "ok" => {
            cur.bump();
            Ok(Process::Success)
        }
        Tok::Ident(s) if s == "rec" => {
            cur.bump();
            let x = cur.ident("process variable")?;
            cur.expect(Tok::Dot, "`.`")?;
            let body = parse_process(cur, mode)?;
            Ok(Process::rec(ProcVar::new(x), body))
        }
        Tok::Ident(s) if s == "if" => {
            cur.bump();
            let guard = parse_value(cur)?;
            cur.expect_keyword("then")?;
            let then = parse_process(cur, mode)?;
            cur.expect_keyword("else")?;
            let els = parse_process(cur, mode)?;
            Ok(Process::cond(guard, then, els))
        }
        Tok::Ident(_) if matches!(cur.peek_at(1), Tok::Bang | Tok::Query) => {
            let peer = ParticipantId::new(cur.ident("participant")?);
            let out = cur.bump() == Tok::Bang;
            let label = parse_label(cur, mode)?;
            let prefix = if out {
                let payload = if cur.eat(&Tok::LParen) {
                    let v = parse_value(cur)?;
                    cur.expect(Tok::RParen, "`)`")?;
                    v
                } else {
                    Value::Bool(true)
                };
                Prefix::Send {
                    to: peer,
                    label,
                    payload,
                }
            } else {
                let var = if cur.eat(&Tok::LParen) {
                    let x = cur.ident("variable")?;
                    cur.expect(Tok::RParen, "`)`")?;
                    x
                } else {
                    String::from("_")
                };
                Prefix::Recv {
                    from: peer,
                    label,
                    var: Variable::new(var),
                }
            };
            let cont = if cur.eat(&Tok::Dot) {
                parse_unary(cur, mode)?
            } else {
                Process::Nil
            };
            Ok(Process::choice(alloc::vec![Branch::new(prefix, cont)]))
        }
        Tok::Ident(_) => Ok(Process::Var(ProcVar::new(cur.ident("process")?))),
        _ => Err(cur.unexpected("a process")),
    }
}

//! Parser and printer for local types.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::ast::{LocalContext, LocalType, PayloadType, TBranch, TypeVar};
use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::{parse_label, LabelMode, ParseError, ParticipantId, Polarity};

/// Parses a local type, rejecting reserved labels.
pub fn parse_type(text: &str) -> Result<LocalType, ParseError> {
    parse_type_with(text, LabelMode::UserOnly)
}

/// Parses a local type with the given label policy.
pub fn parse_type_with(text: &str, mode: LabelMode) -> Result<LocalType, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = parse_ltype(&mut cur, mode)?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(t)
}

/// Parses a context written as `p: T; q: T'` (separators optional).
pub fn parse_context(text: &str) -> Result<LocalContext, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut ctx = LocalContext::new();
    while !cur.at_eof() {
        let name = cur.ident("participant name")?;
        cur.expect(Tok::Colon, "`:`")?;
        let t = parse_ltype(&mut cur, LabelMode::UserOnly)?;
        ctx.insert(ParticipantId::new(name), t);
        while cur.eat(&Tok::Semi) || cur.eat(&Tok::Comma) {}
    }
    Ok(ctx)
}

pub(crate) fn parse_ltype(cur: &mut Cursor, mode: LabelMode) -> Result<LocalType, ParseError> {
    let (line, col) = cur.here();
    let first = parse_tunary(cur, mode)?;
    if *cur.peek() != Tok::Plus {
        return Ok(first);
    }
    let mut branches = tsummands(first, line, col)?;
    while cur.eat(&Tok::Plus) {
        let (line, col) = cur.here();
        let next = parse_tunary(cur, mode)?;
        branches.extend(tsummands(next, line, col)?);
    }
    Ok(LocalType::Choice(branches))
}

fn tsummands(t: LocalType, line: usize, col: usize) -> Result<Vec<TBranch>, ParseError> {
    match t {
        LocalType::Choice(bs) => Ok(bs),
        _ => Err(ParseError::syntax(
            line,
            col,
            "every summand of a choice type must start with an action",
        )),
    }
}

fn parse_tunary(cur: &mut Cursor, mode: LabelMode) -> Result<LocalType, ParseError> {
    match cur.peek().clone() {
        Tok::LParen => {
            cur.bump();
            let t = parse_ltype(cur, mode)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(t)
        }
        Tok::Ident(s) if s == "end" => {
            cur.bump();
            Ok(LocalType::End)
        }
        Tok::Ident(s) if s == "rec" => {
            cur.bump();
            let t = cur.ident("type variable")?;
            cur.expect(Tok::Dot, "`.`")?;
            let body = parse_ltype(cur, mode)?;
            Ok(LocalType::Rec(
                TypeVar::new(t),
                alloc::boxed::Box::new(body),
            ))
        }
        Tok::Ident(_) if matches!(cur.peek_at(1), Tok::Bang | Tok::Query) => {
            let peer = ParticipantId::new(cur.ident("participant")?);
            let polarity = if cur.bump() == Tok::Bang {
                Polarity::Out
            } else {
                Polarity::In
            };
            let label = parse_label(cur, mode)?;
            let payload = if cur.eat(&Tok::LParen) {
                let p = if cur.eat_keyword("nat") {
                    PayloadType::Nat
                } else if cur.eat_keyword("bool") {
                    PayloadType::Bool
                } else {
                    return Err(cur.unexpected("`nat` or `bool`"));
                };
                cur.expect(Tok::RParen, "`)`")?;
                p
            } else {
                PayloadType::Bool
            };
            let cont = if cur.eat(&Tok::Dot) {
                parse_tunary(cur, mode)?
            } else {
                LocalType::End
            };
            Ok(LocalType::Choice(alloc::vec![TBranch {
                peer,
                polarity,
                label,
                payload,
                cont,
            }]))
        }
        Tok::Ident(_) => Ok(LocalType::Var(TypeVar::new(cur.ident("type")?))),
        _ => Err(cur.unexpected("a type")),
    }
}

/// Renders a local type; the output re-parses to the same type.
pub fn render_type(t: &LocalType) -> String {
    let mut out = String::new();
    write_type(&mut out, t);
    out
}

/// Renders a context as `p: T; q: T'`.
pub fn render_context(ctx: &LocalContext) -> String {
    let mut out = String::new();
    for (i, (p, t)) in ctx.entries().iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{p}: {}", render_type(t));
    }
    out
}

fn write_type(out: &mut String, t: &LocalType) {
    match t {
        LocalType::End => out.push_str("end"),
        LocalType::Var(v) => out.push_str(v.as_str()),
        LocalType::Rec(v, body) => {
            let _ = write!(out, "rec {v}. ");
            write_type(out, body);
        }
        LocalType::Choice(bs) => {
            for (i, b) in bs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                let _ = write!(
                    out,
                    "{}{}{}({}).",
                    b.peer,
                    b.polarity.symbol(),
                    b.label,
                    b.payload
                );
                let wrap = match &b.cont {
                    LocalType::Choice(inner) => inner.len() > 1,
                    LocalType::Rec(..) => true,
                    _ => false,
                };
                if wrap {
                    out.push('(');
                    write_type(out, &b.cont);
                    out.push(')');
                } else {
                    write_type(out, &b.cont);
                }
            }
        }
    }
}

//! Parser and printer for the linear fragment.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::ast::{ChoiceId, CmvBranch, CmvPayload, CmvProcess};
use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::{parse_label, parse_value, LabelMode, ParseError, Variable};

struct Parser {
    cur: Cursor,
    next_id: u32,
    ends: (Variable, Variable),
}

/// Parses `(new x y)(P)`. Choices are numbered in textual order.
pub fn parse_cmv(text: &str) -> Result<CmvProcess, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect(Tok::LParen, "`(new`")?;
    cur.expect_keyword("new")?;
    let x = Variable::new(cur.ident("endpoint")?);
    let y = Variable::new(cur.ident("endpoint")?);
    if x == y {
        return Err(cur.error("the two endpoints must differ"));
    }
    cur.expect(Tok::RParen, "`)`")?;
    cur.expect(Tok::LParen, "`(`")?;
    let mut p = Parser {
        cur,
        next_id: 0,
        ends: (x.clone(), y.clone()),
    };
    let body = p.par()?;
    p.cur.expect(Tok::RParen, "`)`")?;
    if !p.cur.at_eof() {
        return Err(p.cur.unexpected("end of input"));
    }
    Ok(CmvProcess::Res(x, y, Box::new(body)))
}

impl Parser {
    fn par(&mut self) -> Result<CmvProcess, ParseError> {
        let mut p = self.unary()?;
        while self.cur.eat(&Tok::Pipe) {
            let q = self.unary()?;
            p = CmvProcess::par(p, q);
        }
        Ok(p)
    }

    fn unary(&mut self) -> Result<CmvProcess, ParseError> {
        match self.cur.peek().clone() {
            Tok::Number(0) => {
                self.cur.bump();
                Ok(CmvProcess::Inact)
            }
            Tok::LParen => {
                if matches!(self.cur.peek_at(1), Tok::Ident(s) if s == "new") {
                    return Err(self
                        .cur
                        .error("only one outermost restriction is supported"));
                }
                self.cur.bump();
                let p = self.par()?;
                self.cur.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(s) => match s.as_str() {
                "ok" => {
                    self.cur.bump();
                    Ok(CmvProcess::Success)
                }
                "if" => {
                    self.cur.bump();
                    let g = parse_value(&mut self.cur)?;
                    self.cur.expect_keyword("then")?;
                    let t = self.unary()?;
                    self.cur.expect_keyword("else")?;
                    let e = self.unary()?;
                    Ok(CmvProcess::cond(g, t, e))
                }
                "lin" => {
                    self.cur.bump();
                    self.choice()
                }
                "un" => Err(self
                    .cur
                    .error("unrestricted choices are outside the linear fragment")),
                _ => Err(self.cur.unexpected("a process")),
            },
            _ => Err(self.cur.unexpected("a process")),
        }
    }

    fn choice(&mut self) -> Result<CmvProcess, ParseError> {
        let (line, col) = self.cur.here();
        let endpoint = Variable::new(self.cur.ident("endpoint")?);
        if endpoint != self.ends.0 && endpoint != self.ends.1 {
            return Err(ParseError::syntax(
                line,
                col,
                alloc::format!("`{endpoint}` is not bound by the restriction"),
            ));
        }
        let id = ChoiceId(self.next_id);
        self.next_id += 1;
        self.cur.expect(Tok::LParen, "`(`")?;
        let mut branches = alloc::vec![self.branch()?];
        while self.cur.eat(&Tok::Plus) {
            branches.push(self.branch()?);
        }
        self.cur.expect(Tok::RParen, "`)`")?;
        Ok(CmvProcess::Choice {
            id,
            endpoint,
            branches,
        })
    }

    fn branch(&mut self) -> Result<CmvBranch, ParseError> {
        let label = parse_label(&mut self.cur, LabelMode::UserOnly)?;
        let payload = if self.cur.eat(&Tok::Bang) {
            CmvPayload::Send(parse_value(&mut self.cur)?)
        } else if self.cur.eat(&Tok::Query) {
            CmvPayload::Recv(Variable::new(self.cur.ident("variable")?))
        } else {
            return Err(self.cur.unexpected("`!` or `?`"));
        };
        let cont = if self.cur.eat(&Tok::Dot) {
            self.unary()?
        } else {
            CmvProcess::Inact
        };
        Ok(CmvBranch {
            label,
            payload,
            cont,
        })
    }
}

/// Prints a process in the surface syntax.
pub fn render_cmv(p: &CmvProcess) -> String {
    let mut out = String::new();
    match p {
        CmvProcess::Res(x, y, body) => {
            let _ = write!(out, "(new {x} {y})(");
            write_par(&mut out, body);
            out.push(')');
        }
        other => write_par(&mut out, other),
    }
    out
}

fn write_par(out: &mut String, p: &CmvProcess) {
    let parts: Vec<&CmvProcess> = match p {
        CmvProcess::Par(..) => p.components(),
        _ => alloc::vec![p],
    };
    if parts.is_empty() {
        out.push('0');
        return;
    }
    for (i, q) in parts.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        write_unary(out, q);
    }
}

fn write_unary(out: &mut String, p: &CmvProcess) {
    match p {
        CmvProcess::Inact => out.push('0'),
        CmvProcess::Success => out.push_str("ok"),
        CmvProcess::Par(..) | CmvProcess::Res(..) => {
            out.push('(');
            out.push_str(&render_cmv(p));
            out.push(')');
        }
        CmvProcess::Cond(g, t, e) => {
            let _ = write!(out, "if {g} then ");
            write_unary(out, t);
            out.push_str(" else ");
            write_unary(out, e);
        }
        CmvProcess::Choice {
            endpoint, branches, ..
        } => {
            let _ = write!(out, "lin {endpoint} (");
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                match &b.payload {
                    CmvPayload::Send(v) => {
                        let _ = write!(out, "{}!{v}", b.label);
                    }
                    CmvPayload::Recv(z) => {
                        let _ = write!(out, "{}?{z}", b.label);
                    }
                }
                if b.cont != CmvProcess::Inact {
                    out.push('.');
                    if matches!(b.cont, CmvProcess::Cond(..)) {
                        out.push('(');
                        write_unary(out, &b.cont);
                        out.push(')');
                    } else {
                        write_unary(out, &b.cont);
                    }
                }
            }
            out.push(')');
        }
    }
}

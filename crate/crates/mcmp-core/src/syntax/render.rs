//! Printing of processes and sessions in the surface grammar.

use alloc::string::String;
use core::fmt::Write;

use super::ast::{Prefix, Process, Session};
use crate::types::{render_type, LocalContext};

/// Renders a process; the output re-parses to an alpha-equivalent term.
pub fn render_process(p: &Process) -> String {
    let mut out = String::new();
    write_process(&mut out, p);
    out
}

/// Renders a session as `role` declarations in declaration order.
pub fn render_session(s: &Session) -> String {
    let mut out = String::new();
    for p in s.layout() {
        if let Some(proc_) = s.get(p) {
            let _ = writeln!(out, "role {p} = {}", render_process(proc_));
        }
    }
    out
}

/// Renders a session followed by a `types` block.
pub fn render_source(s: &Session, ctx: Option<&LocalContext>) -> String {
    let mut out = render_session(s);
    if let Some(ctx) = ctx {
        out.push_str("types {\n");
        for (p, t) in ctx.entries() {
            let _ = writeln!(out, "  {p}: {}", render_type(t));
        }
        out.push_str("}\n");
    }
    out
}

/// Renders a prefix such as `q!l(tt)` or `q?l(x)`.
pub fn render_prefix(pre: &Prefix) -> String {
    match pre {
        Prefix::Send { to, label, payload } => alloc::format!("{to}!{label}({payload})"),
        Prefix::Recv { from, label, var } => alloc::format!("{from}?{label}({var})"),
    }
}

fn write_process(out: &mut String, p: &Process) {
    match p {
        Process::Nil => out.push('0'),
        Process::Success => out.push_str("ok"),
        Process::Var(x) => out.push_str(x.as_str()),
        Process::Rec(x, body) => {
            let _ = write!(out, "rec {x}. ");
            write_process(out, body);
        }
        Process::Cond {
            guard, then, els, ..
        } => {
            let _ = write!(out, "if {guard} then ");
            write_process(out, then);
            out.push_str(" else ");
            write_process(out, els);
        }
        Process::Choice(c) => {
            for (i, b) in c.branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                out.push_str(&render_prefix(&b.prefix));
                out.push('.');
                let wrap = match &b.cont {
                    Process::Choice(inner) => inner.branches.len() > 1,
                    Process::Rec(..) | Process::Cond { .. } => true,
                    _ => false,
                };
                if wrap {
                    out.push('(');
                    write_process(out, &b.cont);
                    out.push(')');
                } else {
                    write_process(out, &b.cont);
                }
            }
        }
    }
}

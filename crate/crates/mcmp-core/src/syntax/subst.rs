//! Capture-avoiding substitution and recursion unfolding.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;

use super::ast::{Branch, Choice, Prefix, ProcVar, Process, Value, Variable};

/// Free value variables of a process.
pub fn free_vars(p: &Process) -> BTreeSet<Variable> {
    let mut out = BTreeSet::new();
    collect_free(p, &mut BTreeSet::new(), &mut out);
    out
}

fn collect_free(p: &Process, bound: &mut BTreeSet<Variable>, out: &mut BTreeSet<Variable>) {
    let see = |v: &Value, bound: &BTreeSet<Variable>, out: &mut BTreeSet<Variable>| {
        if let Value::Var(x) = v {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
    };
    match p {
        Process::Nil | Process::Success | Process::Var(_) => {}
        Process::Rec(_, body) => collect_free(body, bound, out),
        Process::Cond {
            guard, then, els, ..
        } => {
            see(guard, bound, out);
            collect_free(then, bound, out);
            collect_free(els, bound, out);
        }
        Process::Choice(c) => {
            for b in &c.branches {
                match &b.prefix {
                    Prefix::Send { payload, .. } => {
                        see(payload, bound, out);
                        collect_free(&b.cont, bound, out);
                    }
                    Prefix::Recv { var, .. } => {
                        let fresh = bound.insert(var.clone());
                        collect_free(&b.cont, bound, out);
                        if fresh {
                            bound.remove(var);
                        }
                    }
                }
            }
        }
    }
}

/// `P[v/x]`: replaces the free occurrences of `x` by `v`, renaming input
/// binders that would capture `v`. Capabilities are preserved.
pub fn substitute_value(p: &Process, v: &Value, x: &Variable) -> Process {
    match p {
        Process::Nil | Process::Success | Process::Var(_) => p.clone(),
        Process::Rec(y, body) => Process::Rec(y.clone(), Box::new(substitute_value(body, v, x))),
        Process::Cond {
            guard,
            then,
            els,
            cap,
        } => Process::Cond {
            guard: if *guard == Value::Var(x.clone()) {
                v.clone()
            } else {
                guard.clone()
            },
            then: Box::new(substitute_value(then, v, x)),
            els: Box::new(substitute_value(els, v, x)),
            cap: *cap,
        },
        Process::Choice(c) => Process::Choice(Choice {
            cap: c.cap,
            branches: c
                .branches
                .iter()
                .map(|b| substitute_branch(b, v, x))
                .collect(),
        }),
    }
}

fn substitute_branch(b: &Branch, v: &Value, x: &Variable) -> Branch {
    match &b.prefix {
        Prefix::Send { to, label, payload } => Branch::new(
            Prefix::Send {
                to: to.clone(),
                label: label.clone(),
                payload: if *payload == Value::Var(x.clone()) {
                    v.clone()
                } else {
                    payload.clone()
                },
            },
            substitute_value(&b.cont, v, x),
        ),
        Prefix::Recv { from, label, var } => {
            if var == x {
                return b.clone();
            }
            let captures = matches!(v, Value::Var(y) if y == var) && free_vars(&b.cont).contains(x);
            let (var, cont) = if captures {
                let fresh = fresh_variable(var, &b.cont, v);
                let renamed = substitute_value(&b.cont, &Value::Var(fresh.clone()), var);
                (fresh, renamed)
            } else {
                (var.clone(), b.cont.clone())
            };
            Branch::new(
                Prefix::Recv {
                    from: from.clone(),
                    label: label.clone(),
                    var,
                },
                substitute_value(&cont, v, x),
            )
        }
    }
}

fn fresh_variable(base: &Variable, body: &Process, avoid: &Value) -> Variable {
    let used = free_vars(body);
    let mut name = String::from(base.as_str());
    loop {
        name.push('\'');
        let cand = Variable::new(name.clone());
        if !used.contains(&cand) && *avoid != Value::Var(cand.clone()) {
            return cand;
        }
    }
}

/// `P[Q/X]`: replaces the free occurrences of `X` by copies of `Q`; every
/// copy receives fresh capabilities drawn from `next_cap`.
pub fn substitute_proc(p: &Process, q: &Process, x: &ProcVar, next_cap: &mut u32) -> Process {
    match p {
        Process::Nil | Process::Success => p.clone(),
        Process::Var(y) => {
            if y == x {
                let mut copy = q.clone();
                copy.relabel_caps(next_cap);
                copy
            } else {
                p.clone()
            }
        }
        Process::Rec(y, body) => {
            if y == x {
                p.clone()
            } else {
                Process::Rec(y.clone(), Box::new(substitute_proc(body, q, x, next_cap)))
            }
        }
        Process::Cond {
            guard,
            then,
            els,
            cap,
        } => Process::Cond {
            guard: guard.clone(),
            then: Box::new(substitute_proc(then, q, x, next_cap)),
            els: Box::new(substitute_proc(els, q, x, next_cap)),
            cap: *cap,
        },
        Process::Choice(c) => Process::Choice(Choice {
            cap: c.cap,
            branches: c
                .branches
                .iter()
                .map(|b| Branch::new(b.prefix.clone(), substitute_proc(&b.cont, q, x, next_cap)))
                .collect(),
        }),
    }
}

/// Unfolds outermost recursions until the process is not a `rec`.
///
/// Guardedness bounds the number of iterations; an unguarded chain such as
/// `rec X. X` stops after a fixed number of unfoldings.
pub fn unfold(p: &Process, next_cap: &mut u32) -> Process {
    let mut cur = p.clone();
    let mut fuel = 64;
    while let Process::Rec(x, body) = &cur {
        if fuel == 0 {
            break;
        }
        fuel -= 1;
        cur = substitute_proc(body, &cur, x, next_cap);
    }
    cur
}

/// True when every recursion variable occurs under a prefix.
pub fn is_guarded(p: &Process) -> bool {
    fn unguarded_head(p: &Process, x: &ProcVar) -> bool {
        match p {
            Process::Var(y) => y == x,
            Process::Rec(y, body) => y != x && unguarded_head(body, x),
            _ => false,
        }
    }
    match p {
        Process::Nil | Process::Success | Process::Var(_) => true,
        Process::Rec(x, body) => !unguarded_head(body, x) && is_guarded(body),
        Process::Cond { then, els, .. } => is_guarded(then) && is_guarded(els),
        Process::Choice(c) => c.branches.iter().all(|b| is_guarded(&b.cont)),
    }
}

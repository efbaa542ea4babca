//! Abstract syntax of linear single-session mixed-sessions processes.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Label, Polarity, Value, Variable};

/// Identity of a choice occurrence, preserved by reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceId(pub u32);

impl fmt::Display for ChoiceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// What a branch sends or binds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmvPayload {
    /// `l!v`.
    Send(Value),
    /// `l?z`.
    Recv(Variable),
}

/// One summand `l!v.P` or `l?z.P` of a choice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmvBranch {
    /// Label.
    pub label: Label,
    /// Sent value or bound variable.
    pub payload: CmvPayload,
    /// Continuation.
    pub cont: CmvProcess,
}

impl CmvBranch {
    /// Builds a branch.
    pub fn new(label: &str, payload: CmvPayload, cont: CmvProcess) -> Self {
        Self {
            label: Label::new(label),
            payload,
            cont,
        }
    }

    /// Direction of the branch.
    pub fn polarity(&self) -> Polarity {
        match self.payload {
            CmvPayload::Send(_) => Polarity::Out,
            CmvPayload::Recv(_) => Polarity::In,
        }
    }
}

/// A process of the linear fragment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmvProcess {
    /// `0`.
    Inact,
    /// `ok`.
    Success,
    /// `P | Q`.
    Par(Box<CmvProcess>, Box<CmvProcess>),
    /// `(new x y)(P)`.
    Res(Variable, Variable, Box<CmvProcess>),
    /// `if v then P else Q`.
    Cond(Value, Box<CmvProcess>, Box<CmvProcess>),
    /// `lin x (M1 + .. + Mn)`.
    Choice {
        /// Identity of the occurrence.
        id: ChoiceId,
        /// The endpoint acted upon.
        endpoint: Variable,
        /// Summands.
        branches: Vec<CmvBranch>,
    },
}

impl CmvProcess {
    /// Parallel composition.
    pub fn par(p: CmvProcess, q: CmvProcess) -> Self {
        CmvProcess::Par(Box::new(p), Box::new(q))
    }

    /// Conditional.
    pub fn cond(guard: Value, then: CmvProcess, els: CmvProcess) -> Self {
        CmvProcess::Cond(guard, Box::new(then), Box::new(els))
    }

    /// Free channel endpoints: the subjects of choices not under a binder.
    pub fn endpoints(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_endpoints(&mut out);
        out
    }

    fn collect_endpoints(&self, out: &mut BTreeSet<Variable>) {
        match self {
            CmvProcess::Inact | CmvProcess::Success => {}
            CmvProcess::Par(p, q) | CmvProcess::Cond(_, p, q) => {
                p.collect_endpoints(out);
                q.collect_endpoints(out);
            }
            CmvProcess::Res(x, y, p) => {
                let mut inner = BTreeSet::new();
                p.collect_endpoints(&mut inner);
                out.extend(inner.into_iter().filter(|v| v != x && v != y));
            }
            CmvProcess::Choice {
                endpoint, branches, ..
            } => {
                out.insert(endpoint.clone());
                for b in branches {
                    b.cont.collect_endpoints(out);
                }
            }
        }
    }

    /// Components of nested parallel compositions, without `0`.
    pub fn components(&self) -> Vec<&CmvProcess> {
        let mut out = Vec::new();
        self.collect_components(&mut out);
        out
    }

    fn collect_components<'a>(&'a self, out: &mut Vec<&'a CmvProcess>) {
        match self {
            CmvProcess::Par(p, q) => {
                p.collect_components(out);
                q.collect_components(out);
            }
            CmvProcess::Inact => {}
            other => out.push(other),
        }
    }

    /// Visits every choice occurrence in pre-order.
    pub fn for_each_choice<'a>(&'a self, f: &mut impl FnMut(&'a CmvProcess)) {
        match self {
            CmvProcess::Inact | CmvProcess::Success => {}
            CmvProcess::Par(p, q) | CmvProcess::Cond(_, p, q) => {
                p.for_each_choice(f);
                q.for_each_choice(f);
            }
            CmvProcess::Res(_, _, p) => p.for_each_choice(f),
            CmvProcess::Choice { branches, .. } => {
                f(self);
                for b in branches {
                    b.cont.for_each_choice(f);
                }
            }
        }
    }

    /// Replaces free occurrences of `x` by `v`.
    pub fn substitute(&self, v: &Value, x: &Variable) -> CmvProcess {
        let subst = |w: &Value| match w {
            Value::Var(y) if y == x => v.clone(),
            other => other.clone(),
        };
        match self {
            CmvProcess::Inact | CmvProcess::Success => self.clone(),
            CmvProcess::Par(p, q) => CmvProcess::par(p.substitute(v, x), q.substitute(v, x)),
            CmvProcess::Res(a, b, p) => {
                CmvProcess::Res(a.clone(), b.clone(), Box::new(p.substitute(v, x)))
            }
            CmvProcess::Cond(g, p, q) => {
                CmvProcess::cond(subst(g), p.substitute(v, x), q.substitute(v, x))
            }
            CmvProcess::Choice {
                id,
                endpoint,
                branches,
            } => CmvProcess::Choice {
                id: *id,
                endpoint: endpoint.clone(),
                branches: branches
                    .iter()
                    .map(|b| match &b.payload {
                        CmvPayload::Send(w) => CmvBranch {
                            label: b.label.clone(),
                            payload: CmvPayload::Send(subst(w)),
                            cont: b.cont.substitute(v, x),
                        },
                        CmvPayload::Recv(z) if z == x => b.clone(),
                        CmvPayload::Recv(_) => CmvBranch {
                            cont: b.cont.substitute(v, x),
                            ..b.clone()
                        },
                    })
                    .collect(),
            },
        }
    }

    /// Whether `x` occurs free as a conditional guard.
    pub fn guards_on(&self, x: &Variable) -> bool {
        match self {
            CmvProcess::Inact | CmvProcess::Success => false,
            CmvProcess::Par(p, q) => p.guards_on(x) || q.guards_on(x),
            CmvProcess::Res(_, _, p) => p.guards_on(x),
            CmvProcess::Cond(g, p, q) => {
                matches!(g, Value::Var(y) if y == x) || p.guards_on(x) || q.guards_on(x)
            }
            CmvProcess::Choice { branches, .. } => branches.iter().any(|b| match &b.payload {
                CmvPayload::Recv(z) if z == x => false,
                _ => b.cont.guards_on(x),
            }),
        }
    }
}

//! Classification of choices as internal or external.
//!
//! Choices on the two endpoints that may meet are paired. In each pair one
//! choice is internal and the other external, and every summand of the
//! internal one has a dual summand in the external one. Pairs are solved
//! by backtracking in the order of choice identities, trying internal
//! first; choices without a partner are internal.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::{ChoiceId, CmvPayload, CmvProcess};
use crate::syntax::{Value, Variable};

/// The view of a choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmvChoiceClass {
    /// Typed as internal choice.
    Internal,
    /// Typed as external choice.
    External,
}

impl CmvChoiceClass {
    /// The dual view.
    pub fn dual(self) -> Self {
        match self {
            CmvChoiceClass::Internal => CmvChoiceClass::External,
            CmvChoiceClass::External => CmvChoiceClass::Internal,
        }
    }
}

impl fmt::Display for CmvChoiceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmvChoiceClass::Internal => "internal",
            CmvChoiceClass::External => "external",
        })
    }
}

/// The view of every choice occurrence.
pub type CmvClasses = BTreeMap<ChoiceId, CmvChoiceClass>;

/// Why a program is rejected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CmvTypeError {
    /// The term is not a single restricted session.
    #[error("expected a restricted program `(new x y)(P)`")]
    NotAProgram,
    /// An endpoint is used by two parallel components.
    #[error("endpoint `{0}` is used in two parallel components")]
    Linearity(Variable),
    /// No assignment of views makes every meeting pair dual.
    #[error("choices {0} and {1} cannot be typed dually")]
    NoDualClassification(ChoiceId, ChoiceId),
    /// A value of the wrong type reaches a guard.
    #[error("{0}")]
    PayloadMismatch(String),
}

fn check_linear(p: &CmvProcess) -> Result<(), CmvTypeError> {
    match p {
        CmvProcess::Inact | CmvProcess::Success => Ok(()),
        CmvProcess::Par(a, b) => {
            check_linear(a)?;
            check_linear(b)?;
            let (ea, eb) = (a.endpoints(), b.endpoints());
            match ea.intersection(&eb).next() {
                Some(x) => Err(CmvTypeError::Linearity(x.clone())),
                None => Ok(()),
            }
        }
        CmvProcess::Res(_, _, q) => check_linear(q),
        CmvProcess::Cond(_, a, b) => {
            check_linear(a)?;
            check_linear(b)
        }
        CmvProcess::Choice { branches, .. } => {
            branches.iter().try_for_each(|b| check_linear(&b.cont))
        }
    }
}

/// The choices on `k` that can act first in `p`.
fn heads<'a>(p: &'a CmvProcess, k: &Variable, out: &mut Vec<&'a CmvProcess>) {
    match p {
        CmvProcess::Inact | CmvProcess::Success | CmvProcess::Res(..) => {}
        CmvProcess::Par(a, b) | CmvProcess::Cond(_, a, b) => {
            heads(a, k, out);
            heads(b, k, out);
        }
        CmvProcess::Choice { endpoint, .. } => {
            if endpoint == k {
                out.push(p);
            }
        }
    }
}

fn id_of(p: &CmvProcess) -> ChoiceId {
    match p {
        CmvProcess::Choice { id, .. } => *id,
        _ => unreachable!("heads only yields choices"),
    }
}

/// Every summand of `inner` has a dual summand in `outer`.
fn covered(inner: &CmvProcess, outer: &CmvProcess) -> bool {
    let (CmvProcess::Choice { branches: bi, .. }, CmvProcess::Choice { branches: bo, .. }) =
        (inner, outer)
    else {
        return false;
    };
    bi.iter().all(|b| {
        bo.iter()
            .any(|c| c.label == b.label && c.polarity() != b.polarity())
    })
}

fn payload_clash(v: &Value, q: &CmvProcess, z: &Variable) -> Option<String> {
    match v {
        Value::Nat(n) if q.guards_on(z) => Some(alloc::format!(
            "the number {n} is received into `{z}`, which guards a conditional"
        )),
        _ => None,
    }
}

/// Assigns a view to every choice of a program.
pub fn check_cmv(p: &CmvProcess) -> Result<CmvClasses, CmvTypeError> {
    let CmvProcess::Res(x, y, body) = p else {
        return Err(CmvTypeError::NotAProgram);
    };
    check_linear(body)?;

    let mut pairs: BTreeSet<(ChoiceId, ChoiceId)> = BTreeSet::new();
    let mut nodes: BTreeMap<ChoiceId, &CmvProcess> = BTreeMap::new();
    let (mut hx, mut hy) = (Vec::new(), Vec::new());
    heads(body, x, &mut hx);
    heads(body, y, &mut hy);
    let mut work: Vec<(&CmvProcess, &CmvProcess)> = Vec::new();
    for a in &hx {
        for b in &hy {
            work.push((a, b));
        }
    }
    while let Some((a, b)) = work.pop() {
        if !pairs.insert((id_of(a), id_of(b))) {
            continue;
        }
        nodes.insert(id_of(a), a);
        nodes.insert(id_of(b), b);
        let (CmvProcess::Choice { branches: ba, .. }, CmvProcess::Choice { branches: bb, .. }) =
            (a, b)
        else {
            continue;
        };
        for sa in ba {
            for sb in bb {
                if sa.label != sb.label || sa.polarity() == sb.polarity() {
                    continue;
                }
                let clash = match (&sa.payload, &sb.payload) {
                    (CmvPayload::Send(v), CmvPayload::Recv(z)) => payload_clash(v, &sb.cont, z),
                    (CmvPayload::Recv(z), CmvPayload::Send(v)) => payload_clash(v, &sa.cont, z),
                    _ => None,
                };
                if let Some(msg) = clash {
                    return Err(CmvTypeError::PayloadMismatch(msg));
                }
                let (mut na, mut nb) = (Vec::new(), Vec::new());
                heads(&sa.cont, x, &mut na);
                heads(&sb.cont, y, &mut nb);
                for c in &na {
                    for d in &nb {
                        work.push((c, d));
                    }
                }
            }
        }
    }

    let vars: Vec<ChoiceId> = nodes.keys().copied().collect();
    let mut assignment: BTreeMap<ChoiceId, CmvChoiceClass> = BTreeMap::new();
    let ok = |asg: &BTreeMap<ChoiceId, CmvChoiceClass>, a: ChoiceId, b: ChoiceId| match (
        asg.get(&a),
        asg.get(&b),
    ) {
        (Some(ca), Some(cb)) => {
            ca.dual() == *cb
                && match ca {
                    CmvChoiceClass::Internal => covered(nodes[&a], nodes[&b]),
                    CmvChoiceClass::External => covered(nodes[&b], nodes[&a]),
                }
        }
        _ => true,
    };
    if !solve(&vars, 0, &pairs, &mut assignment, &ok) {
        let (a, b) = pairs
            .iter()
            .find(|(a, b)| !(covered(nodes[a], nodes[b]) || covered(nodes[b], nodes[a])))
            .or_else(|| pairs.iter().next())
            .copied()
            .unwrap_or((ChoiceId(0), ChoiceId(0)));
        return Err(CmvTypeError::NoDualClassification(a, b));
    }
    let mut out = CmvClasses::new();
    body.for_each_choice(&mut |c| {
        let id = id_of(c);
        out.insert(
            id,
            assignment
                .get(&id)
                .copied()
                .unwrap_or(CmvChoiceClass::Internal),
        );
    });
    Ok(out)
}

fn solve(
    vars: &[ChoiceId],
    at: usize,
    pairs: &BTreeSet<(ChoiceId, ChoiceId)>,
    asg: &mut BTreeMap<ChoiceId, CmvChoiceClass>,
    ok: &impl Fn(&BTreeMap<ChoiceId, CmvChoiceClass>, ChoiceId, ChoiceId) -> bool,
) -> bool {
    let Some(&v) = vars.get(at) else {
        return true;
    };
    for class in [CmvChoiceClass::Internal, CmvChoiceClass::External] {
        asg.insert(v, class);
        let consistent = pairs
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .all(|(a, b)| ok(asg, *a, *b));
        if consistent && solve(vars, at + 1, pairs, asg, ok) {
            return true;
        }
    }
    asg.remove(&v);
    false
}

//! Reduction of the linear fragment: conditionals and linear-linear
//! synchronisation under the single restriction.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use super::ast::{CmvPayload, CmvProcess};
use crate::graph::{explore, Graph, Limits, TransitionSystem};
use crate::syntax::{Label, Value, Variable};

/// A process in normal form: the restricted endpoints and the sorted
/// multiset of parallel components, with `0` removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmvState {
    /// The two endpoints bound by the restriction.
    pub ends: (Variable, Variable),
    /// Parallel components.
    pub parts: Vec<CmvProcess>,
}

/// Why a term has no state form.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("expected a restricted program `(new x y)(P)`")]
pub struct NotAProgram;

impl CmvState {
    /// Normalises a program.
    pub fn from_program(p: &CmvProcess) -> Result<Self, NotAProgram> {
        let CmvProcess::Res(x, y, body) = p else {
            return Err(NotAProgram);
        };
        Ok(Self::new(
            (x.clone(), y.clone()),
            body.components().into_iter().cloned().collect(),
        ))
    }

    /// Builds a normalised state.
    pub fn new(ends: (Variable, Variable), parts: Vec<CmvProcess>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            flat.extend(p.components().into_iter().cloned());
        }
        flat.sort();
        Self { ends, parts: flat }
    }

    /// Back to a program.
    pub fn to_program(&self) -> CmvProcess {
        let body = self
            .parts
            .iter()
            .cloned()
            .reduce(CmvProcess::par)
            .unwrap_or(CmvProcess::Inact);
        CmvProcess::Res(self.ends.0.clone(), self.ends.1.clone(), Box::new(body))
    }

    /// Some component is an unguarded `ok`.
    pub fn has_success(&self) -> bool {
        self.parts.contains(&CmvProcess::Success)
    }
}

/// What a step does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmvStepKind {
    /// The choice on `sender` sends `label(value)` to the choice on the
    /// other endpoint.
    Comm {
        /// Endpoint of the sending choice.
        sender: Variable,
        /// Label.
        label: Label,
        /// Transmitted value.
        value: Value,
    },
    /// A conditional takes its `then` branch.
    IfTrue,
    /// A conditional takes its `else` branch.
    IfFalse,
}

/// A reduction step together with the components it consumes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmvStep {
    /// What happens.
    pub kind: CmvStepKind,
    /// Indices of the consumed components in the source state, sorted.
    pub consumed: Vec<usize>,
}

impl fmt::Display for CmvStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CmvStepKind::Comm {
                sender,
                label,
                value,
            } => write!(f, "{sender}:{label}({value})"),
            CmvStepKind::IfTrue => f.write_str("if-tt"),
            CmvStepKind::IfFalse => f.write_str("if-ff"),
        }
    }
}

/// All single-step successors.
pub fn cmv_steps(s: &CmvState) -> Vec<(CmvStep, CmvState)> {
    let mut out = Vec::new();
    let rest = |skip: &[usize], extra: Vec<CmvProcess>| {
        let mut parts: Vec<CmvProcess> = s
            .parts
            .iter()
            .enumerate()
            .filter(|(k, _)| !skip.contains(k))
            .map(|(_, p)| p.clone())
            .collect();
        parts.extend(extra);
        CmvState::new(s.ends.clone(), parts)
    };
    for (i, p) in s.parts.iter().enumerate() {
        if let CmvProcess::Cond(Value::Bool(b), t, e) = p {
            let (kind, next) = if *b {
                (CmvStepKind::IfTrue, (**t).clone())
            } else {
                (CmvStepKind::IfFalse, (**e).clone())
            };
            out.push((
                CmvStep {
                    kind,
                    consumed: alloc::vec![i],
                },
                rest(&[i], alloc::vec![next]),
            ));
        }
    }
    for (i, p) in s.parts.iter().enumerate() {
        let CmvProcess::Choice {
            endpoint: ei,
            branches: bi,
            ..
        } = p
        else {
            continue;
        };
        for (j, q) in s.parts.iter().enumerate() {
            let CmvProcess::Choice {
                endpoint: ej,
                branches: bj,
                ..
            } = q
            else {
                continue;
            };
            if i == j || ei == ej {
                continue;
            }
            for out_b in bi {
                let CmvPayload::Send(v) = &out_b.payload else {
                    continue;
                };
                for in_b in bj {
                    let CmvPayload::Recv(z) = &in_b.payload else {
                        continue;
                    };
                    if in_b.label != out_b.label {
                        continue;
                    }
                    let mut consumed = alloc::vec![i, j];
                    consumed.sort();
                    out.push((
                        CmvStep {
                            kind: CmvStepKind::Comm {
                                sender: ei.clone(),
                                label: out_b.label.clone(),
                                value: v.clone(),
                            },
                            consumed,
                        },
                        rest(
                            &[i, j],
                            alloc::vec![out_b.cont.clone(), in_b.cont.substitute(v, z)],
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// All single-step successors of a program.
pub fn reduce_cmv(p: &CmvProcess) -> Result<Vec<CmvProcess>, NotAProgram> {
    let s = CmvState::from_program(p)?;
    Ok(cmv_steps(&s)
        .into_iter()
        .map(|(_, t)| t.to_program())
        .collect())
}

/// The reduction relation as a transition system.
#[derive(Clone, Copy, Debug, Default)]
pub struct CmvSystem;

impl TransitionSystem for CmvSystem {
    type State = CmvState;
    type Key = CmvState;
    type Label = CmvStep;

    fn key(&self, s: &CmvState) -> CmvState {
        s.clone()
    }

    fn successors(&self, s: &CmvState) -> Vec<(CmvStep, CmvState)> {
        cmv_steps(s)
    }
}

/// Explored reduction graph of a program.
pub type CmvGraph = Graph<CmvState, CmvStep>;

/// Explores the reduction graph from a program.
pub fn explore_cmv(p: &CmvProcess, limits: Limits) -> Result<CmvGraph, NotAProgram> {
    Ok(explore(
        &CmvSystem,
        alloc::vec![CmvState::from_program(p)?],
        limits,
    ))
}

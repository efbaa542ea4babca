//! Translation of the linear fragment into binary mixed-choice sessions.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::ast::{CmvPayload, CmvProcess};
use super::check::{check_cmv, CmvChoiceClass, CmvClasses, CmvTypeError};
use super::reduce::{CmvState, CmvSystem};
use crate::encodings::{
    verify_source, CorrespondenceReport, EncodeError, EncodingId, SourceSpec, VerifyError,
};
use crate::graph::Limits;
use crate::syntax::{Branch, ParticipantId, Prefix, Process, Session, Value, Variable};

/// Why a program has no translation.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CmvEncodeError {
    /// A choice has no view.
    #[error("choice {0} has no view")]
    Unclassified(super::ast::ChoiceId),
    /// The program has a shape outside the translated fragment.
    #[error("{0}")]
    Shape(alloc::string::String),
    /// The program is rejected by the checker.
    #[error(transparent)]
    Type(#[from] CmvTypeError),
}

fn peer_of(k: &Variable, ends: &(Variable, Variable)) -> ParticipantId {
    let other = if *k == ends.0 { &ends.1 } else { &ends.0 };
    ParticipantId::new(other.as_str())
}

fn translate(
    p: &CmvProcess,
    k: &Variable,
    ends: &(Variable, Variable),
    classes: &CmvClasses,
) -> Result<Process, CmvEncodeError> {
    Ok(match p {
        CmvProcess::Inact => Process::Nil,
        CmvProcess::Success => Process::Success,
        CmvProcess::Cond(g, t, e) => Process::cond(
            g.clone(),
            translate(t, k, ends, classes)?,
            translate(e, k, ends, classes)?,
        ),
        CmvProcess::Par(..) | CmvProcess::Res(..) => {
            return Err(CmvEncodeError::Shape(
                "parallel composition or restriction under a prefix".to_string(),
            ))
        }
        CmvProcess::Choice {
            id,
            endpoint,
            branches,
        } => {
            if endpoint != k {
                return Err(CmvEncodeError::Shape(alloc::format!(
                    "choice on `{endpoint}` inside the component of `{k}`"
                )));
            }
            let class = *classes.get(id).ok_or(CmvEncodeError::Unclassified(*id))?;
            let peer = peer_of(k, ends);
            let mut out = Vec::with_capacity(branches.len());
            for b in branches {
                let cont = translate(&b.cont, k, ends, classes)?;
                let direct = b.label.with_out_suffix();
                let staged = b.label.with_in_suffix();
                let summand = match (&b.payload, class) {
                    (CmvPayload::Send(v), CmvChoiceClass::Internal) => Branch::new(
                        Prefix::Send {
                            to: peer.clone(),
                            label: direct,
                            payload: v.clone(),
                        },
                        cont,
                    ),
                    (CmvPayload::Recv(z), CmvChoiceClass::Internal) => {
                        let inner = Process::choice(alloc::vec![Branch::new(
                            Prefix::Recv {
                                from: peer.clone(),
                                label: b.label.clone(),
                                var: z.clone(),
                            },
                            cont,
                        )]);
                        Branch::new(
                            Prefix::Send {
                                to: peer.clone(),
                                label: staged,
                                payload: Value::Bool(true),
                            },
                            inner,
                        )
                    }
                    (CmvPayload::Send(v), CmvChoiceClass::External) => {
                        let inner = Process::choice(alloc::vec![Branch::new(
                            Prefix::Send {
                                to: peer.clone(),
                                label: b.label.clone(),
                                payload: v.clone(),
                            },
                            cont,
                        )]);
                        Branch::new(
                            Prefix::Recv {
                                from: peer.clone(),
                                label: staged,
                                var: Variable::new("_"),
                            },
                            inner,
                        )
                    }
                    (CmvPayload::Recv(z), CmvChoiceClass::External) => Branch::new(
                        Prefix::Recv {
                            from: peer.clone(),
                            label: direct,
                            var: z.clone(),
                        },
                        cont,
                    ),
                };
                out.push(summand);
            }
            Process::choice(out)
        }
    })
}

/// Translates a state. Each endpoint becomes a participant named after
/// it; a component using both endpoints sequentially becomes `0`, and
/// components without endpoints occupy the slot of an idle endpoint.
pub fn encode_cmv_state(s: &CmvState, classes: &CmvClasses) -> Result<Session, CmvEncodeError> {
    let ends = &s.ends;
    let mut slots: [Option<Process>; 2] = [None, None];
    let mut closed = Vec::new();
    for c in &s.parts {
        let eps = c.endpoints();
        let subject = match c {
            CmvProcess::Choice { endpoint, .. } => Some(endpoint.clone()),
            _ => eps.iter().next().cloned(),
        };
        let Some(k) = subject else {
            closed.push(c);
            continue;
        };
        let slot = usize::from(k != ends.0);
        if slots[slot].is_some() {
            return Err(CmvTypeError::Linearity(k).into());
        }
        let proc_ = if eps.len() == 2 {
            if !matches!(c, CmvProcess::Choice { .. }) {
                return Err(CmvEncodeError::Shape(
                    "a conditional uses both endpoints".to_string(),
                ));
            }
            Process::Nil
        } else {
            translate(c, &k, ends, classes)?
        };
        slots[slot] = Some(proc_);
    }
    for c in closed {
        let free = slots.iter().position(Option::is_none).ok_or_else(|| {
            CmvEncodeError::Shape("a closed component has no idle endpoint to run in".to_string())
        })?;
        slots[free] = Some(translate(c, &ends.0, ends, classes)?);
    }
    let mut m = Session::new();
    for (k, slot) in [&ends.0, &ends.1].into_iter().zip(slots) {
        m.add(ParticipantId::new(k.as_str()), slot.unwrap_or(Process::Nil))
            .map_err(|e| CmvEncodeError::Shape(e.to_string()))?;
    }
    Ok(m)
}

/// Translates a program given the views of its choices.
pub fn encode_lcmv_to_mcbs(
    p: &CmvProcess,
    classes: &CmvClasses,
) -> Result<Session, CmvEncodeError> {
    let s = CmvState::from_program(p).map_err(|_| CmvTypeError::NotAProgram)?;
    encode_cmv_state(&s, classes)
}

/// Checks the translation of a program against the good-encoding criteria.
pub fn verify_lcmv(p: &CmvProcess, limits: Limits) -> Result<CorrespondenceReport, VerifyError> {
    let to_encode = |e: CmvEncodeError| EncodeError::Shape(e.to_string());
    let classes = check_cmv(p).map_err(|e| to_encode(e.into()))?;
    let root =
        CmvState::from_program(p).map_err(|_| to_encode(CmvTypeError::NotAProgram.into()))?;
    let whole = encode_cmv_state(&root, &classes).map_err(to_encode)?;
    let mut components = Vec::new();
    for k in [&root.ends.0, &root.ends.1] {
        let mine: Vec<CmvProcess> = root
            .parts
            .iter()
            .filter(|c| c.endpoints().contains(k))
            .cloned()
            .collect();
        let alone = CmvState::new(root.ends.clone(), mine);
        let mut keep = BTreeSet::new();
        keep.insert(ParticipantId::new(k.as_str()));
        let translated = encode_cmv_state(&alone, &classes).map_err(to_encode)?;
        components.push((whole.restrict(&keep), translated.restrict(&keep)));
    }
    let enc = |s: &CmvState| encode_cmv_state(s, &classes).map_err(to_encode);
    let success = |s: &CmvState| s.has_success();
    verify_source(
        SourceSpec {
            system: &CmvSystem,
            root,
            encode: &enc,
            success: &success,
            components,
            factor_bound: EncodingId::LcmvToMcbs.factor_bound(),
        },
        limits,
    )
}

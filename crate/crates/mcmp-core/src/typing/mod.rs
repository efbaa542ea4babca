//! Algorithmic type checking of processes and sessions against declared
//! local types, session errors, and the context step matching a session
//! step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Limits;
use crate::semantics::{unfolded, Step, StepKind};
use crate::syntax::{
    is_guarded, Label, ParticipantId, Polarity, Prefix, ProcVar, Process, Session, Value, Variable,
};
use crate::types::{
    blocks, context_steps, is_safe, render_type, subtype, unfold_all, validate, Counterexample,
    LocalContext, LocalType, PayloadType, TypeAction, TypeFormError,
};

/// Types of the free value and process variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SharedContext {
    values: BTreeMap<Variable, PayloadType>,
    procs: BTreeMap<ProcVar, LocalType>,
}

impl SharedContext {
    /// The empty context.
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds a value variable, shadowing any earlier binding.
    pub fn with_value(mut self, x: Variable, u: PayloadType) -> Self {
        self.values.insert(x, u);
        self
    }

    /// Binds a process variable, shadowing any earlier binding.
    pub fn with_proc(mut self, x: ProcVar, t: LocalType) -> Self {
        self.procs.insert(x, t);
        self
    }

    /// The type of a value variable.
    pub fn value(&self, x: &Variable) -> Option<PayloadType> {
        self.values.get(x).copied()
    }

    /// The type of a process variable.
    pub fn proc_type(&self, x: &ProcVar) -> Option<&LocalType> {
        self.procs.get(x)
    }
}

/// The kinds of type errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeErrorKind {
    /// A value has the wrong base type.
    PayloadMismatch,
    /// The process offers a summand the type does not declare, or lacks a
    /// block the type requires.
    MissingBranch,
    /// A declared input branch has no matching input summand.
    UncoveredInputBranch,
    /// A recursion variable occurs unguarded.
    UnguardedRecursion,
    /// A type repeats a label within one peer and polarity.
    LabelClash,
    /// The context is not safe.
    ContextUnsafe,
    /// A process variable's type is not a subtype of the expected type.
    NotSubtype,
    /// An unbound variable, or a participant without a type.
    UnknownVar,
}

impl TypeErrorKind {
    /// Stable kebab-case name.
    pub fn name(self) -> &'static str {
        match self {
            TypeErrorKind::PayloadMismatch => "payload-mismatch",
            TypeErrorKind::MissingBranch => "missing-branch",
            TypeErrorKind::UncoveredInputBranch => "uncovered-input-branch",
            TypeErrorKind::UnguardedRecursion => "unguarded-recursion",
            TypeErrorKind::LabelClash => "label-clash",
            TypeErrorKind::ContextUnsafe => "context-unsafe",
            TypeErrorKind::NotSubtype => "not-subtype",
            TypeErrorKind::UnknownVar => "unknown-var",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A structured type error.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at {location}: {message}")]
pub struct TypeError {
    /// Participant or capability where the error was found.
    pub location: String,
    /// What went wrong.
    pub kind: TypeErrorKind,
    /// Human-readable detail.
    pub message: String,
    /// For unsafe contexts, the path to the violation.
    pub counterexample: Option<alloc::boxed::Box<Counterexample>>,
}

impl TypeError {
    fn new(location: impl Into<String>, kind: TypeErrorKind, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            kind,
            message: message.into(),
            counterexample: None,
        }
    }
}

fn form_error(location: &str, e: TypeFormError) -> TypeError {
    let kind = match e {
        TypeFormError::LabelClash => TypeErrorKind::LabelClash,
        TypeFormError::Unguarded(_) => TypeErrorKind::UnguardedRecursion,
        TypeFormError::Open(_) => TypeErrorKind::UnknownVar,
    };
    TypeError::new(location, kind, e.to_string())
}

/// The base type of a value.
pub fn type_value(gamma: &SharedContext, v: &Value) -> Result<PayloadType, TypeError> {
    match v {
        Value::Nat(_) => Ok(PayloadType::Nat),
        Value::Bool(_) => Ok(PayloadType::Bool),
        Value::Var(x) => gamma.value(x).ok_or_else(|| {
            TypeError::new(
                x.as_str(),
                TypeErrorKind::UnknownVar,
                format!("unbound variable `{x}`"),
            )
        }),
    }
}

/// Checks a process against a declared type.
pub fn check_process(
    gamma: &SharedContext,
    p: &Process,
    t: &LocalType,
) -> Result<(), Vec<TypeError>> {
    let mut errors = Vec::new();
    if let Err(e) = validate(t) {
        errors.push(form_error("type", e));
        return Err(errors);
    }
    if !is_guarded(p) {
        errors.push(TypeError::new(
            "process",
            TypeErrorKind::UnguardedRecursion,
            "a recursion variable occurs unguarded",
        ));
        return Err(errors);
    }
    check(gamma, p, t, &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check(gamma: &SharedContext, p: &Process, t: &LocalType, errors: &mut Vec<TypeError>) {
    match p {
        Process::Nil | Process::Success => {
            if unfold_all(t) != LocalType::End {
                errors.push(TypeError::new(
                    "process",
                    TypeErrorKind::MissingBranch,
                    format!("terminated process against `{}`", render_type(t)),
                ));
            }
        }
        Process::Var(x) => match gamma.proc_type(x) {
            None => errors.push(TypeError::new(
                x.as_str(),
                TypeErrorKind::UnknownVar,
                format!("unbound process variable `{x}`"),
            )),
            Some(tx) => {
                if !matches!(subtype(tx, t), Ok(true)) {
                    errors.push(TypeError::new(
                        x.as_str(),
                        TypeErrorKind::NotSubtype,
                        format!(
                            "`{}` is not a subtype of `{}`",
                            render_type(tx),
                            render_type(t)
                        ),
                    ));
                }
            }
        },
        Process::Rec(x, body) => {
            let inner = gamma.clone().with_proc(x.clone(), t.clone());
            check(&inner, body, t, errors);
        }
        Process::Cond {
            guard,
            then,
            els,
            cap,
        } => {
            match type_value(gamma, guard) {
                Ok(PayloadType::Bool) => {}
                Ok(PayloadType::Nat) => errors.push(TypeError::new(
                    cap.to_string(),
                    TypeErrorKind::PayloadMismatch,
                    format!("guard `{guard}` is not boolean"),
                )),
                Err(e) => errors.push(e),
            }
            check(gamma, then, t, errors);
            check(gamma, els, t, errors);
        }
        Process::Choice(c) => {
            let loc = c.cap.to_string();
            let LocalType::Choice(tbs) = unfold_all(t) else {
                errors.push(TypeError::new(
                    loc,
                    TypeErrorKind::MissingBranch,
                    format!("choice against `{}`", render_type(t)),
                ));
                return;
            };
            for b in &c.branches {
                let found = tbs.iter().find(|tb| {
                    tb.peer == *b.prefix.peer()
                        && tb.polarity == b.prefix.polarity()
                        && tb.label == *b.prefix.label()
                });
                let Some(tb) = found else {
                    errors.push(TypeError::new(
                        loc.clone(),
                        TypeErrorKind::MissingBranch,
                        format!("summand `{}` is not declared", describe(&b.prefix)),
                    ));
                    continue;
                };
                match &b.prefix {
                    Prefix::Send { payload, .. } => {
                        match type_value(gamma, payload) {
                            Ok(u) if u == tb.payload => {}
                            Ok(u) => errors.push(TypeError::new(
                                loc.clone(),
                                TypeErrorKind::PayloadMismatch,
                                format!("`{payload}` has type {u}, expected {}", tb.payload),
                            )),
                            Err(e) => errors.push(e),
                        }
                        check(gamma, &b.cont, &tb.cont, errors);
                    }
                    Prefix::Recv { var, .. } => {
                        let inner = gamma.clone().with_value(var.clone(), tb.payload);
                        check(&inner, &b.cont, &tb.cont, errors);
                    }
                }
            }
            for tb in tbs.iter().filter(|tb| tb.polarity == Polarity::In) {
                let covered = c.branches.iter().any(|b| {
                    b.prefix.polarity() == Polarity::In
                        && *b.prefix.peer() == tb.peer
                        && *b.prefix.label() == tb.label
                });
                if !covered {
                    errors.push(TypeError::new(
                        loc.clone(),
                        TypeErrorKind::UncoveredInputBranch,
                        format!("declared input `{}?{}` has no summand", tb.peer, tb.label),
                    ));
                }
            }
            for (peer, pol) in blocks(&tbs).into_keys() {
                if pol == Polarity::Out
                    && !c
                        .branches
                        .iter()
                        .any(|b| b.prefix.polarity() == Polarity::Out && *b.prefix.peer() == peer)
                {
                    errors.push(TypeError::new(
                        loc.clone(),
                        TypeErrorKind::MissingBranch,
                        format!("declared outputs to `{peer}` have no summand"),
                    ));
                }
            }
        }
    }
}

fn describe(pre: &Prefix) -> String {
    format!("{}{}{}", pre.peer(), pre.polarity().symbol(), pre.label())
}

/// Checks every participant against its declared type and the context for
/// safety, reporting both independently.
pub fn check_session(m: &Session, ctx: &LocalContext) -> Result<(), Vec<TypeError>> {
    check_session_with(m, ctx, Limits::default())
}

/// [`check_session`] with explicit exploration limits for the safety check.
pub fn check_session_with(
    m: &Session,
    ctx: &LocalContext,
    limits: Limits,
) -> Result<(), Vec<TypeError>> {
    let mut errors = Vec::new();
    let mut well_formed = true;
    for (p, t) in ctx.entries() {
        if let Err(e) = validate(t) {
            errors.push(form_error(p.as_str(), e));
            well_formed = false;
        }
    }
    for (p, proc_) in m.parts() {
        match ctx.get(p) {
            Some(t) => {
                if validate(t).is_ok() {
                    if let Err(es) = check_process(&SharedContext::new(), proc_, t) {
                        errors.extend(es.into_iter().map(|mut e| {
                            e.location = format!("{p}{}", at(&e.location));
                            e
                        }));
                    }
                }
            }
            None if proc_.is_terminated() => {}
            None => errors.push(TypeError::new(
                p.as_str(),
                TypeErrorKind::UnknownVar,
                format!("participant `{p}` has no declared type"),
            )),
        }
    }
    for (p, t) in ctx.entries() {
        if m.get(p).is_none() && unfold_all(t) != LocalType::End {
            errors.push(TypeError::new(
                p.as_str(),
                TypeErrorKind::MissingBranch,
                format!("`{p}` is typed `{}` but absent", render_type(t)),
            ));
        }
    }
    if well_formed {
        let report = is_safe(ctx, limits);
        if !report.holds || report.truncated {
            let mut e = TypeError::new(
                "context",
                TypeErrorKind::ContextUnsafe,
                match report
                    .counterexample
                    .as_ref()
                    .and_then(|c| c.offending.as_ref())
                {
                    Some(act) => format!("output {act} cannot synchronise"),
                    None => String::from("safety could not be established within the limits"),
                },
            );
            e.counterexample = report.counterexample.map(alloc::boxed::Box::new);
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn at(loc: &str) -> String {
    if loc.is_empty() || loc == "process" {
        String::new()
    } else {
        format!("@{loc}")
    }
}

/// A witness that a session is a session error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionErrorWitness {
    /// `sender` offers `label` to `receiver`, which listens to `sender`
    /// on other labels only.
    Label {
        /// Sender.
        sender: ParticipantId,
        /// Receiver.
        receiver: ParticipantId,
        /// Unmatched label.
        label: Label,
    },
    /// The participant's unguarded conditional has a non-boolean guard.
    Value {
        /// Participant.
        participant: ParticipantId,
        /// The guard.
        guard: Value,
    },
}

/// Detects label errors and value errors among the unguarded terms.
pub fn is_session_error(m: &Session) -> Option<SessionErrorWitness> {
    let u = unfolded(m);
    for (p, proc_) in u.parts() {
        match proc_ {
            Process::Cond { guard, .. }
                if guard.is_closed() && !matches!(guard, Value::Bool(_)) =>
            {
                return Some(SessionErrorWitness::Value {
                    participant: p.clone(),
                    guard: guard.clone(),
                });
            }
            Process::Choice(c) => {
                for b in &c.branches {
                    let Prefix::Send { to, label, .. } = &b.prefix else {
                        continue;
                    };
                    let Some(Process::Choice(d)) = u.get(to) else {
                        continue;
                    };
                    let inputs: Vec<&Label> = d
                        .branches
                        .iter()
                        .filter_map(|rb| match &rb.prefix {
                            Prefix::Recv { from, label, .. } if from == p => Some(label),
                            _ => None,
                        })
                        .collect();
                    if !inputs.is_empty() && !inputs.contains(&label) {
                        return Some(SessionErrorWitness::Label {
                            sender: p.clone(),
                            receiver: to.clone(),
                            label: label.clone(),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    None
}

/// A session step without a matching context step.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no context step matches {0}")]
pub struct NoMatchingStep(pub String);

/// Advances the context along a session step.
pub fn step_context(ctx: &LocalContext, s: &Step) -> Result<LocalContext, NoMatchingStep> {
    let StepKind::Comm {
        sender,
        receiver,
        label,
        payload,
    } = &s.kind
    else {
        return Ok(ctx.clone());
    };
    let u = match payload {
        Value::Nat(_) => PayloadType::Nat,
        Value::Bool(_) => PayloadType::Bool,
        Value::Var(_) => return Err(NoMatchingStep(s.to_string())),
    };
    context_steps(ctx)
        .into_iter()
        .find(|(a, _)| {
            matches!(a, TypeAction::Comm { sender: p, receiver: q, label: l, payload: v }
                if p == sender && q == receiver && l == label && *v == u)
        })
        .map(|(_, next)| next)
        .ok_or_else(|| NoMatchingStep(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process_text, parse_session, LabelMode};
    use crate::types::{parse_context, parse_type};

    fn proc_(s: &str) -> Process {
        parse_process_text(s, LabelMode::UserOnly).unwrap()
    }

    #[test]
    fn values() {
        let g = SharedContext::new().with_value(Variable::new("x"), PayloadType::Nat);
        assert_eq!(type_value(&g, &Value::Nat(5)), Ok(PayloadType::Nat));
        assert_eq!(type_value(&g, &Value::Bool(true)), Ok(PayloadType::Bool));
        assert_eq!(
            type_value(&g, &Value::Var(Variable::new("x"))),
            Ok(PayloadType::Nat)
        );
        assert!(type_value(&SharedContext::new(), &Value::Var(Variable::new("y"))).is_err());
    }

    #[test]
    fn outputs_may_be_fewer_than_declared() {
        let t = parse_type("q!a.end + q!b.end").unwrap();
        assert!(check_process(&SharedContext::new(), &proc_("q!a"), &t).is_ok());
        let t = parse_type("q!a(nat).end").unwrap();
        let errs = check_process(&SharedContext::new(), &proc_("q!a(tt)"), &t).unwrap_err();
        assert_eq!(errs[0].kind, TypeErrorKind::PayloadMismatch);
    }

    #[test]
    fn inputs_must_cover_declared_branches() {
        let t = parse_type("q?a.end + q?b.end").unwrap();
        let errs = check_process(&SharedContext::new(), &proc_("q?a"), &t).unwrap_err();
        assert_eq!(errs[0].kind, TypeErrorKind::UncoveredInputBranch);
        let t = parse_type("q?a.end").unwrap();
        let errs = check_process(&SharedContext::new(), &proc_("q?a + q?b"), &t).unwrap_err();
        assert_eq!(errs[0].kind, TypeErrorKind::MissingBranch);
    }

    #[test]
    fn recursion_and_conditionals() {
        let t = parse_type("rec t. q!a(nat).t").unwrap();
        let p = proc_("rec X. if tt then q!a(1).X else q!a(2).X");
        assert!(check_process(&SharedContext::new(), &p, &t).is_ok());
        let p = proc_("q?a(x). if x then 0 else 0");
        let t = parse_type("q?a(nat).end").unwrap();
        let errs = check_process(&SharedContext::new(), &p, &t).unwrap_err();
        assert_eq!(errs[0].kind, TypeErrorKind::PayloadMismatch);
    }

    #[test]
    fn sessions_and_errors() {
        assert!(check_session(&Session::new(), &LocalContext::new()).is_ok());
        let m = parse_session("role p = q!l1 role q = p?l2").unwrap();
        assert!(matches!(
            is_session_error(&m),
            Some(SessionErrorWitness::Label { .. })
        ));
        let m = parse_session("role p = q!l1 role q = p?l1 + p?l2").unwrap();
        assert!(is_session_error(&m).is_none());
        let m = parse_session("role p = if 5 then 0 else 0").unwrap();
        assert!(matches!(
            is_session_error(&m),
            Some(SessionErrorWitness::Value { .. })
        ));
    }

    #[test]
    fn context_follows_steps() {
        let m = parse_session("role p = q!l(tt) role q = p?l(x)").unwrap();
        let ctx = parse_context("p: q!l(bool).end; q: p?l(bool).end").unwrap();
        assert!(check_session(&m, &ctx).is_ok());
        let s = crate::semantics::enabled_steps(&m).remove(0);
        assert_eq!(
            step_context(&ctx, &s).unwrap(),
            parse_context("p: end; q: end").unwrap()
        );
    }
}

//! One function per subcommand, each producing a report.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use mcmp_core::encodings::{
    build_order, encode, encode_types_in, verify_correspondence, CorrespondenceReport, EncodingId,
    VerifyError,
};
use mcmp_core::lcmv::{
    check_cmv, cmv_steps, encode_lcmv_to_mcbs, explore_cmv, parse_cmv, render_cmv, verify_lcmv,
    CmvEncodeError, CmvProcess,
};
use mcmp_core::patterns::{find_m, find_star, is_electoral, PatternWitness};
use mcmp_core::semantics::{
    apply_step, enabled_steps, explore_session, has_success, unfolded, SemanticsError, Step,
};
use mcmp_core::syntax::{
    classify, parse_source, render_session, render_source, state_key, Label, ParticipantId,
    Process, Session, SourceFile,
};
use mcmp_core::types::{
    explore_contexts, is_deadlock_free, is_safe, render_context, CheckReport, Counterexample,
};
use mcmp_core::typing::{check_session, TypeError};
use mcmp_core::{Limits, LocalContext};
use serde_json::{json, Value};

use crate::args::PatternArg;
use crate::error::CliError;
use crate::report::{Outcome, Report};

/// Settings shared by every command.
pub struct Env {
    pub limits: Limits,
    pub dot: Option<PathBuf>,
}

impl Env {
    fn write_dot(&self, render: impl FnOnce() -> String) -> Result<(), CliError> {
        match &self.dot {
            Some(path) => fs::write(path, render()).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            }),
            None => Ok(()),
        }
    }

    fn session_dot(&self, m: &Session) -> Result<(), CliError> {
        self.write_dot(|| {
            explore_session(m, self.limits).to_dot(render_session, |s: &Step| s.to_string())
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<SourceFile, CliError> {
    parse_source(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_cmv(path: &Path) -> Result<CmvProcess, CliError> {
    parse_cmv(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn is_cmv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "cmv")
}

fn context_of(path: &Path, src: &SourceFile) -> Result<LocalContext, CliError> {
    src.context
        .clone()
        .ok_or_else(|| CliError::NoContext(path.to_path_buf()))
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn counterexample_json(c: &Counterexample) -> Value {
    json!({
        "path": strings(&c.path),
        "state": render_context(&c.state),
        "offending": c.offending.as_ref().map(ToString::to_string),
    })
}

fn type_error_json(e: &TypeError) -> Value {
    json!({
        "location": e.location,
        "kind": e.kind.to_string(),
        "message": e.message,
        "counterexample": e.counterexample.as_deref().map(counterexample_json),
    })
}

pub fn check(env: &Env, path: &Path) -> Result<Report, CliError> {
    let src = load(path)?;
    let ctx = context_of(path, &src)?;
    env.session_dot(&src.session)?;
    Ok(match check_session(&src.session, &ctx) {
        Ok(()) => Report::new(Outcome::Holds, "well typed", json!({ "errors": [] })),
        Err(errors) => {
            let text = errors
                .iter()
                .map(|e| format!("{}: {}: {}", e.location, e.kind, e.message))
                .collect::<Vec<_>>()
                .join("\n");
            let details =
                json!({ "errors": errors.iter().map(type_error_json).collect::<Vec<_>>() });
            Report::new(Outcome::Fails, text, details)
        }
    })
}

fn context_report(property: &str, report: CheckReport) -> Report {
    let details = json!({
        "property": property,
        "holds": report.holds,
        "truncated": report.truncated,
        "counterexample": report.counterexample.as_ref().map(counterexample_json),
    });
    match (&report.counterexample, report.truncated) {
        (Some(c), _) => {
            let mut text = format!("{property} fails after [{}]", strings(&c.path).join(", "));
            if let Some(o) = &c.offending {
                text.push_str(&format!("\nunmatched output {o}"));
            }
            text.push_str(&format!("\nin {}", render_context(&c.state)));
            Report::new(Outcome::Fails, text, details)
        }
        (None, true) => Report::new(
            Outcome::Truncated,
            format!("{property} undecided: exploration limits reached"),
            details,
        ),
        (None, false) => Report::new(Outcome::Holds, format!("{property} holds"), details),
    }
}

fn context_command(
    env: &Env,
    path: &Path,
    property: &str,
    decide: fn(&LocalContext, Limits) -> CheckReport,
) -> Result<Report, CliError> {
    let src = load(path)?;
    let ctx = context_of(path, &src)?;
    env.write_dot(|| {
        explore_contexts(&ctx, env.limits).to_dot(render_context, ToString::to_string)
    })?;
    Ok(context_report(property, decide(&ctx, env.limits)))
}

pub fn safety(env: &Env, path: &Path) -> Result<Report, CliError> {
    context_command(env, path, "safety", is_safe)
}

pub fn deadlock_freedom(env: &Env, path: &Path) -> Result<Report, CliError> {
    context_command(env, path, "deadlock-freedom", is_deadlock_free)
}

pub fn simulate(env: &Env, path: &Path, max_steps: usize, trace: bool) -> Result<Report, CliError> {
    let src = load(path)?;
    env.session_dot(&src.session)?;
    let mut m = src.session;
    let mut taken = Vec::new();
    let mut enabled = enabled_steps(&m);
    while taken.len() < max_steps {
        let Some(step) = enabled.first().cloned() else {
            break;
        };
        m = apply_step(&m, &step).expect("enabled steps apply");
        taken.push(step.to_string());
        enabled = enabled_steps(&m);
    }
    let terminated = unfolded(&m).parts().values().all(Process::is_terminated);
    let (outcome, verdict) = if !enabled.is_empty() {
        (Outcome::Truncated, "step limit reached")
    } else if terminated {
        (Outcome::Holds, "terminated")
    } else {
        (Outcome::Fails, "stuck with participants left to act")
    };
    let mut text = String::new();
    if trace {
        for s in &taken {
            text.push_str(&format!("{s}\n"));
        }
    }
    text.push_str(&format!(
        "{verdict} after {} steps\n{}",
        taken.len(),
        render_session(&m)
    ));
    let details = json!({
        "steps": taken.len(),
        "trace": trace.then_some(&taken),
        "state": render_session(&m),
        "success": has_success(&m),
        "terminated": terminated,
    });
    Ok(Report::new(outcome, text.trim_end(), details))
}

fn labels_of(p: &Process, out: &mut BTreeSet<Label>) {
    match p {
        Process::Nil | Process::Success | Process::Var(_) => {}
        Process::Rec(_, body) => labels_of(body, out),
        Process::Cond { then, els, .. } => {
            labels_of(then, out);
            labels_of(els, out);
        }
        Process::Choice(c) => {
            for b in &c.branches {
                out.insert(b.prefix.label().clone());
                labels_of(&b.cont, out);
            }
        }
    }
}

fn session_labels(m: &Session) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    for p in m.parts().values() {
        labels_of(p, &mut out);
    }
    out
}

fn sidecar(id: EncodingId, source: &Session, target: &Session) -> Value {
    let order: serde_json::Map<String, Value> = build_order(source)
        .into_iter()
        .map(|(p, rel)| {
            let pairs: Vec<Value> = rel
                .pairs()
                .iter()
                .map(|(a, b)| json!([a.as_str(), b.as_str()]))
                .collect();
            (p.as_str().to_string(), Value::Array(pairs))
        })
        .collect();
    let (administrative, carried): (Vec<Label>, Vec<Label>) = session_labels(target)
        .into_iter()
        .partition(Label::is_reserved);
    json!({
        "encoding": id.name(),
        "source_calculus": id.source().map(|s| s.to_string()),
        "target_calculus": id.target().to_string(),
        "target_classification": strings(classify(target)),
        "order": order,
        "labels": {
            "source": strings(carried),
            "administrative": strings(administrative),
        },
    })
}

fn write_sidecar(path: Option<&Path>, value: &Value) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let text = serde_json::to_string_pretty(value).expect("JSON values serialise");
            fs::write(p, text + "\n").map_err(|source| CliError::Write {
                path: p.to_path_buf(),
                source,
            })
        }
        None => Ok(()),
    }
}

fn cmv_encoding(p: &CmvProcess) -> Result<Result<Session, String>, CliError> {
    let classes = match check_cmv(p) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e.to_string())),
    };
    match encode_lcmv_to_mcbs(p, &classes) {
        Ok(m) => Ok(Ok(m)),
        Err(CmvEncodeError::Type(e)) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn translated(text: String, details: Value) -> Report {
    Report::new(Outcome::Holds, text, details)
}

pub fn encode_file(
    env: &Env,
    path: &Path,
    via: &str,
    sidecar_path: Option<&Path>,
) -> Result<Report, CliError> {
    let id: EncodingId = via.parse()?;
    if is_cmv(path) {
        if id != EncodingId::LcmvToMcbs {
            return Err(CliError::Usage(format!(
                "{} only applies to sessions",
                id.name()
            )));
        }
        return cmv_encode(env, path);
    }
    let src = load(path)?;
    env.session_dot(&src.session)?;
    let target = encode(&src.session, id)?;
    let types = match &src.context {
        Some(ctx) => Some(encode_types_in(ctx, id, src.session.layout())?),
        None => None,
    };
    let side = sidecar(id, &src.session, &target);
    write_sidecar(sidecar_path, &side)?;
    let text = render_source(&target, types.as_ref());
    let details = json!({ "target": text, "sidecar": side });
    Ok(translated(text.trim_end().to_string(), details))
}

fn correspondence_report(id: EncodingId, r: &CorrespondenceReport) -> Report {
    let details = json!({
        "encoding": id.name(),
        "passes": r.passes(),
        "completeness": r.completeness,
        "soundness": r.soundness,
        "success_sensitive": r.success_sensitive,
        "divergence_reflected": r.divergence_reflected,
        "distributability_preserved": r.distributability_preserved,
        "max_emulation_factor": r.max_emulation_factor,
        "factor_bound": r.factor_bound,
        "emulation_lengths": r.emulation_lengths,
        "witnesses": r.witnesses,
        "source_states": r.source_states,
        "target_states": r.target_states,
    });
    let bound = r
        .factor_bound
        .map_or_else(|| "none".to_string(), |b| b.to_string());
    let mut text = format!(
        "{}: completeness {}, soundness {}, success sensitiveness {}, \
         divergence reflection {}, distributability {}\nemulation factor {} (bound {bound})",
        id.name(),
        r.completeness,
        r.soundness,
        r.success_sensitive,
        r.divergence_reflected,
        r.distributability_preserved,
        r.max_emulation_factor,
    );
    for w in &r.witnesses {
        text.push_str(&format!("\n{w}"));
    }
    let outcome = if r.passes() {
        Outcome::Holds
    } else {
        Outcome::Fails
    };
    Report::new(outcome, text, details)
}

fn truncated(what: &str) -> Report {
    Report::new(
        Outcome::Truncated,
        format!("{what} undecided: exploration limits reached"),
        json!({ "truncated": true }),
    )
}

pub fn verify_encoding(env: &Env, path: &Path, via: &str) -> Result<Report, CliError> {
    let id: EncodingId = via.parse()?;
    let result = if is_cmv(path) {
        if id != EncodingId::LcmvToMcbs {
            return Err(CliError::Usage(format!(
                "{} only applies to sessions",
                id.name()
            )));
        }
        let p = load_cmv(path)?;
        cmv_dot(env, &p)?;
        verify_lcmv(&p, env.limits)
    } else {
        let src = load(path)?;
        env.session_dot(&src.session)?;
        verify_correspondence(&src.session, id, env.limits)
    };
    match result {
        Ok(r) => Ok(correspondence_report(id, &r)),
        Err(VerifyError::Truncated) => Ok(truncated("correspondence")),
        Err(VerifyError::Encode(e)) => Err(e.into()),
    }
}

fn witness_json<S: std::fmt::Display>(state: String, w: &PatternWitness<S>) -> Value {
    json!({
        "pattern": w.kind.to_string(),
        "state": state,
        "steps": strings(&w.steps),
        "conflicts": w.conflict_edges,
    })
}

fn witness_text<S: std::fmt::Display>(state: &str, w: &PatternWitness<S>) -> String {
    let mut text = format!("{} found in\n{state}", w.kind);
    for (i, s) in w.steps.iter().enumerate() {
        text.push_str(&format!("\n  {i}: {s}"));
    }
    let edges: Vec<String> = w
        .conflict_edges
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    text.push_str(&format!("\nconflicts {}", edges.join(" ")));
    text
}

fn not_found(pattern: PatternArg, states: usize, truncated: bool) -> Report {
    let name = match pattern {
        PatternArg::M => "m",
        PatternArg::Star => "star",
    };
    let details = json!({ "pattern": name, "states": states, "truncated": truncated });
    if truncated {
        Report::new(
            Outcome::Truncated,
            format!("no {name} in the first {states} states; exploration limits reached"),
            details,
        )
    } else {
        Report::new(
            Outcome::Fails,
            format!("no {name} in any of the {states} reachable states"),
            details,
        )
    }
}

fn cmv_dot(env: &Env, p: &CmvProcess) -> Result<(), CliError> {
    if env.dot.is_none() {
        return Ok(());
    }
    let g = explore_cmv(p, env.limits)?;
    env.write_dot(|| g.to_dot(|s| render_cmv(&s.to_program()), ToString::to_string))
}

pub fn detect(env: &Env, path: &Path, pattern: PatternArg) -> Result<Report, CliError> {
    if is_cmv(path) {
        let p = load_cmv(path)?;
        cmv_dot(env, &p)?;
        let g = explore_cmv(&p, env.limits)?;
        for s in &g.states {
            let all = cmv_steps(s);
            let steps: Vec<_> = all.iter().map(|(st, _)| st.clone()).collect();
            let successor = |st: &_| all.iter().find(|(x, _)| x == st).map(|(_, n)| n.clone());
            let found = match pattern {
                PatternArg::M => find_m(&steps, successor),
                PatternArg::Star => find_star(&steps, successor),
            };
            if let Some(w) = found {
                let state = render_cmv(&s.to_program());
                return Ok(Report::new(
                    Outcome::Holds,
                    witness_text(&state, &w),
                    witness_json(state, &w),
                ));
            }
        }
        return Ok(not_found(pattern, g.len(), g.truncated));
    }
    let src = load(path)?;
    env.session_dot(&src.session)?;
    let g = explore_session(&src.session, env.limits);
    for m in &g.states {
        let steps = enabled_steps(m);
        let successor = |s: &Step| apply_step(m, s).ok().map(|n| state_key(&n));
        let found = match pattern {
            PatternArg::M => find_m(&steps, successor),
            PatternArg::Star => find_star(&steps, successor),
        };
        if let Some(w) = found {
            let state = render_session(m);
            return Ok(Report::new(
                Outcome::Holds,
                witness_text(&state, &w),
                witness_json(state, &w),
            ));
        }
    }
    Ok(not_found(pattern, g.len(), g.truncated))
}

pub fn classify_file(env: &Env, path: &Path) -> Result<Report, CliError> {
    let src = load(path)?;
    env.session_dot(&src.session)?;
    let calculi = strings(classify(&src.session));
    Ok(Report::new(
        Outcome::Holds,
        calculi.join(" "),
        json!({ "calculi": calculi }),
    ))
}

pub fn electoral(env: &Env, path: &Path, station: &str, label: &str) -> Result<Report, CliError> {
    let src = load(path)?;
    env.session_dot(&src.session)?;
    let station = ParticipantId::new(station);
    let label = Label::new(label);
    match is_electoral(&src.session, &station, &label, env.limits) {
        Ok(r) => {
            let path_steps = r.counterexample.as_ref().map(strings);
            let details = json!({
                "holds": r.holds,
                "counterexample": path_steps,
                "announced": strings(&r.announced),
            });
            if r.holds {
                Ok(Report::new(
                    Outcome::Holds,
                    "every maximal execution elects exactly one leader",
                    details,
                ))
            } else {
                let text = format!(
                    "an execution elects {} leaders [{}]\nalong [{}]",
                    r.announced.len(),
                    strings(&r.announced).join(", "),
                    path_steps.unwrap_or_default().join(", ")
                );
                Ok(Report::new(Outcome::Fails, text, details))
            }
        }
        Err(SemanticsError::Divergent) => Ok(Report::new(
            Outcome::Fails,
            "some execution never ends",
            json!({ "holds": false, "divergent": true }),
        )),
        Err(SemanticsError::Truncated) => Ok(truncated("electoral check")),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

pub fn cmv_check(env: &Env, path: &Path) -> Result<Report, CliError> {
    let p = load_cmv(path)?;
    cmv_dot(env, &p)?;
    Ok(match check_cmv(&p) {
        Ok(classes) => {
            let text = classes
                .iter()
                .map(|(id, class)| format!("choice {id}: {class}"))
                .collect::<Vec<_>>()
                .join("\n");
            let map: serde_json::Map<String, Value> = classes
                .iter()
                .map(|(id, class)| (id.to_string(), Value::String(class.to_string())))
                .collect();
            Report::new(Outcome::Holds, text, json!({ "choices": map }))
        }
        Err(e) => Report::new(
            Outcome::Fails,
            e.to_string(),
            json!({ "error": e.to_string() }),
        ),
    })
}

pub fn cmv_encode(env: &Env, path: &Path) -> Result<Report, CliError> {
    let p = load_cmv(path)?;
    cmv_dot(env, &p)?;
    Ok(match cmv_encoding(&p)? {
        Ok(m) => {
            let text = render_session(&m);
            let details = json!({
                "target": text,
                "target_classification": strings(classify(&m)),
            });
            translated(text.trim_end().to_string(), details)
        }
        Err(e) => Report::new(Outcome::Fails, e.clone(), json!({ "error": e })),
    })
}

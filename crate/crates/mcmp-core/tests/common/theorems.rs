//! Executable subject reduction, communication safety and
//! deadlock-freedom over the reachable states of a typed session.

use std::collections::{BTreeSet, VecDeque};

use mcmp_core::semantics::{apply_step, enabled_steps};
use mcmp_core::syntax::{render_session, state_key, Process, Session, StateKey};
use mcmp_core::types::is_deadlock_free;
use mcmp_core::typing::{check_session, is_session_error, step_context};
use mcmp_core::{Limits, LocalContext};

/// Violations of subject reduction, safety or deadlock-freedom reachable
/// from a typed session.
pub fn theorem_violations(
    m: &Session,
    ctx: &LocalContext,
    limits: Limits,
) -> Result<Vec<String>, String> {
    let df = is_deadlock_free(ctx, limits).holds;
    let mut seen: BTreeSet<(StateKey, LocalContext)> = BTreeSet::new();
    let mut queue = VecDeque::from([(m.clone(), ctx.clone())]);
    let mut out = Vec::new();
    while let Some((m, ctx)) = queue.pop_front() {
        if !seen.insert((state_key(&m), ctx.clone())) {
            continue;
        }
        if seen.len() > limits.max_states {
            return Err("state bound reached".into());
        }
        if let Some(w) = is_session_error(&m) {
            out.push(format!("error session {w:?}"));
        }
        let steps = enabled_steps(&m);
        if df && steps.is_empty() && !m.parts().values().all(Process::is_terminated) {
            out.push(format!("deadlock in {}", render_session(&m)));
        }
        for s in steps {
            let next = apply_step(&m, &s).map_err(|e| e.to_string())?;
            match step_context(&ctx, &s) {
                Ok(next_ctx) => {
                    if let Err(es) = check_session(&next, &next_ctx) {
                        out.push(format!("after {s}: {}", es[0]));
                    }
                    queue.push_back((next, next_ctx));
                }
                Err(e) => out.push(format!("no context step for {e}")),
            }
        }
    }
    Ok(out)
}

//! Bounded checks of the good-encoding criteria on concrete sessions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{encode, EncodeError, EncodingId};
use crate::graph::{explore, Graph, Limits, TransitionSystem};
use crate::semantics::{
    explore_sessions, has_success, session_partition, Observables, SessionSystem, StateGraph, Step,
    StepKind,
};
use crate::syntax::{apply_rename, Label, ParticipantId, Renaming, Session};

/// Outcome of the correspondence checks of one encoding on one session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    /// Every source step has a target emulation.
    pub completeness: bool,
    /// Lengths of the shortest emulations, one per source edge.
    pub emulation_lengths: Vec<usize>,
    /// Every reachable target state can complete to an encoded source state.
    pub soundness: bool,
    /// Reachability of success agrees on every source state.
    pub success_sensitive: bool,
    /// Target divergence implies source divergence.
    pub divergence_reflected: bool,
    /// Components of the translation behave like translated components.
    pub distributability_preserved: bool,
    /// Most target steps one pair of participants needs for one source step.
    pub max_emulation_factor: usize,
    /// The bound proved for the encoding, if any.
    pub factor_bound: Option<usize>,
    /// Human-readable descriptions of failed checks.
    pub witnesses: Vec<String>,
    /// Source states explored.
    pub source_states: usize,
    /// Target states explored.
    pub target_states: usize,
}

impl CorrespondenceReport {
    /// All criteria hold and the factor is within its bound.
    pub fn passes(&self) -> bool {
        self.completeness
            && self.soundness
            && self.success_sensitive
            && self.divergence_reflected
            && self.distributability_preserved
            && self
                .factor_bound
                .is_none_or(|b| self.max_emulation_factor <= b)
    }
}

/// Reasons the harness cannot produce a verdict.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    /// Exploration hit a limit.
    #[error("state space truncated by the exploration limits")]
    Truncated,
    /// The translation failed.
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// True for steps that only coordinate an emulation.
pub fn is_administrative(l: &Label) -> bool {
    let s = l.as_str();
    s == Label::ENC_OUT || s == Label::ENC_IN || s == Label::RESET || s.ends_with(".i")
}

fn administrative(s: &Step) -> bool {
    s.label().is_some_and(is_administrative)
}

/// What the generic harness needs to know about a source calculus.
pub struct SourceSpec<'a, T: TransitionSystem> {
    /// The source transition system.
    pub system: &'a T,
    /// The source term.
    pub root: T::State,
    /// Translation of a source state.
    pub encode: &'a dyn Fn(&T::State) -> Result<Session, EncodeError>,
    /// Success predicate on source states.
    pub success: &'a dyn Fn(&T::State) -> bool,
    /// Pairs of (component of the translation, translation of the
    /// component) that must be weakly bisimilar.
    pub components: Vec<(Session, Session)>,
    /// The proved step bound.
    pub factor_bound: Option<usize>,
}

/// Checks completeness, soundness, success sensitiveness, divergence
/// reflection and distributability of a translation on one source term.
pub fn verify_source<T: TransitionSystem>(
    spec: SourceSpec<'_, T>,
    limits: Limits,
) -> Result<CorrespondenceReport, VerifyError> {
    let src: Graph<T::State, T::Label> =
        explore(spec.system, alloc::vec![spec.root.clone()], limits);
    if src.truncated {
        return Err(VerifyError::Truncated);
    }
    let encoded: Vec<Session> = src
        .states
        .iter()
        .map(|s| (spec.encode)(s))
        .collect::<Result<_, _>>()?;
    let tgt = explore_sessions(encoded, limits);
    if tgt.truncated {
        return Err(VerifyError::Truncated);
    }
    let image: Vec<usize> = tgt.roots.clone();
    let root = image[src.root()];
    let by_success = session_partition(&tgt, Observables::Success);
    let by_barbs = session_partition(&tgt, Observables::SuccessAndBarbs);
    let mut witnesses = Vec::new();

    let mut completeness = true;
    let mut emulation_lengths = Vec::new();
    for e in &src.edges {
        let fine = by_barbs[image[e.to]];
        let coarse = by_success[image[e.to]];
        let path = tgt
            .shortest_path(image[e.from], 1, |j| by_barbs[j] == fine)
            .or_else(|| tgt.shortest_path(image[e.from], 1, |j| by_success[j] == coarse));
        match path {
            Some(path) => emulation_lengths.push(path.len()),
            None => {
                completeness = false;
                witnesses.push(alloc::format!(
                    "completeness: source edge {} -> {} has no emulation",
                    e.from,
                    e.to
                ));
            }
        }
    }

    let reach_src = src.reachable(&[src.root()]);
    let clean_blocks: alloc::collections::BTreeSet<usize> =
        reach_src.ones().map(|i| by_barbs[image[i]]).collect();
    let reach_tgt = tgt.reachable(&[root]);
    let reach_sets = tgt.reach_sets();
    let mut soundness = true;
    for t in reach_tgt.ones() {
        if !reach_sets[t]
            .ones()
            .any(|j| clean_blocks.contains(&by_barbs[j]))
        {
            soundness = false;
            let path = tgt.shortest_path(root, 0, |j| j == t).unwrap_or_default();
            let steps: Vec<String> = path
                .iter()
                .map(|&e| tgt.edges[e].label.to_string())
                .collect();
            witnesses.push(alloc::format!(
                "soundness: stranded partial emulation after [{}]",
                steps.join(", ")
            ));
            break;
        }
    }

    let src_may = crate::semantics::may_succeed_all(&src, |s| (spec.success)(s));
    let tgt_may = crate::semantics::may_succeed_all(&tgt, has_success);
    let mut success_sensitive = true;
    for i in reach_src.ones() {
        if src_may[i] != tgt_may[image[i]] {
            success_sensitive = false;
            witnesses.push(alloc::format!(
                "success: source state {i} may succeed = {}, translation = {}",
                src_may[i],
                tgt_may[image[i]]
            ));
            break;
        }
    }

    let divergence_reflected = !tgt.cycle_reachable(&[root]) || src.cycle_reachable(&[src.root()]);
    if !divergence_reflected {
        witnesses.push(String::from(
            "divergence: the translation diverges, the source does not",
        ));
    }

    let mut distributability_preserved = true;
    for (a, b) in &spec.components {
        if !success_bisimilar(a, b, limits)? {
            distributability_preserved = false;
            witnesses.push(alloc::format!(
                "distributability: component {:?} differs",
                a.layout()
            ));
        }
    }

    let max_emulation_factor = emulation_factor(&tgt, root);
    if let Some(b) = spec.factor_bound {
        if max_emulation_factor > b {
            witnesses.push(alloc::format!(
                "factor: {max_emulation_factor} steps exceed the bound {b}"
            ));
        }
    }

    Ok(CorrespondenceReport {
        completeness,
        emulation_lengths,
        soundness,
        success_sensitive,
        divergence_reflected,
        distributability_preserved,
        max_emulation_factor,
        factor_bound: spec.factor_bound,
        witnesses,
        source_states: src.len(),
        target_states: tgt.len(),
    })
}

/// Weak bisimilarity of two sessions with success as the only observable.
pub fn success_bisimilar(a: &Session, b: &Session, limits: Limits) -> Result<bool, VerifyError> {
    let g = explore_sessions(alloc::vec![a.clone(), b.clone()], limits);
    if g.truncated {
        return Err(VerifyError::Truncated);
    }
    let blocks = session_partition(&g, Observables::Success);
    Ok(blocks[g.roots[0]] == blocks[g.roots[1]])
}

fn pair_of(s: &Step) -> Option<(ParticipantId, ParticipantId)> {
    match &s.kind {
        StepKind::Comm {
            sender, receiver, ..
        } => {
            let (a, b) = if sender < receiver {
                (sender, receiver)
            } else {
                (receiver, sender)
            };
            Some((a.clone(), b.clone()))
        }
        _ => None,
    }
}

/// The longest run of administrative steps of one pair, plus the step it
/// prepares; `usize::MAX` when such a run can cycle.
fn emulation_factor(g: &StateGraph, root: usize) -> usize {
    let reach = g.reachable(&[root]);
    if reach.ones().all(|i| g.is_terminal(i)) {
        return 0;
    }
    let mut pairs: BTreeMap<(ParticipantId, ParticipantId), ()> = BTreeMap::new();
    for e in &g.edges {
        if administrative(&e.label) {
            if let Some(p) = pair_of(&e.label) {
                pairs.insert(p, ());
            }
        }
    }
    let mut best = 0usize;
    for pair in pairs.keys() {
        let mut memo: Vec<Option<usize>> = alloc::vec![None; g.len()];
        let mut on_stack = alloc::vec![false; g.len()];
        for i in reach.ones() {
            match longest(g, pair, i, &mut memo, &mut on_stack) {
                Some(n) => best = best.max(n),
                None => return usize::MAX,
            }
        }
    }
    best + 1
}

fn longest(
    g: &StateGraph,
    pair: &(ParticipantId, ParticipantId),
    i: usize,
    memo: &mut Vec<Option<usize>>,
    on_stack: &mut Vec<bool>,
) -> Option<usize> {
    if let Some(n) = memo[i] {
        return Some(n);
    }
    if on_stack[i] {
        return None;
    }
    on_stack[i] = true;
    let mut best = 0;
    let edges: Vec<usize> = g
        .out_edges(i)
        .filter(|e| administrative(&e.label) && pair_of(&e.label).as_ref() == Some(pair))
        .map(|e| e.to)
        .collect();
    for j in edges {
        best = best.max(1 + longest(g, pair, j, memo, on_stack)?);
    }
    on_stack[i] = false;
    memo[i] = Some(best);
    Some(best)
}

/// Runs the harness for a session encoding.
pub fn verify_correspondence(
    m: &Session,
    id: EncodingId,
    limits: Limits,
) -> Result<CorrespondenceReport, VerifyError> {
    let enc = |s: &Session| encode(s, id);
    let whole = encode(m, id)?;
    let mut components = Vec::new();
    for p in m.layout() {
        let mut keep = alloc::collections::BTreeSet::new();
        keep.insert(p.clone());
        components.push((whole.restrict(&keep), encode(&m.restrict(&keep), id)?));
    }
    verify_source(
        SourceSpec {
            system: &SessionSystem,
            root: m.clone(),
            encode: &enc,
            success: &has_success,
            components,
            factor_bound: id.factor_bound(),
        },
        limits,
    )
}

/// Name invariance: syntactic equality for the order-free encodings,
/// weak bisimilarity with success observable otherwise.
pub fn verify_name_invariance(
    m: &Session,
    id: EncodingId,
    sigma: &Renaming,
    limits: Limits,
) -> Result<bool, VerifyError> {
    let renamed = apply_rename(m, sigma).map_err(|e| EncodeError::Shape(e.to_string()))?;
    let left = encode(&renamed, id)?;
    let right =
        apply_rename(&encode(m, id)?, sigma).map_err(|e| EncodeError::Shape(e.to_string()))?;
    if !id.is_order_dependent() {
        return Ok(crate::syntax::struct_congruent(&left, &right));
    }
    success_bisimilar(&left, &right, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_session;

    fn check(src: &str, id: EncodingId) -> CorrespondenceReport {
        let m = parse_session(src).unwrap();
        verify_correspondence(&m, id, Limits::default()).unwrap()
    }

    #[test]
    fn mixed_binary_split_is_a_good_encoding() {
        let r = check(
            "role a = b!x.ok + b?y role b = a?x + a!y.ok",
            EncodingId::McbsToScbs,
        );
        assert!(r.passes(), "{:?}", r.witnesses);
        assert!(r.max_emulation_factor <= 3);
    }

    #[test]
    fn separate_binary_takes_two_steps() {
        let r = check(
            "role a = b!x.ok + b!y role b = a?x + a?y",
            EncodingId::ScbsToBs,
        );
        assert!(r.passes(), "{:?}", r.witnesses);
        assert_eq!(r.max_emulation_factor, 2);
        assert!(r.emulation_lengths.iter().all(|&n| n == 2));
    }

    #[test]
    fn administrative_labels() {
        for l in ["enc_o", "enc_i", "reset", "go.i"] {
            assert!(is_administrative(&Label::new(l)));
        }
        assert!(!is_administrative(&Label::new("go.o")));
        assert!(!is_administrative(&Label::new("go")));
    }
}

//! Structural functions on local types: participants, prefixes, free
//! variables, guardedness, well-formedness, unfolding and canonical forms.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::ast::{LocalContext, LocalType, PayloadType, TBranch, TypeVar};
use crate::syntax::{Label, ParticipantId, Polarity};

/// Ways a type can fail the preconditions of the type-level algorithms.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeFormError {
    /// Two summands share peer, polarity and label.
    #[error("summands with the same peer and polarity must have distinct labels")]
    LabelClash,
    /// A recursion variable occurs unguarded.
    #[error("unguarded recursion variable `{0}`")]
    Unguarded(alloc::string::String),
    /// A free type variable occurs.
    #[error("free type variable `{0}`")]
    Open(alloc::string::String),
}

/// Participants mentioned anywhere in the type.
pub fn pt(t: &LocalType) -> BTreeSet<ParticipantId> {
    let mut out = BTreeSet::new();
    collect_pt(t, &mut out);
    out
}

fn collect_pt(t: &LocalType, out: &mut BTreeSet<ParticipantId>) {
    match t {
        LocalType::End | LocalType::Var(_) => {}
        LocalType::Rec(_, body) => collect_pt(body, out),
        LocalType::Choice(bs) => {
            for b in bs {
                out.insert(b.peer.clone());
                collect_pt(&b.cont, out);
            }
        }
    }
}

/// The peer and polarity pairs of the top choice layer.
pub fn prefix(t: &LocalType) -> BTreeSet<(ParticipantId, Polarity)> {
    match t {
        LocalType::Choice(bs) => bs.iter().map(|b| (b.peer.clone(), b.polarity)).collect(),
        LocalType::Rec(_, body) => prefix(body),
        _ => BTreeSet::new(),
    }
}

/// Free type variables.
pub fn ftv(t: &LocalType) -> BTreeSet<TypeVar> {
    fn go(t: &LocalType, bound: &mut Vec<TypeVar>, out: &mut BTreeSet<TypeVar>) {
        match t {
            LocalType::End => {}
            LocalType::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            LocalType::Rec(v, body) => {
                bound.push(v.clone());
                go(body, bound, out);
                bound.pop();
            }
            LocalType::Choice(bs) => {
                for b in bs {
                    go(&b.cont, bound, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// True iff no recursion variable occurs directly under its own binder
/// without an intervening choice.
pub fn guarded(t: &LocalType) -> bool {
    unguarded_var(t).is_none()
}

fn unguarded_var(t: &LocalType) -> Option<TypeVar> {
    fn go(t: &LocalType, pending: &mut Vec<TypeVar>) -> Option<TypeVar> {
        match t {
            LocalType::End => None,
            LocalType::Var(v) => pending.contains(v).then(|| v.clone()),
            LocalType::Rec(v, body) => {
                pending.push(v.clone());
                let r = go(body, pending);
                pending.pop();
                r
            }
            LocalType::Choice(bs) => bs.iter().find_map(|b| go(&b.cont, &mut Vec::new())),
        }
    }
    go(t, &mut Vec::new())
}

/// True iff every choice has pairwise distinct labels among summands that
/// share peer and polarity.
pub fn well_formed(t: &LocalType) -> bool {
    match t {
        LocalType::End | LocalType::Var(_) => true,
        LocalType::Rec(_, body) => well_formed(body),
        LocalType::Choice(bs) => {
            let mut seen = BTreeSet::new();
            bs.iter()
                .all(|b| seen.insert((&b.peer, b.polarity, &b.label)) && well_formed(&b.cont))
        }
    }
}

/// Checks well-formedness, guardedness and closedness.
pub fn validate(t: &LocalType) -> Result<(), TypeFormError> {
    if !well_formed(t) {
        return Err(TypeFormError::LabelClash);
    }
    if let Some(v) = unguarded_var(t) {
        return Err(TypeFormError::Unguarded(format!("{v}")));
    }
    if let Some(v) = ftv(t).into_iter().next() {
        return Err(TypeFormError::Open(format!("{v}")));
    }
    Ok(())
}

/// Checks every entry of a context.
pub fn validate_context(ctx: &LocalContext) -> Result<(), TypeFormError> {
    ctx.entries().values().try_for_each(validate)
}

/// Replaces the free occurrences of `v` in `t` by the closed type `by`.
pub fn substitute_type(t: &LocalType, v: &TypeVar, by: &LocalType) -> LocalType {
    match t {
        LocalType::End => LocalType::End,
        LocalType::Var(w) if w == v => by.clone(),
        LocalType::Var(_) => t.clone(),
        LocalType::Rec(w, _) if w == v => t.clone(),
        LocalType::Rec(w, body) => {
            LocalType::Rec(w.clone(), Box::new(substitute_type(body, v, by)))
        }
        LocalType::Choice(bs) => LocalType::Choice(
            bs.iter()
                .map(|b| TBranch {
                    cont: substitute_type(&b.cont, v, by),
                    ..b.clone()
                })
                .collect(),
        ),
    }
}

/// Unfolds the outermost recursion once.
pub fn unfold(t: &LocalType) -> LocalType {
    match t {
        LocalType::Rec(v, body) => substitute_type(body, v, t),
        _ => t.clone(),
    }
}

/// Unfolds outermost recursions until a choice, `end` or a variable shows.
pub fn unfold_all(t: &LocalType) -> LocalType {
    let mut cur = t.clone();
    while let LocalType::Rec(..) = cur {
        cur = unfold(&cur);
    }
    cur
}

/// The unique representative of the infinite unfolding of a closed,
/// guarded type: equal for two types iff their unfoldings coincide.
pub fn canonical_type(t: &LocalType) -> LocalType {
    let mut auto = Automaton::default();
    let root = auto.node(t);
    let class = auto.minimise();
    let mut stack = Vec::new();
    auto.emit(root, &class, &mut stack)
}

/// Equality of infinite unfoldings.
pub fn types_equivalent(a: &LocalType, b: &LocalType) -> bool {
    canonical_type(a) == canonical_type(b)
}

type Edge = (ParticipantId, Polarity, Label, PayloadType, usize);

#[derive(Default)]
struct Automaton {
    index: BTreeMap<LocalType, usize>,
    nodes: Vec<Option<Vec<Edge>>>,
}

impl Automaton {
    fn node(&mut self, t: &LocalType) -> usize {
        let u = unfold_all(t);
        if let Some(&i) = self.index.get(&u) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(u.clone(), i);
        self.nodes.push(None);
        let edges = match &u {
            LocalType::Choice(bs) => bs
                .iter()
                .map(|b| {
                    let to = self.node(&b.cont);
                    (b.peer.clone(), b.polarity, b.label.clone(), b.payload, to)
                })
                .collect(),
            _ => Vec::new(),
        };
        self.nodes[i] = Some(edges);
        i
    }

    fn edges(&self, i: usize) -> &[Edge] {
        self.nodes[i].as_deref().unwrap_or(&[])
    }

    fn minimise(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut class = alloc::vec![0usize; n];
        let mut count = 1;
        loop {
            let sigs: Vec<(usize, Vec<Edge>)> = (0..n)
                .map(|i| {
                    let mut s: Vec<_> = self
                        .edges(i)
                        .iter()
                        .map(|(p, d, l, u, to)| (p.clone(), *d, l.clone(), *u, class[*to]))
                        .collect();
                    s.sort();
                    s.dedup();
                    (class[i], s)
                })
                .collect();
            let mut ids = BTreeMap::new();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| {
                    let k = ids.len();
                    *ids.entry(s.clone()).or_insert(k)
                })
                .collect();
            class = next;
            if ids.len() == count {
                return class;
            }
            count = ids.len();
        }
    }

    fn emit(&self, i: usize, class: &[usize], stack: &mut Vec<usize>) -> LocalType {
        let c = class[i];
        if let Some(depth) = stack.iter().position(|&d| d == c) {
            return LocalType::Var(TypeVar::new(format!("t{depth}")));
        }
        let edges = self.edges(i);
        if edges.is_empty() {
            return LocalType::End;
        }
        let depth = stack.len();
        stack.push(c);
        let mut bs: Vec<TBranch> = edges
            .iter()
            .map(|(p, d, l, u, to)| TBranch {
                peer: p.clone(),
                polarity: *d,
                label: l.clone(),
                payload: *u,
                cont: self.emit(*to, class, stack),
            })
            .collect();
        stack.pop();
        bs.sort();
        bs.dedup();
        let var = TypeVar::new(format!("t{depth}"));
        let body = LocalType::Choice(bs);
        if ftv(&body).contains(&var) {
            LocalType::Rec(var, Box::new(body))
        } else {
            body
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn ty(s: &str) -> LocalType {
        parse_type(s).unwrap()
    }

    #[test]
    fn well_formedness_keys_on_peer_polarity_and_label() {
        assert!(!well_formed(&ty("q!l(nat).end + q!l(bool).end")));
        assert!(well_formed(&ty("q!l(nat).end + q?l(nat).end")));
        assert!(well_formed(&LocalType::End));
    }

    #[test]
    fn auxiliary_functions() {
        assert!(pt(&LocalType::End).is_empty());
        assert_eq!(ftv(&LocalType::var("t")).len(), 1);
        let p = prefix(&ty("q!l1(nat).end + r?l2(bool).end"));
        let want: BTreeSet<_> = [
            (ParticipantId::new("q"), Polarity::Out),
            (ParticipantId::new("r"), Polarity::In),
        ]
        .into_iter()
        .collect();
        assert_eq!(p, want);
        assert!(guarded(&ty("rec t. u")));
        assert!(!guarded(&ty("rec t. t")));
        assert!(guarded(&ty("rec t. q!l.t")));
    }

    #[test]
    fn unfolding() {
        assert_eq!(unfold(&LocalType::End), LocalType::End);
        let t = ty("rec t. q!l(nat).t");
        assert_eq!(unfold(&t), ty("q!l(nat).rec t. q!l(nat).t"));
    }

    #[test]
    fn canonical_forms_identify_unfoldings() {
        let t = ty("rec t. q!l.t");
        assert!(types_equivalent(&t, &unfold(&t)));
        assert!(types_equivalent(&t, &ty("rec u. q!l.q!l.u")));
        assert!(!types_equivalent(&t, &ty("q!l.end")));
        assert_eq!(canonical_type(&LocalType::End), LocalType::End);
    }
}

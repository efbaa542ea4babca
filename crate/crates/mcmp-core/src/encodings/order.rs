//! The participant order that the order-dependent encodings consult, built
//! top-down over the parallel composition tree of a session.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::syntax::{ParticipantId, Session};

/// The pairs `(p, q)` read as `p < q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderRelation {
    pairs: BTreeSet<(ParticipantId, ParticipantId)>,
}

impl OrderRelation {
    /// Wraps a set of pairs.
    pub fn from_pairs(pairs: BTreeSet<(ParticipantId, ParticipantId)>) -> Self {
        Self { pairs }
    }

    /// The pairs.
    pub fn pairs(&self) -> &BTreeSet<(ParticipantId, ParticipantId)> {
        &self.pairs
    }

    /// Whether `p < q`. Peers that are not ordered against `p` come after
    /// it, and unrelated pairs fall back to name order.
    pub fn less(&self, p: &ParticipantId, q: &ParticipantId) -> bool {
        if self.pairs.contains(&(p.clone(), q.clone())) {
            return true;
        }
        if self.pairs.contains(&(q.clone(), p.clone())) {
            return false;
        }
        let known = |x: &ParticipantId| self.pairs.iter().any(|(a, b)| a == x || b == x);
        match (known(p), known(q)) {
            (true, false) => true,
            (false, true) => false,
            _ => p < q,
        }
    }
}

enum Tree<'a> {
    Leaf(&'a ParticipantId),
    Par(alloc::boxed::Box<Tree<'a>>, alloc::boxed::Box<Tree<'a>>),
}

impl Tree<'_> {
    fn parts(&self, out: &mut BTreeSet<ParticipantId>) {
        match self {
            Tree::Leaf(p) => {
                out.insert((*p).clone());
            }
            Tree::Par(l, r) => {
                l.parts(out);
                r.parts(out);
            }
        }
    }
}

type Rel = BTreeSet<(ParticipantId, ParticipantId)>;

fn left_update(rel: &Rel, f: &BTreeSet<ParticipantId>) -> Rel {
    let first: Rel = rel.iter().filter(|(p, _)| f.contains(p)).cloned().collect();
    let range: BTreeSet<&ParticipantId> = first.iter().map(|(_, q)| q).collect();
    let second = rel
        .iter()
        .filter(|(p, q)| f.contains(q) && !range.contains(p))
        .cloned();
    let mut out = first.clone();
    out.extend(second);
    out
}

fn right_update(rel: &Rel, f: &BTreeSet<ParticipantId>) -> Rel {
    let first: Rel = rel.iter().filter(|(_, q)| f.contains(q)).cloned().collect();
    let domain: BTreeSet<&ParticipantId> = first.iter().map(|(p, _)| p).collect();
    let second = rel
        .iter()
        .filter(|(p, q)| f.contains(p) && !domain.contains(q))
        .cloned();
    let mut out = first.clone();
    out.extend(second);
    out
}

fn descend(t: &Tree<'_>, rel: &Rel, left: bool, out: &mut BTreeMap<ParticipantId, OrderRelation>) {
    let mut f = BTreeSet::new();
    t.parts(&mut f);
    let here = if left {
        left_update(rel, &f)
    } else {
        right_update(rel, &f)
    };
    match t {
        Tree::Leaf(p) => {
            out.insert((*p).clone(), OrderRelation::from_pairs(here));
        }
        Tree::Par(l, r) => {
            descend(l, &here, true, out);
            descend(r, &here, false, out);
        }
    }
}

/// The order slice of every participant, reading the declaration order as
/// a left-nested parallel composition.
///
/// The root starts from the full irreflexive relation; each left subtree
/// keeps the pairs whose smaller element it contains, each right subtree
/// those whose larger element it contains, plus the pairs that are not
/// decided by those. The leaves together form the total order given by
/// the declaration order.
pub fn build_order(m: &Session) -> BTreeMap<ParticipantId, OrderRelation> {
    let layout = m.layout();
    let mut out = BTreeMap::new();
    let Some(first) = layout.first() else {
        return out;
    };
    if layout.len() == 1 {
        out.insert(first.clone(), OrderRelation::default());
        return out;
    }
    let mut tree = Tree::Leaf(first);
    for p in &layout[1..] {
        tree = Tree::Par(
            alloc::boxed::Box::new(tree),
            alloc::boxed::Box::new(Tree::Leaf(p)),
        );
    }
    let all: Rel = layout
        .iter()
        .flat_map(|p| {
            layout
                .iter()
                .filter(move |q| *q != p)
                .map(move |q| (p.clone(), q.clone()))
        })
        .collect();
    if let Tree::Par(l, r) = &tree {
        descend(l, &all, true, &mut out);
        descend(r, &all, false, &mut out);
    }
    out
}

/// The union of the slices.
pub fn total_order(
    slices: &BTreeMap<ParticipantId, OrderRelation>,
) -> Vec<(ParticipantId, ParticipantId)> {
    let mut all = BTreeSet::new();
    for r in slices.values() {
        all.extend(r.pairs().iter().cloned());
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_session;

    fn pairs(xs: &[(&str, &str)]) -> BTreeSet<(ParticipantId, ParticipantId)> {
        xs.iter()
            .map(|(a, b)| (ParticipantId::new(*a), ParticipantId::new(*b)))
            .collect()
    }

    #[test]
    fn three_leaves() {
        let m = parse_session("role a = 0 role b = 0 role c = 0").unwrap();
        let o = build_order(&m);
        assert_eq!(
            o[&ParticipantId::new("a")].pairs(),
            &pairs(&[("a", "b"), ("a", "c")])
        );
        assert_eq!(
            o[&ParticipantId::new("b")].pairs(),
            &pairs(&[("a", "b"), ("b", "c")])
        );
        assert_eq!(
            o[&ParticipantId::new("c")].pairs(),
            &pairs(&[("a", "c"), ("b", "c")])
        );
    }

    #[test]
    fn single_participant_has_no_pairs() {
        let m = parse_session("role a = 0").unwrap();
        assert!(build_order(&m)[&ParticipantId::new("a")].pairs().is_empty());
    }

    #[test]
    fn order_follows_declaration() {
        let ab = build_order(&parse_session("role a = 0 role b = 0").unwrap());
        let ba = build_order(&parse_session("role b = 0 role a = 0").unwrap());
        assert_eq!(
            total_order(&ab),
            alloc::vec![(ParticipantId::new("a"), ParticipantId::new("b"))]
        );
        assert_eq!(
            total_order(&ba),
            alloc::vec![(ParticipantId::new("b"), ParticipantId::new("a"))]
        );
    }
}

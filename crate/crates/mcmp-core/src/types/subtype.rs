//! Coinductive subtyping on local types and contexts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::ast::{LocalContext, LocalType, TBranch};
use super::form::{unfold, unfold_all, validate, TypeFormError};
use crate::syntax::{ParticipantId, Polarity};

/// Decides `sub <= sup`.
///
/// Pending goals are assumed to hold, which yields the greatest fixed
/// point. Choices are compared block by block, one block per peer and
/// polarity: outputs covariantly in their label sets, inputs
/// contravariantly.
pub fn subtype(sub: &LocalType, sup: &LocalType) -> Result<bool, TypeFormError> {
    validate(sub)?;
    validate(sup)?;
    Ok(Checker::default().check(sub, sup))
}

/// Pointwise subtyping on the shared domain; participants typed in only
/// one of the contexts must be typed `end` there.
pub fn context_subtype(sub: &LocalContext, sup: &LocalContext) -> Result<bool, TypeFormError> {
    let mut checker = Checker::default();
    for (p, t) in sub.entries() {
        validate(t)?;
        match sup.get(p) {
            Some(u) => {
                validate(u)?;
                if !checker.check(t, u) {
                    return Ok(false);
                }
            }
            None => {
                if unfold_all(t) != LocalType::End {
                    return Ok(false);
                }
            }
        }
    }
    for (p, u) in sup.entries() {
        if sub.get(p).is_none() {
            validate(u)?;
            if unfold_all(u) != LocalType::End {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Summands grouped by peer and polarity.
pub fn blocks(bs: &[TBranch]) -> BTreeMap<(ParticipantId, Polarity), Vec<&TBranch>> {
    let mut out: BTreeMap<(ParticipantId, Polarity), Vec<&TBranch>> = BTreeMap::new();
    for b in bs {
        out.entry((b.peer.clone(), b.polarity)).or_default().push(b);
    }
    out
}

#[derive(Default)]
struct Checker {
    pending: Vec<(LocalType, LocalType)>,
    proven: Vec<(LocalType, LocalType)>,
}

impl Checker {
    fn check(&mut self, sub: &LocalType, sup: &LocalType) -> bool {
        let goal = (sub.clone(), sup.clone());
        if self.pending.contains(&goal) || self.proven.contains(&goal) {
            return true;
        }
        self.pending.push(goal);
        let ok = self.step(sub, sup);
        let goal = self.pending.pop();
        if ok && self.pending.is_empty() {
            if let Some(g) = goal {
                self.proven.push(g);
            }
        }
        ok
    }

    fn step(&mut self, sub: &LocalType, sup: &LocalType) -> bool {
        match (sub, sup) {
            (LocalType::Rec(..), _) => self.check(&unfold(sub), sup),
            (_, LocalType::Rec(..)) => self.check(sub, &unfold(sup)),
            (LocalType::End, LocalType::End) => true,
            (LocalType::Choice(l), LocalType::Choice(r)) => {
                let lb = blocks(l);
                let rb = blocks(r);
                if !lb.keys().eq(rb.keys()) {
                    return false;
                }
                lb.iter().all(|(key, ls)| {
                    let rs = &rb[key];
                    match key.1 {
                        Polarity::Out => ls.iter().all(|a| self.matched(a, rs, true)),
                        Polarity::In => rs.iter().all(|b| self.matched(b, ls, false)),
                    }
                })
            }
            _ => false,
        }
    }

    fn matched(&mut self, b: &TBranch, others: &[&TBranch], left: bool) -> bool {
        others.iter().any(|o| {
            o.label == b.label
                && o.payload == b.payload
                && if left {
                    self.check(&b.cont, &o.cont)
                } else {
                    self.check(&o.cont, &b.cont)
                }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{parse::parse_context, parse_type};

    fn sub(a: &str, b: &str) -> bool {
        subtype(&parse_type(a).unwrap(), &parse_type(b).unwrap()).unwrap()
    }

    #[test]
    fn mixed_choice_blocks_are_compared_pairwise() {
        assert!(sub("(p?l1 + p?l2) + p!l3", "p?l1 + (p!l3 + p!l4)"));
        assert!(sub("(p?l1 + p?l2) + q!l3", "p?l1 + (q!l3 + q!l4)"));
        assert!(!sub("p?l1 + (p!l3 + p!l4)", "(p?l1 + p?l2) + p!l3"));
    }

    #[test]
    fn end_and_recursion() {
        assert!(sub("end", "end"));
        assert!(sub("rec t. q!l.t", "rec t. q!l.t"));
        assert!(sub("rec t. q!l.t", "q!l.rec u. q!l.u"));
        assert!(!sub("end", "q!l.end"));
    }

    #[test]
    fn block_sets_must_agree() {
        assert!(!sub("q!l.end", "q!l.end + r!l.end"));
        assert!(!sub("q!l(nat).end", "q!l(bool).end"));
    }

    #[test]
    fn ill_formed_input_is_an_error() {
        let bad = parse_type("q!l(nat).end + q!l(bool).end").unwrap();
        assert!(subtype(&bad, &bad).is_err());
    }

    #[test]
    fn context_subtyping() {
        let d = parse_context("p: q!l.end; q: p?l.end").unwrap();
        assert!(context_subtype(&d, &d).unwrap());
        let end = parse_context("p: end").unwrap();
        assert!(context_subtype(&end, &LocalContext::new()).unwrap());
        let out = parse_context("p: q!l.end").unwrap();
        assert!(!context_subtype(&out, &LocalContext::new()).unwrap());
    }

    #[test]
    fn rejects_the_set_rule() {
        let small = parse_context("p: q!l1; q: p?l2").unwrap();
        let big = parse_context("p: q!l1 + q!l2; q: p?l1 + p?l2").unwrap();
        assert!(!context_subtype(&small, &big).unwrap());
    }
}

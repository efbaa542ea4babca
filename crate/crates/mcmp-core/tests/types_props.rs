//! Subtyping is a preorder, the safety and deadlock-freedom checks behave
//! as their definitions require, and subtyping preserves them.

mod common;

use common::gen::{coins, local_type_over, relate, Coins};
use mcmp_core::syntax::ParticipantId;
use mcmp_core::types::{
    blocks, context_subtype, explore_contexts, is_deadlock_free, is_safe, parse_context, subtype,
    unfold_all, LocalContext, LocalType,
};
use mcmp_core::Limits;
use proptest::prelude::*;

fn limits() -> Limits {
    Limits {
        max_states: 2_000,
        max_depth: 128,
    }
}

fn context() -> impl Strategy<Value = LocalContext> {
    (
        local_type_over(&["q", "r"], 2),
        local_type_over(&["p", "r"], 2),
        local_type_over(&["p", "q"], 2),
    )
        .prop_map(|(p, q, r)| {
            LocalContext::from_pairs([
                (ParticipantId::new("p"), p),
                (ParticipantId::new("q"), q),
                (ParticipantId::new("r"), r),
            ])
        })
}

fn relate_context(ctx: &LocalContext, toward_sub: bool, c: &mut Coins) -> LocalContext {
    LocalContext::from_pairs(
        ctx.entries()
            .iter()
            .map(|(p, t)| (p.clone(), relate(t, toward_sub, c))),
    )
}

fn top_blocks(t: &LocalType) -> Vec<(ParticipantId, mcmp_core::syntax::Polarity)> {
    match unfold_all(t) {
        LocalType::Choice(bs) => blocks(&bs).into_keys().collect(),
        _ => Vec::new(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn subtyping_is_a_preorder(
        b in local_type_over(&["p", "q", "r"], 4),
        other in local_type_over(&["p", "q", "r"], 4),
        mut c in coins(),
    ) {
        let below = relate(&b, true, &mut c);
        let above = relate(&b, false, &mut c);
        prop_assert!(subtype(&b, &b).unwrap());
        prop_assert!(subtype(&below, &b).unwrap());
        prop_assert!(subtype(&b, &above).unwrap());
        prop_assert!(subtype(&below, &above).unwrap());
        if subtype(&other, &b).unwrap() {
            prop_assert!(subtype(&other, &above).unwrap());
        }
        if subtype(&b, &other).unwrap() {
            prop_assert!(subtype(&below, &other).unwrap());
        }
    }

    #[test]
    fn related_choices_share_their_blocks(
        a in local_type_over(&["p", "q"], 3),
        b in local_type_over(&["p", "q"], 3),
    ) {
        if subtype(&a, &b).unwrap() {
            prop_assert_eq!(top_blocks(&a), top_blocks(&b));
        }
    }

    #[test]
    fn context_subtyping_is_a_preorder(ctx in context(), mut c in coins()) {
        let below = relate_context(&ctx, true, &mut c);
        let above = relate_context(&ctx, false, &mut c);
        prop_assert!(context_subtype(&ctx, &ctx).unwrap());
        prop_assert!(context_subtype(&below, &ctx).unwrap());
        prop_assert!(context_subtype(&ctx, &above).unwrap());
        prop_assert!(context_subtype(&below, &above).unwrap());
    }

    #[test]
    fn safety_is_closed_under_steps(ctx in context()) {
        let g = explore_contexts(&ctx, limits());
        prop_assert!(!g.truncated);
        if is_safe(&ctx, limits()).holds {
            for s in &g.states {
                prop_assert!(is_safe(s, limits()).holds);
            }
        }
    }

    #[test]
    fn subtyping_preserves_safety_and_deadlock_freedom(ctx in context(), mut c in coins()) {
        let below = relate_context(&ctx, true, &mut c);
        prop_assert!(context_subtype(&below, &ctx).unwrap());
        if is_safe(&ctx, limits()).holds {
            prop_assert!(is_safe(&below, limits()).holds);
            if is_deadlock_free(&ctx, limits()).holds {
                prop_assert!(is_deadlock_free(&below, limits()).holds);
            }
        }
    }
}

#[test]
fn deadlock_freedom_needs_safety_to_survive_subtyping() {
    let wide = parse_context("p: q!l1 + q!l2; q: p?l1").unwrap();
    let narrow = parse_context("p: q!l2; q: p?l1").unwrap();
    assert!(context_subtype(&narrow, &wide).unwrap());
    assert!(is_deadlock_free(&wide, limits()).holds);
    assert!(!is_safe(&wide, limits()).holds);
    assert!(!is_deadlock_free(&narrow, limits()).holds);
}

#[test]
fn missing_participants_count_as_end() {
    let small = parse_context("p: q!l; q: p?l").unwrap();
    let padded = parse_context("p: q!l; q: p?l; r: end").unwrap();
    assert!(context_subtype(&small, &padded).unwrap());
    assert!(context_subtype(&padded, &small).unwrap());
}

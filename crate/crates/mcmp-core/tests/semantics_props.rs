//! Determinism, confluence of distributable steps, and the success
//! observables of weak bisimulation.

mod common;

use common::gen::session;
use common::{load, names};
use mcmp_core::semantics::{
    apply_step, distributable, enabled_steps, explore_session, has_success, may_succeed,
    must_succeed, weak_bisimilar, Observables, Step, StepKind,
};
use mcmp_core::syntax::{struct_congruent, Session};
use mcmp_core::Limits;
use proptest::prelude::*;

fn small() -> Limits {
    Limits {
        max_states: 400,
        max_depth: 64,
    }
}

fn reversed(m: &Session) -> Session {
    Session::from_parts(
        m.layout()
            .iter()
            .rev()
            .map(|p| (p.clone(), m.get(p).unwrap().clone())),
    )
    .unwrap()
}

fn kinds(m: &Session) -> Vec<StepKind> {
    let mut out: Vec<StepKind> = enabled_steps(m).into_iter().map(|s| s.kind).collect();
    out.sort();
    out
}

fn successors_by_kind(m: &Session, s: &Step) -> Vec<Session> {
    enabled_steps(m)
        .into_iter()
        .filter(|t| t.kind == s.kind)
        .map(|t| apply_step(m, &t).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn steps_are_deterministic_up_to_congruence(m in session(3)) {
        let r = reversed(&m);
        prop_assert_eq!(kinds(&m), kinds(&r));
        for s in enabled_steps(&m) {
            let here = apply_step(&m, &s).unwrap();
            prop_assert_eq!(&here, &apply_step(&m, &s).unwrap());
            let there = successors_by_kind(&r, &s);
            prop_assert!(there.iter().any(|t| struct_congruent(&here, t)), "{}", s);
        }
    }

    #[test]
    fn distributable_steps_commute(m in session(3)) {
        let steps = enabled_steps(&m);
        for s1 in &steps {
            for s2 in &steps {
                if s1 == s2 || !distributable(s1, s2) {
                    continue;
                }
                let m1 = apply_step(&m, s1).unwrap();
                let m2 = apply_step(&m, s2).unwrap();
                prop_assert!(enabled_steps(&m1).contains(s2), "{} then {}", s1, s2);
                prop_assert!(enabled_steps(&m2).contains(s1), "{} then {}", s2, s1);
                let a = apply_step(&m1, s2).unwrap();
                let b = apply_step(&m2, s1).unwrap();
                prop_assert!(struct_congruent(&a, &b));
            }
        }
    }

    #[test]
    fn bisimilarity_is_an_equivalence_respecting_success(m in session(3)) {
        let g = explore_session(&m, small());
        prop_assume!(!g.truncated);
        let n = g.len().min(8);
        for obs in [Observables::Success, Observables::SuccessAndBarbs] {
            for i in 0..n {
                prop_assert!(weak_bisimilar(&g, i, i, obs).unwrap());
                for j in 0..n {
                    let ij = weak_bisimilar(&g, i, j, obs).unwrap();
                    prop_assert_eq!(ij, weak_bisimilar(&g, j, i, obs).unwrap());
                    if ij {
                        prop_assert_eq!(may_succeed(&g, i), may_succeed(&g, j));
                        for k in 0..n {
                            if weak_bisimilar(&g, j, k, obs).unwrap() {
                                prop_assert!(weak_bisimilar(&g, i, k, obs).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn must_success_implies_may_success(m in session(3)) {
        let g = explore_session(&m, small());
        prop_assume!(!g.truncated);
        for i in 0..g.len() {
            if let Ok(true) = must_succeed(&g, i) {
                prop_assert!(may_succeed(&g, i));
            }
        }
    }
}

#[test]
fn fixture_successors_agree_under_congruence() {
    for name in names("mcmp") {
        let m = load(&name).session;
        let r = reversed(&m);
        assert_eq!(kinds(&m), kinds(&r), "{name}");
        for s in enabled_steps(&m) {
            let here = apply_step(&m, &s).unwrap();
            assert!(
                successors_by_kind(&r, &s)
                    .iter()
                    .any(|t| struct_congruent(&here, t)),
                "{name}: {s}"
            );
        }
    }
}

#[test]
fn success_is_observed_on_unguarded_ok() {
    let m = load("m_scmp.mcmp").session;
    assert!(!has_success(&m));
    let g = explore_session(&m, Limits::default());
    assert!(may_succeed(&g, g.root()));
    assert!(!must_succeed(&g, g.root()).unwrap());
}

/// Counts the top-level summands of each participant by polarity and label,
/// reading the choices directly.
fn summand_census(m: &Session) -> std::collections::BTreeMap<(bool, String), usize> {
    let mut census = std::collections::BTreeMap::new();
    for p in m.parts().values() {
        if let mcmp_core::Process::Choice(c) = p {
            for b in &c.branches {
                let out = b.prefix.polarity() == mcmp_core::syntax::Polarity::Out;
                *census
                    .entry((out, b.prefix.label().as_str().to_string()))
                    .or_insert(0) += 1;
            }
        }
    }
    census
}

#[test]
fn election_root_barbs_match_a_summand_census() {
    use mcmp_core::semantics::{barbs, Barb};
    let m = load("election.mcmp").session;
    let census = summand_census(&m);
    let found = barbs(&m);
    let count = |out: bool, label: &str| {
        found
            .iter()
            .filter(|b| match b {
                Barb::Out { label: l, .. } => out && l.as_str() == label,
                Barb::In { label: l, .. } => !out && l.as_str() == label,
            })
            .count()
    };
    for ((out, label), n) in &census {
        assert_eq!(count(*out, label), *n, "{out} {label}");
    }
    assert_eq!(count(true, "leader"), 5);
    assert_eq!(count(false, "leader"), 5);
    assert_eq!(count(false, "del"), 5);
}

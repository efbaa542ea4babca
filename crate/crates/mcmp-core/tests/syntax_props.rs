//! Round-tripping, structural congruence, classification and capability
//! freshness.

mod common;

use std::collections::BTreeSet;

use common::gen::session;
use common::{load, names, read};
use mcmp_core::syntax::{
    alpha_equivalent, classify, parse_source, render_source, struct_congruent, unfold, CapId,
    Process, Session, SubcalculusId,
};
use proptest::prelude::*;

use SubcalculusId::*;

fn same_session(a: &Session, b: &Session) -> bool {
    a.layout() == b.layout()
        && a.parts()
            .iter()
            .all(|(p, proc_)| b.get(p).is_some_and(|q| alpha_equivalent(proc_, q)))
}

#[test]
fn every_fixture_round_trips() {
    for name in names("mcmp") {
        let src = load(&name);
        let text = render_source(&src.session, src.context.as_ref());
        let again = parse_source(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert!(same_session(&src.session, &again.session), "{name}");
        assert_eq!(src.context, again.context, "{name}");
    }
}

#[test]
fn rendering_is_a_fixpoint_after_one_round() {
    for name in names("mcmp") {
        let once = render_source(&load(&name).session, None);
        let twice = render_source(&parse_source(&once).unwrap().session, None);
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn family_rows_match_the_fixture_comments() {
    let first_line = |name: &str| read(name).lines().next().unwrap_or_default().to_owned();
    assert!(
        !classify(&load("p1.mcmp").session).contains(&Msmp),
        "{}",
        first_line("p1.mcmp")
    );
    for (name, absent) in [
        ("p2", vec![Scmp, Dmp]),
        ("p3", vec![Dmp, Smp]),
        ("p4", vec![Scmp, Smp]),
        ("p5", vec![Mp]),
        ("p6", vec![Mcbs]),
        ("p7", vec![Mcbs]),
        ("p8", vec![Mp]),
        ("p9", vec![Mp]),
    ] {
        let got = classify(&load(&format!("{name}.mcmp")).session);
        for c in absent {
            assert!(!got.contains(&c), "{name} should not be in {c}");
        }
    }
}

const INCLUSIONS: [(SubcalculusId, SubcalculusId); 12] = [
    (Bs, Scbs),
    (Scbs, Mcbs),
    (Mp, Smp),
    (Smp, Dmp),
    (Smp, Scmp),
    (Scmp, Msmp),
    (Msmp, Mcmp),
    (Mcbs, Dmp),
    (Scbs, Scmp),
    (Bs, Mp),
    (Dmp, Mcmp),
    (Scmp, Mcmp),
];

fn caps(m: &Session) -> Vec<CapId> {
    let mut out = Vec::new();
    for p in m.parts().values() {
        p.caps(&mut out);
    }
    out
}

fn distinct(caps: &[CapId]) -> bool {
    caps.iter().collect::<BTreeSet<_>>().len() == caps.len()
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn generated_sessions_round_trip(m in session(3)) {
        let text = render_source(&m, None);
        let again = parse_source(&text).unwrap().session;
        prop_assert!(same_session(&m, &again), "{}", text);
    }

    #[test]
    fn classification_respects_inclusions(m in session(3)) {
        let got = classify(&m);
        prop_assert!(got.contains(&Mcmp));
        for (small, big) in INCLUSIONS {
            prop_assert!(!got.contains(&small) || got.contains(&big), "{small} without {big}");
        }
    }

    #[test]
    fn congruence_is_an_equivalence(m in session(3), n in session(3)) {
        let r = reversed(&m);
        prop_assert!(struct_congruent(&m, &m));
        prop_assert!(struct_congruent(&m, &r) && struct_congruent(&r, &m));
        prop_assert_eq!(struct_congruent(&m, &n), struct_congruent(&n, &m));
        if struct_congruent(&m, &n) {
            prop_assert!(struct_congruent(&r, &n));
        }
    }

    #[test]
    fn congruence_is_preserved_by_adding_a_participant(m in session(3)) {
        let extend = |s: &Session| {
            let mut s = s.clone();
            s.add(mcmp_core::ParticipantId::new("z"), Process::Success).unwrap();
            s
        };
        prop_assert!(struct_congruent(&extend(&m), &extend(&reversed(&m))));
    }

    #[test]
    fn capabilities_are_fresh(m in session(4)) {
        prop_assert!(distinct(&caps(&m)));
        let mut next = m.next_cap();
        for p in m.parts().values() {
            let body = Process::rec(mcmp_core::syntax::ProcVar::new("X"), p.clone());
            let unfolded = unfold(&body, &mut next);
            let mut all = caps(&m);
            unfolded.caps(&mut all);
            let mut own = Vec::new();
            p.caps(&mut own);
            let fresh: Vec<CapId> = all.iter().copied().filter(|c| !own.contains(c)).collect();
            prop_assert!(distinct(&fresh));
        }
    }
}

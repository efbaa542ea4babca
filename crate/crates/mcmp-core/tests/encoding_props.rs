//! Properties of the encodings between subcalculi: target membership,
//! compositionality, preservation of the success predicate, injectivity
//! on the fixture corpus, and the translation of linear mixed sessions.

mod common;

use common::gen::{disjoint_pair, session};
use common::{load, load_cmv, names};
use mcmp_core::encodings::{encode, EncodingId};
use mcmp_core::lcmv::{check_cmv, encode_lcmv_to_mcbs, CmvProcess};
use mcmp_core::patterns::sweep::lcmv_programs;
use mcmp_core::semantics::has_success;
use mcmp_core::syntax::{classify, struct_congruent, Choice, Polarity};
use mcmp_core::{Label, Process, Session, SubcalculusId};
use proptest::prelude::*;

fn applicable(m: &Session) -> Vec<EncodingId> {
    let family = classify(m);
    EncodingId::ALL
        .into_iter()
        .filter(|id| id.source().is_some_and(|s| family.contains(&s)))
        .collect()
}

/// The translations of binary and directed mixed choice into their
/// output-free targets keep one choice among outputs after each `enc_i`
/// or `reset` handshake. Apart from those, the target restrictions hold.
fn lands_in_target(enc: &Session, id: EncodingId) -> bool {
    match id {
        EncodingId::McbsToBs | EncodingId::DmpToMp => {
            let via = match id {
                EncodingId::McbsToBs => SubcalculusId::Scbs,
                _ => SubcalculusId::Smp,
            };
            classify(enc).contains(&via)
                && enc
                    .parts()
                    .values()
                    .all(|p| outputs_choices_follow_handshakes(p, false))
        }
        _ => classify(enc).contains(&id.target()),
    }
}

fn outputs_choices_follow_handshakes(p: &Process, after_handshake: bool) -> bool {
    match p {
        Process::Nil | Process::Success | Process::Var(_) => true,
        Process::Rec(_, body) => outputs_choices_follow_handshakes(body, after_handshake),
        Process::Cond { then, els, .. } => {
            outputs_choices_follow_handshakes(then, false)
                && outputs_choices_follow_handshakes(els, false)
        }
        Process::Choice(Choice { branches, .. }) => {
            let outputs = branches
                .iter()
                .filter(|b| b.prefix.polarity() == Polarity::Out)
                .count();
            (outputs == 0 || branches.len() == 1 || after_handshake)
                && branches.iter().all(|b| {
                    let handshake = b.prefix.polarity() == Polarity::In
                        && [Label::enc_in(), Label::reset()].contains(b.prefix.label());
                    outputs_choices_follow_handshakes(&b.cont, handshake)
                })
        }
    }
}

/// Both endpoints busy next to a closed component that is not `0`.
fn crowded(p: &CmvProcess) -> bool {
    let CmvProcess::Res(_, _, body) = p else {
        return false;
    };
    let CmvProcess::Par(ends, closed) = body.as_ref() else {
        return false;
    };
    let CmvProcess::Par(x, y) = ends.as_ref() else {
        return false;
    };
    [x.as_ref(), y.as_ref(), closed.as_ref()]
        .iter()
        .all(|c| **c != CmvProcess::Inact)
}

fn fixtures() -> Vec<(String, Session)> {
    names("mcmp")
        .into_iter()
        .map(|n| {
            let m = load(&n).session;
            (n, m)
        })
        .collect()
}

#[test]
fn fixture_encodings_land_in_the_target() {
    let mut seen = 0;
    for (name, m) in fixtures() {
        for id in applicable(&m) {
            let enc = encode(&m, id).unwrap();
            assert!(lands_in_target(&enc, id), "{name} via {id:?}");
            assert_eq!(has_success(&enc), has_success(&m), "{name} via {id:?}");
            seen += 1;
        }
    }
    assert!(seen >= 40, "only {seen} applicable pairs");
}

#[test]
fn fixture_encodings_are_injective() {
    let corpus = fixtures();
    for id in EncodingId::ALL
        .into_iter()
        .filter(|id| id.source().is_some())
    {
        let images: Vec<(&str, &Session, Session)> = corpus
            .iter()
            .filter(|(_, m)| applicable(m).contains(&id))
            .map(|(n, m)| (n.as_str(), m, encode(m, id).unwrap()))
            .collect();
        for (i, (n1, m1, e1)) in images.iter().enumerate() {
            for (n2, m2, e2) in &images[i + 1..] {
                if !struct_congruent(m1, m2) {
                    assert!(
                        !struct_congruent(e1, e2),
                        "{n1} and {n2} collide via {id:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn fixture_programs_translate_into_binary_mixed_choice() {
    for name in names("cmv") {
        let p = load_cmv(&name);
        let Ok(classes) = check_cmv(&p) else { continue };
        let enc = encode_lcmv_to_mcbs(&p, &classes).unwrap();
        assert!(classify(&enc).contains(&SubcalculusId::Mcbs), "{name}");
    }
}

#[test]
fn generated_linear_programs_translate_into_binary_mixed_choice() {
    let mut typed = 0;
    for p in lcmv_programs(2, 2) {
        let Ok(classes) = check_cmv(&p) else { continue };
        if crowded(&p) {
            assert!(encode_lcmv_to_mcbs(&p, &classes).is_err());
            continue;
        }
        typed += 1;
        let enc = encode_lcmv_to_mcbs(&p, &classes).unwrap();
        assert!(classify(&enc).contains(&SubcalculusId::Mcbs));
    }
    assert!(typed > 100, "only {typed} typed programs");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn generated_encodings_land_in_the_target(m in session(2)) {
        for id in applicable(&m) {
            let enc = encode(&m, id).unwrap();
            prop_assert!(lands_in_target(&enc, id), "{:?}", id);
            prop_assert_eq!(has_success(&enc), has_success(&m));
        }
    }

    #[test]
    fn encoding_distributes_over_disjoint_composition((left, right) in disjoint_pair(2)) {
        let whole = Session::from_parts(
            left.parts().iter().chain(right.parts()).map(|(p, q)| (p.clone(), q.clone())),
        )
        .unwrap();
        for id in applicable(&whole) {
            let glued = Session::from_parts(
                encode(&left, id)
                    .unwrap()
                    .parts()
                    .iter()
                    .chain(encode(&right, id).unwrap().parts())
                    .map(|(p, q)| (p.clone(), q.clone())),
            )
            .unwrap();
            prop_assert!(struct_congruent(&encode(&whole, id).unwrap(), &glued), "{:?}", id);
        }
    }
}

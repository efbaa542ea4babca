//! Executable subject reduction, communication safety and
//! deadlock-freedom over the fixtures, and stability of the process check
//! under weakening of the declared type.

mod common;

use common::gen::{coins, local_type_over, Coins, LABELS};
use common::theorems::theorem_violations;
use common::{load, names};
use mcmp_core::syntax::Polarity;
use mcmp_core::syntax::{Branch, Prefix, ProcVar, Process, Value, Variable};
use mcmp_core::types::{subtype, LocalType, PayloadType, TBranch};
use mcmp_core::typing::{check_process, check_session, SharedContext};
use mcmp_core::Limits;
use proptest::prelude::*;

#[test]
fn typed_fixtures_satisfy_the_theorems() {
    let bound = Limits {
        max_states: 500,
        max_depth: 256,
    };
    let mut typed = 0;
    for name in names("mcmp") {
        let src = load(&name);
        let Some(ctx) = src.context else { continue };
        if check_session(&src.session, &ctx).is_err() {
            continue;
        }
        typed += 1;
        let v = theorem_violations(&src.session, &ctx, bound).unwrap();
        assert!(v.is_empty(), "{name}: {v:?}");
    }
    assert!(typed >= 15);
}

#[test]
fn rejected_fixtures_are_rejected_for_the_documented_reason() {
    use mcmp_core::typing::TypeErrorKind;
    for (name, kind) in [
        ("label_error.mcmp", TypeErrorKind::ContextUnsafe),
        ("m_scmp.mcmp", TypeErrorKind::ContextUnsafe),
        ("value_error.mcmp", TypeErrorKind::LabelClash),
    ] {
        let src = load(name);
        let errs = check_session(&src.session, src.context.as_ref().unwrap()).unwrap_err();
        assert!(errs.iter().any(|e| e.kind == kind), "{name}: {errs:?}");
    }
}

fn var_of(t: &mcmp_core::types::TypeVar) -> ProcVar {
    ProcVar::new(t.as_str().to_uppercase())
}

/// A process offering every summand of the type.
fn inhabitant(t: &LocalType) -> Process {
    match t {
        LocalType::End => Process::Nil,
        LocalType::Var(v) => Process::Var(var_of(v)),
        LocalType::Rec(v, b) => Process::rec(var_of(v), inhabitant(b)),
        LocalType::Choice(bs) => Process::choice(
            bs.iter()
                .map(|b| {
                    let prefix = match b.polarity {
                        Polarity::Out => Prefix::Send {
                            to: b.peer.clone(),
                            label: b.label.clone(),
                            payload: match b.payload {
                                PayloadType::Nat => Value::Nat(1),
                                PayloadType::Bool => Value::Bool(true),
                            },
                        },
                        Polarity::In => Prefix::Recv {
                            from: b.peer.clone(),
                            label: b.label.clone(),
                            var: Variable::new("x"),
                        },
                    };
                    Branch::new(prefix, inhabitant(&b.cont))
                })
                .collect(),
        ),
    }
}

/// A supertype with the same input branches and possibly extra outputs
/// toward peers already addressed by an output block.
fn widen_outputs(t: &LocalType, coins: &mut Coins) -> LocalType {
    match t {
        LocalType::End | LocalType::Var(_) => t.clone(),
        LocalType::Rec(v, b) => LocalType::Rec(v.clone(), Box::new(widen_outputs(b, coins))),
        LocalType::Choice(bs) => {
            let mut out: Vec<TBranch> = bs
                .iter()
                .map(|b| {
                    let mut b = b.clone();
                    b.cont = widen_outputs(&b.cont, coins);
                    b
                })
                .collect();
            for b in bs.iter().filter(|b| b.polarity == Polarity::Out) {
                for l in LABELS {
                    let taken = out.iter().any(|o| {
                        o.peer == b.peer && o.polarity == Polarity::Out && o.label.as_str() == l
                    });
                    if !taken && coins.flip() {
                        out.push(TBranch::new(
                            b.peer.as_str(),
                            Polarity::Out,
                            l,
                            PayloadType::Bool,
                            LocalType::End,
                        ));
                    }
                }
            }
            LocalType::Choice(out)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn checking_survives_weakening(t in local_type_over(&["p", "q"], 3), mut c in coins()) {
        let p = inhabitant(&t);
        let gamma = SharedContext::new();
        prop_assert!(check_process(&gamma, &p, &t).is_ok(), "{:?}", check_process(&gamma, &p, &t));
        let wider = widen_outputs(&t, &mut c);
        prop_assert!(subtype(&t, &wider).unwrap());
        prop_assert!(check_process(&gamma, &p, &wider).is_ok(), "{:?}", check_process(&gamma, &p, &wider));
    }
}

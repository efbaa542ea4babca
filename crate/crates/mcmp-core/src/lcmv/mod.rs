//! The linear single-session fragment of mixed sessions: syntax,
//! reduction, the classification of choices into internal and external,
//! and the translation into binary mixed-choice sessions.
//!
//! The surface grammar:
//!
//! ```text
//! program  := "(" "new" IDENT IDENT ")" "(" cproc ")"
//! cproc    := unary { "|" unary }
//! unary    := "0" | "ok" | "(" cproc ")" | "if" value "then" unary "else" unary
//!           | "lin" IDENT "(" cbranch { "+" cbranch } ")"
//! cbranch  := IDENT ( "!" value | "?" IDENT ) [ "." unary ]
//! ```

mod ast;
mod check;
mod encode;
mod parse;
mod reduce;

pub use ast::{ChoiceId, CmvBranch, CmvPayload, CmvProcess};
pub use check::{check_cmv, CmvChoiceClass, CmvClasses, CmvTypeError};
pub use encode::{encode_cmv_state, encode_lcmv_to_mcbs, verify_lcmv, CmvEncodeError};
pub use parse::{parse_cmv, render_cmv};
pub use reduce::{
    cmv_steps, explore_cmv, reduce_cmv, CmvGraph, CmvState, CmvStep, CmvStepKind, CmvSystem,
    NotAProgram,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Limits;
    use crate::syntax::{
        classify, parse_source_with, render_session, struct_congruent, LabelMode, SubcalculusId,
    };

    const M_CMV: &str = "(new x y)(lin x (l!tt.0) | lin y (l?z.(if z then 0 else 0)) \
                         | lin x (l!ff.0) | lin y (l?z.(if z then 0 else ok)))";

    #[test]
    fn round_trip() {
        let p = parse_cmv(M_CMV).unwrap();
        assert_eq!(parse_cmv(&render_cmv(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_unrestricted_and_inner_restrictions() {
        assert!(parse_cmv("(new x y)(un x (l!tt.0))").is_err());
        assert!(parse_cmv("(new x y)((new a b)(0))").is_err());
        assert!(parse_cmv("(new x y)(lin w (l!tt.0))").is_err());
    }

    #[test]
    fn every_output_meets_every_input() {
        let p = parse_cmv(M_CMV).unwrap();
        assert_eq!(reduce_cmv(&p).unwrap().len(), 4);
        let idle = parse_cmv("(new x y)(0)").unwrap();
        assert!(reduce_cmv(&idle).unwrap().is_empty());
        let cond = parse_cmv("(new x y)(if tt then ok else 0)").unwrap();
        let next = reduce_cmv(&cond).unwrap();
        assert_eq!(next.len(), 1);
        assert!(CmvState::from_program(&next[0]).unwrap().has_success());
    }

    #[test]
    fn sender_side_is_internal_first() {
        let p = parse_cmv("(new x y)(lin x (l!tt.0) | lin y (l?z.0))").unwrap();
        let c = check_cmv(&p).unwrap();
        assert_eq!(c[&ChoiceId(0)], CmvChoiceClass::Internal);
        assert_eq!(c[&ChoiceId(1)], CmvChoiceClass::External);
    }

    #[test]
    fn extra_inputs_on_both_sides_are_rejected() {
        let p =
            parse_cmv("(new x y)(lin x (l1!tt.0 + l2?z.ok) | lin y (l1?z.0 + l3?w.ok))").unwrap();
        assert!(matches!(
            check_cmv(&p),
            Err(CmvTypeError::NoDualClassification(..))
        ));
    }

    #[test]
    fn linearity_is_enforced() {
        let p = parse_cmv(M_CMV).unwrap();
        assert!(matches!(check_cmv(&p), Err(CmvTypeError::Linearity(_))));
        assert!(check_cmv(&parse_cmv("(new x y)(0)").unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn natural_guard_is_a_payload_mismatch() {
        let p = parse_cmv("(new x y)(lin x (l!3.0) | lin y (l?z.(if z then ok else 0)))").unwrap();
        assert!(matches!(
            check_cmv(&p),
            Err(CmvTypeError::PayloadMismatch(_))
        ));
    }

    fn expect(src: &str, want: &str) {
        let p = parse_cmv(src).unwrap();
        let classes = check_cmv(&p).unwrap();
        let got = encode_lcmv_to_mcbs(&p, &classes).unwrap();
        let want = parse_source_with(want, LabelMode::AllowReserved)
            .unwrap()
            .session;
        assert!(
            struct_congruent(&got, &want),
            "got\n{}",
            render_session(&got)
        );
        assert!(classify(&got).contains(&SubcalculusId::Mcbs));
    }

    #[test]
    fn internal_output_and_external_input_use_the_direct_label() {
        expect(
            "(new x y)(lin x (l!tt.0) | lin y (l?z.ok))",
            "role x = y!l.o(tt) role y = x?l.o(z).ok",
        );
    }

    #[test]
    fn internal_input_and_external_output_take_two_steps() {
        expect(
            "(new x y)(lin x (l!tt.0 + m?z.ok) | lin y (l?z.0 + m!ff.0))",
            "role x = y!l.o(tt) + y!m.i(tt).y?m(z).ok \
             role y = x?l.o(z) + x?m.i(_).x!m(ff)",
        );
    }

    #[test]
    fn sequential_use_of_both_endpoints_becomes_idle() {
        expect(
            "(new x y)(lin x (l!tt.lin y (l?z.0)))",
            "role x = 0 role y = 0",
        );
    }

    #[test]
    fn translation_is_a_good_encoding() {
        for src in [
            "(new x y)(lin x (l!tt.0) | lin y (l?z.ok))",
            "(new x y)(lin x (l!tt.0 + m?z.ok) | lin y (l?z.0 + m!ff.ok + n?w.0))",
            "(new x y)(lin x (a!tt.lin x (b?z.(if z then ok else 0))) | lin y (a?w.lin y (b!w.0)))",
        ] {
            let p = parse_cmv(src).unwrap();
            let r = verify_lcmv(&p, Limits::default()).unwrap();
            assert!(r.passes(), "{src}: {:?}", r.witnesses);
            assert!(r.max_emulation_factor <= 2);
        }
    }
}

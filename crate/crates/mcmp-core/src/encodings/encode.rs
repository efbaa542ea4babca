//! The choice translations, applied to processes and to local types.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::order::{build_order, OrderRelation};
use super::{EncodeError, EncodingId};
use crate::syntax::{
    classify, Branch, Label, ParticipantId, Polarity, Prefix, Process, Session, Value, Variable,
};
use crate::types::{LocalContext, LocalType, PayloadType, TBranch};

/// How a choice is split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    /// Separate choices become input-guarded by `enc_o`.
    Separate,
    /// Mixed choices with one peer are split with `enc_i` and `reset`.
    Split,
    /// Both of the above combined.
    SplitSeparate,
}

/// Something built from summands: processes or local types.
trait Sums: Clone {
    type Summand: Clone;
    fn peer(s: &Self::Summand) -> &ParticipantId;
    fn polarity(s: &Self::Summand) -> Polarity;
    fn choice(summands: Vec<Self::Summand>) -> Self;
    fn control(peer: &ParticipantId, pol: Polarity, label: Label, cont: Self) -> Self::Summand;
}

impl Sums for Process {
    type Summand = Branch;

    fn peer(s: &Branch) -> &ParticipantId {
        s.prefix.peer()
    }

    fn polarity(s: &Branch) -> Polarity {
        s.prefix.polarity()
    }

    fn choice(summands: Vec<Branch>) -> Self {
        Process::choice(summands)
    }

    fn control(peer: &ParticipantId, pol: Polarity, label: Label, cont: Self) -> Branch {
        let prefix = match pol {
            Polarity::Out => Prefix::Send {
                to: peer.clone(),
                label,
                payload: Value::Bool(true),
            },
            Polarity::In => Prefix::Recv {
                from: peer.clone(),
                label,
                var: Variable::new("_"),
            },
        };
        Branch::new(prefix, cont)
    }
}

impl Sums for LocalType {
    type Summand = TBranch;

    fn peer(s: &TBranch) -> &ParticipantId {
        &s.peer
    }

    fn polarity(s: &TBranch) -> Polarity {
        s.polarity
    }

    fn choice(summands: Vec<TBranch>) -> Self {
        LocalType::Choice(summands)
    }

    fn control(peer: &ParticipantId, pol: Polarity, label: Label, cont: Self) -> TBranch {
        TBranch {
            peer: peer.clone(),
            polarity: pol,
            label,
            payload: PayloadType::Bool,
            cont,
        }
    }
}

fn guard<S: Sums>(q: &ParticipantId, pol: Polarity, label: Label, cont: S) -> S::Summand {
    S::control(q, pol, label, cont)
}

fn each_guarded<S: Sums>(q: &ParticipantId, label: &Label, outs: &[S::Summand]) -> Vec<S::Summand> {
    outs.iter()
        .map(|o| {
            guard::<S>(
                q,
                Polarity::In,
                label.clone(),
                S::choice(alloc::vec![o.clone()]),
            )
        })
        .collect()
}

fn with<S: Sums>(mut xs: Vec<S::Summand>, x: S::Summand) -> Vec<S::Summand> {
    xs.push(x);
    xs
}

/// Translates the summands exchanged with one peer `q`, where `lower`
/// tells whether the acting participant precedes `q`.
fn split_one<S: Sums>(
    style: Style,
    q: &ParticipantId,
    lower: bool,
    outs: Vec<S::Summand>,
    ins: Vec<S::Summand>,
) -> Vec<S::Summand> {
    let enc_o = Label::enc_out;
    let enc_i = Label::enc_in;
    let reset = Label::reset;
    let (o, i) = (Polarity::Out, Polarity::In);
    match style {
        Style::Separate => {
            if ins.is_empty() {
                each_guarded::<S>(q, &enc_o(), &outs)
            } else {
                let mut all = outs;
                all.extend(ins);
                alloc::vec![guard::<S>(q, o, enc_o(), S::choice(all))]
            }
        }
        Style::Split => match (outs.is_empty(), ins.is_empty(), lower) {
            (false, false, true) => {
                let back = guard::<S>(q, i, reset(), S::choice(outs.clone()));
                let inner = S::choice(with::<S>(ins, back));
                with::<S>(outs, guard::<S>(q, o, enc_i(), inner))
            }
            (false, false, false) => with::<S>(ins, guard::<S>(q, i, enc_i(), S::choice(outs))),
            (_, true, true) => outs,
            (_, true, false) => alloc::vec![guard::<S>(q, i, enc_i(), S::choice(outs))],
            (true, false, true) => alloc::vec![guard::<S>(q, o, enc_i(), S::choice(ins))],
            (true, false, false) => {
                let again = guard::<S>(q, o, reset(), S::choice(ins.clone()));
                let back = guard::<S>(q, i, enc_i(), S::choice(alloc::vec![again]));
                with::<S>(ins, back)
            }
        },
        Style::SplitSeparate => match (outs.is_empty(), ins.is_empty(), lower) {
            (false, false, true) => {
                let back = guard::<S>(q, i, reset(), S::choice(outs.clone()));
                let inner = S::choice(with::<S>(ins, back));
                let announce = guard::<S>(q, o, enc_i(), inner);
                let late = guard::<S>(q, i, enc_o(), S::choice(alloc::vec![announce]));
                with::<S>(each_guarded::<S>(q, &enc_o(), &outs), late)
            }
            (false, false, false) => {
                let inner = S::choice(with::<S>(ins, guard::<S>(q, i, enc_i(), S::choice(outs))));
                alloc::vec![guard::<S>(q, o, enc_o(), inner)]
            }
            (_, true, true) => each_guarded::<S>(q, &enc_o(), &outs),
            (_, true, false) => {
                let inner = guard::<S>(q, i, enc_i(), S::choice(outs));
                alloc::vec![guard::<S>(q, o, enc_o(), S::choice(alloc::vec![inner]))]
            }
            (true, false, true) => {
                let inner = guard::<S>(q, o, enc_i(), S::choice(ins));
                alloc::vec![guard::<S>(q, i, enc_o(), S::choice(alloc::vec![inner]))]
            }
            (true, false, false) => {
                let again = guard::<S>(q, o, reset(), S::choice(ins.clone()));
                let back = guard::<S>(q, i, enc_i(), S::choice(alloc::vec![again]));
                let inner = S::choice(with::<S>(ins, back));
                alloc::vec![guard::<S>(q, o, enc_o(), inner)]
            }
        },
    }
}

/// The outputs and inputs of a choice exchanged with one peer.
type PeerGroup<S> = (
    ParticipantId,
    Vec<<S as Sums>::Summand>,
    Vec<<S as Sums>::Summand>,
);

/// Translates a whole choice of participant `p` whose summands have
/// already been translated.
fn split_choice<S: Sums>(
    id: EncodingId,
    p: &ParticipantId,
    order: &OrderRelation,
    summands: Vec<S::Summand>,
) -> Result<S, EncodeError> {
    let mut groups: Vec<PeerGroup<S>> = Vec::new();
    for s in summands {
        let q = S::peer(&s).clone();
        let idx = match groups.iter().position(|g| g.0 == q) {
            Some(i) => i,
            None => {
                groups.push((q, Vec::new(), Vec::new()));
                groups.len() - 1
            }
        };
        match S::polarity(&s) {
            Polarity::Out => groups[idx].1.push(s),
            Polarity::In => groups[idx].2.push(s),
        }
    }
    let style = match id {
        EncodingId::ScbsToBs | EncodingId::SmpToMp => Style::Separate,
        EncodingId::McbsToScbs | EncodingId::DmpToSmp | EncodingId::McmpToMsmp => Style::Split,
        EncodingId::McbsToBs | EncodingId::DmpToMp => Style::SplitSeparate,
        EncodingId::LcmvToMcbs => return Err(EncodeError::NoSessionTranslation(id)),
    };
    if groups.len() > 1 && id != EncodingId::McmpToMsmp {
        return Err(EncodeError::Shape(alloc::format!(
            "a choice of `{p}` addresses several participants"
        )));
    }
    if style == Style::Separate && groups.iter().any(|g| !g.1.is_empty() && !g.2.is_empty()) {
        return Err(EncodeError::Shape(alloc::format!(
            "a choice of `{p}` mixes inputs and outputs"
        )));
    }
    let mut out = Vec::new();
    for (q, outs, ins) in groups {
        let lower = order.less(p, &q);
        out.extend(split_one::<S>(style, &q, lower, outs, ins));
    }
    Ok(S::choice(out))
}

fn encode_process(
    id: EncodingId,
    p: &ParticipantId,
    order: &OrderRelation,
    proc_: &Process,
) -> Result<Process, EncodeError> {
    Ok(match proc_ {
        Process::Nil | Process::Success | Process::Var(_) => proc_.clone(),
        Process::Rec(x, body) => Process::rec(x.clone(), encode_process(id, p, order, body)?),
        Process::Cond {
            guard, then, els, ..
        } => Process::cond(
            guard.clone(),
            encode_process(id, p, order, then)?,
            encode_process(id, p, order, els)?,
        ),
        Process::Choice(c) => {
            let mut summands = Vec::with_capacity(c.branches.len());
            for b in &c.branches {
                if b.prefix.label().is_reserved() {
                    return Err(EncodeError::ReservedLabel(b.prefix.label().as_str().into()));
                }
                summands.push(Branch::new(
                    b.prefix.clone(),
                    encode_process(id, p, order, &b.cont)?,
                ));
            }
            split_choice::<Process>(id, p, order, summands)?
        }
    })
}

/// Translates a session along an encoding of the family.
pub fn encode(m: &Session, id: EncodingId) -> Result<Session, EncodeError> {
    let source = id.source().ok_or(EncodeError::NoSessionTranslation(id))?;
    if !classify(m).contains(&source) {
        return Err(EncodeError::NotInSource {
            id,
            calculus: source,
        });
    }
    let orders = build_order(m);
    let mut out = Session::new();
    for p in m.layout() {
        let order = orders.get(p).cloned().unwrap_or_default();
        let proc_ = m.get(p).cloned().unwrap_or(Process::Nil);
        let enc = encode_process(id, p, &order, &proc_)?;
        out.add(p.clone(), enc)
            .map_err(|e| EncodeError::Shape(alloc::format!("{e}")))?;
    }
    Ok(out)
}

fn encode_type(
    id: EncodingId,
    p: &ParticipantId,
    order: &OrderRelation,
    t: &LocalType,
) -> Result<LocalType, EncodeError> {
    Ok(match t {
        LocalType::End | LocalType::Var(_) => t.clone(),
        LocalType::Rec(v, body) => LocalType::Rec(
            v.clone(),
            alloc::boxed::Box::new(encode_type(id, p, order, body)?),
        ),
        LocalType::Choice(bs) => {
            let mut summands = Vec::with_capacity(bs.len());
            for b in bs {
                if b.label.is_reserved() {
                    return Err(EncodeError::ReservedLabel(b.label.as_str().into()));
                }
                summands.push(TBranch {
                    cont: encode_type(id, p, order, &b.cont)?,
                    ..b.clone()
                });
            }
            split_choice::<LocalType>(id, p, order, summands)?
        }
    })
}

/// Translates a context, ordering participants by name.
pub fn encode_types(ctx: &LocalContext, id: EncodingId) -> Result<LocalContext, EncodeError> {
    let layout: Vec<ParticipantId> = ctx.entries().keys().cloned().collect();
    encode_types_in(ctx, id, &layout)
}

/// Translates a context, ordering participants as in `layout`.
pub fn encode_types_in(
    ctx: &LocalContext,
    id: EncodingId,
    layout: &[ParticipantId],
) -> Result<LocalContext, EncodeError> {
    if id.source().is_none() {
        return Err(EncodeError::NoSessionTranslation(id));
    }
    let mut shape = Session::new();
    for p in layout {
        let _ = shape.add(p.clone(), Process::Nil);
    }
    for p in ctx.entries().keys() {
        if !layout.contains(p) {
            let _ = shape.add(p.clone(), Process::Nil);
        }
    }
    let orders = build_order(&shape);
    let mut out = BTreeMap::new();
    for (p, t) in ctx.entries() {
        let order = orders.get(p).cloned().unwrap_or_default();
        out.insert(p.clone(), encode_type(id, p, &order, t)?);
    }
    Ok(LocalContext::from_map(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{
        parse_session, parse_source_with, render_session, struct_congruent, LabelMode,
    };
    use crate::types::parse_type;

    fn expect(src: &str, id: EncodingId, want: &str) {
        let m = parse_session(src).unwrap();
        let got = encode(&m, id).unwrap();
        let want = parse_source_with(want, LabelMode::AllowReserved)
            .unwrap()
            .session;
        assert!(
            struct_congruent(&got, &want),
            "got\n{}\nwant\n{}",
            render_session(&got),
            render_session(&want)
        );
    }

    #[test]
    fn separate_outputs_wait_for_the_receiver() {
        expect(
            "role a = b!x + b!y role b = a?x + a?y",
            EncodingId::ScbsToBs,
            "role a = b?enc_o.b!x + b?enc_o.b!y role b = a!enc_o.(a?x + a?y)",
        );
    }

    #[test]
    fn split_lower_party_announces_its_inputs() {
        expect(
            "role a = b!x + b?y role b = a?x + a!y",
            EncodingId::McbsToScbs,
            "role a = b!x + b!enc_i.(b?y + b?reset.b!x) \
             role b = a?x + a?enc_i.a!y",
        );
    }

    #[test]
    fn split_with_only_inputs_on_the_upper_side_can_reset() {
        expect(
            "role a = b!x role b = a?x",
            EncodingId::McbsToScbs,
            "role a = b!x role b = a?x + a?enc_i.a!reset.a?x",
        );
    }

    #[test]
    fn split_with_only_inputs_on_the_lower_side_announces() {
        expect(
            "role a = b?x role b = a!x",
            EncodingId::McbsToScbs,
            "role a = b!enc_i.b?x role b = a?enc_i.a!x",
        );
    }

    #[test]
    fn split_separate_composes_both_steps() {
        expect(
            "role a = b!x + b?y role b = a?x + a!y",
            EncodingId::McbsToBs,
            "role a = b?enc_o.b!x + b?enc_o.b!enc_i.(b?y + b?reset.b!x) \
             role b = a!enc_o.(a?x + a?enc_i.a!y)",
        );
    }

    #[test]
    fn several_peers_are_split_per_peer() {
        expect(
            "role a = b!x + c?y role b = a?x role c = a!y",
            EncodingId::McmpToMsmp,
            "role a = b!x + c!enc_i.c?y role b = a?x + a?enc_i.a!reset.a?x \
             role c = a?enc_i.a!y",
        );
    }

    #[test]
    fn source_calculus_is_enforced() {
        let m = parse_session("role a = b!x + b?y role b = a?x + a!y").unwrap();
        assert!(matches!(
            encode(&m, EncodingId::ScbsToBs),
            Err(EncodeError::NotInSource { .. })
        ));
        assert_eq!(
            encode(&m, EncodingId::LcmvToMcbs),
            Err(EncodeError::NoSessionTranslation(EncodingId::LcmvToMcbs))
        );
    }

    #[test]
    fn types_follow_the_process_shapes() {
        let mut ctx = LocalContext::new();
        ctx.insert(ParticipantId::new("a"), parse_type("b!x + b?y").unwrap());
        ctx.insert(ParticipantId::new("b"), parse_type("a?x + a!y").unwrap());
        let enc = encode_types(&ctx, EncodingId::McbsToScbs).unwrap();
        let want_a = crate::types::parse_type_with(
            "b!x + b!enc_i.(b?y + b?reset.b!x)",
            LabelMode::AllowReserved,
        )
        .unwrap();
        let want_b =
            crate::types::parse_type_with("a?x + a?enc_i.a!y", LabelMode::AllowReserved).unwrap();
        assert!(crate::types::types_equivalent(
            enc.get(&ParticipantId::new("a")).unwrap(),
            &want_a
        ));
        assert!(crate::types::types_equivalent(
            enc.get(&ParticipantId::new("b")).unwrap(),
            &want_b
        ));
    }
}

//! Exhaustive generators of small terms for the pattern absence sweeps.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::lcmv::{ChoiceId, CmvBranch, CmvPayload, CmvProcess};
use crate::syntax::{Branch, ParticipantId, Polarity, Prefix, Process, Session, Value, Variable};

/// Which choices a generated participant may make.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceShape {
    /// Any combination of summands.
    Mixed,
    /// All summands address one peer.
    Directed,
    /// All summands have the same polarity.
    Separate,
}

/// The dimensions of a generated space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSize {
    /// Number of participants.
    pub participants: usize,
    /// Most summands per choice.
    pub summands: usize,
    /// Labels drawn from `l1`, `l2`, ...
    pub labels: usize,
    /// Continuations may be `ok` as well as `0`.
    pub with_success: bool,
    /// Restrict choices.
    pub shape: ChoiceShape,
}

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn summands(me: usize, size: &SweepSize) -> Vec<Branch> {
    let mut out = Vec::new();
    let conts: &[Process] = if size.with_success {
        &[Process::Nil, Process::Success]
    } else {
        &[Process::Nil]
    };
    for (q, peer) in NAMES.iter().enumerate().take(size.participants) {
        if q == me {
            continue;
        }
        for pol in [Polarity::Out, Polarity::In] {
            for l in 1..=size.labels {
                let label = alloc::format!("l{l}");
                for cont in conts {
                    let prefix = match pol {
                        Polarity::Out => Prefix::Send {
                            to: ParticipantId::new(*peer),
                            label: label.as_str().into(),
                            payload: Value::Bool(true),
                        },
                        Polarity::In => Prefix::Recv {
                            from: ParticipantId::new(*peer),
                            label: label.as_str().into(),
                            var: Variable::new("x"),
                        },
                    };
                    out.push(Branch::new(prefix, cont.clone()));
                }
            }
        }
    }
    out
}

fn fits(shape: ChoiceShape, bs: &[&Branch]) -> bool {
    match shape {
        ChoiceShape::Mixed => true,
        ChoiceShape::Directed => bs
            .windows(2)
            .all(|w| w[0].prefix.peer() == w[1].prefix.peer()),
        ChoiceShape::Separate => bs
            .windows(2)
            .all(|w| w[0].prefix.polarity() == w[1].prefix.polarity()),
    }
}

fn subsets<'a>(
    items: &'a [Branch],
    k: usize,
    from: usize,
    cur: &mut Vec<&'a Branch>,
    out: &mut Vec<Vec<&'a Branch>>,
) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    if cur.len() == k {
        return;
    }
    for i in from..items.len() {
        cur.push(&items[i]);
        subsets(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// The processes one participant may run.
pub fn participant_options(me: usize, size: &SweepSize) -> Vec<Process> {
    let all = summands(me, size);
    let mut picks = Vec::new();
    subsets(&all, size.summands, 0, &mut Vec::new(), &mut picks);
    let mut out = alloc::vec![Process::Nil];
    for pick in picks {
        if fits(size.shape, &pick) {
            out.push(Process::choice(pick.into_iter().cloned().collect()));
        }
    }
    out
}

/// Every session of the given size, in a fixed order.
pub struct SessionSpace {
    roles: Vec<ParticipantId>,
    options: Vec<Vec<Process>>,
    idx: Vec<usize>,
    done: bool,
}

impl SessionSpace {
    /// Builds the space.
    pub fn new(size: &SweepSize) -> Self {
        let n = size.participants.min(NAMES.len());
        Self {
            roles: NAMES[..n].iter().map(|s| ParticipantId::new(*s)).collect(),
            options: (0..n).map(|i| participant_options(i, size)).collect(),
            idx: alloc::vec![0; n],
            done: n == 0,
        }
    }

    /// Number of sessions in the space.
    pub fn cardinality(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }
}

impl Iterator for SessionSpace {
    type Item = Session;

    fn next(&mut self) -> Option<Session> {
        if self.done {
            return None;
        }
        let mut m = Session::new();
        for (k, p) in self.roles.iter().enumerate() {
            let _ = m.add(p.clone(), self.options[k][self.idx[k]].clone());
        }
        let mut k = 0;
        loop {
            if k == self.idx.len() {
                self.done = true;
                break;
            }
            self.idx[k] += 1;
            if self.idx[k] < self.options[k].len() {
                break;
            }
            self.idx[k] = 0;
            k += 1;
        }
        Some(m)
    }
}

fn cmv_choices(endpoint: &str, id: u32, labels: usize, summands: usize) -> Vec<CmvProcess> {
    let mut all = Vec::new();
    for l in 1..=labels {
        let label = alloc::format!("l{l}");
        for cont in [CmvProcess::Inact, CmvProcess::Success] {
            all.push(CmvBranch::new(
                &label,
                CmvPayload::Send(Value::Bool(true)),
                cont.clone(),
            ));
            all.push(CmvBranch::new(
                &label,
                CmvPayload::Recv(Variable::new("z")),
                cont,
            ));
        }
    }
    let mut out = alloc::vec![CmvProcess::Inact];
    let n = all.len();
    let mut pick = |bs: Vec<CmvBranch>| {
        out.push(CmvProcess::Choice {
            id: ChoiceId(id),
            endpoint: Variable::new(endpoint),
            branches: bs,
        })
    };
    for i in 0..n {
        pick(alloc::vec![all[i].clone()]);
        if summands >= 2 {
            for j in (i + 1)..n {
                pick(alloc::vec![all[i].clone(), all[j].clone()]);
            }
        }
    }
    out
}

/// Every linear program with one choice per endpoint of at most
/// `summands` summands over `labels` labels, next to an optional closed
/// component.
pub fn lcmv_programs(labels: usize, summands: usize) -> Vec<CmvProcess> {
    let xs = cmv_choices("x", 0, labels, summands);
    let ys = cmv_choices("y", 1, labels, summands);
    let closed = [
        CmvProcess::Inact,
        CmvProcess::Success,
        CmvProcess::cond(Value::Bool(true), CmvProcess::Success, CmvProcess::Inact),
        CmvProcess::cond(Value::Bool(false), CmvProcess::Inact, CmvProcess::Success),
    ];
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            for c in &closed {
                let body = CmvProcess::par(CmvProcess::par(x.clone(), y.clone()), c.clone());
                out.push(CmvProcess::Res(
                    Variable::new("x"),
                    Variable::new("y"),
                    Box::new(body),
                ));
            }
        }
    }
    out
}

//! Membership of sessions in the subcalculi of the mixed-choice family.

use alloc::collections::BTreeSet;
use core::fmt;
use core::str::FromStr;

use super::ast::{Choice, Polarity, Session};

/// One of the nine calculi of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubcalculusId {
    /// Mixed choice, multiparty.
    Mcmp,
    /// Mixed choice separated per participant.
    Msmp,
    /// Separate choice, multiparty.
    Scmp,
    /// Directed mixed choice: one partner per choice.
    Dmp,
    /// Separate directed choice.
    Smp,
    /// Single output or inputs from a single participant.
    Mp,
    /// Mixed choice, binary.
    Mcbs,
    /// Separate choice, binary.
    Scbs,
    /// Binary without choice between directions.
    Bs,
}

impl SubcalculusId {
    /// All nine calculi.
    pub const ALL: [SubcalculusId; 9] = [
        SubcalculusId::Mcmp,
        SubcalculusId::Msmp,
        SubcalculusId::Scmp,
        SubcalculusId::Dmp,
        SubcalculusId::Smp,
        SubcalculusId::Mp,
        SubcalculusId::Mcbs,
        SubcalculusId::Scbs,
        SubcalculusId::Bs,
    ];

    /// Conventional upper-case name.
    pub fn name(self) -> &'static str {
        match self {
            SubcalculusId::Mcmp => "MCMP",
            SubcalculusId::Msmp => "MSMP",
            SubcalculusId::Scmp => "SCMP",
            SubcalculusId::Dmp => "DMP",
            SubcalculusId::Smp => "SMP",
            SubcalculusId::Mp => "MP",
            SubcalculusId::Mcbs => "MCBS",
            SubcalculusId::Scbs => "SCBS",
            SubcalculusId::Bs => "BS",
        }
    }
}

impl fmt::Display for SubcalculusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for an unknown calculus name.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown subcalculus `{0}`")]
pub struct UnknownSubcalculus(pub alloc::string::String);

impl FromStr for SubcalculusId {
    type Err = UnknownSubcalculus;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SubcalculusId::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSubcalculus(s.into()))
    }
}

fn separated_per_peer(c: &Choice) -> bool {
    c.branches.iter().all(|b| {
        c.branches
            .iter()
            .filter(|o| o.prefix.peer() == b.prefix.peer())
            .all(|o| o.prefix.polarity() == b.prefix.polarity())
    })
}

fn separate(c: &Choice) -> bool {
    c.branches
        .windows(2)
        .all(|w| w[0].prefix.polarity() == w[1].prefix.polarity())
}

fn directed(c: &Choice) -> bool {
    c.branches
        .windows(2)
        .all(|w| w[0].prefix.peer() == w[1].prefix.peer())
}

fn single_direction(c: &Choice) -> bool {
    let outputs = c
        .branches
        .iter()
        .filter(|b| b.prefix.polarity() == Polarity::Out)
        .count();
    if outputs > 0 {
        c.branches.len() == 1
    } else {
        directed(c)
    }
}

/// Every participant that occurs in the session, as a role or as a peer.
pub fn participants_involved(m: &Session) -> BTreeSet<super::ast::ParticipantId> {
    let mut names: BTreeSet<_> = m.parts().keys().cloned().collect();
    for p in m.parts().values() {
        p.mentioned(&mut names);
    }
    names
}

/// All calculi whose syntactic restrictions the session satisfies.
pub fn classify(m: &Session) -> BTreeSet<SubcalculusId> {
    let (mut msmp, mut scmp, mut dmp, mut mp) = (true, true, true, true);
    for p in m.parts().values() {
        p.for_each_choice(&mut |c| {
            msmp &= separated_per_peer(c);
            scmp &= separate(c);
            dmp &= directed(c);
            mp &= single_direction(c);
        });
    }
    let binary = participants_involved(m).len() <= 2;
    let mut out = BTreeSet::new();
    out.insert(SubcalculusId::Mcmp);
    let mut add = |cond: bool, id| {
        if cond {
            out.insert(id);
        }
    };
    add(msmp, SubcalculusId::Msmp);
    add(scmp, SubcalculusId::Scmp);
    add(dmp, SubcalculusId::Dmp);
    add(dmp && scmp, SubcalculusId::Smp);
    add(mp, SubcalculusId::Mp);
    add(binary, SubcalculusId::Mcbs);
    add(binary && scmp, SubcalculusId::Scbs);
    add(binary && mp, SubcalculusId::Bs);
    out
}

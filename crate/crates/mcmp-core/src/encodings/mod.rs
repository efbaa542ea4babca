//! Encodings between the calculi of the family: the participant order,
//! the choice translations for sessions and types, and the harness that
//! checks the good-encoding criteria on concrete terms.

mod encode;
mod order;
mod verify;

use core::fmt;
use core::str::FromStr;

pub use encode::{encode, encode_types, encode_types_in};
pub use order::{build_order, total_order, OrderRelation};
pub use verify::{
    is_administrative, success_bisimilar, verify_correspondence, verify_name_invariance,
    verify_source, CorrespondenceReport, SourceSpec, VerifyError,
};

use crate::syntax::SubcalculusId;

/// The encodings of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EncodingId {
    /// Separate binary choice into binary sessions without choice of direction.
    ScbsToBs,
    /// Mixed binary choice into separate binary choice.
    McbsToScbs,
    /// Mixed binary choice into binary sessions without choice of direction.
    McbsToBs,
    /// Separate directed choice into single-direction choice.
    SmpToMp,
    /// Directed mixed choice into separate directed choice.
    DmpToSmp,
    /// Directed mixed choice into single-direction choice.
    DmpToMp,
    /// Mixed multiparty choice into choice separated per participant.
    McmpToMsmp,
    /// Linear mixed sessions into mixed binary choice.
    LcmvToMcbs,
}

impl EncodingId {
    /// All eight encodings.
    pub const ALL: [EncodingId; 8] = [
        EncodingId::ScbsToBs,
        EncodingId::McbsToScbs,
        EncodingId::McbsToBs,
        EncodingId::SmpToMp,
        EncodingId::DmpToSmp,
        EncodingId::DmpToMp,
        EncodingId::McmpToMsmp,
        EncodingId::LcmvToMcbs,
    ];

    /// The source calculus; `None` for the mixed-sessions front end.
    pub fn source(self) -> Option<SubcalculusId> {
        Some(match self {
            EncodingId::ScbsToBs => SubcalculusId::Scbs,
            EncodingId::McbsToScbs | EncodingId::McbsToBs => SubcalculusId::Mcbs,
            EncodingId::SmpToMp => SubcalculusId::Smp,
            EncodingId::DmpToSmp | EncodingId::DmpToMp => SubcalculusId::Dmp,
            EncodingId::McmpToMsmp => SubcalculusId::Mcmp,
            EncodingId::LcmvToMcbs => return None,
        })
    }

    /// The target calculus.
    pub fn target(self) -> SubcalculusId {
        match self {
            EncodingId::ScbsToBs | EncodingId::McbsToBs => SubcalculusId::Bs,
            EncodingId::McbsToScbs => SubcalculusId::Scbs,
            EncodingId::SmpToMp | EncodingId::DmpToMp => SubcalculusId::Mp,
            EncodingId::DmpToSmp => SubcalculusId::Smp,
            EncodingId::McmpToMsmp => SubcalculusId::Msmp,
            EncodingId::LcmvToMcbs => SubcalculusId::Mcbs,
        }
    }

    /// Most target steps per emulated source step.
    pub fn factor_bound(self) -> Option<usize> {
        Some(match self {
            EncodingId::ScbsToBs | EncodingId::SmpToMp | EncodingId::LcmvToMcbs => 2,
            EncodingId::McbsToScbs | EncodingId::DmpToSmp | EncodingId::McmpToMsmp => 3,
            EncodingId::McbsToBs | EncodingId::DmpToMp => 4,
        })
    }

    /// Whether the translation consults the participant order.
    pub fn is_order_dependent(self) -> bool {
        !matches!(
            self,
            EncodingId::ScbsToBs | EncodingId::SmpToMp | EncodingId::LcmvToMcbs
        )
    }

    /// Name such as `MCBS->SCBS`.
    pub fn name(self) -> &'static str {
        match self {
            EncodingId::ScbsToBs => "SCBS->BS",
            EncodingId::McbsToScbs => "MCBS->SCBS",
            EncodingId::McbsToBs => "MCBS->BS",
            EncodingId::SmpToMp => "SMP->MP",
            EncodingId::DmpToSmp => "DMP->SMP",
            EncodingId::DmpToMp => "DMP->MP",
            EncodingId::McmpToMsmp => "MCMP->MSMP",
            EncodingId::LcmvToMcbs => "LCMV->MCBS",
        }
    }
}

impl fmt::Display for EncodingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An encoding name that is not recognised.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown encoding `{0}`")]
pub struct UnknownEncoding(pub alloc::string::String);

impl FromStr for EncodingId {
    type Err = UnknownEncoding;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: alloc::string::String = s
            .to_ascii_uppercase()
            .replace('→', "->")
            .replace("-TO-", "->")
            .replace('+', "");
        let norm = if norm.contains("->") {
            norm
        } else {
            norm.replacen('-', "->", 1)
        };
        EncodingId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| UnknownEncoding(s.into()))
    }
}

/// Why a translation is not defined.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    /// The term is outside the source calculus.
    #[error("the term is not in {calculus}, the source of {id}")]
    NotInSource {
        /// The encoding.
        id: EncodingId,
        /// Its source calculus.
        calculus: SubcalculusId,
    },
    /// A reserved label occurs in the source.
    #[error("reserved label `{0}` in the source")]
    ReservedLabel(alloc::string::String),
    /// The term or type has a shape the translation does not cover.
    #[error("{0}")]
    Shape(alloc::string::String),
    /// The encoding does not translate sessions of this family.
    #[error("{0} has no translation for sessions or local types")]
    NoSessionTranslation(EncodingId),
}

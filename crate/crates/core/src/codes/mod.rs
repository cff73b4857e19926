//! Gabidulin and twisted Gabidulin codes, their decoders and brute-force
//! oracles.

mod bruteforce;
mod gabidulin;
mod twisted;

pub use bruteforce::{bruteforce_min_distance, bruteforce_rank_decode, gaussian_binomial, DEFAULT_GUARD};
pub use gabidulin::{gab_decode, Decoded, GabidulinCode};
pub use twisted::{
    resistance_delta, sample_mrd_code, sample_resistant_code, MrdChainReport, ResistanceReport,
    TwistedGabidulinCode,
};

use crate::error::Result;
use crate::field::{ExtField, FieldElement};
use crate::matrix::Matrix;

/// The secret code behind a GPT key.
#[derive(Clone, Debug, PartialEq)]
pub enum HiddenCode {
    Gabidulin(GabidulinCode),
    Twisted(TwistedGabidulinCode),
}

impl HiddenCode {
    pub fn field(&self) -> &ExtField {
        match self {
            HiddenCode::Gabidulin(c) => c.field(),
            HiddenCode::Twisted(c) => c.field(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            HiddenCode::Gabidulin(c) => c.n(),
            HiddenCode::Twisted(c) => c.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            HiddenCode::Gabidulin(c) => c.k(),
            HiddenCode::Twisted(c) => c.k(),
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            HiddenCode::Gabidulin(_) => 0,
            HiddenCode::Twisted(c) => c.ell(),
        }
    }

    pub fn alpha(&self) -> &[FieldElement] {
        match self {
            HiddenCode::Gabidulin(c) => c.alpha(),
            HiddenCode::Twisted(c) => c.alpha(),
        }
    }

    pub fn generator(&self) -> Matrix<ExtField> {
        match self {
            HiddenCode::Gabidulin(c) => c.generator(),
            HiddenCode::Twisted(c) => c.generator(),
        }
    }

    /// Interpolation decoding for Gabidulin codes; guarded brute force for
    /// twisted codes.
    pub fn decode(&self, received: &[FieldElement], guard: u128) -> Result<Decoded> {
        match self {
            HiddenCode::Gabidulin(c) => c.decode(received),
            HiddenCode::Twisted(c) => bruteforce_rank_decode(&c.generator(), received, c.radius(), guard),
        }
    }
}

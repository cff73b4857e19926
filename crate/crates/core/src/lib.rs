//! Rank-metric coding and cryptanalysis toolkit.

pub mod attack;
pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
mod gfpoly;
pub mod gpt;
pub mod linearized;
pub mod matrix;
pub mod params;
pub mod qsum;
pub mod textio;

pub use error::{Error, Result};
pub use field::{BaseField, ExtField, FieldElement, FieldOps};
pub use matrix::Matrix;

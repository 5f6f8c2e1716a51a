//! Construction and numerical certification of extremal function pairs in
//! Bloch, VMOA and weighted growth spaces on the unit disc.
//!
//! The library builds pairs of lacunary power series `(f, g)` whose moduli
//! (or derivative moduli) jointly dominate a prescribed target profile
//! `W(|z|)/omega(|z|)` on dense annular grids, and certifies every inequality
//! the construction relies on. Radii are represented throughout by
//! `delta = 1 - r`, so that annuli within `1e-300` of the unit circle remain
//! addressable in double precision.

// Guards are written as `!(x < y)` so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod coefficients;
pub mod config;
pub mod envelope;
pub mod numeric;
pub mod report;
pub mod series;
pub mod weights;
mod zeros;

pub use certify::{certify_bloch, certify_growth, little_o_profile, CertGrid, CertReport};
pub use coefficients::{nu_coefficients, ru_coefficients, CoeffSeq, NuSeq, Offset};
pub use series::{
    build_bloch_pair, build_growth_pair, remove_common_zeros, FunctionPair, PairKind, Scaled,
    SparseSeries,
};
pub use envelope::{build_envelope, verify_envelope, Envelope, EnvelopeReport};
pub use weights::{check_log_convex, normalize_decay, DecayFunction, RadialWeight};
pub use zeros::ZeroReport;

/// Errors for construction, evaluation and certification.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("numerical instability: {0}")]
    Instability(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

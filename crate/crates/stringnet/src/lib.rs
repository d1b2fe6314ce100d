//! Quantum groupoids built from fusion categories, and the Kitaev and
//! Levin–Wen lattice models they define.
//!
//! The pipeline is
//! [`fusion_data`] → [`groupoid`] → [`representations`], and separately
//! [`lattice`] → [`kitaev`] / [`levin_wen`] → [`correspondence`].

pub mod correspondence;
pub mod fusion_data;
pub mod groupoid;
pub mod kitaev;
pub mod lattice;
pub mod levin_wen;
pub mod linalg;
pub mod report;
pub mod representations;

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("duplicate entry: {0}")]
    Duplicate(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("category failed verification: {0}")]
    NotVerified(String),
    #[error("elements belong to different groupoids")]
    Provenance,
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("dimension too large: {0}")]
    TooLarge(String),
    #[error("rank did not stabilise: {0}")]
    Unstable(String),
}

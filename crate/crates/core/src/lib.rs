//! Finite-frame analysis toolkit.
//!
//! Computes unconditionality constants of frame multipliers (exactly by sign
//! enumeration, approximately by randomized search), optimal Bessel and frame
//! bounds through a dense symmetric eigensolver, explicit and optimized
//! weight splittings, probabilistic lower-bound witnesses, and structured
//! checkers for the quantitative bounds relating all of these.
//!
//! The main entry points:
//!
//! - [`Frame`], [`MultiplierSystem`]: the data model, with JSON schemas.
//! - [`frame::multiplier_apply`], [`Frame::spectral_summary`]: basic analysis.
//! - [`unconditionality::exact_constant`] / [`randomized_constant`]: the
//!   unconditionality constant with witnesses.
//! - [`split::explicit_split`] / [`optimal_split`] / [`unit_split`]: weight
//!   splittings and the trace lower bound.
//! - [`generators`]: deterministic reference and random instances.
//! - [`verify`]: per-theorem pass/fail reports and the batch suite.

pub mod error;
pub mod frame;
pub mod generators;
pub mod linalg;
pub mod rng;
pub mod split;
pub mod unconditionality;
pub mod verify;

pub use error::{Error, Result};
pub use frame::{Frame, MultiplierSystem, SignPattern, SpectralSummary};
pub use generators::{Generated, GeneratorKind, GeneratorSpec};
pub use rng::CounterRng;
pub use split::{optimal_split, unit_split, SplitMethod, SplitResult};
pub use unconditionality::{
    randomized_constant, EstimateStatus, KhintchineWitness, UnconditionalityEstimate,
};
pub use verify::{CheckContext, CheckStatus, TheoremId, TheoremReport};

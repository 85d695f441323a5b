//! Exact branch-by-branch simulation of entanglement purification for
//! polarization logic Bell states, driven by photonic Faraday rotation in
//! low-Q cavities.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the protocols are validated
//! against.

// `!(x > 0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod epp;
mod error;
pub mod faraday;
pub mod hilbert;
pub mod logic_states;
pub mod numfmt;
pub mod optics;
mod scalar;
pub mod state_io;

pub use error::{Error, Result};
pub use scalar::{Amplitude, Real};

pub type State = hilbert::SparseState<f64>;
pub type Mixture = hilbert::Ensemble<f64>;
pub type Cavity = faraday::CavityParams<f64>;
pub type Phases = faraday::ReflectionPhases<f64>;
pub type Model = logic_states::ErrorModel<f64>;
pub type Report = epp::PurificationReport<f64>;

pub type StateF32 = hilbert::SparseState<f32>;
pub type MixtureF32 = hilbert::Ensemble<f32>;
pub type ReportF32 = epp::PurificationReport<f32>;

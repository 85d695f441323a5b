//! Sparse joint photon-atom states, exact pure-state mixtures and the
//! single-slot linear algebra every protocol step is built from.

mod ensemble;
mod ket;
mod state;
mod unitary;

pub use ensemble::{ensemble_fidelity, Ensemble};
pub use ket::{parse_atom_levels, parse_polarizations, AtomLevel, BasisKet, Polarization, MAX_SLOTS};
pub use state::{MeasurementBranch, Outcome, Slot, SparseState};
pub use unitary::Unitary2;

#[cfg(test)]
mod tests;

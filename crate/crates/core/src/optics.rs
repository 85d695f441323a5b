//! Linear-optical elements: half-wave plate, polarizing beam splitter with
//! detectors, and single-photon corrections.

use crate::error::{invalid, Result};
use crate::hilbert::{Outcome, Polarization, Slot, SparseState, Unitary2};
use crate::scalar::Real;

/// Half-wave plate: `|L⟩ → (|L⟩+|R⟩)/√2`, `|R⟩ → (|L⟩−|R⟩)/√2`.
pub fn hwp<T: Real>(s: &SparseState<T>, photon: usize) -> Result<SparseState<T>> {
    s.apply_photon_unitary(photon, &Unitary2::hadamard())
}

/// Applies [`hwp`] to each listed photon in order.
pub fn hwp_all<T: Real>(s: &SparseState<T>, photons: impl IntoIterator<Item = usize>) -> Result<SparseState<T>> {
    photons.into_iter().try_fold(s.clone(), |acc, p| hwp(&acc, p))
}

/// `L ↔ R` on one photon.
pub fn bit_flip<T: Real>(s: &SparseState<T>, photon: usize) -> Result<SparseState<T>> {
    s.apply_photon_unitary(photon, &Unitary2::pauli_x())
}

pub fn bit_flip_all<T: Real>(s: &SparseState<T>, photons: &[usize]) -> Result<SparseState<T>> {
    photons.iter().try_fold(s.clone(), |acc, &p| bit_flip(&acc, p))
}

/// `|R⟩ → −|R⟩` on one photon.
pub fn phase_flip<T: Real>(s: &SparseState<T>, photon: usize) -> Result<SparseState<T>> {
    s.apply_photon_unitary(photon, &Unitary2::pauli_z())
}

/// One joint outcome of [`pbs_detect`].
#[derive(Clone, Debug)]
pub struct Detection<T: Real> {
    /// Polarization seen on each detected slot, in the order requested.
    pub pattern: Vec<Polarization>,
    pub probability: T,
    pub state: SparseState<T>,
}

impl<T: Real> Detection<T> {
    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|p| p.symbol()).collect()
    }
}

/// PBS plus detectors on each listed photon: a projective `{L, R}`
/// measurement of all of them. Detected photons stay in the register as
/// collapsed slots.
pub fn pbs_detect<T: Real>(s: &SparseState<T>, photons: &[usize]) -> Result<Vec<Detection<T>>> {
    for (i, p) in photons.iter().enumerate() {
        s.check_photon(*p)?;
        if photons[..i].contains(p) {
            return Err(invalid(format!("photon slot {p} listed twice")));
        }
    }
    let mut branches = vec![Detection {
        pattern: Vec::new(),
        probability: T::one(),
        state: s.clone(),
    }];
    for &p in photons {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for b in branches {
            for m in b.state.measure(Slot::Photon(p))? {
                let pol = match m.outcome {
                    Outcome::Photon(pol) => pol,
                    Outcome::Atom(_) => unreachable!("photon slot measured"),
                };
                let mut pattern = b.pattern.clone();
                pattern.push(pol);
                next.push(Detection {
                    pattern,
                    probability: b.probability * m.probability,
                    state: m.state,
                });
            }
        }
        branches = next;
    }
    Ok(branches)
}

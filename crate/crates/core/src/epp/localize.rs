//! Sequential parity checks that find a single flipped photon inside
//! logic qubit A.

use super::trace::hadamard_atoms;
use crate::error::{invalid, Error, Result};
use crate::faraday::{reflect_group, ReflectionPhases};
use crate::hilbert::{AtomLevel, Outcome, Slot, SparseState};
use crate::logic_states::{check_m, omega_register};
use crate::optics::{bit_flip, phase_flip};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct Localization<T: Real> {
    /// 1-based position of the flipped photon in A, `None` if no flip.
    pub position: Option<usize>,
    pub atoms_used: usize,
    /// Photon slots compared by each atom, in order.
    pub checks: Vec<(usize, usize)>,
    pub outcomes: Vec<AtomLevel>,
    /// The `2M` photons after correction.
    pub corrected: SparseState<T>,
}

/// Parity of each adjacent pair along `a_1 … a_M b_1 … b_M`, if every
/// term agrees on it.
fn syndrome<T: Real>(s: &SparseState<T>) -> Option<Vec<bool>> {
    let chain = s.photon_count();
    let mut out: Option<Vec<bool>> = None;
    for (k, _) in s.terms() {
        let bits: Vec<bool> = (0..chain - 1).map(|j| k.photon(j) != k.photon(j + 1)).collect();
        match &out {
            None => out = Some(bits),
            Some(b) if *b != bits => return None,
            _ => {}
        }
    }
    out
}

/// Expected syndrome for a flip at 1-based `position` of A (or none).
fn expected_syndrome(m: usize, position: Option<usize>) -> Vec<bool> {
    let mut bits = vec![false; 2 * m - 1];
    if let Some(k) = position {
        // Pairs (a_{k-1}, a_k) and (a_k, a_{k+1}) in 0-based pair indices.
        if k >= 2 {
            bits[k - 2] = true;
        }
        bits[k - 1] = true;
    }
    bits
}

/// One fresh atom in Ω⁺, both photons reflected, Hadamard, measurement.
/// The outcome must be certain.
fn parity_check<T: Real>(s: &SparseState<T>, photons: (usize, usize)) -> Result<(AtomLevel, SparseState<T>)> {
    let atom = s.atom_count();
    let s = s.tensor(&omega_register(1)?)?;
    let s = reflect_group(&s, &[photons.0, photons.1], &[atom], &ReflectionPhases::ideal())?;
    let s = hadamard_atoms(&s, &[atom])?;
    let mut branches = s.measure(Slot::Atom(atom))?;
    if branches.len() != 1 {
        return Err(Error::Invariant(format!(
            "parity check on {photons:?} was not deterministic"
        )));
    }
    let b = branches.pop().expect("one branch");
    match b.outcome {
        Outcome::Atom(level) => Ok((level, b.state)),
        Outcome::Photon(_) => Err(Error::Invariant("atom slot gave a photon outcome".into())),
    }
}

/// Finds and corrects a single bit flip on logic qubit A of a `2M`-photon
/// logic Bell state.
///
/// Atom `n` compares `a_n` and `a_{n+1}`. A first `gL` at atom 1 triggers
/// one more check of `a_2` against its right neighbour (`b_1` when `M = 2`)
/// to separate `a_1` from `a_2`; a first `gL` at atom `n ≥ 2` places the
/// flip at `a_{n+1}`. Each `gR` check also imprints a relative sign
/// between the two GHZ branches, which is undone with one phase flip when
/// their count is odd.
pub fn locate_physical_bitflip<T: Real>(state: &SparseState<T>, m: usize) -> Result<Localization<T>> {
    check_m(m)?;
    if m < 2 {
        return Err(invalid("localization needs at least two photons per logic qubit"));
    }
    if state.shape() != (2 * m, 0) {
        return Err(invalid(format!(
            "expected {} photons and no atoms, got {:?}",
            2 * m,
            state.shape()
        )));
    }
    let found = syndrome(state).ok_or_else(|| Error::UndefinedModel("terms disagree on adjacent parities".into()))?;
    let explained = std::iter::once(None)
        .chain((1..=m).map(Some))
        .any(|p| expected_syndrome(m, p) == found);
    if !explained {
        return Err(Error::UndefinedModel(
            "no single flip on logic qubit A explains the parities".into(),
        ));
    }

    let mut s = state.clone();
    let mut checks = Vec::new();
    let mut outcomes = Vec::new();
    let mut run = |s: &mut SparseState<T>, pair: (usize, usize)| -> Result<AtomLevel> {
        let (level, next) = parity_check(s, pair)?;
        *s = next;
        checks.push(pair);
        outcomes.push(level);
        Ok(level)
    };

    let mut position = None;
    if run(&mut s, (0, 1))? == AtomLevel::GL {
        position = Some(if run(&mut s, (1, 2))? == AtomLevel::GL { 2 } else { 1 });
    } else {
        for n in 2..m {
            if run(&mut s, (n - 1, n))? == AtomLevel::GL {
                position = Some(n + 1);
                break;
            }
        }
    }

    let same_checks = outcomes.iter().filter(|&&o| o == AtomLevel::GR).count();
    if same_checks % 2 == 1 {
        s = phase_flip(&s, 0)?;
    }
    if let Some(k) = position {
        s = bit_flip(&s, k - 1)?;
    }
    let corrected = s.reduce_to_photons(&(0..2 * m).collect::<Vec<_>>())?;
    Ok(Localization {
        position,
        atoms_used: outcomes.len(),
        checks,
        outcomes,
        corrected,
    })
}

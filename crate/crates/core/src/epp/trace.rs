//! Shared machinery for following a register through measurements, either
//! enumerating every outcome or sampling one.

use rand::Rng;

use crate::error::{Error, Result};
use crate::faraday::{reflect_group, ReflectionPhases};
use crate::hilbert::{AtomLevel, Outcome, Polarization, Slot, SparseState, Unitary2};
use crate::logic_states::omega_register;
use crate::optics::hwp_all;
use crate::scalar::Real;

use super::verdict::Verdict;
use super::wiring::Group;

/// End point of one trajectory through a pure input.
#[derive(Clone, Debug)]
pub(crate) struct Leaf<T: Real> {
    pub weight: T,
    pub atoms: Vec<AtomLevel>,
    pub verdict: Verdict,
    pub photons: Vec<Polarization>,
    pub recovery: Vec<usize>,
    pub pre: Option<SparseState<T>>,
    pub post: Option<SparseState<T>>,
}

/// Decides which measurement outcomes are followed.
pub(crate) trait Brancher<T: Real> {
    /// Receives `(probability, item)` pairs summing to 1 and returns the
    /// ones to follow with their path weights.
    fn choose<X>(&mut self, items: Vec<(T, X)>) -> Vec<(T, X)>;
}

/// Follows every outcome.
pub(crate) struct Enumerate;

impl<T: Real> Brancher<T> for Enumerate {
    fn choose<X>(&mut self, items: Vec<(T, X)>) -> Vec<(T, X)> {
        items
    }
}

/// Follows one outcome drawn with its probability; the weight becomes 1.
pub(crate) struct Sample<'a, R: Rng>(pub &'a mut R);

impl<T: Real, R: Rng> Brancher<T> for Sample<'_, R> {
    fn choose<X>(&mut self, items: Vec<(T, X)>) -> Vec<(T, X)> {
        let u: f64 = self.0.gen();
        let mut acc = 0.0;
        let last = items.len().saturating_sub(1);
        for (i, (p, x)) in items.into_iter().enumerate() {
            acc += p.as_f64();
            if u < acc || i == last {
                return vec![(T::one(), x)];
            }
        }
        Vec::new()
    }
}

/// A register together with the atom outcomes seen so far.
#[derive(Clone, Debug)]
pub(crate) struct AtomPath<T: Real> {
    pub weight: T,
    pub atoms: Vec<AtomLevel>,
    pub state: SparseState<T>,
}

/// Rescales to unit norm, moving the squared norm into the path weight.
/// Only a lossy reflection map changes the norm.
pub(crate) fn absorb_norm<T: Real>(weight: T, s: SparseState<T>) -> Result<(T, SparseState<T>)> {
    let n = s.norm_sqr();
    if (n - T::one()).abs() <= T::norm_tolerance() {
        return Ok((weight, s));
    }
    Ok((weight * n, s.normalized()?))
}

pub(crate) fn hadamard_atoms<T: Real>(s: &SparseState<T>, atoms: &[usize]) -> Result<SparseState<T>> {
    let h = Unitary2::hadamard();
    atoms
        .iter()
        .try_fold(s.clone(), |acc, &a| acc.apply_atom_unitary(a, &h))
}

/// Measures the listed atoms in order, appending the outcomes to the path.
pub(crate) fn measure_atoms<T: Real, B: Brancher<T>>(
    path: AtomPath<T>,
    atoms: &[usize],
    brancher: &mut B,
) -> Result<Vec<AtomPath<T>>> {
    let mut paths = vec![path];
    for &a in atoms {
        let mut next = Vec::with_capacity(paths.len() * 2);
        for p in paths {
            let items = p
                .state
                .measure(Slot::Atom(a))?
                .into_iter()
                .map(|b| (b.probability, b))
                .collect();
            for (q, b) in brancher.choose(items) {
                let level = match b.outcome {
                    Outcome::Atom(l) => l,
                    Outcome::Photon(_) => return Err(Error::Invariant("atom slot gave a photon outcome".into())),
                };
                let mut atoms = p.atoms.clone();
                atoms.push(level);
                next.push(AtomPath {
                    weight: p.weight * q,
                    atoms,
                    state: b.state,
                });
            }
        }
        paths = next;
    }
    Ok(paths)
}

/// One group, self-contained: HWP on the group photons, fresh atoms in Ω⁺,
/// reflections, Hadamard and measurement of the atoms, HWP back.
///
/// Groups act on disjoint photons and atoms, so running them one after
/// another equals rotating every photon first and measuring all atoms at
/// the end.
pub(crate) fn run_group<T: Real, B: Brancher<T>>(
    path: AtomPath<T>,
    group: &Group,
    phases: &ReflectionPhases<T>,
    brancher: &mut B,
) -> Result<Vec<AtomPath<T>>> {
    if path.state.atom_count() != group.atoms[0] {
        return Err(Error::Invariant(format!(
            "group atoms start at {} but the register holds {}",
            group.atoms[0],
            path.state.atom_count()
        )));
    }
    let s = hwp_all(&path.state, group.photons.iter().copied())?;
    let s = s.tensor(&omega_register(group.atoms.len())?)?;
    let s = reflect_group(&s, &group.photons, &group.atoms, phases)?;
    let (weight, s) = absorb_norm(path.weight, s)?;
    let s = hadamard_atoms(&s, &group.atoms)?;
    let measured = measure_atoms(
        AtomPath {
            weight,
            atoms: path.atoms,
            state: s,
        },
        &group.atoms,
        brancher,
    )?;
    measured
        .into_iter()
        .map(|p| {
            let state = hwp_all(&p.state, group.photons.iter().copied())?;
            Ok(AtomPath { state, ..p })
        })
        .collect()
}

/// True when both phases match `−1` and `i` within the scalar tolerance.
pub(crate) fn near_ideal<T: Real>(phases: &ReflectionPhases<T>) -> bool {
    let ideal = ReflectionPhases::<T>::ideal();
    let tol = T::norm_tolerance();
    (phases.coupled - ideal.coupled).norm() <= tol && (phases.uncoupled - ideal.uncoupled).norm() <= tol
}

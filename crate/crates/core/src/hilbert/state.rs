use std::collections::BTreeMap;

use num_complex::Complex;

use super::ket::{AtomLevel, BasisKet, Polarization, MAX_SLOTS};
use super::unitary::Unitary2;
use crate::error::{invalid, Error, Result};
use crate::scalar::{one, Real};

type Getter = fn(&BasisKet, usize) -> usize;
type Setter = fn(BasisKet, usize, usize) -> BasisKet;
/// Which register a slot index refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Photon(usize),
    Atom(usize),
}

/// Result of a projective measurement of a single slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Photon(Polarization),
    Atom(AtomLevel),
}

#[derive(Clone, Debug)]
pub struct MeasurementBranch<T: Real> {
    pub outcome: Outcome,
    pub probability: T,
    /// Normalized post-measurement state; the measured slot stays in place.
    pub state: SparseState<T>,
}

/// Pure joint photon-atom state stored as a sparse map from basis kets to
/// amplitudes.
///
/// Terms with modulus at or below [`Real::prune_threshold`] are never stored.
/// The state is not renormalized automatically except by [`SparseState::measure`].
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState<T: Real> {
    photons: usize,
    atoms: usize,
    terms: BTreeMap<BasisKet, Complex<T>>,
}

impl<T: Real> SparseState<T> {
    /// A single basis ket with amplitude 1.
    pub fn basis(photons: &[Polarization], atoms: &[AtomLevel]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(BasisKet::from_levels(photons, atoms), one());
        SparseState {
            photons: photons.len(),
            atoms: atoms.len(),
            terms,
        }
    }

    /// The empty register (0 photons, 0 atoms) with amplitude 1; the unit of [`tensor`](Self::tensor).
    pub fn unit() -> Self {
        Self::basis(&[], &[])
    }

    /// Builds a state from raw terms. Repeated kets are summed; nothing is normalized.
    pub fn from_terms(
        photons: usize,
        atoms: usize,
        terms: impl IntoIterator<Item = (BasisKet, Complex<T>)>,
    ) -> Result<Self> {
        if photons > MAX_SLOTS || atoms > MAX_SLOTS {
            return Err(invalid("register larger than 64 slots"));
        }
        let photon_mask = mask(photons);
        let atom_mask = mask(atoms);
        let mut map: BTreeMap<BasisKet, Complex<T>> = BTreeMap::new();
        for (ket, amp) in terms {
            if ket.photon_bits() & !photon_mask != 0 || ket.atom_bits() & !atom_mask != 0 {
                return Err(invalid("basis ket does not fit the register shape"));
            }
            *map.entry(ket).or_insert_with(|| Complex::new(T::zero(), T::zero())) += amp;
        }
        let mut s = SparseState {
            photons,
            atoms,
            terms: map,
        };
        s.prune();
        Ok(s)
    }

    /// Builds a state from `(label, amplitude)` pairs such as `("LR;gL", a)`
    /// and normalizes it.
    pub fn from_labels(items: &[(&str, Complex<T>)]) -> Result<Self> {
        let mut shape = None;
        let mut terms = Vec::with_capacity(items.len());
        for (label, amp) in items {
            let (ket, p, a) = BasisKet::parse_label(label)?;
            match shape {
                None => shape = Some((p, a)),
                Some(s) if s != (p, a) => return Err(Error::ShapeMismatch { left: s, right: (p, a) }),
                _ => {}
            }
            terms.push((ket, *amp));
        }
        let (p, a) = shape.ok_or_else(|| invalid("no terms given"))?;
        Self::from_terms(p, a, terms)?.normalized()
    }

    pub fn photon_count(&self) -> usize {
        self.photons
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    /// `(photon_count, atom_count)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.photons, self.atoms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending ket order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisKet, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, ket: &BasisKet) -> Complex<T> {
        self.terms
            .get(ket)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn label_of(&self, ket: &BasisKet) -> String {
        ket.label(self.photons, self.atoms)
    }

    pub fn norm_sqr(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::norm_tolerance()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > T::zero()) {
            return Err(invalid("cannot normalize the zero vector"));
        }
        for a in self.terms.values_mut() {
            *a /= n;
        }
        self.prune();
        Ok(self)
    }

    pub fn scaled(mut self, factor: Complex<T>) -> Self {
        for a in self.terms.values_mut() {
            *a *= factor;
        }
        self.prune();
        self
    }

    /// Linear combination `self + other` (no normalization).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, a) in &other.terms {
            *out.terms
                .entry(*k)
                .or_insert_with(|| Complex::new(T::zero(), T::zero())) += *a;
        }
        out.prune();
        Ok(out)
    }

    /// `Σ cᵢ ψᵢ` over states of one shape, normalized.
    pub fn superpose(parts: &[(Complex<T>, &Self)]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or_else(|| invalid("empty superposition"))?;
        let mut acc = first.1.clone().scaled(first.0);
        for (coef, s) in rest {
            acc = acc.add(&(*s).clone().scaled(*coef))?;
        }
        acc.normalized()
    }

    /// Tensor product; `self` keeps the low photon and atom slots.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let photons = self.photons + other.photons;
        let atoms = self.atoms + other.atoms;
        if photons > MAX_SLOTS || atoms > MAX_SLOTS {
            return Err(invalid("tensor product exceeds 64 slots"));
        }
        let mut terms = BTreeMap::new();
        for (ka, aa) in &self.terms {
            for (kb, ab) in &other.terms {
                terms.insert(ka.concat(kb, self.photons, self.atoms), *aa * *ab);
            }
        }
        let mut s = SparseState { photons, atoms, terms };
        s.prune();
        Ok(s)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check_shape(other)?;
        let (small, large, conj_small) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, true)
        } else {
            (&other.terms, &self.terms, false)
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, a) in small {
            if let Some(b) = large.get(k) {
                acc += if conj_small { a.conj() * *b } else { b.conj() * *a };
            }
        }
        Ok(acc)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// True iff `|⟨a|b⟩| ≥ 1 − tol`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: T) -> Result<bool> {
        Ok(self.inner_product(other)?.norm() >= T::one() - tol)
    }

    pub fn apply_photon_unitary(&self, slot: usize, u: &Unitary2<T>) -> Result<Self> {
        self.check_photon(slot)?;
        check_unitary(u)?;
        Ok(self.apply_single(Slot::Photon(slot), u))
    }

    pub fn apply_atom_unitary(&self, slot: usize, u: &Unitary2<T>) -> Result<Self> {
        self.check_atom(slot)?;
        check_unitary(u)?;
        Ok(self.apply_single(Slot::Atom(slot), u))
    }

    fn apply_single(&self, slot: Slot, u: &Unitary2<T>) -> Self {
        let m = u.matrix();
        let (get, set): (Getter, Setter) = match slot {
            Slot::Photon(_) => (
                |k, s| k.photon(s) as usize,
                |k, s, v| k.with_photon(s, if v == 0 { Polarization::L } else { Polarization::R }),
            ),
            Slot::Atom(_) => (
                |k, s| k.atom(s) as usize,
                |k, s, v| k.with_atom(s, if v == 0 { AtomLevel::GL } else { AtomLevel::GR }),
            ),
        };
        let s = match slot {
            Slot::Photon(s) | Slot::Atom(s) => s,
        };
        let mut terms: BTreeMap<BasisKet, Complex<T>> = BTreeMap::new();
        for (k, a) in &self.terms {
            let col = get(k, s);
            for (row, m_row) in m.iter().enumerate() {
                let coef = m_row[col];
                if coef.re == T::zero() && coef.im == T::zero() {
                    continue;
                }
                *terms
                    .entry(set(*k, s, row))
                    .or_insert_with(|| Complex::new(T::zero(), T::zero())) += coef * *a;
            }
        }
        let mut out = SparseState {
            photons: self.photons,
            atoms: self.atoms,
            terms,
        };
        out.prune();
        out
    }

    /// Multiplies every amplitude by `phase(ket)`. Used for diagonal operators.
    pub fn map_diagonal(&self, phase: impl Fn(&BasisKet) -> Complex<T>) -> Self {
        let mut out = self.clone();
        for (k, a) in out.terms.iter_mut() {
            *a *= phase(k);
        }
        out.prune();
        out
    }

    /// Projective measurement of one slot in its computational basis.
    ///
    /// Outcomes are listed `L`/`gL` first; zero-probability outcomes are
    /// omitted. Probabilities are relative to the current norm, so a
    /// sub-normalized input yields conditional probabilities.
    pub fn measure(&self, slot: Slot) -> Result<Vec<MeasurementBranch<T>>> {
        match slot {
            Slot::Photon(s) => self.check_photon(s)?,
            Slot::Atom(s) => self.check_atom(s)?,
        }
        let total = self.norm_sqr();
        if !(total > T::zero()) {
            return Err(invalid("cannot measure the zero vector"));
        }
        let mut parts: [BTreeMap<BasisKet, Complex<T>>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for (k, a) in &self.terms {
            let bit = match slot {
                Slot::Photon(s) => k.photon(s) == Polarization::R,
                Slot::Atom(s) => k.atom(s) == AtomLevel::GR,
            };
            parts[bit as usize].insert(*k, *a);
        }
        let mut out = Vec::with_capacity(2);
        for (bit, terms) in parts.into_iter().enumerate() {
            if terms.is_empty() {
                continue;
            }
            let projected = SparseState {
                photons: self.photons,
                atoms: self.atoms,
                terms,
            };
            let p = projected.norm_sqr() / total;
            let outcome = match slot {
                Slot::Photon(_) => Outcome::Photon(if bit == 0 { Polarization::L } else { Polarization::R }),
                Slot::Atom(_) => Outcome::Atom(if bit == 0 { AtomLevel::GL } else { AtomLevel::GR }),
            };
            out.push(MeasurementBranch {
                outcome,
                probability: p,
                state: projected.normalized()?,
            });
        }
        Ok(out)
    }

    /// Reorders photon slots: slot `i` of the result is slot `order[i]` of `self`.
    pub fn permute_photons(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.photons];
        if order.len() != self.photons {
            return Err(invalid("permutation length differs from photon count"));
        }
        for &o in order {
            self.check_photon(o)?;
            if std::mem::replace(&mut seen[o], true) {
                return Err(invalid("permutation repeats a slot"));
            }
        }
        let terms = self.terms.iter().map(|(k, a)| {
            let mut bits = 0u64;
            for (new, &old) in order.iter().enumerate() {
                bits |= (k.photon_bits() >> old & 1) << new;
            }
            (BasisKet::from_bits(bits, k.atom_bits()), *a)
        });
        Self::from_terms(self.photons, self.atoms, terms)
    }

    /// Keeps only the listed photon slots (in the given order) and drops all
    /// atoms. Every dropped slot must be collapsed: all terms agree on it.
    pub fn reduce_to_photons(&self, keep: &[usize]) -> Result<Self> {
        for &s in keep {
            self.check_photon(s)?;
        }
        let keep_mask = keep.iter().fold(0u64, |m, &s| m | 1 << s);
        let mut reference: Option<(u64, u64)> = None;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            let dropped = (k.photon_bits() & !keep_mask, k.atom_bits());
            match reference {
                None => reference = Some(dropped),
                Some(r) if r != dropped => {
                    return Err(Error::Invariant(
                        "dropped slots are entangled with the kept photons".into(),
                    ))
                }
                _ => {}
            }
            let mut bits = 0u64;
            for (new, &old) in keep.iter().enumerate() {
                bits |= (k.photon_bits() >> old & 1) << new;
            }
            terms.push((BasisKet::from_bits(bits, 0), *a));
        }
        Self::from_terms(keep.len(), 0, terms)
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_photon(&self, slot: usize) -> Result<()> {
        if slot >= self.photons {
            return Err(Error::SlotOutOfRange {
                kind: "photon",
                slot,
                len: self.photons,
            });
        }
        Ok(())
    }

    pub(crate) fn check_atom(&self, slot: usize) -> Result<()> {
        if slot >= self.atoms {
            return Err(Error::SlotOutOfRange {
                kind: "atom",
                slot,
                len: self.atoms,
            });
        }
        Ok(())
    }

    fn prune(&mut self) {
        let cut = T::prune_threshold();
        self.terms.retain(|_, a| a.norm() > cut);
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_unitary<T: Real>(u: &Unitary2<T>) -> Result<()> {
    let dev = u.unitarity_deviation();
    if !(dev <= T::norm_tolerance()) {
        return Err(Error::NotUnitary(dev.as_f64()));
    }
    Ok(())
}

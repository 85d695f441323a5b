use std::fmt;

use crate::error::{invalid, Result};

/// Maximum number of photon or atom slots in one register.
pub const MAX_SLOTS: usize = 64;

/// Circular polarization of a single photon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    L,
    R,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Polarization::L => Polarization::R,
            Polarization::R => Polarization::L,
        }
    }

    fn from_bit(bit: bool) -> Self {
        if bit {
            Polarization::R
        } else {
            Polarization::L
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarization::L => 'L',
            Polarization::R => 'R',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'L' => Some(Polarization::L),
            'R' => Some(Polarization::R),
            _ => None,
        }
    }
}

/// One of the two degenerate ground states of a three-level atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    /// `|g_L⟩`, coupled to L photons.
    GL,
    /// `|g_R⟩`, coupled to R photons.
    GR,
}

impl AtomLevel {
    fn from_bit(bit: bool) -> Self {
        if bit {
            AtomLevel::GR
        } else {
            AtomLevel::GL
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            AtomLevel::GL => "gL",
            AtomLevel::GR => "gR",
        }
    }

    /// Whether the atom level couples to the given photon polarization.
    pub fn couples_to(self, p: Polarization) -> bool {
        matches!(
            (self, p),
            (AtomLevel::GL, Polarization::L) | (AtomLevel::GR, Polarization::R)
        )
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Computational basis label: one polarization per photon slot and one
/// ground state per atom slot, packed as bit sets (`R` and `gR` are 1).
///
/// A ket does not know its register sizes; the owning state does.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKet {
    photons: u64,
    atoms: u64,
}

impl BasisKet {
    pub fn from_levels(photons: &[Polarization], atoms: &[AtomLevel]) -> Self {
        assert!(photons.len() <= MAX_SLOTS && atoms.len() <= MAX_SLOTS);
        let mut ket = BasisKet::default();
        for (i, p) in photons.iter().enumerate() {
            if *p == Polarization::R {
                ket.photons |= 1 << i;
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if *a == AtomLevel::GR {
                ket.atoms |= 1 << i;
            }
        }
        ket
    }

    pub(crate) fn from_bits(photons: u64, atoms: u64) -> Self {
        BasisKet { photons, atoms }
    }

    pub(crate) fn photon_bits(&self) -> u64 {
        self.photons
    }

    pub(crate) fn atom_bits(&self) -> u64 {
        self.atoms
    }

    pub fn photon(&self, slot: usize) -> Polarization {
        Polarization::from_bit(self.photons >> slot & 1 == 1)
    }

    pub fn atom(&self, slot: usize) -> AtomLevel {
        AtomLevel::from_bit(self.atoms >> slot & 1 == 1)
    }

    pub fn with_photon(mut self, slot: usize, p: Polarization) -> Self {
        match p {
            Polarization::L => self.photons &= !(1 << slot),
            Polarization::R => self.photons |= 1 << slot,
        }
        self
    }

    pub fn with_atom(mut self, slot: usize, a: AtomLevel) -> Self {
        match a {
            AtomLevel::GL => self.atoms &= !(1 << slot),
            AtomLevel::GR => self.atoms |= 1 << slot,
        }
        self
    }

    pub fn flip_photon(mut self, slot: usize) -> Self {
        self.photons ^= 1 << slot;
        self
    }

    /// Number of `R` photons among the given slots.
    pub fn count_r(&self, slots: &[usize]) -> usize {
        slots.iter().filter(|&&s| self.photons >> s & 1 == 1).count()
    }

    /// Concatenation: `self` occupies the low slots, `other` is shifted up.
    pub(crate) fn concat(&self, other: &BasisKet, photon_offset: usize, atom_offset: usize) -> Self {
        BasisKet {
            photons: self.photons | shl(other.photons, photon_offset),
            atoms: self.atoms | shl(other.atoms, atom_offset),
        }
    }

    /// Text form, e.g. `LLRR;gLgR`. The `;` section is omitted without atoms.
    pub fn label(&self, photon_count: usize, atom_count: usize) -> String {
        let mut s: String = (0..photon_count).map(|i| self.photon(i).symbol()).collect();
        if atom_count > 0 {
            s.push(';');
            for i in 0..atom_count {
                s.push_str(self.atom(i).symbol());
            }
        }
        s
    }

    /// Parses [`BasisKet::label`] output, returning the ket and its register sizes.
    pub fn parse_label(label: &str) -> Result<(BasisKet, usize, usize)> {
        let (photon_part, atom_part) = match label.split_once(';') {
            Some((p, a)) => (p, a),
            None => (label, ""),
        };
        let photons = photon_part
            .chars()
            .map(|c| {
                Polarization::from_symbol(c).ok_or_else(|| invalid(format!("bad photon symbol {c:?} in {label:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let atoms = parse_atom_levels(atom_part)?;
        if photons.len() > MAX_SLOTS || atoms.len() > MAX_SLOTS {
            return Err(invalid("register larger than 64 slots"));
        }
        Ok((BasisKet::from_levels(&photons, &atoms), photons.len(), atoms.len()))
    }
}

fn shl(bits: u64, by: usize) -> u64 {
    if by >= 64 {
        0
    } else {
        bits << by
    }
}

/// Parses a run of `gL`/`gR` symbols, with or without separating spaces.
pub fn parse_atom_levels(s: &str) -> Result<Vec<AtomLevel>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !compact.len().is_multiple_of(2) {
        return Err(invalid(format!("bad atom pattern {s:?}")));
    }
    compact
        .as_bytes()
        .chunks(2)
        .map(|pair| match pair {
            b"gL" => Ok(AtomLevel::GL),
            b"gR" => Ok(AtomLevel::GR),
            _ => Err(invalid(format!("bad atom pattern {s:?}"))),
        })
        .collect()
}

/// Parses a run of `L`/`R` symbols, ignoring whitespace.
pub fn parse_polarizations(s: &str) -> Result<Vec<Polarization>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| Polarization::from_symbol(c).ok_or_else(|| invalid(format!("bad photon pattern {s:?}"))))
        .collect()
}

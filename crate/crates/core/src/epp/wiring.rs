use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::logic_states::check_m;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    BitFlipEpp,
    PhaseFlipDetect,
}

impl Protocol {
    pub fn id(self) -> &'static str {
        match self {
            Protocol::BitFlipEpp => "bit-flip-epp",
            Protocol::PhaseFlipDetect => "phase-flip-detect",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit-flip-epp" => Ok(Protocol::BitFlipEpp),
            "phase-flip-detect" => Ok(Protocol::PhaseFlipDetect),
            _ => Err(invalid(format!("unknown protocol '{s}'"))),
        }
    }
}

/// Who holds the photons and atoms of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Alice,
    Bob,
    /// Photons from both logic qubits meet the same atoms.
    Joint,
}

/// Photons that share a set of atoms. Every photon reflects off every atom,
/// photon-major, one photon inside a cavity at a time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub side: Side,
    pub photons: Vec<usize>,
    pub atoms: Vec<usize>,
}

/// Interaction layout for one protocol run.
///
/// Photon slots follow the four-copy layout: A `0..M`, B `M..2M`,
/// C `2M..3M`, D `3M..4M`. Atom slots are numbered in group order, so all
/// of Alice's atoms precede Bob's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WiringPlan {
    pub protocol: Protocol,
    pub m: usize,
    pub groups: Vec<Group>,
    pub photon_count: usize,
    pub atom_count: usize,
}

impl WiringPlan {
    pub fn groups_on(&self, side: Side) -> impl Iterator<Item = &Group> {
        self.groups.iter().filter(move |g| g.side == side)
    }

    /// Human-readable mode name of a photon slot, e.g. `c3`.
    pub fn mode_label(&self, slot: usize) -> String {
        mode_label(self.m, slot)
    }
}

/// Mode name of a photon slot, e.g. `b2` for slot `M + 1`.
pub fn mode_label(m: usize, slot: usize) -> String {
    let letter = ['a', 'b', 'c', 'd'][(slot / m).min(3)];
    format!("{letter}{}", slot % m + 1)
}

pub fn build_wiring(m: usize, protocol: Protocol) -> Result<WiringPlan> {
    check_m(m)?;
    let plan = match protocol {
        Protocol::BitFlipEpp => {
            let mut groups = Vec::new();
            let mut next_atom = 0;
            // Offsets of (copy 1, copy 2) for each party.
            for (side, first, second) in [(Side::Alice, 0, 2 * m), (Side::Bob, m, 3 * m)] {
                let mut k = 0;
                while k < m {
                    let width = if k + 1 < m { 2 } else { 1 };
                    let mut photons: Vec<usize> = (k..k + width).map(|i| first + i).collect();
                    photons.extend((k..k + width).map(|i| second + i));
                    groups.push(Group {
                        side,
                        photons,
                        atoms: vec![next_atom, next_atom + 1],
                    });
                    next_atom += 2;
                    k += width;
                }
            }
            WiringPlan {
                protocol,
                m,
                groups,
                photon_count: 4 * m,
                atom_count: next_atom,
            }
        }
        Protocol::PhaseFlipDetect => WiringPlan {
            protocol,
            m,
            groups: vec![Group {
                side: Side::Joint,
                photons: vec![m - 1, m],
                atoms: vec![0, 1],
            }],
            photon_count: 2 * m,
            atom_count: 2,
        },
    };
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(plan: &WiringPlan, g: &Group) -> Vec<String> {
        g.photons.iter().map(|&p| plan.mode_label(p)).collect()
    }

    #[test]
    fn two_photon_logic_qubits() {
        let plan = build_wiring(2, Protocol::BitFlipEpp).unwrap();
        assert_eq!(plan.atom_count, 4);
        assert_eq!(plan.groups.len(), 2);
        assert_eq!(labels(&plan, &plan.groups[0]), ["a1", "a2", "c1", "c2"]);
        assert_eq!(plan.groups[0].atoms, [0, 1]);
        assert_eq!(labels(&plan, &plan.groups[1]), ["b1", "b2", "d1", "d2"]);
        assert_eq!(plan.groups[1].atoms, [2, 3]);
    }

    #[test]
    fn three_photon_logic_qubits() {
        let plan = build_wiring(3, Protocol::BitFlipEpp).unwrap();
        assert_eq!(plan.atom_count, 8);
        let got: Vec<_> = plan
            .groups
            .iter()
            .map(|g| (labels(&plan, g), g.atoms.clone()))
            .collect();
        assert_eq!(
            got[0],
            (vec!["a1".into(), "a2".into(), "c1".into(), "c2".into()], vec![0, 1])
        );
        assert_eq!(got[1], (vec!["a3".to_string(), "c3".into()], vec![2, 3]));
        assert_eq!(got[2].1, [4, 5]);
        assert_eq!(got[3], (vec!["b3".to_string(), "d3".into()], vec![6, 7]));
    }

    #[test]
    fn atom_count_law() {
        for m in 1..=16 {
            let plan = build_wiring(m, Protocol::BitFlipEpp).unwrap();
            let expected = if m % 2 == 0 { 2 * m } else { 2 * (m + 1) };
            assert_eq!(plan.atom_count, expected, "M={m}");
            let mut seen: Vec<usize> = plan.groups.iter().flat_map(|g| g.photons.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..4 * m).collect::<Vec<_>>());
        }
        assert_eq!(build_wiring(4, Protocol::BitFlipEpp).unwrap().groups.len(), 4);
    }

    #[test]
    fn phase_flip_layout() {
        let plan = build_wiring(5, Protocol::PhaseFlipDetect).unwrap();
        assert_eq!(plan.atom_count, 2);
        assert_eq!(labels(&plan, &plan.groups[0]), ["a5", "b1"]);
        assert!(build_wiring(0, Protocol::PhaseFlipDetect).is_err());
    }
}

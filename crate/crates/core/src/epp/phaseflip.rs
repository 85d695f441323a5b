//! Deterministic detection and correction of a logic phase flip.

use super::report::{assemble, PurificationReport};
use super::trace::{absorb_norm, hadamard_atoms, measure_atoms, near_ideal, AtomPath, Brancher, Enumerate, Leaf};
use super::verdict::Verdict;
use super::wiring::{build_wiring, Protocol, WiringPlan};
use crate::error::{Error, Result};
use crate::faraday::{reflect_group, ReflectionPhases};
use crate::hilbert::{AtomLevel, SparseState};
use crate::logic_states::{logic_bell_state, mixed_input, omega_register, ErrorKind, ErrorModel, LogicBellKind};
use crate::optics::bit_flip_all;
use crate::scalar::Real;

/// Follows one pure `2M`-photon input through detection and correction.
pub(crate) fn trace_phaseflip_input<T: Real, B: Brancher<T>>(
    input: &SparseState<T>,
    plan: &WiringPlan,
    phases: &ReflectionPhases<T>,
    brancher: &mut B,
) -> Result<Vec<Leaf<T>>> {
    let m = plan.m;
    let group = &plan.groups[0];
    let photons: Vec<usize> = (0..2 * m).collect();
    let b_side: Vec<usize> = (m..2 * m).collect();
    let strict = near_ideal(phases);

    let s = input.tensor(&omega_register(group.atoms.len())?)?;
    let s = reflect_group(&s, &group.photons, &group.atoms, phases)?;
    let (weight, s) = absorb_norm(T::one(), s)?;
    let s = hadamard_atoms(&s, &group.atoms)?;
    let paths = measure_atoms(
        AtomPath {
            weight,
            atoms: Vec::new(),
            state: s,
        },
        &group.atoms,
        brancher,
    )?;
    paths
        .into_iter()
        .map(|path| {
            let agree = path.atoms.iter().all(|&a| a == path.atoms[0]);
            if !agree {
                if strict {
                    return Err(Error::ProtocolViolation(format!(
                        "detection atoms disagree: {:?}",
                        path.atoms
                    )));
                }
                return Ok(Leaf {
                    weight: path.weight,
                    atoms: path.atoms,
                    verdict: Verdict::Fail,
                    photons: Vec::new(),
                    recovery: Vec::new(),
                    pre: None,
                    post: None,
                });
            }
            let pre = path.state.reduce_to_photons(&photons)?;
            let recovery = if path.atoms[0] == AtomLevel::GL {
                b_side.clone()
            } else {
                Vec::new()
            };
            let post = bit_flip_all(&pre, &recovery)?;
            Ok(Leaf {
                weight: path.weight,
                atoms: path.atoms,
                verdict: Verdict::Success,
                photons: Vec::new(),
                recovery,
                pre: Some(pre),
                post: Some(post),
            })
        })
        .collect()
}

/// Photons `a_M` and `b_1` each reflect off two atoms in Ω⁺. Equal
/// polarizations (Φ⁺) leave both atoms in Ω⁻, different ones (Φ⁻) leave
/// Ω⁺; after the Hadamards `gR gR` means no error and `gL gL` means flip
/// every photon of B.
pub fn run_phaseflip_correction<T: Real>(f: T, m: usize) -> Result<PurificationReport<T>> {
    run_phaseflip_correction_with(f, m, &ReflectionPhases::ideal())
}

pub fn run_phaseflip_correction_with<T: Real>(
    f: T,
    m: usize,
    phases: &ReflectionPhases<T>,
) -> Result<PurificationReport<T>> {
    let model = ErrorModel::new(ErrorKind::LogicPhaseFlip, f)?;
    let input = mixed_input(&model, m)?;
    let plan = build_wiring(m, Protocol::PhaseFlipDetect)?;
    let target = logic_bell_state::<T>(LogicBellKind::PhiPlus, m)?;
    let weighted = input
        .branches()
        .iter()
        .map(|(p, s)| Ok((*p, trace_phaseflip_input(s, &plan, phases, &mut Enumerate)?)))
        .collect::<Result<Vec<_>>>()?;
    assemble(Protocol::PhaseFlipDetect, m, f, weighted, &target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrects_completely() {
        for m in [2, 5] {
            let r = run_phaseflip_correction(0.7f64, m).unwrap();
            assert!((r.output_fidelity - 1.0).abs() < 1e-12);
            assert!((r.success_probability - 1.0).abs() < 1e-12);
            assert_eq!(r.branches.len(), 2);
            assert_eq!(r.branches[0].atoms_string(), "gL gL");
            assert!((r.branches[0].probability - 0.3).abs() < 1e-12);
            assert_eq!(r.branches[0].recovery, (m..2 * m).collect::<Vec<_>>());
            assert_eq!(r.branches[1].atoms_string(), "gR gR");
            assert!(r.branches[1].recovery.is_empty());
        }
    }

    #[test]
    fn pure_input_reads_gr() {
        let r = run_phaseflip_correction(1.0f64, 3).unwrap();
        assert_eq!(r.branches.len(), 1);
        assert_eq!(r.branches[0].atoms_string(), "gR gR");
        assert!(r.branches[0].recovery.is_empty());
    }
}

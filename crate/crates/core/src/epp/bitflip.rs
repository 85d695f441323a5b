//! Purification of logic bit-flip errors from two noisy copies.

use rayon::prelude::*;

use super::report::{assemble, PurificationReport};
use super::trace::{
    absorb_norm, hadamard_atoms, measure_atoms, near_ideal, run_group, AtomPath, Brancher, Enumerate, Leaf,
};
use super::verdict::{classify_verdict, Verdict};
use super::wiring::{build_wiring, Protocol, WiringPlan};
use crate::error::{invalid, Error, Result};
use crate::faraday::{reflect_group, ReflectionPhases};
use crate::hilbert::{AtomLevel, Polarization, SparseState};
use crate::logic_states::{
    check_fidelity, logic_bell_state, mixed_input, omega_register, ErrorKind, ErrorModel, LogicBellKind,
};
use crate::optics::{bit_flip_all, hwp_all, pbs_detect};
use crate::scalar::Real;

/// Order in which the photon rotations and atom measurements are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Rotate, interact and measure one group at a time. Keeps the register
    /// small for any `M`.
    #[default]
    GroupLocal,
    /// Rotate every photon, run all interactions, then measure every atom.
    /// The register grows as `2^(4M)`; practical for `M ≤ 3`.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EppOptions<T: Real> {
    pub phases: ReflectionPhases<T>,
    pub schedule: Schedule,
}

impl<T: Real> Default for EppOptions<T> {
    fn default() -> Self {
        EppOptions {
            phases: ReflectionPhases::ideal(),
            schedule: Schedule::GroupLocal,
        }
    }
}

/// Copy-1 slots to flip after detecting copy 2 as `photons` (C then D).
///
/// Photon `a_i` is flipped iff `c_i ≠ c_1`, photon `b_i` iff `d_i ≠ c_1`.
/// For two-photon logic qubits this is "flip both B photons iff the C and D
/// pairs differ".
fn recovery_rule(photons: &[Polarization], m: usize) -> Vec<usize> {
    let (c, d) = photons.split_at(m);
    let reference = c[0];
    let a_flips = (0..m).filter(|&i| c[i] != reference);
    let b_flips = (0..m).filter(|&i| d[i] != reference).map(|i| m + i);
    a_flips.chain(b_flips).collect()
}

/// Bit-flip targets for a success branch.
pub fn recovery_for_branch(atoms: &[AtomLevel], photons: &[Polarization], m: usize) -> Result<Vec<usize>> {
    let plan = build_wiring(m, Protocol::BitFlipEpp)?;
    if classify_verdict(atoms, &plan)? != Verdict::Success {
        return Err(invalid("recovery requested for a failed branch"));
    }
    if photons.len() != 2 * m {
        return Err(invalid(format!("{} photon outcomes for M = {m}", photons.len())));
    }
    Ok(recovery_rule(photons, m))
}

/// State after every photon is rotated and every reflection has happened,
/// before the atoms are rotated or measured. Atoms are in slot order.
pub fn literal_after_reflection<T: Real>(
    input: &SparseState<T>,
    plan: &WiringPlan,
    phases: &ReflectionPhases<T>,
) -> Result<SparseState<T>> {
    if input.shape() != (plan.photon_count, 0) {
        return Err(invalid("input must hold every photon of the plan and no atoms"));
    }
    let s = hwp_all(input, 0..plan.photon_count)?;
    let mut s = s.tensor(&omega_register(plan.atom_count)?)?;
    for g in &plan.groups {
        s = reflect_group(&s, &g.photons, &g.atoms, phases)?;
    }
    Ok(s)
}

fn atom_paths<T: Real, B: Brancher<T>>(
    input: &SparseState<T>,
    plan: &WiringPlan,
    opts: &EppOptions<T>,
    brancher: &mut B,
) -> Result<Vec<AtomPath<T>>> {
    match opts.schedule {
        Schedule::GroupLocal => {
            let mut paths = vec![AtomPath {
                weight: T::one(),
                atoms: Vec::new(),
                state: input.clone(),
            }];
            for g in &plan.groups {
                let mut next = Vec::with_capacity(paths.len() * 2);
                for p in paths {
                    next.extend(run_group(p, g, &opts.phases, brancher)?);
                }
                paths = next;
            }
            Ok(paths)
        }
        Schedule::Literal => {
            let s = literal_after_reflection(input, plan, &opts.phases)?;
            let (weight, s) = absorb_norm(T::one(), s)?;
            let all_atoms: Vec<usize> = (0..plan.atom_count).collect();
            let s = hadamard_atoms(&s, &all_atoms)?;
            let start = AtomPath {
                weight,
                atoms: Vec::new(),
                state: s,
            };
            measure_atoms(start, &all_atoms, brancher)?
                .into_iter()
                .map(|p| {
                    let state = hwp_all(&p.state, 0..plan.photon_count)?;
                    Ok(AtomPath { state, ..p })
                })
                .collect()
        }
    }
}

/// Copy-1 targets the recovered state must match in ideal runs.
pub(crate) struct Targets<T: Real> {
    pub phi_plus: SparseState<T>,
    pub psi_plus: SparseState<T>,
}

impl<T: Real> Targets<T> {
    pub fn new(m: usize) -> Result<Self> {
        Ok(Targets {
            phi_plus: logic_bell_state(LogicBellKind::PhiPlus, m)?,
            psi_plus: logic_bell_state(LogicBellKind::PsiPlus, m)?,
        })
    }
}

/// Follows one pure input through atoms, verdict, detection and recovery.
pub(crate) fn trace_input<T: Real, B: Brancher<T>>(
    input: &SparseState<T>,
    plan: &WiringPlan,
    opts: &EppOptions<T>,
    targets: &Targets<T>,
    brancher: &mut B,
) -> Result<Vec<Leaf<T>>> {
    let m = plan.m;
    let strict = near_ideal(&opts.phases);
    let tol = T::norm_tolerance();
    let copy1: Vec<usize> = (0..2 * m).collect();
    let copy2: Vec<usize> = (2 * m..4 * m).collect();
    let mut leaves = Vec::new();
    for path in atom_paths(input, plan, opts, brancher)? {
        let verdict = match classify_verdict(&path.atoms, plan) {
            Ok(v) => v,
            Err(Error::ProtocolViolation(_)) if !strict => Verdict::Fail,
            Err(e) => return Err(e),
        };
        if verdict == Verdict::Fail {
            leaves.push(Leaf {
                weight: path.weight,
                atoms: path.atoms,
                verdict,
                photons: Vec::new(),
                recovery: Vec::new(),
                pre: None,
                post: None,
            });
            continue;
        }
        let detections = pbs_detect(&path.state, &copy2)?
            .into_iter()
            .map(|d| (d.probability, d))
            .collect();
        for (q, d) in brancher.choose(detections) {
            let pre = d.state.reduce_to_photons(&copy1)?;
            let recovery = recovery_rule(&d.pattern, m);
            let post = bit_flip_all(&pre, &recovery)?;
            if strict
                && !post.equal_up_to_global_phase(&targets.phi_plus, tol)?
                && !post.equal_up_to_global_phase(&targets.psi_plus, tol)?
            {
                return Err(Error::Invariant(format!(
                    "recovered state outside {{Φ+, Ψ+}} for atoms {:?}, photons {}",
                    path.atoms,
                    d.pattern_string()
                )));
            }
            leaves.push(Leaf {
                weight: path.weight * q,
                atoms: path.atoms.clone(),
                verdict,
                photons: d.pattern,
                recovery,
                pre: Some(pre),
                post: Some(post),
            });
        }
    }
    Ok(leaves)
}

/// Input pairs `(copy 1, copy 2)` with their joint probabilities.
pub(crate) fn input_pairs<T: Real>(model: &ErrorModel<T>, m: usize) -> Result<Vec<(T, SparseState<T>)>> {
    if !matches!(model.kind, ErrorKind::LogicBitFlip | ErrorKind::PhysicalPhaseFlip) {
        return Err(invalid(format!(
            "bit-flip purification does not apply to {}",
            model.kind
        )));
    }
    let single = mixed_input(model, m)?;
    let mut pairs = Vec::new();
    for (p, s) in single.branches() {
        for (q, t) in single.branches() {
            pairs.push((*p * *q, s.tensor(t)?));
        }
    }
    Ok(pairs)
}

/// Ideal purification with the default schedule.
pub fn run_bitflip_epp<T: Real>(f: T, m: usize, kind: ErrorKind) -> Result<PurificationReport<T>> {
    run_bitflip_epp_with(&ErrorModel::new(kind, f)?, m, &EppOptions::default())
}

pub fn run_bitflip_epp_with<T: Real>(
    model: &ErrorModel<T>,
    m: usize,
    opts: &EppOptions<T>,
) -> Result<PurificationReport<T>> {
    check_fidelity(model.fidelity)?;
    let plan = build_wiring(m, Protocol::BitFlipEpp)?;
    let targets = Targets::new(m)?;
    let pairs = input_pairs(model, m)?;

    let per_pair: Vec<Vec<Leaf<T>>> = pairs
        .par_iter()
        .map(|(_, s)| trace_input(s, &plan, opts, &targets, &mut Enumerate))
        .collect::<Result<_>>()?;

    let weighted = pairs.iter().map(|(w, _)| *w).zip(per_pair).collect();
    assemble(Protocol::BitFlipEpp, m, model.fidelity, weighted, &targets.phi_plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::parse_polarizations;

    fn pol(s: &str) -> Vec<Polarization> {
        parse_polarizations(s).unwrap()
    }

    fn atoms(s: &str) -> Vec<AtomLevel> {
        crate::hilbert::parse_atom_levels(s).unwrap()
    }

    #[test]
    fn recovery_examples() {
        assert!(recovery_for_branch(&atoms("gL gL gL gL"), &pol("LLLL"), 2)
            .unwrap()
            .is_empty());
        assert_eq!(
            recovery_for_branch(&atoms("gR gR gR gR"), &pol("LLRR"), 2).unwrap(),
            [2, 3]
        );
        assert_eq!(
            recovery_for_branch(&atoms("gL gL gL gL"), &pol("RRLL"), 2).unwrap(),
            [2, 3]
        );
        assert!(recovery_for_branch(&atoms("gL gL gR gR"), &pol("LLLL"), 2).is_err());
        assert!(recovery_for_branch(&atoms("gL gL gL gL"), &pol("LLL"), 2).is_err());
        // Three photons: c₃ disagreeing with c₁ also flips a₃.
        assert_eq!(
            recovery_for_branch(&atoms("gL gL gR gR gL gL gR gR"), &pol("LLRLLR"), 3).unwrap(),
            [2, 5]
        );
    }

    #[test]
    fn closed_form_for_two_photons() {
        let r = run_bitflip_epp(0.8f64, 2, ErrorKind::LogicBitFlip).unwrap();
        assert!((r.output_fidelity - 0.64 / 0.68).abs() < 1e-12);
        assert!((r.success_probability - 0.68).abs() < 1e-12);
        assert!((r.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verdicts_for_two_photons() {
        let r = run_bitflip_epp(0.8f64, 2, ErrorKind::LogicBitFlip).unwrap();
        for b in &r.branches {
            let expected = match b.atoms_string().as_str() {
                "gL gL gL gL" | "gR gR gR gR" => Verdict::Success,
                "gL gL gR gR" | "gR gR gL gL" => Verdict::Fail,
                other => panic!("unexpected pattern {other}"),
            };
            assert_eq!(b.verdict, expected);
            if b.verdict == Verdict::Fail {
                assert!(b.photon_outcomes.is_empty() && b.recovery.is_empty() && b.post_state.is_none());
            }
        }
    }

    #[test]
    fn schedules_agree() {
        for m in [1, 2, 3] {
            let model = ErrorModel::new(ErrorKind::LogicBitFlip, 0.7).unwrap();
            let local = run_bitflip_epp_with(&model, m, &EppOptions::default()).unwrap();
            let literal = run_bitflip_epp_with(
                &model,
                m,
                &EppOptions {
                    schedule: Schedule::Literal,
                    ..EppOptions::default()
                },
            )
            .unwrap();
            assert!(local.approx_eq(&literal, 1e-10), "M={m}");
        }
    }

    #[test]
    fn rejects_models_outside_scope() {
        assert!(run_bitflip_epp(0.8, 2, ErrorKind::LogicPhaseFlip).is_err());
        assert!(run_bitflip_epp(0.8, 2, ErrorKind::PhysicalBitFlip { position: 1 }).is_err());
        assert!(run_bitflip_epp(0.0, 2, ErrorKind::LogicBitFlip).is_err());
        assert!(run_bitflip_epp(0.8, 0, ErrorKind::LogicBitFlip).is_err());
    }

    #[test]
    fn pure_input_always_succeeds_cleanly() {
        let r = run_bitflip_epp(1.0f64, 3, ErrorKind::LogicBitFlip).unwrap();
        assert!((r.success_probability - 1.0).abs() < 1e-12);
        assert!((r.output_fidelity - 1.0).abs() < 1e-12);
    }
}

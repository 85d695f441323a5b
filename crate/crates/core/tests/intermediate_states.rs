//! Joint states of the two-photon protocol right after the reflections, and
//! the conditional copy-1 mixtures before recovery.

mod common;

use common::{after_reflection, expected, term_error, FIXTURES, TOL};
use logic_epp::epp::{run_bitflip_epp, Verdict};
use logic_epp::hilbert::AtomLevel;
use logic_epp::logic_states::{logic_bell_state, ErrorKind, LogicBellKind};

fn check(index: usize) {
    let (c1, c2, terms) = &FIXTURES[index];
    let got = after_reflection(*c1, *c2);
    let want = expected(terms);
    assert!(want.is_normalized());
    assert!(got.equal_up_to_global_phase(&want, TOL).unwrap(), "got {got:?}");
    let err = term_error(&got, &want).expect("same support");
    assert!(err < TOL, "term error {err}");
}

#[test]
fn both_copies_error_free() {
    check(0);
}

#[test]
fn second_copy_flipped() {
    check(1);
}

#[test]
fn first_copy_flipped() {
    check(2);
}

#[test]
fn both_copies_flipped() {
    check(3);
}

#[test]
fn conditional_mixtures_before_recovery() {
    for f in [0.6f64, 0.8, 0.95] {
        let fp = f * f / (f * f + (1.0 - f) * (1.0 - f));
        let r = run_bitflip_epp(f, 2, ErrorKind::LogicBitFlip).unwrap();
        let phi_p = logic_bell_state(LogicBellKind::PhiPlus, 2).unwrap();
        let psi_p = logic_bell_state(LogicBellKind::PsiPlus, 2).unwrap();
        let phi_m = logic_bell_state(LogicBellKind::PhiMinus, 2).unwrap();
        let psi_m = logic_bell_state(LogicBellKind::PsiMinus, 2).unwrap();
        let mut seen = 0;
        for b in r.branches.iter().filter(|b| b.verdict == Verdict::Success) {
            let pre = b.pre_recovery.as_ref().unwrap();
            let (same, flipped) = match b.photons_string().as_str() {
                "LLLL" | "RRRR" => (&phi_p, &psi_p),
                "LLRR" | "RRLL" => (&phi_m, &psi_m),
                other => panic!("unexpected detection {other}"),
            };
            assert!(
                (pre.weight_of(same).unwrap() - fp).abs() < TOL,
                "{} {}",
                b.atoms_string(),
                b.photons_string()
            );
            assert!((pre.weight_of(flipped).unwrap() - (1.0 - fp)).abs() < TOL);
            let all_same = b.atom_outcomes.iter().all(|&a| a == b.atom_outcomes[0]);
            assert!(all_same && matches!(b.atom_outcomes[0], AtomLevel::GL | AtomLevel::GR));
            seen += 1;
        }
        assert_eq!(seen, 8);
    }
}

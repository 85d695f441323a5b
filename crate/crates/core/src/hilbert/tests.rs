use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::Error;

type S = SparseState<f64>;

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn phi(sign: f64) -> S {
    S::from_labels(&[("LL", r(1.0)), ("RR", r(sign))]).unwrap()
}

fn psi(sign: f64) -> S {
    S::from_labels(&[("LR", r(1.0)), ("RL", r(sign))]).unwrap()
}

fn plus_photon() -> S {
    S::from_labels(&[("L", r(1.0)), ("R", r(1.0))]).unwrap()
}

fn ket(label: &str) -> S {
    S::from_labels(&[(label, r(1.0))]).unwrap()
}

#[test]
fn tensor_of_unit_kets() {
    let t = ket("L").tensor(&ket(";gL")).unwrap();
    assert_eq!(t.shape(), (1, 1));
    assert_eq!(t.len(), 1);
    let (k, a) = t.terms().next().unwrap();
    assert_eq!(t.label_of(k), "L;gL");
    assert_eq!(*a, r(1.0));
}

#[test]
fn tensor_distributes() {
    let t = plus_photon().tensor(&ket(";gL")).unwrap();
    let expected = S::from_labels(&[("L;gL", r(1.0)), ("R;gL", r(1.0))]).unwrap();
    assert!((t.inner_product(&expected).unwrap() - r(1.0)).norm() < 1e-15);
    assert!(t.is_normalized());
}

#[test]
fn tensor_of_two_phi_plus() {
    let t = phi(1.0).tensor(&phi(1.0)).unwrap();
    assert_eq!(t.len(), 4);
    for label in ["LLLL", "LLRR", "RRLL", "RRRR"] {
        let (k, _, _) = BasisKet::parse_label(label).unwrap();
        assert!((t.amplitude(&k) - r(0.5)).norm() < 1e-15, "{label}");
    }
}

#[test]
fn inner_products_of_bell_states() {
    let p = phi(1.0);
    assert!((p.inner_product(&p).unwrap() - r(1.0)).norm() < 1e-15);
    assert!(p.inner_product(&phi(-1.0)).unwrap().norm() < 1e-15);
    assert_eq!(p.inner_product(&psi(1.0)).unwrap(), r(0.0));
    assert!(matches!(p.inner_product(&ket("L")), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn inner_product_is_conjugate_linear_in_first_argument() {
    let a = ket("L").scaled(Complex64::new(0.0, 1.0));
    let b = ket("L");
    assert_eq!(a.inner_product(&b).unwrap(), Complex64::new(0.0, -1.0));
    assert_eq!(b.inner_product(&a).unwrap(), Complex64::new(0.0, 1.0));
}

#[test]
fn photon_unitaries() {
    let s = plus_photon().tensor(&ket(";gR")).unwrap();
    assert_eq!(s.apply_photon_unitary(0, &Unitary2::identity()).unwrap(), s);

    let flipped = ket("L").apply_photon_unitary(0, &Unitary2::pauli_x()).unwrap();
    assert_eq!(flipped, ket("R"));

    let h = ket("R").apply_photon_unitary(0, &Unitary2::hadamard()).unwrap();
    let expected = S::from_labels(&[("L", r(1.0)), ("R", r(-1.0))]).unwrap();
    assert!((h.inner_product(&expected).unwrap() - r(1.0)).norm() < 1e-15);

    assert!(matches!(
        ket("L").apply_photon_unitary(1, &Unitary2::identity()),
        Err(Error::SlotOutOfRange { kind: "photon", .. })
    ));
    let bad = Unitary2::new_unchecked([[r(2.0), r(0.0)], [r(0.0), r(1.0)]]);
    assert!(matches!(
        ket("L").apply_photon_unitary(0, &bad),
        Err(Error::NotUnitary(_))
    ));
}

#[test]
fn atom_hadamard() {
    let h = Unitary2::hadamard();
    let out = ket(";gL").apply_atom_unitary(0, &h).unwrap();
    let plus = S::from_labels(&[(";gL", r(1.0)), (";gR", r(1.0))]).unwrap();
    assert!((out.inner_product(&plus).unwrap() - r(1.0)).norm() < 1e-15);

    let minus = S::from_labels(&[(";gL", r(1.0)), (";gR", r(-1.0))]).unwrap();
    let out = minus.apply_atom_unitary(0, &h).unwrap();
    assert_eq!(out.len(), 1);
    assert!((out.inner_product(&ket(";gR")).unwrap() - r(1.0)).norm() < 1e-15);

    let twice = ket(";gR")
        .apply_atom_unitary(0, &h)
        .unwrap()
        .apply_atom_unitary(0, &h)
        .unwrap();
    assert!((twice.inner_product(&ket(";gR")).unwrap() - r(1.0)).norm() < 1e-15);
    assert!(ket("L").apply_atom_unitary(0, &h).is_err());
}

#[test]
fn measurement_examples() {
    let s = ket("L;gL");
    let m = s.measure(Slot::Atom(0)).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].outcome, Outcome::Atom(AtomLevel::GL));
    assert_eq!(m[0].probability, 1.0);
    assert_eq!(m[0].state, s);

    let m = plus_photon().measure(Slot::Photon(0)).unwrap();
    assert_eq!(m.len(), 2);
    assert_eq!(m[0].outcome, Outcome::Photon(Polarization::L));
    assert!((m[0].probability - 0.5).abs() < 1e-15);
    assert!((m[1].probability - 0.5).abs() < 1e-15);
    assert_eq!(m[1].state, ket("R"));

    let m = phi(1.0).measure(Slot::Photon(0)).unwrap();
    assert!((m[0].state.inner_product(&ket("LL")).unwrap() - r(1.0)).norm() < 1e-15);
    assert!((m[1].state.inner_product(&ket("RR")).unwrap() - r(1.0)).norm() < 1e-15);

    assert!(phi(1.0).measure(Slot::Photon(2)).is_err());
    assert!(phi(1.0).measure(Slot::Atom(0)).is_err());
}

#[test]
fn global_phase_equality() {
    let p = phi(1.0);
    let tol = 1e-12;
    assert!(p.equal_up_to_global_phase(&p.clone().scaled(r(-1.0)), tol).unwrap());
    assert!(p
        .equal_up_to_global_phase(&p.clone().scaled(Complex64::new(0.0, 1.0)), tol)
        .unwrap());
    assert!(!p.equal_up_to_global_phase(&phi(-1.0), tol).unwrap());
}

#[test]
fn ensemble_fidelity_examples() {
    let target = phi(1.0);
    let e = Ensemble::pure(target.clone()).unwrap();
    assert!((ensemble_fidelity(&e, &target).unwrap() - 1.0).abs() < 1e-15);

    let e = Ensemble::new(vec![(0.8, phi(1.0)), (0.2, psi(1.0))]).unwrap();
    assert!((e.fidelity(&target).unwrap() - 0.8).abs() < 1e-15);

    let e = Ensemble::new(vec![(0.5, phi(1.0)), (0.5, phi(-1.0))]).unwrap();
    assert_eq!(e.fidelity(&psi(1.0)).unwrap(), 0.0);
    assert!(e.fidelity(&ket("L")).is_err());
}

#[test]
fn ensemble_validation() {
    assert!(Ensemble::new(vec![(0.5, phi(1.0))]).is_err());
    assert!(Ensemble::new(vec![(0.5, phi(1.0)), (0.5, ket("L"))]).is_err());
    assert!(Ensemble::new(vec![(1.5, phi(1.0)), (-0.5, phi(-1.0))]).is_err());
    assert!(Ensemble::<f64>::new(vec![]).is_err());
    let e = Ensemble::new(vec![
        (0.25, phi(1.0)),
        (0.5, psi(1.0)),
        (0.25, phi(1.0).scaled(r(-1.0))),
    ])
    .unwrap()
    .merged();
    assert_eq!(e.len(), 2);
    assert!((e.weight_of(&phi(1.0)).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn reduce_and_permute() {
    let s = phi(1.0).tensor(&ket("R;gL")).unwrap();
    let reduced = s.reduce_to_photons(&[0, 1]).unwrap();
    assert_eq!(reduced.shape(), (2, 0));
    assert!((reduced.inner_product(&phi(1.0)).unwrap() - r(1.0)).norm() < 1e-15);
    // Slot 1 is entangled with slot 0, so it cannot be dropped.
    assert!(matches!(s.reduce_to_photons(&[0, 2]), Err(Error::Invariant(_))));

    let swapped = ket("LR").permute_photons(&[1, 0]).unwrap();
    assert_eq!(swapped, ket("RL"));
    assert!(ket("LR").permute_photons(&[0, 0]).is_err());
}

#[test]
fn pruning_drops_cancelled_terms() {
    let a = ket("L");
    let b = a.clone().scaled(r(-1.0 + 1e-16));
    assert!(a.add(&b).unwrap().is_empty());
}

fn arb_state(photons: usize, atoms: usize) -> impl Strategy<Value = S> {
    let dim = 1usize << (photons + atoms);
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, prop::bool::weighted(0.5)), dim).prop_filter_map(
        "non-zero",
        move |amps| {
            let terms = amps
                .iter()
                .enumerate()
                .filter(|(_, (_, _, keep))| *keep)
                .map(|(i, (re, im, _))| {
                    let bits = i as u64;
                    (
                        BasisKet::from_bits(bits & ((1 << photons) - 1), bits >> photons),
                        Complex64::new(*re, *im),
                    )
                });
            S::from_terms(photons, atoms, terms).ok()?.normalized().ok()
        },
    )
}

fn arb_unitary() -> impl Strategy<Value = Unitary2<f64>> {
    (0.0f64..std::f64::consts::PI, -3.2f64..3.2, -3.2f64..3.2, -3.2f64..3.2).prop_map(|(theta, a, b, g)| {
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = |x: f64| Complex64::from_polar(1.0, x);
        Unitary2::new([[e(g) * ct, -e(g + b) * st], [e(g + a) * st, e(g + a + b) * ct]]).unwrap()
    })
}

#[derive(Debug, Clone)]
enum Step {
    Photon(usize, Unitary2<f64>),
    Atom(usize, Unitary2<f64>),
    Measure(Slot, prop::sample::Index),
}

fn arb_step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0usize..3, arb_unitary()).prop_map(|(s, u)| Step::Photon(s, u)),
        (0usize..2, arb_unitary()).prop_map(|(s, u)| Step::Atom(s, u)),
        (0usize..5, any::<prop::sample::Index>()).prop_map(|(s, i)| {
            let slot = if s < 3 { Slot::Photon(s) } else { Slot::Atom(s - 3) };
            Step::Measure(slot, i)
        }),
    ]
}

proptest! {
    #[test]
    fn norm_preserved_through_random_circuits(
        state in arb_state(3, 2),
        steps in prop::collection::vec(arb_step(), 1..12),
    ) {
        let mut s = state;
        for step in steps {
            s = match step {
                Step::Photon(slot, u) => s.apply_photon_unitary(slot, &u).unwrap(),
                Step::Atom(slot, u) => s.apply_atom_unitary(slot, &u).unwrap(),
                Step::Measure(slot, idx) => {
                    let branches = s.measure(slot).unwrap();
                    let total: f64 = branches.iter().map(|b| b.probability).sum();
                    prop_assert!((total - 1.0).abs() < 1e-12);
                    branches[idx.index(branches.len())].state.clone()
                }
            };
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_is_complete(state in arb_state(2, 2), slot in 0usize..4) {
        let slot = if slot < 2 { Slot::Photon(slot) } else { Slot::Atom(slot - 2) };
        let branches = state.measure(slot).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for b in &branches {
            prop_assert!(b.state.is_normalized());
        }
    }

    #[test]
    fn tensor_inner_product_factorizes(
        a in arb_state(2, 0), b in arb_state(1, 1), c in arb_state(2, 0), d in arb_state(1, 1),
    ) {
        let lhs = a.tensor(&b).unwrap().inner_product(&c.tensor(&d).unwrap()).unwrap();
        let rhs = a.inner_product(&c).unwrap() * b.inner_product(&d).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn pruning_is_sound(a in arb_state(3, 1), b in arb_state(3, 1), noise in prop::collection::vec(-1e-14f64..1e-14, 16)) {
        // Perturb every basis amplitude below the cut; the pruned state must
        // give the same fidelity as the exact one.
        let terms: Vec<_> = (0..16u64).map(|i| {
            let k = BasisKet::from_bits(i & 0b111, i >> 3);
            (k, a.amplitude(&k) + Complex64::new(noise[i as usize], 0.0))
        }).collect();
        let perturbed = S::from_terms(3, 1, terms).unwrap();
        let exact = a.overlap(&b).unwrap();
        prop_assert!((perturbed.overlap(&b).unwrap() - exact).abs() < 1e-10);
    }
}

//! Joint states of the two-photon protocol right after every reflection.

#![allow(dead_code)]

use logic_epp::epp::{build_wiring, literal_after_reflection, Protocol};
use logic_epp::logic_states::{bell_state, logic_bell_state, omega, BellKind, LogicBellKind, Sign};
use logic_epp::{Amplitude, Phases, State};

pub const TOL: f64 = 1e-10;

use BellKind::{PhiPlus as P, PsiPlus as S};
use Sign::{Minus as M, Plus as A};

pub type Fixture = [([BellKind; 4], [Sign; 4]); 4];

/// Copy-1 kind, copy-2 kind, and the expected terms as
/// `(a1a2, b1b2, a3a4, b3b4; atoms 1..4)`, all with amplitude 1/2.
pub const FIXTURES: [(LogicBellKind, LogicBellKind, Fixture); 4] = [
    (
        LogicBellKind::PhiPlus,
        LogicBellKind::PhiPlus,
        [
            ([P, P, P, P], [A, A, A, A]),
            ([P, P, S, S], [M, M, M, M]),
            ([S, S, P, P], [M, M, M, M]),
            ([S, S, S, S], [A, A, A, A]),
        ],
    ),
    (
        LogicBellKind::PhiPlus,
        LogicBellKind::PsiPlus,
        [
            ([P, P, P, S], [A, A, M, M]),
            ([P, P, S, P], [M, M, A, A]),
            ([S, S, P, S], [M, M, A, A]),
            ([S, S, S, P], [A, A, M, M]),
        ],
    ),
    (
        LogicBellKind::PsiPlus,
        LogicBellKind::PhiPlus,
        [
            ([P, S, P, P], [A, A, M, M]),
            ([P, S, S, S], [M, M, A, A]),
            ([S, P, P, P], [M, M, A, A]),
            ([S, P, S, S], [A, A, M, M]),
        ],
    ),
    (
        LogicBellKind::PsiPlus,
        LogicBellKind::PsiPlus,
        [
            ([P, S, P, S], [A, A, A, A]),
            ([P, S, S, P], [M, M, M, M]),
            ([S, P, P, S], [M, M, M, M]),
            ([S, P, S, P], [A, A, A, A]),
        ],
    ),
];

fn term(pairs: [BellKind; 4], atoms: [Sign; 4]) -> State {
    let mut s = State::unit();
    for p in pairs {
        s = s.tensor(&bell_state(p)).unwrap();
    }
    for a in atoms {
        s = s.tensor(&omega(a)).unwrap();
    }
    s
}

pub fn expected(terms: &Fixture) -> State {
    let half = Amplitude::new(0.5, 0.0);
    let parts: Vec<State> = terms.iter().map(|(p, a)| term(*p, *a)).collect();
    let refs: Vec<(Amplitude<f64>, &State)> = parts.iter().map(|s| (half, s)).collect();
    State::superpose(&refs).unwrap()
}

pub fn after_reflection(copy1: LogicBellKind, copy2: LogicBellKind) -> State {
    let input = logic_bell_state::<f64>(copy1, 2)
        .unwrap()
        .tensor(&logic_bell_state(copy2, 2).unwrap())
        .unwrap();
    let plan = build_wiring(2, Protocol::BitFlipEpp).unwrap();
    literal_after_reflection(&input, &plan, &Phases::ideal()).unwrap()
}

/// Largest amplitude error after removing the global phase, or `None` if
/// the supports differ.
pub fn term_error(got: &State, want: &State) -> Option<f64> {
    if got.len() != want.len() {
        return None;
    }
    let (k0, a0) = want.terms().next()?;
    let phase = got.amplitude(k0) / a0;
    if (phase.norm() - 1.0).abs() > TOL {
        return None;
    }
    Some(
        want.terms()
            .map(|(k, a)| (got.amplitude(k) - a * phase).norm())
            .fold(0.0, f64::max),
    )
}

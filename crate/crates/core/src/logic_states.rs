//! Named states: physical Bell pairs, GHZ states, logic Bell states built
//! from GHZ-encoded logic qubits, and the noisy input mixtures.
//!
//! Slot layout for a logic Bell pair with `M` photons per logic qubit:
//! logic qubit A on photon slots `0..M`, B on `M..2M`. A second copy (C, D)
//! is appended by tensoring, giving C on `2M..3M` and D on `3M..4M`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{AtomLevel, Ensemble, Polarization, SparseState, MAX_SLOTS};
use crate::optics::{bit_flip, phase_flip};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn factor<T: Real>(self) -> Complex<T> {
        match self {
            Sign::Plus => Complex::new(T::one(), T::zero()),
            Sign::Minus => Complex::new(-T::one(), T::zero()),
        }
    }
}

/// The four two-photon polarization Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "φ+",
            BellKind::PhiMinus => "φ-",
            BellKind::PsiPlus => "ψ+",
            BellKind::PsiMinus => "ψ-",
        }
    }
}

/// Logic Bell state of two `M`-photon logic qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicBellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl LogicBellKind {
    pub const ALL: [LogicBellKind; 4] = [
        LogicBellKind::PhiPlus,
        LogicBellKind::PhiMinus,
        LogicBellKind::PsiPlus,
        LogicBellKind::PsiMinus,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            LogicBellKind::PhiPlus => "Φ+",
            LogicBellKind::PhiMinus => "Φ-",
            LogicBellKind::PsiPlus => "Ψ+",
            LogicBellKind::PsiMinus => "Ψ-",
        }
    }
}

impl fmt::Display for LogicBellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Which error the noisy branch of an input mixture carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// GHZ⁺ ↔ GHZ⁻ on one logic qubit: Φ⁺ → Ψ⁺.
    LogicBitFlip,
    /// Relative sign between the two logic terms: Φ⁺ → Φ⁻.
    LogicPhaseFlip,
    /// L ↔ R on photon `position` (1-based) of logic qubit A.
    PhysicalBitFlip { position: usize },
    /// Relative sign on one photon of logic qubit A, which swaps GHZ⁺ and GHZ⁻ there.
    PhysicalPhaseFlip,
}

impl ErrorKind {
    /// CLI identifier, e.g. `physical-bit-flip:2`.
    pub fn id(&self) -> String {
        match self {
            ErrorKind::LogicBitFlip => "logic-bit-flip".into(),
            ErrorKind::LogicPhaseFlip => "logic-phase-flip".into(),
            ErrorKind::PhysicalBitFlip { position } => format!("physical-bit-flip:{position}"),
            ErrorKind::PhysicalPhaseFlip => "physical-phase-flip".into(),
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logic-bit-flip" => Ok(ErrorKind::LogicBitFlip),
            "logic-phase-flip" => Ok(ErrorKind::LogicPhaseFlip),
            "physical-phase-flip" => Ok(ErrorKind::PhysicalPhaseFlip),
            _ => {
                let pos = s
                    .strip_prefix("physical-bit-flip:")
                    .ok_or_else(|| invalid(format!("unknown error model '{s}'")))?;
                let position = pos.parse().map_err(|_| invalid(format!("bad flip position '{pos}'")))?;
                Ok(ErrorKind::PhysicalBitFlip { position })
            }
        }
    }
}

/// Error kind plus the weight `fidelity` of the clean branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel<T: Real> {
    pub kind: ErrorKind,
    pub fidelity: T,
}

impl<T: Real> ErrorModel<T> {
    /// `fidelity` must lie in `(0, 1]`; 1 gives a pure input.
    pub fn new(kind: ErrorKind, fidelity: T) -> Result<Self> {
        check_fidelity(fidelity)?;
        Ok(ErrorModel { kind, fidelity })
    }

    /// Rejects physical flip positions outside `1..=m`.
    pub fn validate_for(&self, m: usize) -> Result<()> {
        check_fidelity(self.fidelity)?;
        check_m(m)?;
        if let ErrorKind::PhysicalBitFlip { position } = self.kind {
            if position == 0 || position > m {
                return Err(invalid(format!("flip position {position} outside 1..={m}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_fidelity<T: Real>(f: T) -> Result<()> {
    if !(f > T::zero() && f <= T::one()) {
        return Err(invalid(format!("fidelity {f} outside (0, 1]")));
    }
    Ok(())
}

/// Four copies of `M` photons must fit the register.
pub(crate) fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("M must be at least 1"));
    }
    if 4 * m > MAX_SLOTS {
        return Err(invalid(format!(
            "M = {m} exceeds the register limit of {}",
            MAX_SLOTS / 4
        )));
    }
    Ok(())
}

fn uniform<T: Real>(pattern: &[(Polarization, usize)]) -> SparseState<T> {
    let photons: Vec<_> = pattern.iter().flat_map(|&(p, n)| std::iter::repeat_n(p, n)).collect();
    SparseState::basis(&photons, &[])
}

fn pair<T: Real>(a: &SparseState<T>, sign: Complex<T>, b: &SparseState<T>) -> SparseState<T> {
    SparseState::superpose(&[(Complex::new(T::one(), T::zero()), a), (sign, b)])
        .expect("orthogonal basis kets of equal shape")
}

/// `(|LL⟩ ± |RR⟩)/√2` and `(|LR⟩ ± |RL⟩)/√2`.
pub fn bell_state<T: Real>(kind: BellKind) -> SparseState<T> {
    use Polarization::{L, R};
    let (a, b, sign) = match kind {
        BellKind::PhiPlus => ([L, L], [R, R], Sign::Plus),
        BellKind::PhiMinus => ([L, L], [R, R], Sign::Minus),
        BellKind::PsiPlus => ([L, R], [R, L], Sign::Plus),
        BellKind::PsiMinus => ([L, R], [R, L], Sign::Minus),
    };
    pair(
        &SparseState::basis(&a, &[]),
        sign.factor(),
        &SparseState::basis(&b, &[]),
    )
}

/// `(|L⟩^⊗M ± |R⟩^⊗M)/√2`.
pub fn ghz_state<T: Real>(m: usize, sign: Sign) -> Result<SparseState<T>> {
    if m == 0 || m > MAX_SLOTS {
        return Err(invalid(format!("GHZ size {m} outside 1..={MAX_SLOTS}")));
    }
    let l = uniform(&[(Polarization::L, m)]);
    let r = uniform(&[(Polarization::R, m)]);
    Ok(pair(&l, sign.factor(), &r))
}

/// Logic Bell state on `2M` photons.
///
/// Φ±_M = (GHZ⁺GHZ⁺ ± GHZ⁻GHZ⁻)/√2 and Ψ±_M = (GHZ⁺GHZ⁻ ± GHZ⁻GHZ⁺)/√2, which
/// expand to Φ⁺ = (L^2M + R^2M)/√2, Φ⁻ = (L^M R^M + R^M L^M)/√2,
/// Ψ⁺ = (L^2M − R^2M)/√2 and Ψ⁻ = (R^M L^M − L^M R^M)/√2.
pub fn logic_bell_state<T: Real>(kind: LogicBellKind, m: usize) -> Result<SparseState<T>> {
    check_m(m)?;
    let plus = ghz_state::<T>(m, Sign::Plus)?;
    let minus = ghz_state::<T>(m, Sign::Minus)?;
    let (first, second, sign) = match kind {
        LogicBellKind::PhiPlus => ((&plus, &plus), (&minus, &minus), Sign::Plus),
        LogicBellKind::PhiMinus => ((&plus, &plus), (&minus, &minus), Sign::Minus),
        LogicBellKind::PsiPlus => ((&plus, &minus), (&minus, &plus), Sign::Plus),
        LogicBellKind::PsiMinus => ((&plus, &minus), (&minus, &plus), Sign::Minus),
    };
    let a = first.0.tensor(first.1)?;
    let b = second.0.tensor(second.1)?;
    SparseState::superpose(&[(Complex::new(T::one(), T::zero()), &a), (sign.factor(), &b)])
}

/// The erroneous branch of `kind` applied to Φ⁺_M.
pub fn error_state<T: Real>(kind: ErrorKind, m: usize) -> Result<SparseState<T>> {
    match kind {
        ErrorKind::LogicBitFlip => logic_bell_state(LogicBellKind::PsiPlus, m),
        ErrorKind::LogicPhaseFlip => logic_bell_state(LogicBellKind::PhiMinus, m),
        ErrorKind::PhysicalBitFlip { position } => {
            if position == 0 || position > m {
                return Err(invalid(format!("flip position {position} outside 1..={m}")));
            }
            bit_flip(&logic_bell_state(LogicBellKind::PhiPlus, m)?, position - 1)
        }
        ErrorKind::PhysicalPhaseFlip => phase_flip(&logic_bell_state(LogicBellKind::PhiPlus, m)?, 0),
    }
}

/// `F |Φ⁺_M⟩⟨Φ⁺_M| + (1−F) |err⟩⟨err|` as a two-branch ensemble.
pub fn mixed_input<T: Real>(model: &ErrorModel<T>, m: usize) -> Result<Ensemble<T>> {
    model.validate_for(m)?;
    let clean = logic_bell_state(LogicBellKind::PhiPlus, m)?;
    let noisy = error_state(model.kind, m)?;
    Ensemble::from_weights(vec![(model.fidelity, clean), (T::one() - model.fidelity, noisy)])
}

/// Atom state `(|gL⟩ ± |gR⟩)/√2` (no photons).
pub fn omega<T: Real>(sign: Sign) -> SparseState<T> {
    pair(
        &SparseState::basis(&[], &[AtomLevel::GL]),
        sign.factor(),
        &SparseState::basis(&[], &[AtomLevel::GR]),
    )
}

/// `n` atoms each in Ω⁺, as a photon-free register.
pub fn omega_register<T: Real>(n: usize) -> Result<SparseState<T>> {
    if n > MAX_SLOTS {
        return Err(invalid(format!("{n} atoms exceed the register limit")));
    }
    let single = omega::<T>(Sign::Plus);
    (0..n).try_fold(SparseState::unit(), |acc, _| acc.tensor(&single))
}

use serde::Serialize;

use super::bitflip::run_bitflip_epp;
use crate::analysis::{fidelity_formula, success_probability_formula};
use crate::error::{invalid, Error, Result};
use crate::logic_states::{check_fidelity, ErrorKind};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationRow<T: Real> {
    pub round: usize,
    pub fidelity: T,
    pub success_probability: T,
    /// Output pairs per input pair after this many rounds: the product of
    /// success probabilities times ½ per round.
    pub cumulative_yield: T,
}

/// Repeats the fidelity recursion `F → F²/(F² + (1−F)²)` for `rounds`
/// rounds. Round 1 is checked against a full simulation with `M` photons
/// per logic qubit.
pub fn iterate_epp<T: Real>(f0: T, rounds: usize, m: usize) -> Result<Vec<IterationRow<T>>> {
    check_fidelity(f0)?;
    if rounds == 0 {
        return Err(invalid("at least one round is required"));
    }
    let tol = T::lit(1e-9).max(T::norm_tolerance() * T::lit(10.0));
    let sim = run_bitflip_epp(f0, m, ErrorKind::LogicBitFlip)?;
    let first = fidelity_formula(f0)?;
    if (sim.output_fidelity - first).abs() > tol
        || (sim.success_probability - success_probability_formula(f0)?).abs() > tol
    {
        return Err(Error::Invariant(format!(
            "simulated round disagrees with the recursion: {} vs {}",
            sim.output_fidelity, first
        )));
    }
    let half = T::lit(0.5);
    let mut rows = Vec::with_capacity(rounds);
    let mut f = f0;
    let mut yield_ = T::one();
    for round in 1..=rounds {
        let p = success_probability_formula(f)?;
        f = fidelity_formula(f)?;
        yield_ = yield_ * p * half;
        rows.push(IterationRow {
            round,
            fidelity: f,
            success_probability: p,
            cumulative_yield: yield_,
        });
    }
    Ok(rows)
}

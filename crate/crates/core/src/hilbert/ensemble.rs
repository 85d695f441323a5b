use super::state::SparseState;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Finite mixture of pure states, `ρ = Σ pₖ |ψₖ⟩⟨ψₖ|`.
///
/// Components are kept as given; nothing is orthogonalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble<T: Real> {
    branches: Vec<(T, SparseState<T>)>,
}

impl<T: Real> Ensemble<T> {
    /// Checks that probabilities lie in (0, 1], sum to 1, that every state is
    /// normalized and that all states share one register shape.
    pub fn new(branches: Vec<(T, SparseState<T>)>) -> Result<Self> {
        let (_, first) = branches.first().ok_or_else(|| invalid("empty ensemble"))?;
        let shape = first.shape();
        let tol = T::norm_tolerance();
        let mut total = T::zero();
        for (p, s) in &branches {
            if !(*p > T::zero() && *p <= T::one() + tol) {
                return Err(invalid(format!("ensemble weight {p} outside (0, 1]")));
            }
            if s.shape() != shape {
                return Err(crate::Error::ShapeMismatch {
                    left: shape,
                    right: s.shape(),
                });
            }
            if !s.is_normalized() {
                return Err(invalid("ensemble member is not normalized"));
            }
            total += *p;
        }
        if (total - T::one()).abs() > tol {
            return Err(invalid(format!("ensemble weights sum to {total}")));
        }
        Ok(Ensemble { branches })
    }

    pub fn pure(state: SparseState<T>) -> Result<Self> {
        Self::new(vec![(T::one(), state)])
    }

    /// Builds an ensemble from unnormalized non-negative weights, dropping
    /// zero-weight entries and rescaling the rest to sum to 1.
    pub fn from_weights(weighted: Vec<(T, SparseState<T>)>) -> Result<Self> {
        let kept: Vec<_> = weighted.into_iter().filter(|(w, _)| *w > T::zero()).collect();
        let total = kept.iter().fold(T::zero(), |acc, (w, _)| acc + *w);
        if !(total > T::zero()) {
            return Err(invalid("all ensemble weights are zero"));
        }
        Self::new(kept.into_iter().map(|(w, s)| (w / total, s)).collect())
    }

    pub fn branches(&self) -> &[(T, SparseState<T>)] {
        &self.branches
    }

    pub fn shape(&self) -> (usize, usize) {
        self.branches[0].1.shape()
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// `⟨target|ρ|target⟩ = Σ pₖ |⟨target|ψₖ⟩|²`.
    pub fn fidelity(&self, target: &SparseState<T>) -> Result<T> {
        let mut f = T::zero();
        for (p, s) in &self.branches {
            f += *p * target.overlap(s)?;
        }
        Ok(f)
    }

    /// Merges components that are equal up to a global phase (within the
    /// scalar's norm tolerance), summing their weights. Order of first
    /// appearance is kept.
    pub fn merged(&self) -> Self {
        let tol = T::norm_tolerance();
        let mut out: Vec<(T, SparseState<T>)> = Vec::new();
        for (p, s) in &self.branches {
            let hit = out
                .iter_mut()
                .find(|(_, t)| t.equal_up_to_global_phase(s, tol).unwrap_or(false));
            match hit {
                Some((q, _)) => *q += *p,
                None => out.push((*p, s.clone())),
            }
        }
        Ensemble { branches: out }
    }

    /// Weight carried by components equal to `state` up to global phase.
    pub fn weight_of(&self, state: &SparseState<T>) -> Result<T> {
        let tol = T::norm_tolerance();
        let mut w = T::zero();
        for (p, s) in &self.branches {
            if s.equal_up_to_global_phase(state, tol)? {
                w += *p;
            }
        }
        Ok(w)
    }
}

/// Free-function form of [`Ensemble::fidelity`].
pub fn ensemble_fidelity<T: Real>(e: &Ensemble<T>, target: &SparseState<T>) -> Result<T> {
    e.fidelity(target)
}

use crate::error::{invalid, Result};
use crate::scalar::Real;

fn check_closed<T: Real>(f: T) -> Result<()> {
    if f.is_nan() || f < T::zero() || f > T::one() {
        return Err(invalid(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(())
}

/// `F' = F²/(F² + (1−F)²)`, defined on the closed interval.
pub fn fidelity_formula<T: Real>(f: T) -> Result<T> {
    check_closed(f)?;
    let g = T::one() - f;
    Ok(f * f / (f * f + g * g))
}

/// `F² + (1−F)²`: probability that both copies carry the same error.
pub fn success_probability_formula<T: Real>(f: T) -> Result<T> {
    check_closed(f)?;
    let g = T::one() - f;
    Ok(f * f + g * g)
}

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

/// A 2×2 complex matrix acting on one two-level slot, row-major,
/// basis order (`L`, `R`) for photons and (`gL`, `gR`) for atoms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2<T: Real>([[Complex<T>; 2]; 2]);

impl<T: Real> Unitary2<T> {
    /// Wraps `m` after checking `m†m = 1` within the scalar's norm tolerance.
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let u = Unitary2(m);
        let dev = u.unitarity_deviation();
        if !(dev <= T::norm_tolerance()) {
            return Err(Error::NotUnitary(dev.as_f64()));
        }
        Ok(u)
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(m: [[Complex<T>; 2]; 2]) -> Self {
        Unitary2(m)
    }

    pub fn matrix(&self) -> &[[Complex<T>; 2]; 2] {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.0[row][col]
    }

    /// Largest entry of `|m†m − 1|`.
    pub fn unitarity_deviation(&self) -> T {
        let m = &self.0;
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(T::zero(), T::zero());
                for row in m {
                    acc += row[i].conj() * row[j];
                }
                let target = if i == j { T::one() } else { T::zero() };
                let d = (acc - Complex::new(target, T::zero())).norm();
                if d.is_nan() {
                    return T::infinity();
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Unitary2([[c(o, z), c(z, z)], [c(z, z), c(o, z)]])
    }

    /// Bit flip `L ↔ R`.
    pub fn pauli_x() -> Self {
        let (o, z) = (T::one(), T::zero());
        Unitary2([[c(z, z), c(o, z)], [c(o, z), c(z, z)]])
    }

    /// Phase flip `R → −R`.
    pub fn pauli_z() -> Self {
        let (o, z) = (T::one(), T::zero());
        Unitary2([[c(o, z), c(z, z)], [c(z, z), c(-o, z)]])
    }

    /// `|0⟩ → (|0⟩+|1⟩)/√2`, `|1⟩ → (|0⟩−|1⟩)/√2`; the half-wave plate and
    /// the atomic Hadamard share this matrix.
    pub fn hadamard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        let z = T::zero();
        Unitary2([[c(h, z), c(h, z)], [c(h, z), c(-h, z)]])
    }

    pub fn diagonal(d0: Complex<T>, d1: Complex<T>) -> Result<Self> {
        let z = Complex::new(T::zero(), T::zero());
        Self::new([[d0, z], [z, d1]])
    }

    pub fn compose(&self, then: &Unitary2<T>) -> Self {
        let (a, b) = (&self.0, &then.0);
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = b[i][0] * a[0][j] + b[i][1] * a[1][j];
            }
        }
        Unitary2(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_gates_are_unitary() {
        for u in [
            Unitary2::<f64>::identity(),
            Unitary2::pauli_x(),
            Unitary2::pauli_z(),
            Unitary2::hadamard(),
        ] {
            assert!(u.unitarity_deviation() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let z = c(0.0, 0.0);
        let m = [[c(1.0, 0.0), z], [z, c(0.5, 0.0)]];
        assert!(matches!(Unitary2::<f64>::new(m), Err(Error::NotUnitary(_))));
        let nan = [[c(f64::NAN, 0.0), z], [z, c(1.0, 0.0)]];
        assert!(Unitary2::<f64>::new(nan).is_err());
    }

    #[test]
    fn hadamard_is_involutive() {
        let h = Unitary2::<f64>::hadamard();
        let hh = h.compose(&h);
        assert!((hh.entry(0, 0).re - 1.0).abs() < 1e-15);
        assert!(hh.entry(0, 1).norm() < 1e-15);
    }
}

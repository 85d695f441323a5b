//! Photon-atom interaction in a low-Q cavity.
//!
//! A photon reflected from a cavity holding a three-level atom picks up a
//! phase that depends on whether its polarization couples to the atom's
//! ground state. [`reflection_coefficient`] evaluates the input-output
//! reflection amplitude; [`faraday_reflect`] applies the ideal rule obtained
//! at the working point `ω₀ = ω_c`, `ω_p = ω_c − κ/2`, `λ = κ/2`, `γ = 0`:
//!
//! ```text
//! |L,gL⟩ → −|L,gL⟩    |R,gL⟩ → i|R,gL⟩
//! |L,gR⟩ →  i|L,gR⟩   |R,gR⟩ → −|R,gR⟩
//! ```

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::hilbert::SparseState;
use crate::scalar::{c, imag_unit, one, Real};

/// Cavity and atom parameters. All rates and frequencies share one unit;
/// the helpers below work in units of `κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams<T: Real> {
    pub omega_p: T,
    pub omega_c: T,
    pub omega_0: T,
    pub kappa: T,
    pub gamma: T,
    pub lambda: T,
}

impl<T: Real> CavityParams<T> {
    pub fn new(omega_p: T, omega_c: T, omega_0: T, kappa: T, gamma: T, lambda: T) -> Result<Self> {
        let p = CavityParams {
            omega_p,
            omega_c,
            omega_0,
            kappa,
            gamma,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in units of `κ` with `ω_c = ω₀ = 0`:
    /// `detuning = (ω_p − ω_c)/κ`.
    pub fn from_ratios(detuning: T, gamma_over_kappa: T, lambda_over_kappa: T) -> Result<Self> {
        Self::new(
            detuning,
            T::zero(),
            T::zero(),
            T::one(),
            gamma_over_kappa,
            lambda_over_kappa,
        )
    }

    /// `ω₀ = ω_c`, `ω_p = ω_c − κ/2`, `λ = κ/2`, with the given `γ/κ`.
    pub fn working_point(gamma_over_kappa: T) -> Result<Self> {
        let half = T::lit(0.5);
        Self::from_ratios(-half, gamma_over_kappa, half)
    }

    /// Same cavity with the atom decoupled (`λ = 0`).
    pub fn uncoupled(&self) -> Self {
        CavityParams {
            lambda: T::zero(),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega_p,
            self.omega_c,
            self.omega_0,
            self.kappa,
            self.gamma,
            self.lambda,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("cavity parameters must be finite"));
        }
        if !(self.kappa > T::zero()) {
            return Err(invalid("cavity damping rate kappa must be positive"));
        }
        if self.gamma < T::zero() || self.lambda < T::zero() {
            return Err(invalid("gamma and lambda must be non-negative"));
        }
        Ok(())
    }
}

/// Reflection amplitude of the coupled atom-cavity system:
///
/// ```text
///        [i(ω_c−ω_p) − κ/2][i(ω₀−ω_p) + γ/2] + λ²
/// r  =  ─────────────────────────────────────────
///        [i(ω_c−ω_p) + κ/2][i(ω₀−ω_p) + γ/2] + λ²
/// ```
pub fn reflection_coefficient<T: Real>(p: &CavityParams<T>) -> Result<Complex<T>> {
    p.validate()?;
    let half = T::lit(0.5);
    let cavity_minus = c(-p.kappa * half, p.omega_c - p.omega_p);
    let cavity_plus = c(p.kappa * half, p.omega_c - p.omega_p);
    let atom = c(p.gamma * half, p.omega_0 - p.omega_p);
    let coupling = c(p.lambda * p.lambda, T::zero());
    let num = cavity_minus * atom + coupling;
    let den = cavity_plus * atom + coupling;
    if den.norm() <= T::epsilon() * (T::one() + num.norm()) {
        return Err(Error::Singular(format!(
            "denominator vanishes at {p:?} (decoupled resonant atom without decay)"
        )));
    }
    Ok(num / den)
}

/// Empty-cavity reflection amplitude `(i(ω_c−ω_p) − κ/2)/(i(ω_c−ω_p) + κ/2)`.
pub fn empty_reflection_coefficient<T: Real>(p: &CavityParams<T>) -> Result<Complex<T>> {
    p.validate()?;
    let half = T::lit(0.5);
    let delta = p.omega_c - p.omega_p;
    Ok(c(-p.kappa * half, delta) / c(p.kappa * half, delta))
}

/// How the modulus of the coupled reflection amplitude is treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Absorption {
    /// Keep only the phase, `r → r/|r|`.
    #[default]
    PurePhase,
    /// Keep `|r| < 1`; the map is then a contraction and states lose norm.
    RetainModulus,
}

/// Amplitudes picked up by a reflected photon: `coupled` when its
/// polarization matches the atom's ground state, `uncoupled` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionPhases<T: Real> {
    pub coupled: Complex<T>,
    pub uncoupled: Complex<T>,
}

impl<T: Real> ReflectionPhases<T> {
    /// `coupled = −1`, `uncoupled = i`.
    pub fn ideal() -> Self {
        ReflectionPhases {
            coupled: -one::<T>(),
            uncoupled: imag_unit(),
        }
    }

    /// `e^{iθ}` from the coupled cavity and `e^{iθ₀}` from the empty one.
    pub fn from_params(coupled: &CavityParams<T>, empty: &CavityParams<T>, absorption: Absorption) -> Result<Self> {
        let r = reflection_coefficient(coupled)?;
        let r0 = empty_reflection_coefficient(empty)?;
        let coupled = match absorption {
            Absorption::PurePhase => Complex::from_polar(T::one(), r.arg()),
            Absorption::RetainModulus => r,
        };
        Ok(ReflectionPhases {
            coupled,
            uncoupled: Complex::from_polar(T::one(), r0.arg()),
        })
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::ideal()
    }

    pub fn amplitude(&self, couples: bool) -> Complex<T> {
        if couples {
            self.coupled
        } else {
            self.uncoupled
        }
    }
}

/// Applies the ideal reflection rule to photon `photon` and atom `atom`.
pub fn faraday_reflect<T: Real>(s: &SparseState<T>, photon: usize, atom: usize) -> Result<SparseState<T>> {
    reflect_with(s, photon, atom, &ReflectionPhases::ideal())
}

/// Reflection with phases `θ = arg r(coupled)` and `θ₀ = arg r₀(empty)`,
/// moduli set to 1.
pub fn faraday_reflect_numeric<T: Real>(
    s: &SparseState<T>,
    photon: usize,
    atom: usize,
    coupled: &CavityParams<T>,
    empty: &CavityParams<T>,
) -> Result<SparseState<T>> {
    let phases = ReflectionPhases::from_params(coupled, empty, Absorption::PurePhase)?;
    reflect_with(s, photon, atom, &phases)
}

/// Diagonal reflection map for an arbitrary pair of branch amplitudes.
pub fn reflect_with<T: Real>(
    s: &SparseState<T>,
    photon: usize,
    atom: usize,
    phases: &ReflectionPhases<T>,
) -> Result<SparseState<T>> {
    s.check_photon(photon)?;
    s.check_atom(atom)?;
    Ok(s.map_diagonal(|k| phases.amplitude(k.atom(atom).couples_to(k.photon(photon)))))
}

/// Convenience: every listed photon, in order, reflects off every listed
/// atom, in order (one photon inside a cavity at a time).
pub fn reflect_group<T: Real>(
    s: &SparseState<T>,
    photons: &[usize],
    atoms: &[usize],
    phases: &ReflectionPhases<T>,
) -> Result<SparseState<T>> {
    let mut out = s.clone();
    for &p in photons {
        for &a in atoms {
            out = reflect_with(&out, p, a, phases)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type S = SparseState<f64>;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn ket(label: &str) -> S {
        S::from_labels(&[(label, r(1.0))]).unwrap()
    }

    fn omega(sign: f64) -> S {
        S::from_labels(&[(";gL", r(1.0)), (";gR", r(sign))]).unwrap()
    }

    #[test]
    fn working_point_gives_pi_and_half_pi() {
        let p = CavityParams::<f64>::working_point(0.0).unwrap();
        let rc = reflection_coefficient(&p).unwrap();
        assert!((rc - r(-1.0)).norm() < 1e-12);
        let r0 = empty_reflection_coefficient(&p).unwrap();
        assert!((r0 - Complex64::i()).norm() < 1e-12);
    }

    #[test]
    fn zero_coupling_reduces_to_empty_cavity() {
        for &(det, g) in &[(-0.5, 0.0), (0.3, 0.2), (2.0, 1e-3)] {
            let p = CavityParams::<f64>::from_ratios(det, g, 0.0).unwrap();
            let a = reflection_coefficient(&p).unwrap();
            let b = empty_reflection_coefficient(&p).unwrap();
            assert!((a - b).norm() < 1e-12, "{det} {g}");
        }
    }

    #[test]
    fn weak_atomic_decay_shifts_phase_slightly() {
        let g = 1e-3;
        let p = CavityParams::<f64>::working_point(g).unwrap();
        let rc = reflection_coefficient(&p).unwrap();
        // Hand expansion at Δ = κ/2, λ = κ/2 (κ = 1):
        // r = (−g/4 + i(g−1)/4) / (g/4 + i(1+g)/4).
        let oracle = Complex64::new(-g, g - 1.0) / Complex64::new(g, 1.0 + g);
        assert!((rc - oracle).norm() < 1e-14);
        let dist = (rc.arg().abs() - PI).abs();
        assert!(dist < 5e-3, "phase error {dist}");
        assert!(rc.norm() < 1.0);
    }

    #[test]
    fn empty_cavity_limits() {
        let on_res = CavityParams::<f64>::from_ratios(0.0, 0.0, 0.0).unwrap();
        assert!((empty_reflection_coefficient(&on_res).unwrap() - r(-1.0)).norm() < 1e-12);
        for det in [1e6, -1e6] {
            let far = CavityParams::<f64>::from_ratios(det, 0.0, 0.0).unwrap();
            assert!((empty_reflection_coefficient(&far).unwrap() - r(1.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn singular_and_invalid_parameters() {
        // Resonant, decoupled, no decay: 0/0.
        let p = CavityParams::<f64>::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(reflection_coefficient(&p), Err(Error::Singular(_))));
        assert!(CavityParams::<f64>::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.5).is_err());
        assert!(CavityParams::<f64>::new(0.0, 0.0, 0.0, 1.0, -1.0, 0.5).is_err());
        assert!(CavityParams::<f64>::new(f64::NAN, 0.0, 0.0, 1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn ideal_rule_on_all_four_basis_kets() {
        let cases = [
            ("L;gL", r(-1.0)),
            ("R;gL", Complex64::i()),
            ("L;gR", Complex64::i()),
            ("R;gR", r(-1.0)),
        ];
        for (label, phase) in cases {
            let out = faraday_reflect(&ket(label), 0, 0).unwrap();
            assert_eq!(out, ket(label).scaled(phase), "{label}");
        }
        assert!(faraday_reflect(&ket("L;gL"), 1, 0).is_err());
        assert!(faraday_reflect(&ket("L;gL"), 0, 1).is_err());
    }

    /// Two photons off one atom initially in (|gL⟩+|gR⟩)/√2.
    fn pair_on_atom(photons: &str) -> S {
        let s = ket(photons).tensor(&omega(1.0)).unwrap();
        let s = faraday_reflect(&s, 0, 0).unwrap();
        faraday_reflect(&s, 1, 0).unwrap()
    }

    #[test]
    fn two_photon_parity_table() {
        for (photons, atom_sign) in [("LL", -1.0), ("RR", -1.0), ("LR", 1.0), ("RL", 1.0)] {
            let out = pair_on_atom(photons);
            let expected = ket(photons).tensor(&omega(atom_sign)).unwrap();
            assert!(out.equal_up_to_global_phase(&expected, 1e-12).unwrap(), "{photons}");
        }
    }

    #[test]
    fn numeric_phases_at_working_point_match_ideal() {
        let p = CavityParams::<f64>::working_point(0.0).unwrap();
        let s = S::from_labels(&[("LR;gL", r(1.0)), ("RL;gR", r(2.0)), ("RR;gL", r(0.5))]).unwrap();
        let ideal = faraday_reflect(&s, 1, 0).unwrap();
        let numeric = faraday_reflect_numeric(&s, 1, 0, &p, &p.uncoupled()).unwrap();
        assert!((ideal.inner_product(&numeric).unwrap() - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn uncoupled_atom_gives_atom_independent_phase() {
        let coupled = CavityParams::<f64>::from_ratios(-0.5, 0.0, 0.0).unwrap();
        let s = ket("L").tensor(&omega(1.0)).unwrap();
        let out = faraday_reflect_numeric(&s, 0, 0, &coupled, &coupled).unwrap();
        assert!(out.equal_up_to_global_phase(&s, 1e-12).unwrap());
    }

    #[test]
    fn retained_modulus_loses_norm() {
        let p = CavityParams::<f64>::working_point(0.1).unwrap();
        let phases = ReflectionPhases::from_params(&p, &p.uncoupled(), Absorption::RetainModulus).unwrap();
        let out = reflect_with(&ket("L;gL"), 0, 0, &phases).unwrap();
        assert!(out.norm_sqr() < 1.0);
        let out = reflect_with(&ket("R;gL"), 0, 0, &phases).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    fn arb_photon_atom_state() -> impl Strategy<Value = S> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16).prop_filter_map("non-zero", |amps| {
            let terms = amps.iter().enumerate().map(|(i, (re, im))| {
                (
                    crate::hilbert::BasisKet::from_bits(i as u64 & 0b11, i as u64 >> 2),
                    Complex64::new(*re, *im),
                )
            });
            S::from_terms(2, 2, terms).ok()?.normalized().ok()
        })
    }

    proptest! {
        #[test]
        fn reflection_is_diagonal_unitary_of_order_four(s in arb_photon_atom_state()) {
            let mut t = s.clone();
            for _ in 0..4 {
                t = faraday_reflect(&t, 0, 1).unwrap();
                prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
            }
            prop_assert!((s.inner_product(&t).unwrap() - r(1.0)).norm() < 1e-12);

            let twice = faraday_reflect(&faraday_reflect(&s, 0, 1).unwrap(), 0, 1).unwrap();
            let squared = ReflectionPhases { coupled: r(1.0), uncoupled: r(-1.0) };
            let direct = reflect_with(&s, 0, 1, &squared).unwrap();
            prop_assert!((twice.inner_product(&direct).unwrap() - r(1.0)).norm() < 1e-12);
        }

        #[test]
        fn reflection_order_does_not_matter(s in arb_photon_atom_state(), atom in 0usize..2) {
            let a = faraday_reflect(&faraday_reflect(&s, 0, atom).unwrap(), 1, atom).unwrap();
            let b = faraday_reflect(&faraday_reflect(&s, 1, atom).unwrap(), 0, atom).unwrap();
            prop_assert!((a.inner_product(&b).unwrap() - r(1.0)).norm() < 1e-12);
        }

        #[test]
        fn cavity_is_passive(det in -5.0f64..5.0, atom_det in -5.0f64..5.0, g in 0.0f64..2.0, lam in 0.0f64..2.0) {
            let p = CavityParams::new(det, 0.0, atom_det, 1.0, g, lam).unwrap();
            if let Ok(rc) = reflection_coefficient(&p) {
                prop_assert!(rc.norm() <= 1.0 + 1e-12);
                if g == 0.0 {
                    prop_assert!((rc.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lossless_cavity_has_unit_modulus() {
        for det in [-2.0, -0.5, 0.1, 3.0] {
            let p = CavityParams::<f64>::from_ratios(det, 0.0, 0.5).unwrap();
            assert!((reflection_coefficient(&p).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }
}

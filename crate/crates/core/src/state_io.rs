//! JSON fixtures for sparse states: one entry per basis label with its
//! `[re, im]` amplitude at 12 significant digits.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hilbert::{BasisKet, SparseState};
use crate::numfmt::fmt_sig;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub photons: usize,
    pub atoms: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub basis: String,
    pub amplitude: [f64; 2],
}

fn rounded(x: f64) -> f64 {
    // Formatting and reparsing pins the emitted digits.
    fmt_sig(x).parse().unwrap_or(x)
}

impl StateDocument {
    pub fn from_state<T: Real>(s: &SparseState<T>) -> Self {
        let (photons, atoms) = s.shape();
        let terms = s
            .terms()
            .map(|(k, a)| TermEntry {
                basis: k.label(photons, atoms),
                amplitude: [rounded(a.re.as_f64()), rounded(a.im.as_f64())],
            })
            .collect();
        StateDocument { photons, atoms, terms }
    }

    /// Rebuilds the state without renormalizing.
    pub fn to_state<T: Real>(&self) -> Result<SparseState<T>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (ket, p, a) = BasisKet::parse_label(&t.basis)?;
            if (p, a) != (self.photons, self.atoms) {
                return Err(invalid(format!(
                    "label '{}' does not match shape ({}, {})",
                    t.basis, self.photons, self.atoms
                )));
            }
            terms.push((ket, Complex::new(T::lit(t.amplitude[0]), T::lit(t.amplitude[1]))));
        }
        SparseState::from_terms(self.photons, self.atoms, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("state document: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic_states::{logic_bell_state, omega_register, LogicBellKind};
    use crate::State;

    #[test]
    fn round_trip_is_within_twelve_digits() {
        let s = logic_bell_state::<f64>(LogicBellKind::PsiMinus, 3)
            .unwrap()
            .tensor(&omega_register(2).unwrap())
            .unwrap();
        let doc = StateDocument::from_state(&s);
        let back: State = StateDocument::from_json(&doc.to_json()).unwrap().to_state().unwrap();
        assert_eq!(back.len(), s.len());
        for (k, a) in s.terms() {
            assert!((back.amplitude(k) - a).norm() < 1e-12);
        }
        assert!(doc.to_json().contains("\"LLLRRR;gLgL\""));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(StateDocument::from_json("{").is_err());
        let doc = StateDocument {
            photons: 2,
            atoms: 0,
            terms: vec![TermEntry {
                basis: "LLL".into(),
                amplitude: [1.0, 0.0],
            }],
        };
        assert!(doc.to_state::<f64>().is_err());
    }
}

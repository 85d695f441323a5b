use std::collections::BTreeMap;

use serde::Serialize;

use super::trace::Leaf;
use super::verdict::{pattern_string, Verdict};
use super::wiring::{mode_label, Protocol};
use crate::error::{invalid, Result};
use crate::hilbert::{AtomLevel, Ensemble, Polarization, SparseState};
use crate::logic_states::LogicBellKind;
use crate::numfmt::fmt_sig;
use crate::scalar::Real;

/// All trajectories sharing one atom pattern and one copy-2 detection
/// pattern, summed over the input combinations.
#[derive(Clone, Debug)]
pub struct BranchRecord<T: Real> {
    pub atom_outcomes: Vec<AtomLevel>,
    /// Detected copy-2 photons (C then D); empty when nothing was detected.
    pub photon_outcomes: Vec<Polarization>,
    pub probability: T,
    pub verdict: Verdict,
    /// Copy-1 photon slots that receive a bit flip.
    pub recovery: Vec<usize>,
    /// Conditional copy-1 mixture before recovery; `None` on fail branches.
    pub pre_recovery: Option<Ensemble<T>>,
    /// Conditional copy-1 mixture after recovery; `None` on fail branches.
    pub post_state: Option<Ensemble<T>>,
}

impl<T: Real> BranchRecord<T> {
    pub fn atoms_string(&self) -> String {
        pattern_string(&self.atom_outcomes)
    }

    pub fn photons_string(&self) -> String {
        self.photon_outcomes.iter().map(|p| p.symbol()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct PurificationReport<T: Real> {
    pub protocol: Protocol,
    pub m: usize,
    pub input_fidelity: T,
    pub target: LogicBellKind,
    /// Sorted by atom pattern, then photon pattern (`gL` and `L` first).
    pub branches: Vec<BranchRecord<T>>,
    pub success_probability: T,
    /// Renormalized mixture over success branches; `None` if none succeeded.
    pub output_ensemble: Option<Ensemble<T>>,
    pub output_fidelity: T,
}

fn ensembles_close<T: Real>(a: &Option<Ensemble<T>>, b: &Option<Ensemble<T>>, tol: T) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            let covers = |x: &Ensemble<T>, y: &Ensemble<T>| {
                x.branches().iter().all(|(_, s)| {
                    let w = x.weight_of(s).unwrap_or(T::nan());
                    let v = y.weight_of(s).unwrap_or(T::nan());
                    (w - v).abs() <= tol
                })
            };
            covers(a, b) && covers(b, a)
        }
        _ => false,
    }
}

impl<T: Real> PurificationReport<T> {
    pub fn total_probability(&self) -> T {
        self.branches.iter().fold(T::zero(), |acc, b| acc + b.probability)
    }

    pub fn success_branches(&self) -> impl Iterator<Item = &BranchRecord<T>> {
        self.branches.iter().filter(|b| b.verdict == Verdict::Success)
    }

    /// Field-by-field comparison with reals within `tol` and mixtures
    /// compared component-wise up to global phase.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let close = |a: T, b: T| (a - b).abs() <= tol;
        self.protocol == other.protocol
            && self.m == other.m
            && self.target == other.target
            && close(self.input_fidelity, other.input_fidelity)
            && close(self.success_probability, other.success_probability)
            && close(self.output_fidelity, other.output_fidelity)
            && ensembles_close(&self.output_ensemble, &other.output_ensemble, tol)
            && self.branches.len() == other.branches.len()
            && self.branches.iter().zip(&other.branches).all(|(a, b)| {
                a.atom_outcomes == b.atom_outcomes
                    && a.photon_outcomes == b.photon_outcomes
                    && a.verdict == b.verdict
                    && a.recovery == b.recovery
                    && close(a.probability, b.probability)
                    && ensembles_close(&a.pre_recovery, &b.pre_recovery, tol)
                    && ensembles_close(&a.post_state, &b.post_state, tol)
            })
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            protocol: self.protocol.id().to_string(),
            m: self.m,
            f: fmt_sig(self.input_fidelity.as_f64()),
            success_probability: fmt_sig(self.success_probability.as_f64()),
            output_fidelity: fmt_sig(self.output_fidelity.as_f64()),
            branches: self
                .branches
                .iter()
                .map(|b| BranchDocument {
                    atoms: b.atoms_string(),
                    photons: b.photons_string(),
                    p: fmt_sig(b.probability.as_f64()),
                    verdict: b.verdict,
                    recovery: b.recovery.iter().map(|&s| mode_label(self.m, s)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Branch table: `atoms,photons,p,verdict,recovery`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["atoms", "photons", "p", "verdict", "recovery"])
            .map_err(csv_err)?;
        for b in self.to_document().branches {
            w.write_record([b.atoms, b.photons, b.p, b.verdict.to_string(), b.recovery.join(" ")])
                .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }
}

pub(crate) fn csv_err(e: csv::Error) -> crate::Error {
    invalid(format!("csv: {e}"))
}

/// Serialized form of a [`PurificationReport`]. Reals are decimal strings
/// with 12 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub protocol: String,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "F")]
    pub f: String,
    pub success_probability: String,
    pub output_fidelity: String,
    pub branches: Vec<BranchDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchDocument {
    pub atoms: String,
    pub photons: String,
    pub p: String,
    pub verdict: Verdict,
    /// Mode labels such as `b1`.
    pub recovery: Vec<String>,
}

#[derive(Default)]
struct Aggregate<T: Real> {
    probability: T,
    verdict: Option<Verdict>,
    recovery: Vec<usize>,
    pre: Vec<(T, SparseState<T>)>,
    post: Vec<(T, SparseState<T>)>,
}

fn mixture<T: Real>(parts: Vec<(T, SparseState<T>)>) -> Result<Option<Ensemble<T>>> {
    if parts.is_empty() {
        return Ok(None);
    }
    Ok(Some(Ensemble::from_weights(parts)?.merged()))
}

/// Groups leaves by `(atoms, photons)` across weighted pure inputs and
/// builds the report. Reduction order is fixed by the input order.
pub(crate) fn assemble<T: Real>(
    protocol: Protocol,
    m: usize,
    input_fidelity: T,
    weighted: Vec<(T, Vec<Leaf<T>>)>,
    target: &SparseState<T>,
) -> Result<PurificationReport<T>> {
    let mut table: BTreeMap<(Vec<AtomLevel>, Vec<Polarization>), Aggregate<T>> = BTreeMap::new();
    for (w, leaves) in weighted {
        for leaf in leaves {
            let weight = w * leaf.weight;
            let entry = table.entry((leaf.atoms, leaf.photons)).or_default();
            entry.probability += weight;
            entry.verdict = Some(leaf.verdict);
            entry.recovery = leaf.recovery;
            if let (Some(pre), Some(post)) = (leaf.pre, leaf.post) {
                entry.pre.push((weight, pre));
                entry.post.push((weight, post));
            }
        }
    }

    let mut branches = Vec::with_capacity(table.len());
    let mut success = T::zero();
    let mut output = Vec::new();
    for ((atoms, photons), agg) in table {
        if !(agg.probability > T::zero()) {
            continue;
        }
        let verdict = agg.verdict.expect("set with every entry");
        if verdict == Verdict::Success {
            success += agg.probability;
            output.extend(agg.post.iter().cloned());
        }
        branches.push(BranchRecord {
            atom_outcomes: atoms,
            photon_outcomes: photons,
            probability: agg.probability,
            verdict,
            recovery: agg.recovery,
            pre_recovery: mixture(agg.pre)?,
            post_state: mixture(agg.post)?,
        });
    }
    let output_ensemble = mixture(output)?;
    let output_fidelity = match &output_ensemble {
        Some(e) => e.fidelity(target)?,
        None => T::zero(),
    };
    Ok(PurificationReport {
        protocol,
        m,
        input_fidelity,
        target: LogicBellKind::PhiPlus,
        branches,
        success_probability: success,
        output_ensemble,
        output_fidelity,
    })
}

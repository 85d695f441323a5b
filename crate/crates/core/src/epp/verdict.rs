use std::fmt;

use serde::Serialize;

use super::wiring::{Protocol, Side, WiringPlan};
use crate::error::{invalid, Error, Result};
use crate::hilbert::{parse_atom_levels, AtomLevel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Success,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Success => "success",
            Verdict::Fail => "fail",
        })
    }
}

/// Space-separated atom pattern, e.g. `gL gL gR gR`.
pub fn pattern_string(atoms: &[AtomLevel]) -> String {
    atoms.iter().map(|a| a.symbol()).collect::<Vec<_>>().join(" ")
}

/// Success iff the XOR of Alice's group outcomes equals the XOR of Bob's,
/// counting `gR` as 1.
///
/// The atoms of one group must agree; a disagreement is a
/// [`Error::ProtocolViolation`].
pub fn classify_verdict(atoms: &[AtomLevel], plan: &WiringPlan) -> Result<Verdict> {
    if plan.protocol != Protocol::BitFlipEpp {
        return Err(invalid("verdicts are defined for the bit-flip protocol only"));
    }
    if atoms.len() != plan.atom_count {
        return Err(invalid(format!(
            "{} atom outcomes for {} atoms",
            atoms.len(),
            plan.atom_count
        )));
    }
    let mut parity = [false; 2];
    for g in &plan.groups {
        let first = atoms[g.atoms[0]];
        if g.atoms.iter().any(|&a| atoms[a] != first) {
            return Err(Error::ProtocolViolation(format!(
                "atoms {:?} of one group disagree in {}",
                g.atoms,
                pattern_string(atoms)
            )));
        }
        let idx = match g.side {
            Side::Alice => 0,
            Side::Bob => 1,
            Side::Joint => return Err(Error::Invariant("joint group in a bit-flip plan".into())),
        };
        parity[idx] ^= first == AtomLevel::GR;
    }
    Ok(if parity[0] == parity[1] {
        Verdict::Success
    } else {
        Verdict::Fail
    })
}

/// Known success/fail atom patterns for small `M`, used to validate the
/// parity rule. The fail list is empty where only successes are known.
#[derive(Clone, Copy, Debug)]
pub struct PatternTable {
    pub m: usize,
    pub success: &'static [&'static str],
    pub fail: &'static [&'static str],
}

const EIGHT_ATOM_SUCCESS: &[&str] = &[
    "gL gL gR gR gL gL gR gR",
    "gL gL gR gR gR gR gL gL",
    "gR gR gL gL gL gL gR gR",
    "gR gR gL gL gR gR gL gL",
    "gL gL gL gL gL gL gL gL",
    "gL gL gL gL gR gR gR gR",
    "gR gR gR gR gL gL gL gL",
    "gR gR gR gR gR gR gR gR",
];

const THREE_PHOTON_FAIL: &[&str] = &[
    "gL gL gR gR gL gL gL gL",
    "gL gL gR gR gR gR gR gR",
    "gR gR gL gL gL gL gL gL",
    "gR gR gL gL gR gR gR gR",
    "gL gL gL gL gL gL gR gR",
    "gL gL gL gL gR gR gL gL",
    "gR gR gR gR gL gL gR gR",
    "gR gR gR gR gR gR gL gL",
];

pub fn reference_patterns(m: usize) -> Option<PatternTable> {
    match m {
        2 => Some(PatternTable {
            m,
            success: &["gL gL gL gL", "gR gR gR gR"],
            fail: &["gL gL gR gR", "gR gR gL gL"],
        }),
        3 => Some(PatternTable {
            m,
            success: EIGHT_ATOM_SUCCESS,
            fail: THREE_PHOTON_FAIL,
        }),
        4 => Some(PatternTable {
            m,
            success: EIGHT_ATOM_SUCCESS,
            fail: &[],
        }),
        _ => None,
    }
}

/// One row of a pattern-table check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCheck {
    pub pattern: String,
    pub expected: Verdict,
    pub got: Verdict,
}

impl PatternCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.got
    }
}

/// Classifies every pattern of the reference table for `m`.
pub fn check_reference_patterns(m: usize, plan: &WiringPlan) -> Result<Vec<PatternCheck>> {
    let table = reference_patterns(m).ok_or_else(|| invalid(format!("no reference table for M = {m}")))?;
    let rows = table
        .success
        .iter()
        .map(|p| (p, Verdict::Success))
        .chain(table.fail.iter().map(|p| (p, Verdict::Fail)));
    rows.map(|(p, expected)| {
        let got = classify_verdict(&parse_atom_levels(p)?, plan)?;
        Ok(PatternCheck {
            pattern: p.to_string(),
            expected,
            got,
        })
    })
    .collect()
}

/// Every atom pattern with agreeing atoms inside each group, in binary
/// order over groups (`gL` first).
pub fn consistent_patterns(plan: &WiringPlan) -> Vec<Vec<AtomLevel>> {
    let n = plan.groups.len();
    (0..1u64 << n)
        .map(|bits| {
            let mut atoms = vec![AtomLevel::GL; plan.atom_count];
            for (i, g) in plan.groups.iter().enumerate() {
                if bits >> (n - 1 - i) & 1 == 1 {
                    for &a in &g.atoms {
                        atoms[a] = AtomLevel::GR;
                    }
                }
            }
            atoms
        })
        .collect()
}

//! Protocol orchestration: wiring, exact branch enumeration, verdicts,
//! recovery and reports.

mod bitflip;
mod iterate;
mod localize;
mod phaseflip;
mod report;
mod trace;
mod verdict;
mod wiring;

pub use bitflip::{
    literal_after_reflection, recovery_for_branch, run_bitflip_epp, run_bitflip_epp_with, EppOptions, Schedule,
};
pub use iterate::{iterate_epp, IterationRow};
pub use localize::{locate_physical_bitflip, Localization};
pub use phaseflip::{run_phaseflip_correction, run_phaseflip_correction_with};
pub use report::{BranchDocument, BranchRecord, PurificationReport, ReportDocument};
pub use verdict::{
    check_reference_patterns, classify_verdict, consistent_patterns, pattern_string, reference_patterns, PatternCheck,
    PatternTable, Verdict,
};
pub use wiring::{build_wiring, mode_label, Group, Protocol, Side, WiringPlan};

pub(crate) use bitflip::{input_pairs, trace_input, Targets};
pub(crate) use phaseflip::trace_phaseflip_input;
pub(crate) use report::csv_err;
pub(crate) use trace::Sample;

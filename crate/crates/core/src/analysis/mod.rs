//! Closed-form targets, seeded Monte Carlo sampling, and sweeps over the
//! cavity parameters.

mod formulas;
mod montecarlo;
mod scan;
mod sweep;

pub use formulas::{fidelity_formula, success_probability_formula};
pub use montecarlo::{monte_carlo_run, MonteCarloEstimate, MonteCarloSpec, RNG_ALGORITHM};
pub use scan::{normalize_phase, reflection_scan, reflection_scan_to_csv, ReflectionRow};
pub use sweep::{sensitivity_sweep, SweepFixed, SweepResult, SweepRow, SweepSpec, SweepVariable};

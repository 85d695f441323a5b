use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::scan::{normalize_phase, opt_sig, row_status};
use crate::epp::{csv_err, run_bitflip_epp_with, run_phaseflip_correction_with, EppOptions, Protocol};
use crate::error::{invalid, Error, Result};
use crate::faraday::{
    empty_reflection_coefficient, reflection_coefficient, Absorption, CavityParams, ReflectionPhases,
};
use crate::logic_states::{check_m, ErrorKind, ErrorModel};
use crate::numfmt::fmt_sig;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweepVariable {
    #[serde(rename = "F")]
    Fidelity,
    #[serde(rename = "gamma_over_kappa")]
    GammaOverKappa,
    #[serde(rename = "lambda_over_kappa")]
    LambdaOverKappa,
    #[serde(rename = "detuning")]
    Detuning,
}

impl SweepVariable {
    pub fn id(self) -> &'static str {
        match self {
            SweepVariable::Fidelity => "F",
            SweepVariable::GammaOverKappa => "gamma_over_kappa",
            SweepVariable::LambdaOverKappa => "lambda_over_kappa",
            SweepVariable::Detuning => "detuning",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepVariable::Fidelity,
            SweepVariable::GammaOverKappa,
            SweepVariable::LambdaOverKappa,
            SweepVariable::Detuning,
        ]
        .into_iter()
        .find(|v| v.id() == s)
        .ok_or_else(|| invalid(format!("unknown sweep variable {s:?}")))
    }
}

/// Values of the parameters not being swept. Rates are in units of `κ`,
/// detuning is `(ω_p − ω_c)/κ` with `ω₀ = ω_c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepFixed<T: Real> {
    pub fidelity: T,
    pub gamma_over_kappa: T,
    pub lambda_over_kappa: T,
    pub detuning: T,
}

impl<T: Real> Default for SweepFixed<T> {
    /// The working point at `F = 0.8`.
    fn default() -> Self {
        SweepFixed {
            fidelity: T::lit(0.8),
            gamma_over_kappa: T::zero(),
            lambda_over_kappa: T::lit(0.5),
            detuning: T::lit(-0.5),
        }
    }
}

impl<T: Real> SweepFixed<T> {
    fn with(mut self, variable: SweepVariable, value: T) -> Self {
        match variable {
            SweepVariable::Fidelity => self.fidelity = value,
            SweepVariable::GammaOverKappa => self.gamma_over_kappa = value,
            SweepVariable::LambdaOverKappa => self.lambda_over_kappa = value,
            SweepVariable::Detuning => self.detuning = value,
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec<T: Real> {
    pub variable: SweepVariable,
    pub grid: Vec<T>,
    pub fixed: SweepFixed<T>,
    pub protocol: Protocol,
    pub m: usize,
    /// Only read by the bit-flip protocol.
    pub kind: ErrorKind,
    pub absorption: Absorption,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(variable: SweepVariable, grid: Vec<T>, protocol: Protocol, m: usize) -> Self {
        SweepSpec {
            variable,
            grid,
            fixed: SweepFixed::default(),
            protocol,
            m,
            kind: ErrorKind::LogicBitFlip,
            absorption: Absorption::PurePhase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(invalid("sweep grid is empty"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(invalid("sweep grid must be finite"));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("sweep grid must be strictly increasing"));
        }
        check_m(self.m)
    }
}

/// One grid point. Numeric fields are `None` when the row was flagged.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow<T: Real> {
    pub value: T,
    pub output_fidelity: Option<T>,
    pub success_probability: Option<T>,
    pub theta: Option<T>,
    pub theta0: Option<T>,
    /// Norm kept by the coupled reflection; 1 under the pure-phase model.
    pub r_abs: Option<T>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult<T: Real> {
    pub variable: SweepVariable,
    pub protocol: Protocol,
    pub m: usize,
    pub rows: Vec<SweepRow<T>>,
    /// Output fidelity never increases along the grid (flagged rows skipped).
    /// Observed, not enforced.
    pub monotone_non_increasing: bool,
}

fn evaluate<T: Real>(spec: &SweepSpec<T>, value: T) -> Result<SweepRow<T>> {
    let p = spec.fixed.with(spec.variable, value);
    let coupled = CavityParams::from_ratios(p.detuning, p.gamma_over_kappa, p.lambda_over_kappa)?;
    let empty = coupled.uncoupled();
    let r = reflection_coefficient(&coupled)?;
    let r0 = empty_reflection_coefficient(&empty)?;
    let phases = ReflectionPhases::from_params(&coupled, &empty, spec.absorption)?;
    let report = match spec.protocol {
        Protocol::BitFlipEpp => {
            let opts = EppOptions {
                phases,
                ..EppOptions::default()
            };
            run_bitflip_epp_with(&ErrorModel::new(spec.kind, p.fidelity)?, spec.m, &opts)?
        }
        Protocol::PhaseFlipDetect => run_phaseflip_correction_with(p.fidelity, spec.m, &phases)?,
    };
    Ok(SweepRow {
        value,
        output_fidelity: Some(report.output_fidelity),
        success_probability: Some(report.success_probability),
        theta: Some(normalize_phase(r.arg())),
        theta0: Some(normalize_phase(r0.arg())),
        r_abs: Some(match spec.absorption {
            Absorption::PurePhase => T::one(),
            Absorption::RetainModulus => r.norm(),
        }),
        status: "ok".into(),
    })
}

/// Reruns the protocol with reflection phases computed from the cavity
/// parameters at every grid point. Rows with singular or out-of-range
/// parameters are flagged and the sweep continues; internal errors abort.
pub fn sensitivity_sweep<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.validate()?;
    let rows = spec
        .grid
        .par_iter()
        .map(|&value| match evaluate(spec, value) {
            Ok(row) => Ok(row),
            Err(e) if e.is_internal() => Err(e),
            Err(e) => Ok(SweepRow {
                value,
                output_fidelity: None,
                success_probability: None,
                theta: None,
                theta0: None,
                r_abs: None,
                status: row_status(&e),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    let tol = T::norm_tolerance();
    let fids: Vec<T> = rows.iter().filter_map(|r| r.output_fidelity).collect();
    let monotone_non_increasing = fids.windows(2).all(|w| w[1] <= w[0] + tol);
    Ok(SweepResult {
        variable: spec.variable,
        protocol: spec.protocol,
        m: spec.m,
        rows,
        monotone_non_increasing,
    })
}

impl<T: Real> SweepResult<T> {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record([
            self.variable.id(),
            "output_fidelity",
            "success_probability",
            "theta",
            "theta0",
            "r_abs",
            "status",
        ])
        .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                fmt_sig(r.value.as_f64()),
                opt_sig(r.output_fidelity),
                opt_sig(r.success_probability),
                opt_sig(r.theta),
                opt_sig(r.theta0),
                opt_sig(r.r_abs),
                r.status.clone(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }

    /// JSON with every real as a 12-significant-digit string.
    pub fn to_json(&self) -> String {
        let s = |x: Option<T>| x.map(|v| fmt_sig(v.as_f64()));
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "value": fmt_sig(r.value.as_f64()),
                    "output_fidelity": s(r.output_fidelity),
                    "success_probability": s(r.success_probability),
                    "theta": s(r.theta),
                    "theta0": s(r.theta0),
                    "r_abs": s(r.r_abs),
                    "status": r.status,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "variable": self.variable.id(),
            "protocol": self.protocol.id(),
            "M": self.m,
            "monotone_non_increasing": self.monotone_non_increasing,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }
}

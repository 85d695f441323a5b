use serde::Serialize;

use crate::epp::csv_err;
use crate::error::{invalid, Error, Result};
use crate::faraday::{empty_reflection_coefficient, reflection_coefficient, CavityParams};
use crate::numfmt::fmt_sig;
use crate::scalar::Real;

/// Maps an angle into `(−π, π]`.
pub fn normalize_phase<T: Real>(x: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut y = x % two_pi;
    if y > pi {
        y -= two_pi;
    } else if y <= -pi {
        y += two_pi;
    }
    y
}

/// Reflection amplitudes at one detuning. Amplitude fields are `None` on
/// rows whose parameters were singular or invalid; `status` says why.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionRow<T: Real> {
    pub detuning: T,
    pub lambda_over_kappa: T,
    pub gamma_over_kappa: T,
    pub r_abs: Option<T>,
    pub theta: Option<T>,
    pub r0_abs: Option<T>,
    pub theta0: Option<T>,
    pub status: String,
}

pub(crate) fn row_status(e: &Error) -> String {
    match e {
        Error::Singular(_) => "singular".into(),
        _ => format!("invalid: {e}"),
    }
}

/// Coupled and empty-cavity reflection at each detuning `(ω_p − ω_c)/κ`,
/// with `ω₀ = ω_c`.
pub fn reflection_scan<T: Real>(detunings: &[T], lambda_over_kappa: T, gamma_over_kappa: T) -> Vec<ReflectionRow<T>> {
    detunings
        .iter()
        .map(|&d| {
            let mut row = ReflectionRow {
                detuning: d,
                lambda_over_kappa,
                gamma_over_kappa,
                r_abs: None,
                theta: None,
                r0_abs: None,
                theta0: None,
                status: "ok".into(),
            };
            let eval = || -> Result<_> {
                let p = CavityParams::from_ratios(d, gamma_over_kappa, lambda_over_kappa)?;
                Ok((reflection_coefficient(&p)?, empty_reflection_coefficient(&p)?))
            };
            match eval() {
                Ok((r, r0)) => {
                    row.r_abs = Some(r.norm());
                    row.theta = Some(normalize_phase(r.arg()));
                    row.r0_abs = Some(r0.norm());
                    row.theta0 = Some(normalize_phase(r0.arg()));
                }
                Err(e) => row.status = row_status(&e),
            }
            row
        })
        .collect()
}

pub(crate) fn opt_sig<T: Real>(x: Option<T>) -> String {
    x.map(|v| fmt_sig(v.as_f64())).unwrap_or_default()
}

pub fn reflection_scan_to_csv<T: Real>(rows: &[ReflectionRow<T>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "detuning",
        "lambda_over_kappa",
        "gamma_over_kappa",
        "r_abs",
        "theta",
        "r0_abs",
        "theta0",
        "status",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            fmt_sig(r.detuning.as_f64()),
            fmt_sig(r.lambda_over_kappa.as_f64()),
            fmt_sig(r.gamma_over_kappa.as_f64()),
            opt_sig(r.r_abs),
            opt_sig(r.theta),
            opt_sig(r.r0_abs),
            opt_sig(r.theta0),
            r.status.clone(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn working_point_has_theta_pi() {
        let rows = reflection_scan(&[-0.5f64], 0.5, 0.0);
        assert_eq!(rows[0].status, "ok");
        assert!((rows[0].theta.unwrap() - PI).abs() < 1e-12);
        assert!((rows[0].theta0.unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn phase_crosses_pi_near_working_point() {
        let grid: Vec<f64> = (0..=40).map(|k| -1.0 + 0.025 * k as f64).collect();
        let rows = reflection_scan(&grid, 0.5, 0.0);
        let closest = rows
            .iter()
            .min_by(|a, b| {
                let da = PI - a.theta.unwrap().abs();
                let db = PI - b.theta.unwrap().abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        assert!((closest.detuning + 0.5).abs() < 1e-12);
    }

    #[test]
    fn singular_row_is_flagged() {
        // Resonant decoupled atom without decay: the denominator vanishes.
        let rows = reflection_scan(&[0.0f64, 1.0], 0.0, 0.0);
        assert_eq!(rows[0].status, "singular");
        assert!(rows[0].theta.is_none());
        assert_eq!(rows[1].status, "ok");
    }

    #[test]
    fn normalize_maps_minus_pi_to_pi() {
        assert_eq!(normalize_phase(-PI), PI);
        assert_eq!(normalize_phase(PI), PI);
        assert!((normalize_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let text = reflection_scan_to_csv(&reflection_scan(&[-0.5f64, 0.0], 0.5, 0.0)).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("detuning,"));
        assert!(!text.contains('\r'));
    }
}

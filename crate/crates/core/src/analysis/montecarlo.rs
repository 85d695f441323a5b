use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::epp::{
    build_wiring, input_pairs, trace_input, trace_phaseflip_input, EppOptions, Protocol, Sample, Targets, Verdict,
    WiringPlan,
};
use crate::error::{invalid, Result};
use crate::faraday::ReflectionPhases;
use crate::hilbert::SparseState;
use crate::logic_states::{check_fidelity, check_m, mixed_input, ErrorKind, ErrorModel};
use crate::numfmt::fmt_sig;
use crate::scalar::Real;

/// Trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` moved to stream
/// `t`, so the result does not depend on scheduling.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=trial";

#[derive(Clone, Debug)]
pub struct MonteCarloSpec<T: Real> {
    pub trials: u64,
    pub seed: u64,
    pub protocol: Protocol,
    pub fidelity: T,
    pub m: usize,
    /// Only read by the bit-flip protocol.
    pub kind: ErrorKind,
    pub phases: ReflectionPhases<T>,
}

impl<T: Real> MonteCarloSpec<T> {
    pub fn new(protocol: Protocol, fidelity: T, m: usize, trials: u64, seed: u64) -> Self {
        MonteCarloSpec {
            trials,
            seed,
            protocol,
            fidelity,
            m,
            kind: ErrorKind::LogicBitFlip,
            phases: ReflectionPhases::ideal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub protocol: Protocol,
    pub trials: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub successes: u64,
    pub success_rate: f64,
    pub success_stderr: f64,
    /// Mean target overlap over successful trials; `None` without any.
    pub fidelity: Option<f64>,
    pub fidelity_stderr: Option<f64>,
}

impl MonteCarloEstimate {
    /// JSON with every real as a 12-significant-digit string.
    pub fn to_json(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_sig);
        let doc = serde_json::json!({
            "protocol": self.protocol.id(),
            "trials": self.trials,
            "seed": self.seed,
            "rng": self.rng,
            "successes": self.successes,
            "success_rate": fmt_sig(self.success_rate),
            "success_stderr": fmt_sig(self.success_stderr),
            "fidelity": opt(self.fidelity),
            "fidelity_stderr": opt(self.fidelity_stderr),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let opt = |x: Option<f64>| x.map(fmt_sig).unwrap_or_default();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record([
            "protocol",
            "trials",
            "seed",
            "rng",
            "successes",
            "success_rate",
            "success_stderr",
            "fidelity",
            "fidelity_stderr",
        ])
        .map_err(crate::epp::csv_err)?;
        w.write_record([
            self.protocol.id().to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
            self.rng.to_string(),
            self.successes.to_string(),
            fmt_sig(self.success_rate),
            fmt_sig(self.success_stderr),
            opt(self.fidelity),
            opt(self.fidelity_stderr),
        ])
        .map_err(crate::epp::csv_err)?;
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }
}

fn pick<T: Real, X: Clone>(rng: &mut ChaCha8Rng, items: &[(T, X)]) -> X {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (p, x) in items {
        acc += p.as_f64();
        if u < acc {
            return x.clone();
        }
    }
    items.last().expect("nonempty mixture").1.clone()
}

/// Per-run data shared by every trial.
struct Context<T: Real> {
    plan: WiringPlan,
    opts: EppOptions<T>,
    targets: Targets<T>,
    inputs: Vec<(T, SparseState<T>)>,
}

/// Outcome of one trial: the target overlap when the pair is kept.
fn trial<T: Real>(spec: &MonteCarloSpec<T>, ctx: &Context<T>, index: u64) -> Result<Option<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let input = pick(&mut rng, &ctx.inputs);
    let leaves = match spec.protocol {
        Protocol::BitFlipEpp => trace_input(&input, &ctx.plan, &ctx.opts, &ctx.targets, &mut Sample(&mut rng))?,
        Protocol::PhaseFlipDetect => trace_phaseflip_input(&input, &ctx.plan, &spec.phases, &mut Sample(&mut rng))?,
    };
    let leaf = leaves.into_iter().next().expect("sampling follows one branch");
    // A lossy reflection keeps the photon with probability `weight`.
    let survives = leaf.weight >= T::one() || rng.gen::<f64>() < leaf.weight.as_f64();
    if leaf.verdict != Verdict::Success || !survives {
        return Ok(None);
    }
    let post = leaf.post.expect("success leaves carry a state");
    Ok(Some(post.overlap(&ctx.targets.phi_plus)?.as_f64()))
}

/// Samples whole protocol runs: an input combination by its mixture weight,
/// then one outcome per measurement by its Born probability.
pub fn monte_carlo_run<T: Real>(spec: &MonteCarloSpec<T>) -> Result<MonteCarloEstimate> {
    if spec.trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    check_fidelity(spec.fidelity)?;
    check_m(spec.m)?;
    let inputs = match spec.protocol {
        Protocol::BitFlipEpp => input_pairs(&ErrorModel::new(spec.kind, spec.fidelity)?, spec.m)?,
        Protocol::PhaseFlipDetect => {
            let model = ErrorModel::new(ErrorKind::LogicPhaseFlip, spec.fidelity)?;
            mixed_input(&model, spec.m)?.branches().to_vec()
        }
    };
    let ctx = Context {
        plan: build_wiring(spec.m, spec.protocol)?,
        opts: EppOptions {
            phases: spec.phases,
            ..EppOptions::default()
        },
        targets: Targets::new(spec.m)?,
        inputs,
    };

    let outcomes: Vec<Option<f64>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| trial(spec, &ctx, t))
        .collect::<Result<_>>()?;

    let n = spec.trials as f64;
    let kept: Vec<f64> = outcomes.into_iter().flatten().collect();
    let successes = kept.len() as u64;
    let rate = successes as f64 / n;
    let (fidelity, fidelity_stderr) = if kept.is_empty() {
        (None, None)
    } else {
        let k = kept.len() as f64;
        let mean = kept.iter().sum::<f64>() / k;
        let var = kept.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
        (Some(mean), Some((var / k).sqrt()))
    };
    Ok(MonteCarloEstimate {
        protocol: spec.protocol,
        trials: spec.trials,
        seed: spec.seed,
        rng: RNG_ALGORITHM,
        successes,
        success_rate: rate,
        success_stderr: (rate * (1.0 - rate) / n).sqrt(),
        fidelity,
        fidelity_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_is_bernoulli() {
        for seed in 0..5 {
            let est = monte_carlo_run(&MonteCarloSpec::new(Protocol::BitFlipEpp, 0.8, 2, 1, seed)).unwrap();
            assert!(est.success_rate == 0.0 || est.success_rate == 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let spec = MonteCarloSpec::new(Protocol::BitFlipEpp, 0.7, 2, 2000, 42);
        assert_eq!(monte_carlo_run(&spec).unwrap(), monte_carlo_run(&spec).unwrap());
    }

    #[test]
    fn fixed_point_at_half() {
        let est = monte_carlo_run(&MonteCarloSpec::new(Protocol::BitFlipEpp, 0.5, 2, 20_000, 7)).unwrap();
        let f = est.fidelity.unwrap();
        assert!((f - 0.5).abs() <= 4.0 * est.fidelity_stderr.unwrap());
    }

    #[test]
    fn phase_flip_always_succeeds() {
        let est = monte_carlo_run(&MonteCarloSpec::new(Protocol::PhaseFlipDetect, 0.6, 3, 500, 1)).unwrap();
        assert_eq!(est.successes, 500);
        assert!((est.fidelity.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(monte_carlo_run(&MonteCarloSpec::new(Protocol::BitFlipEpp, 0.8, 2, 0, 0)).is_err());
    }

    #[test]
    fn csv_has_one_row() {
        let est = monte_carlo_run(&MonteCarloSpec::new(Protocol::BitFlipEpp, 0.8, 2, 100, 3)).unwrap();
        let text = est.to_csv().unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains('\r'));
    }
}

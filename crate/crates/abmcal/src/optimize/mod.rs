//! Heuristic calibrators: Nelder-Mead simplex with threshold accepting, and
//! a real-valued simple genetic algorithm.
//!
//! Both optimizers treat integer-valued parameters (trader counts) as reals;
//! rounding happens inside the objective at evaluation time so the search
//! geometry stays meaningful. Candidate points outside the box bounds are
//! clamped componentwise.

mod ga;
mod nm;

pub use ga::{ga_run, GaConfig, GaResult};
pub use nm::{
    nm_step, nm_ta_run, nm_transform, ta_shift, ta_shift_applied, NmTaResult, Simplex,
    StepOutcome, TransformKind,
};

use serde::{Deserialize, Serialize};

use crate::objective::{objective_with_reps, FreeParamSet, ObjectiveError, ObjectiveSpec};
use crate::stats::t_critical_95;

pub use crate::objective::init_free_params;

/// A minimization target over a free-parameter box.
///
/// `replications` is the Monte Carlo replication count for noisy objectives;
/// deterministic test objectives ignore it.
pub trait Objective: Sync {
    fn space(&self) -> &FreeParamSet;
    fn eval(&self, theta: &[f64], replications: usize) -> Result<f64, ObjectiveError>;
}

/// The calibration objective bound to a master seed. Repeated evaluations at
/// the same point reuse the same simulation seeds (common random numbers),
/// which keeps comparisons between nearby candidates consistent within a
/// run.
///
/// Candidates whose simulated series cannot be summarized (overflowing
/// drift regimes, degenerate constant prices) evaluate to infinity so the
/// search steers away instead of aborting.
pub struct MsmObjective<'a> {
    pub spec: &'a ObjectiveSpec,
    pub master_seed: u64,
}

impl Objective for MsmObjective<'_> {
    fn space(&self) -> &FreeParamSet {
        &self.spec.free
    }

    fn eval(&self, theta: &[f64], replications: usize) -> Result<f64, ObjectiveError> {
        match objective_with_reps(self.spec, theta, self.master_seed, replications) {
            Ok(f) => Ok(f),
            Err(ObjectiveError::Moment(_)) => Ok(f64::INFINITY),
            Err(other) => Err(other),
        }
    }
}

/// A plain function objective for tests and benchmarks.
pub struct FnObjective<F: Fn(&[f64]) -> f64 + Sync> {
    pub f: F,
    pub space: FreeParamSet,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn space(&self) -> &FreeParamSet {
        &self.space
    }

    fn eval(&self, theta: &[f64], _replications: usize) -> Result<f64, ObjectiveError> {
        Ok((self.f)(theta))
    }
}

/// Threshold-accepting schedule: for each round, a threshold and a
/// replication count; a fixed number of shift steps per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSchedule {
    pub thresholds: Vec<f64>,
    pub replications: Vec<usize>,
    pub steps_per_round: usize,
    /// Probability that an iteration runs the TA phase instead of a simplex
    /// step.
    pub ta_probability: f64,
}

impl Default for ThresholdSchedule {
    /// Three rounds of five steps with thresholds 1/5, 1/10, 0 and 3, 4, 5
    /// replications; TA phase probability 0.15.
    fn default() -> Self {
        ThresholdSchedule {
            thresholds: vec![0.2, 0.1, 0.0],
            replications: vec![3, 4, 5],
            steps_per_round: 5,
            ta_probability: 0.15,
        }
    }
}

impl ThresholdSchedule {
    pub fn validate(&self) -> Result<(), ObjectiveError> {
        if self.thresholds.is_empty() || self.thresholds.len() != self.replications.len() {
            return Err(ObjectiveError::InvalidSpec(
                "thresholds and replications must be non-empty and equal length".into(),
            ));
        }
        if self.thresholds.windows(2).any(|w| w[1] > w[0]) {
            return Err(ObjectiveError::InvalidSpec("thresholds must be non-increasing".into()));
        }
        if *self.thresholds.last().unwrap() != 0.0 {
            return Err(ObjectiveError::InvalidSpec("final threshold must be zero".into()));
        }
        if !(0.0..=1.0).contains(&self.ta_probability) {
            return Err(ObjectiveError::InvalidSpec("ta_probability must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.thresholds.len()
    }

    /// Replication count used for simplex-branch evaluations (the final,
    /// largest round count).
    pub fn simplex_replications(&self) -> usize {
        *self.replications.last().unwrap()
    }
}

/// Result file written by the `calibrate` pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub method: String,
    pub free_params: Vec<String>,
    pub best_theta: Vec<f64>,
    pub best_f: f64,
    pub iterations: usize,
    /// Best objective value found so far, after each iteration/generation.
    pub trace: Vec<f64>,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// Per-parameter 95% confidence interval in the `mean +/- t * s / sqrt(n)`
/// form, over repeated independent calibration runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub name: String,
    pub mean: f64,
    pub std_err: f64,
    pub half_width: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Summarize repeated runs' best parameter vectors into per-parameter 95%
/// confidence intervals.
pub fn confidence_intervals(
    names: &[String],
    runs: &[Vec<f64>],
) -> Result<Vec<ConfidenceInterval>, ObjectiveError> {
    if runs.len() < 2 {
        return Err(ObjectiveError::InvalidSpec(
            "confidence intervals need at least two runs".into(),
        ));
    }
    let n = runs.len() as f64;
    let t_star = t_critical_95(runs.len() - 1);
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let values: Vec<f64> = runs.iter().map(|r| r[i]).collect();
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let std_err = (var / n).sqrt();
            let half_width = t_star * std_err;
            Ok(ConfidenceInterval {
                name: name.clone(),
                mean,
                std_err,
                half_width,
                lo: mean - half_width,
                hi: mean + half_width,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schedule_is_valid_and_matches_documented_constants() {
        let s = ThresholdSchedule::default();
        s.validate().unwrap();
        assert_eq!(s.thresholds, vec![0.2, 0.1, 0.0]);
        assert_eq!(s.replications, vec![3, 4, 5]);
        assert_eq!(s.steps_per_round, 5);
        assert_eq!(s.rounds(), 3);
        assert_eq!(s.simplex_replications(), 5);
        assert!((s.ta_probability - 0.15).abs() < 1e-12);
    }

    #[test]
    fn bad_schedules_rejected() {
        let increasing = ThresholdSchedule {
            thresholds: vec![0.1, 0.2, 0.0],
            ..ThresholdSchedule::default()
        };
        assert!(increasing.validate().is_err());
        let nonzero_tail = ThresholdSchedule {
            thresholds: vec![0.2, 0.1, 0.05],
            ..ThresholdSchedule::default()
        };
        assert!(nonzero_tail.validate().is_err());
    }

    #[test]
    fn msm_objective_survives_extreme_drift_corners() {
        use crate::agents::ModelParams;
        use crate::objective::WeightMatrix;
        use rand::SeedableRng;
        use rand_chacha::ChaCha12Rng;
        use rand_distr::{Distribution, StandardNormal};

        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut x = 100.0f64;
        let reference: Vec<f64> = (0..2300)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                x *= 1.0 + 0.0005 * z;
                x
            })
            .collect();
        let mut base = ModelParams::stylized_baseline();
        base.n_l = 300;
        base.n_h = 30;
        let spec = ObjectiveSpec::from_reference_prices(
            &reference,
            WeightMatrix::identity(),
            1,
            base,
            FreeParamSet::with_default_bounds(&["delta", "sigma_z"]).unwrap(),
        )
        .unwrap();
        let obj = MsmObjective { spec: &spec, master_seed: 3 };
        // The box corners drive prices across dozens of orders of magnitude;
        // every evaluation must still terminate with an ordered value.
        for corner in [[0.1, 0.1], [0.1, 0.0], [0.0, 0.1], [0.0, 0.0]] {
            let f = obj.eval(&corner, 1).unwrap();
            assert!(f >= 0.0, "corner {corner:?} gave {f}");
        }
    }

    #[test]
    fn confidence_interval_shape() {
        let names = vec!["a".to_string(), "b".to_string()];
        let runs = vec![vec![1.0, 10.0], vec![2.0, 12.0], vec![3.0, 14.0]];
        let cis = confidence_intervals(&names, &runs).unwrap();
        assert_eq!(cis.len(), 2);
        assert!((cis[0].mean - 2.0).abs() < 1e-12);
        // s = 1, n = 3, critical value 4.303 at 2 degrees of freedom
        assert!((cis[0].std_err - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((cis[0].half_width - 4.303 / 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(cis[0].lo, cis[0].mean - cis[0].half_width);
        assert!((cis[1].mean - 12.0).abs() < 1e-12);
    }
}

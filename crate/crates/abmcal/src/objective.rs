//! Method-of-simulated-moments objective.
//!
//! A reference log-price series is compressed into five estimated moments.
//! A moving block bootstrap of the reference series yields the sampling
//! covariance of those moments; its inverse is the weight matrix `W`. The
//! objective at a candidate parameter vector is `f = G' W G`, where `G`
//! averages, over Monte Carlo replications, the gap between simulated and
//! estimated moments.
//!
//! Matrix work is done with a Jacobi eigendecomposition: the inverse is
//! assembled from eigenpairs so symmetry is preserved exactly, and the
//! condition number falls out of the spectrum for free.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{ModelParams, ParamError};
use crate::engine::run_simulation;
use crate::moments::{log_prices, moment_vector, MomentError, MomentVector};
use crate::rng::{derive_seed, hash_theta, splitmix64};

/// Number of moments in the objective.
pub const K: usize = 5;
/// Condition number above which a weight matrix is flagged as
/// ill-conditioned (a warning, not an error).
pub const CONDITION_WARN: f64 = 1e8;
/// Condition number above which inversion is refused.
pub const CONDITION_REJECT: f64 = 1e12;

pub type Matrix = [[f64; K]; K];

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive semi-definite (eigenvalue {0:.3e})")]
    NotPositiveSemiDefinite(f64),
    #[error("covariance is numerically singular (condition number {condition:.3e})")]
    NearSingular { condition: f64 },
    #[error("block length {b} exceeds series length {len}")]
    BadBlockLength { b: usize, len: usize },
    #[error("invalid objective specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// The MSM weight matrix: the inverse of the bootstrap covariance of the
/// estimated moments, together with that covariance's condition number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    pub entries: Matrix,
    pub source_condition_number: f64,
}

impl WeightMatrix {
    pub fn identity() -> Self {
        let mut entries = [[0.0; K]; K];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        WeightMatrix { entries, source_condition_number: 1.0 }
    }

    /// True when the source covariance was unusually close to singular.
    pub fn is_ill_conditioned(&self) -> bool {
        self.source_condition_number > CONDITION_WARN
    }

    /// Evaluate the quadratic form `g' W g`, clamped at zero.
    pub fn quadratic_form(&self, g: &[f64; K]) -> f64 {
        let mut acc = 0.0;
        for i in 0..K {
            for j in 0..K {
                acc += g[i] * self.entries[i][j] * g[j];
            }
        }
        acc.max(0.0)
    }
}

/// Serialized form of a weight matrix plus the bootstrap settings that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsFile {
    /// Row-major entries of the 5x5 weight matrix.
    pub entries: Vec<f64>,
    pub condition_number: f64,
    pub b: usize,
    pub n: usize,
    pub seed: u64,
}

impl WeightsFile {
    pub fn new(w: &WeightMatrix, b: usize, n: usize, seed: u64) -> Self {
        WeightsFile {
            entries: w.entries.iter().flatten().copied().collect(),
            condition_number: w.source_condition_number,
            b,
            n,
            seed,
        }
    }

    pub fn to_weight_matrix(&self) -> Result<WeightMatrix, ObjectiveError> {
        if self.entries.len() != K * K {
            return Err(ObjectiveError::InvalidSpec(format!(
                "weight file must hold {} entries, found {}",
                K * K,
                self.entries.len()
            )));
        }
        let mut entries = [[0.0; K]; K];
        for i in 0..K {
            for j in 0..K {
                entries[i][j] = self.entries[i * K + j];
            }
        }
        Ok(WeightMatrix { entries, source_condition_number: self.condition_number })
    }
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// (eigenvalues, eigenvectors as columns).
fn jacobi_eigen(mut a: Matrix) -> ([f64; K], Matrix) {
    let mut v = [[0.0; K]; K];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..K {
            for j in (i + 1)..K {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-300 {
            break;
        }
        for p in 0..K {
            for q in (p + 1)..K {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..K {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..K {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..K {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut eig = [0.0; K];
    for i in 0..K {
        eig[i] = a[i][i];
    }
    (eig, v)
}

/// Invert a symmetric covariance matrix into a weight matrix.
///
/// The inverse is rebuilt from the eigendecomposition, which keeps it exactly
/// symmetric; the recorded condition number is the spectral ratio
/// `max|lambda| / min|lambda|`.
pub fn weight_matrix(cov: &Matrix) -> Result<WeightMatrix, ObjectiveError> {
    let scale = max_abs(cov).max(f64::MIN_POSITIVE);
    let mut asym = 0.0f64;
    for i in 0..K {
        for j in (i + 1)..K {
            asym = asym.max((cov[i][j] - cov[j][i]).abs());
        }
    }
    if asym / scale > 1e-9 {
        return Err(ObjectiveError::NotSymmetric(asym / scale));
    }
    let (eig, v) = jacobi_eigen(*cov);
    let lam_max = eig.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let lam_min = eig.iter().fold(f64::INFINITY, |a, &x| a.min(x.abs()));
    if let Some(&bad) = eig.iter().find(|&&l| l < -1e-9 * lam_max) {
        return Err(ObjectiveError::NotPositiveSemiDefinite(bad));
    }
    let condition = if lam_min > 0.0 { lam_max / lam_min } else { f64::INFINITY };
    if condition >= CONDITION_REJECT || condition.is_nan() {
        return Err(ObjectiveError::NearSingular { condition });
    }
    let mut inv = [[0.0; K]; K];
    for i in 0..K {
        for j in i..K {
            let mut acc = 0.0;
            for k in 0..K {
                acc += v[i][k] * v[j][k] / eig[k];
            }
            inv[i][j] = acc;
            inv[j][i] = acc;
        }
    }
    Ok(WeightMatrix { entries: inv, source_condition_number: condition })
}

/// Draw one moving-block-bootstrap resample of `series`: blocks of length
/// `b` at uniform random offsets, concatenated and truncated to the original
/// length.
pub fn bootstrap_sample<R: Rng>(series: &[f64], b: usize, rng: &mut R) -> Vec<f64> {
    let len = series.len();
    debug_assert!(b >= 1 && b <= len);
    let mut out = Vec::with_capacity(len + b);
    while out.len() < len {
        let start = rng.random_range(0..=len - b);
        out.extend_from_slice(&series[start..start + b]);
    }
    out.truncate(len);
    out
}

/// Generate `n` moving-block-bootstrap resamples.
pub fn block_bootstrap<R: Rng>(
    series: &[f64],
    b: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, ObjectiveError> {
    if b < 1 || b > series.len() {
        return Err(ObjectiveError::BadBlockLength { b, len: series.len() });
    }
    Ok((0..n).map(|_| bootstrap_sample(series, b, rng)).collect())
}

/// Bootstrap distributions of the five moments plus their empirical
/// covariance.
#[derive(Debug, Clone)]
pub struct BootstrapCovariance {
    pub cov: Matrix,
    pub moment_samples: Vec<MomentVector>,
}

/// Estimate the sampling covariance of the five moments by a moving block
/// bootstrap of the series. Sample `k` draws from a generator seeded by
/// `(seed, k)`, so the result is reproducible and independent of the number
/// of worker threads. The KS entry of each bootstrap moment vector compares
/// the resample against the original series.
pub fn bootstrap_covariance(
    series: &[f64],
    b: usize,
    n: usize,
    seed: u64,
) -> Result<BootstrapCovariance, ObjectiveError> {
    if b < 1 || b > series.len() {
        return Err(ObjectiveError::BadBlockLength { b, len: series.len() });
    }
    if n < 2 {
        return Err(ObjectiveError::InvalidSpec("need at least 2 bootstrap samples".into()));
    }
    let moment_samples: Vec<MomentVector> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, k as u64));
            let sample = bootstrap_sample(series, b, &mut rng);
            moment_vector(&sample, series)
        })
        .collect::<Result<_, _>>()?;
    let cov = covariance_of(&moment_samples);
    Ok(BootstrapCovariance { cov, moment_samples })
}

fn covariance_of(samples: &[MomentVector]) -> Matrix {
    let n = samples.len() as f64;
    let mut mean = [0.0; K];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(s.as_array()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut cov = [[0.0; K]; K];
    for s in samples {
        let a = s.as_array();
        for i in 0..K {
            for j in i..K {
                cov[i][j] += (a[i] - mean[i]) * (a[j] - mean[j]);
            }
        }
    }
    for i in 0..K {
        for j in i..K {
            cov[i][j] /= n - 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    cov
}

/// One free parameter with its box bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParam {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub integer: bool,
}

impl FreeParam {
    pub fn new(name: &str, lo: f64, hi: f64, integer: bool) -> Result<Self, ObjectiveError> {
        // Probe the name against the parameter vector.
        let mut probe = ModelParams::stylized_baseline();
        let current = probe.get(name)?;
        probe.set(name, current)?;
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(ObjectiveError::InvalidSpec(format!(
                "bounds for {name} must satisfy lo < hi"
            )));
        }
        Ok(FreeParam { name: name.to_string(), lo, hi, integer })
    }

    /// Standard search box: trader counts are integers in [100, 10000],
    /// everything else lies in [0, 0.1].
    pub fn with_default_bounds(name: &str) -> Result<Self, ObjectiveError> {
        match name {
            "N_L" | "N_H" => FreeParam::new(name, 100.0, 10_000.0, true),
            _ => FreeParam::new(name, 0.0, 0.1, false),
        }
    }

    /// Clamp into bounds, rounding integer-valued parameters.
    pub fn constrain(&self, value: f64) -> f64 {
        let v = value.clamp(self.lo, self.hi);
        if self.integer {
            v.round()
        } else {
            v
        }
    }
}

/// An ordered set of free parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParamSet {
    pub params: Vec<FreeParam>,
}

impl FreeParamSet {
    pub fn new(params: Vec<FreeParam>) -> Result<Self, ObjectiveError> {
        if params.is_empty() {
            return Err(ObjectiveError::InvalidSpec("no free parameters".into()));
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].iter().any(|q| q.name == p.name) {
                return Err(ObjectiveError::InvalidSpec(format!(
                    "duplicate free parameter {}",
                    p.name
                )));
            }
        }
        Ok(FreeParamSet { params })
    }

    /// Build from names with the standard bounds.
    pub fn with_default_bounds(names: &[&str]) -> Result<Self, ObjectiveError> {
        FreeParamSet::new(
            names
                .iter()
                .map(|n| FreeParam::with_default_bounds(n))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.params.iter().map(|p| p.name.clone()).collect()
    }

    /// Clamp a candidate vector into bounds, rounding integers.
    pub fn constrain(&self, theta: &[f64]) -> Vec<f64> {
        assert_eq!(theta.len(), self.params.len());
        theta
            .iter()
            .zip(&self.params)
            .map(|(&v, p)| p.constrain(v))
            .collect()
    }

    /// Clamp into bounds without rounding; optimizers keep integer-valued
    /// parameters continuous between evaluations.
    pub fn clamp(&self, theta: &[f64]) -> Vec<f64> {
        assert_eq!(theta.len(), self.params.len());
        theta
            .iter()
            .zip(&self.params)
            .map(|(&v, p)| v.clamp(p.lo, p.hi))
            .collect()
    }
}

/// Draw an initial candidate: integer parameters uniform over their integer
/// range, continuous parameters uniform over their interval.
pub fn init_free_params<R: Rng>(set: &FreeParamSet, rng: &mut R) -> Vec<f64> {
    set.params
        .iter()
        .map(|p| {
            if p.integer {
                rng.random_range(p.lo as i64..=p.hi as i64) as f64
            } else {
                rng.random_range(p.lo..p.hi)
            }
        })
        .collect()
}

/// Everything needed to evaluate the calibration objective.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub reference_log_prices: Vec<f64>,
    pub estimated_moments: MomentVector,
    pub weights: WeightMatrix,
    pub replications: usize,
    pub base_params: ModelParams,
    pub free: FreeParamSet,
}

impl ObjectiveSpec {
    /// Build a spec from a reference price series. The session count is
    /// matched to the reference length and the simulation price anchors are
    /// seeded from the first two reference prices.
    pub fn from_reference_prices(
        reference_prices: &[f64],
        weights: WeightMatrix,
        replications: usize,
        mut base_params: ModelParams,
        free: FreeParamSet,
    ) -> Result<Self, ObjectiveError> {
        if reference_prices.len() < 100 {
            return Err(ObjectiveError::InvalidSpec(
                "reference series must hold at least 100 prices".into(),
            ));
        }
        if replications < 1 {
            return Err(ObjectiveError::InvalidSpec("need at least one replication".into()));
        }
        let reference_log_prices = log_prices(reference_prices)?;
        base_params.t = reference_prices.len() as u32;
        base_params.p0 = reference_prices[0];
        base_params.f0 = reference_prices[0];
        base_params.p1 = reference_prices[1];
        let estimated_moments = moment_vector(&reference_log_prices, &reference_log_prices)?;
        Ok(ObjectiveSpec {
            reference_log_prices,
            estimated_moments,
            weights,
            replications,
            base_params,
            free,
        })
    }

    /// Instantiate the full parameter vector at a candidate point.
    pub fn apply_theta(&self, theta: &[f64]) -> Result<ModelParams, ObjectiveError> {
        let constrained = self.free.constrain(theta);
        let mut params = self.base_params.clone();
        for (p, v) in self.free.params.iter().zip(&constrained) {
            params.set(&p.name, *v)?;
        }
        Ok(params)
    }

    fn eval_seed(&self, theta_constrained: &[f64], master_seed: u64) -> u64 {
        splitmix64(master_seed ^ hash_theta(theta_constrained))
    }
}

/// Average gap between simulated and estimated moments over `replications`
/// Monte Carlo runs.
pub fn g_hat(
    spec: &ObjectiveSpec,
    theta: &[f64],
    master_seed: u64,
) -> Result<[f64; K], ObjectiveError> {
    g_hat_with_reps(spec, theta, master_seed, spec.replications)
}

/// `g_hat` with an explicit replication count (the threshold-accepting
/// schedule varies it round by round).
pub fn g_hat_with_reps(
    spec: &ObjectiveSpec,
    theta: &[f64],
    master_seed: u64,
    replications: usize,
) -> Result<[f64; K], ObjectiveError> {
    let constrained = spec.free.constrain(theta);
    let params = spec.apply_theta(&constrained)?;
    params.validate()?;
    let base = spec.eval_seed(&constrained, master_seed);
    let sim_moments: Vec<MomentVector> = (0..replications)
        .into_par_iter()
        .map(|k| {
            let sim = run_simulation(&params, derive_seed(base, k as u64))
                .map_err(ObjectiveError::from)?;
            let logs = log_prices(sim.simulated_prices()).map_err(ObjectiveError::from)?;
            moment_vector(&logs, &spec.reference_log_prices).map_err(ObjectiveError::from)
        })
        .collect::<Result<_, ObjectiveError>>()?;
    let mut g = [0.0; K];
    let m_e = spec.estimated_moments.as_array();
    for sm in &sim_moments {
        for (gi, v) in g.iter_mut().zip(sm.as_array()) {
            *gi += v;
        }
    }
    for (gi, e) in g.iter_mut().zip(m_e) {
        *gi = *gi / replications as f64 - e;
    }
    Ok(g)
}

/// The MSM objective `f = G' W G` at a candidate point.
pub fn objective(
    spec: &ObjectiveSpec,
    theta: &[f64],
    master_seed: u64,
) -> Result<f64, ObjectiveError> {
    objective_with_reps(spec, theta, master_seed, spec.replications)
}

/// `objective` with an explicit replication count.
pub fn objective_with_reps(
    spec: &ObjectiveSpec,
    theta: &[f64],
    master_seed: u64,
    replications: usize,
) -> Result<f64, ObjectiveError> {
    let g = g_hat_with_reps(spec, theta, master_seed, replications)?;
    Ok(spec.weights.quadratic_form(&g))
}

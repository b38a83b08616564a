//! Nelder-Mead simplex steps and the combined simplex + threshold-accepting
//! loop.
//!
//! Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink
//! 1/2. Each step considers the reflection of the worst vertex through the
//! mean of the others, expands on strong improvement, contracts otherwise,
//! and shrinks the whole simplex toward the best vertex when nothing else
//! helps. Threshold accepting occasionally shifts one coordinate of the
//! whole simplex by a random fraction of its mean and accepts the shift if
//! the best vertex value worsens by no more than the round's threshold.

use rand::Rng;

use super::{Objective, ThresholdSchedule};
use crate::objective::{init_free_params, FreeParamSet, ObjectiveError};

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// The four point transformations of a simplex step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Reflect,
    Expand,
    OutContract,
    InContract,
}

/// What an `nm_step` did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Replaced(TransformKind),
    Shrunk,
}

/// A simplex over the free-parameter space with cached objective values,
/// kept sorted best-first.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl Simplex {
    /// Random initial simplex of `dim + 1` vertices, evaluated with
    /// `replications`.
    pub fn init_random<O: Objective, R: Rng>(
        obj: &O,
        replications: usize,
        rng: &mut R,
    ) -> Result<Self, ObjectiveError> {
        let dim = obj.space().len();
        let vertices: Vec<Vec<f64>> = (0..=dim)
            .map(|_| init_free_params(obj.space(), rng))
            .collect();
        Simplex::from_vertices(vertices, obj, replications)
    }

    /// Evaluate the given vertices and sort best-first.
    pub fn from_vertices<O: Objective>(
        vertices: Vec<Vec<f64>>,
        obj: &O,
        replications: usize,
    ) -> Result<Self, ObjectiveError> {
        let dim = obj.space().len();
        if vertices.len() != dim + 1 {
            return Err(ObjectiveError::InvalidSpec(format!(
                "simplex needs {} vertices for {} free parameters, got {}",
                dim + 1,
                dim,
                vertices.len()
            )));
        }
        let values = vertices
            .iter()
            .map(|v| obj.eval(v, replications))
            .collect::<Result<Vec<_>, _>>()?;
        let mut s = Simplex { vertices, values };
        s.sort();
        Ok(s)
    }

    fn sort(&mut self) {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].partial_cmp(&self.values[b]).unwrap());
        self.vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        self.values = order.iter().map(|&i| self.values[i]).collect();
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn best(&self) -> (&[f64], f64) {
        (&self.vertices[0], self.values[0])
    }

    /// Mean of the best `dim` vertices (everything except the worst).
    pub fn centroid_of_best(&self) -> Vec<f64> {
        let n = self.dim();
        let mut c = vec![0.0; n];
        for v in &self.vertices[..n] {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        for ci in c.iter_mut() {
            *ci /= n as f64;
        }
        c
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let dist: f64 = self.vertices[i]
                    .iter()
                    .zip(&self.vertices[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                d = d.max(dist);
            }
        }
        d
    }
}

/// Compute a candidate point for a sorted simplex: the worst vertex mapped
/// through the centroid of the rest.
pub fn nm_transform(simplex: &Simplex, kind: TransformKind) -> Vec<f64> {
    let centroid = simplex.centroid_of_best();
    let worst = simplex.vertices.last().expect("non-empty simplex");
    let coeff = match kind {
        TransformKind::Reflect => REFLECTION,
        TransformKind::Expand => REFLECTION * EXPANSION,
        TransformKind::OutContract => CONTRACTION * REFLECTION,
        TransformKind::InContract => -CONTRACTION * REFLECTION,
    };
    centroid
        .iter()
        .zip(worst)
        .map(|(c, w)| (1.0 + coeff) * c - coeff * w)
        .collect()
}

/// One Nelder-Mead step. Candidates are clamped into the parameter box
/// before evaluation; the best vertex never worsens.
pub fn nm_step<O: Objective>(
    simplex: &mut Simplex,
    obj: &O,
    replications: usize,
) -> Result<StepOutcome, ObjectiveError> {
    let space = obj.space();
    let eval = |theta: Vec<f64>| -> Result<(Vec<f64>, f64), ObjectiveError> {
        let clamped = space.clamp(&theta);
        let value = obj.eval(&clamped, replications)?;
        Ok((clamped, value))
    };

    let n = simplex.dim();
    let f_best = simplex.values[0];
    let f_second_worst = simplex.values[n - 1];
    let f_worst = simplex.values[n];

    let (reflected, f_reflected) = eval(nm_transform(simplex, TransformKind::Reflect))?;

    let replacement: Option<(Vec<f64>, f64, TransformKind)> = if f_reflected < f_best {
        let (expanded, f_expanded) = eval(nm_transform(simplex, TransformKind::Expand))?;
        if f_expanded < f_reflected {
            Some((expanded, f_expanded, TransformKind::Expand))
        } else {
            Some((reflected, f_reflected, TransformKind::Reflect))
        }
    } else if f_reflected < f_second_worst {
        Some((reflected, f_reflected, TransformKind::Reflect))
    } else if f_reflected < f_worst {
        let (out, f_out) = eval(nm_transform(simplex, TransformKind::OutContract))?;
        (f_out < f_worst).then_some((out, f_out, TransformKind::OutContract))
    } else {
        let (inward, f_in) = eval(nm_transform(simplex, TransformKind::InContract))?;
        (f_in < f_worst).then_some((inward, f_in, TransformKind::InContract))
    };

    match replacement {
        Some((vertex, value, kind)) => {
            *simplex.vertices.last_mut().unwrap() = vertex;
            *simplex.values.last_mut().unwrap() = value;
            simplex.sort();
            Ok(StepOutcome::Replaced(kind))
        }
        None => {
            // Shrink every non-best vertex toward the best.
            let best = simplex.vertices[0].clone();
            for i in 1..simplex.vertices.len() {
                let moved: Vec<f64> = best
                    .iter()
                    .zip(&simplex.vertices[i])
                    .map(|(b, v)| b + SHRINK * (v - b))
                    .collect();
                let (clamped, value) = eval(moved)?;
                simplex.vertices[i] = clamped;
                simplex.values[i] = value;
            }
            simplex.sort();
            Ok(StepOutcome::Shrunk)
        }
    }
}

/// Apply a deterministic threshold-accepting shift: add
/// `mean-of-coordinate * u` to coordinate `param_idx` at every vertex, then
/// clamp. Cached values are not updated; callers re-evaluate.
pub fn ta_shift_applied(
    simplex: &Simplex,
    param_idx: usize,
    u: f64,
    space: &FreeParamSet,
) -> Vec<Vec<f64>> {
    let mean: f64 = simplex.vertices.iter().map(|v| v[param_idx]).sum::<f64>()
        / simplex.vertices.len() as f64;
    let shift = mean * u;
    simplex
        .vertices
        .iter()
        .map(|v| {
            let mut moved = v.clone();
            moved[param_idx] += shift;
            space.clamp(&moved)
        })
        .collect()
}

/// Random threshold-accepting shift: one uniformly chosen coordinate, shift
/// fraction uniform on (-0.5, 0.5).
pub fn ta_shift<R: Rng>(simplex: &Simplex, space: &FreeParamSet, rng: &mut R) -> Vec<Vec<f64>> {
    let param_idx = rng.random_range(0..space.len());
    let u = rng.random_range(-0.5..0.5);
    ta_shift_applied(simplex, param_idx, u, space)
}

/// Result of a combined simplex + threshold-accepting run.
#[derive(Debug, Clone, PartialEq)]
pub struct NmTaResult {
    pub best_theta: Vec<f64>,
    pub best_f: f64,
    /// Best value found so far, recorded after each iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub final_simplex: Simplex,
}

/// Run the combined loop: each iteration is either (with the schedule's
/// probability) a full threshold-accepting phase of shift steps over all
/// rounds, or a single Nelder-Mead step.
pub fn nm_ta_run<O: Objective, R: Rng>(
    obj: &O,
    initial_vertices: Vec<Vec<f64>>,
    iterations: usize,
    schedule: &ThresholdSchedule,
    rng: &mut R,
) -> Result<NmTaResult, ObjectiveError> {
    schedule.validate()?;
    let space = obj.space();
    let simplex_reps = schedule.simplex_replications();
    let mut evaluations = 0usize;

    let clamped: Vec<Vec<f64>> = initial_vertices.iter().map(|v| space.clamp(v)).collect();
    let mut simplex = Simplex::from_vertices(clamped, obj, simplex_reps)?;
    evaluations += simplex.values.len();

    let mut best_theta = simplex.vertices[0].clone();
    let mut best_f = simplex.values[0];
    let mut trace = Vec::with_capacity(iterations);

    for _ in 0..iterations {
        let u: f64 = rng.random();
        if u < schedule.ta_probability {
            for round in 0..schedule.rounds() {
                let tau = schedule.thresholds[round];
                let reps = schedule.replications[round];
                for _ in 0..schedule.steps_per_round {
                    let shifted_vertices = ta_shift(&simplex, space, rng);
                    let shifted = Simplex::from_vertices(shifted_vertices, obj, reps)?;
                    evaluations += shifted.values.len();
                    if shifted.values[0] < best_f {
                        best_f = shifted.values[0];
                        best_theta = shifted.vertices[0].clone();
                    }
                    if shifted.values[0] < simplex.values[0] + tau {
                        simplex = shifted;
                    }
                }
            }
        } else {
            let before_best = simplex.values[0];
            let outcome = nm_step(&mut simplex, obj, simplex_reps)?;
            evaluations += match outcome {
                StepOutcome::Replaced(TransformKind::Reflect) => 1,
                StepOutcome::Replaced(_) => 2,
                StepOutcome::Shrunk => 2 + simplex.dim(),
            };
            debug_assert!(simplex.values[0] <= before_best + 1e-12);
            if simplex.values[0] < best_f {
                best_f = simplex.values[0];
                best_theta = simplex.vertices[0].clone();
            }
        }
        trace.push(best_f);
    }

    Ok(NmTaResult {
        best_theta,
        best_f,
        trace,
        iterations,
        evaluations,
        final_simplex: simplex,
    })
}

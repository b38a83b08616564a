//! Objective-surface generation over a pair of free parameters.
//!
//! A two-dimensional Sobol sequence covers the swept rectangle with low
//! discrepancy; the objective is evaluated at each mapped point with a fixed
//! number of Monte Carlo replications, and the scattered values can be
//! interpolated onto a regular grid for plotting. The raw point set is
//! always preserved alongside any interpolation.

mod interp;
mod sobol;

pub use interp::{interpolate_grid, CubicInterpolant, InterpError, SurfaceGrid, Triangulation};
pub use sobol::{sobol_2d, Sobol2d};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objective::{objective_with_reps, ObjectiveError, ObjectiveSpec};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("invalid surface specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// A two-parameter sweep specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub param_x: String,
    pub param_y: String,
    pub range_x: (f64, f64),
    pub range_y: (f64, f64),
    pub n_points: usize,
    pub replications: usize,
    /// Values for the non-swept free parameters (full free-vector layout;
    /// the swept entries are overwritten point by point).
    pub base_theta: Vec<f64>,
}

impl SurfaceSpec {
    pub fn validate(&self, objective: &ObjectiveSpec) -> Result<(usize, usize), SurfaceError> {
        if self.param_x == self.param_y {
            return Err(SurfaceError::InvalidSpec("swept parameters must differ".into()));
        }
        let degenerate = |r: (f64, f64)| r.0.is_nan() || r.1.is_nan() || r.0 >= r.1;
        if degenerate(self.range_x) || degenerate(self.range_y) {
            return Err(SurfaceError::InvalidSpec("sweep ranges must be non-degenerate".into()));
        }
        if self.n_points < 4 {
            return Err(SurfaceError::InvalidSpec("need at least 4 sweep points".into()));
        }
        if self.replications < 1 {
            return Err(SurfaceError::InvalidSpec("need at least one replication".into()));
        }
        if self.base_theta.len() != objective.free.len() {
            return Err(SurfaceError::InvalidSpec(format!(
                "base_theta holds {} values but the free set has {}",
                self.base_theta.len(),
                objective.free.len()
            )));
        }
        let find = |name: &str| {
            objective
                .free
                .params
                .iter()
                .position(|p| p.name == name)
                .ok_or_else(|| {
                    SurfaceError::InvalidSpec(format!("{name} is not a free parameter"))
                })
        };
        Ok((find(&self.param_x)?, find(&self.param_y)?))
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub f: f64,
}

/// CSV with columns `x,y,f`.
pub fn points_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("x,y,f\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.x, p.y, p.f));
    }
    out
}

/// Evaluate the objective over the Sobol-sampled rectangle. Integer-valued
/// parameters are rounded both for evaluation and in the reported
/// coordinates. Deterministic given `master_seed`, regardless of the worker
/// count.
pub fn evaluate_surface(
    spec: &SurfaceSpec,
    objective: &ObjectiveSpec,
    master_seed: u64,
) -> Result<Vec<SurfacePoint>, SurfaceError> {
    let (ix, iy) = spec.validate(objective)?;
    let unit_points = sobol_2d(spec.n_points);
    let thetas: Vec<(f64, f64, Vec<f64>)> = unit_points
        .into_iter()
        .map(|(sx, sy)| {
            let raw_x = spec.range_x.0 + sx * (spec.range_x.1 - spec.range_x.0);
            let raw_y = spec.range_y.0 + sy * (spec.range_y.1 - spec.range_y.0);
            let x = objective.free.params[ix].constrain(raw_x);
            let y = objective.free.params[iy].constrain(raw_y);
            let mut theta = spec.base_theta.clone();
            theta[ix] = x;
            theta[iy] = y;
            (x, y, theta)
        })
        .collect();
    thetas
        .into_par_iter()
        .map(|(x, y, theta)| {
            let f = objective_with_reps(objective, &theta, master_seed, spec.replications)?;
            Ok(SurfacePoint { x, y, f })
        })
        .collect()
}

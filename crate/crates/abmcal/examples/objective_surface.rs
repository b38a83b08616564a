//! Objective surface over a parameter pair: Sobol-sampled evaluations plus
//! cubic interpolation onto a regular grid.

use abmcal::engine::run_simulation;
use abmcal::moments::log_prices;
use abmcal::objective::{bootstrap_covariance, weight_matrix, FreeParamSet, ObjectiveSpec};
use abmcal::surface::{evaluate_surface, interpolate_grid, SurfaceSpec};
use abmcal::ModelParams;

fn main() {
    let mut params = ModelParams::stylized_baseline();
    params.t = 300;
    params.n_l = 400;
    params.n_h = 40;
    params.delta = 0.001;

    let pseudo = run_simulation(&params, 515151).unwrap();
    let prices = pseudo.simulated_prices().to_vec();
    let logs = log_prices(&prices).unwrap();
    let boot = bootstrap_covariance(&logs, 75, 1500, 616161).unwrap();
    let weights = weight_matrix(&boot.cov).unwrap();

    let spec = ObjectiveSpec::from_reference_prices(
        &prices,
        weights,
        3,
        params,
        FreeParamSet::with_default_bounds(&["N_L", "N_H"]).unwrap(),
    )
    .unwrap();

    // 64 Sobol points over the trader-count rectangle (the production sweep
    // uses 1000 points and 5 replications).
    let sweep = SurfaceSpec {
        param_x: "N_L".into(),
        param_y: "N_H".into(),
        range_x: (100.0, 1000.0),
        range_y: (20.0, 200.0),
        n_points: 64,
        replications: 3,
        base_theta: vec![400.0, 40.0],
    };
    let points = evaluate_surface(&sweep, &spec, 272727).unwrap();
    let (min, max) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.f), hi.max(p.f)));
    println!("evaluated {} points; f range [{min:.4e}, {max:.4e}] (max/min {:.2})", points.len(), max / min);

    let samples: Vec<(f64, f64, f64)> = points.iter().map(|p| (p.x, p.y, p.f)).collect();
    let grid = interpolate_grid(&samples, 13).unwrap();
    println!("\ninterpolated log10(f) on a 13x13 grid ('.' = outside the hull):");
    for iy in (0..13).rev() {
        let mut row = String::new();
        for ix in 0..13 {
            match grid.get(ix, iy) {
                Some(f) => row.push_str(&format!("{:5.1}", f.log10())),
                None => row.push_str("    ."),
            }
        }
        println!("{row}");
    }
}

//! Genetic-algorithm calibration of two parameters against model-generated
//! pseudo-data.

use abmcal::engine::run_simulation;
use abmcal::moments::log_prices;
use abmcal::objective::{bootstrap_covariance, weight_matrix, FreeParamSet, ObjectiveSpec};
use abmcal::optimize::{ga_run, GaConfig, MsmObjective};
use abmcal::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let mut params = ModelParams::stylized_baseline();
    params.t = 400;
    params.n_l = 500;
    params.delta = 0.001;
    params.sigma_z = 0.01;

    let pseudo = run_simulation(&params, 515151).unwrap();
    let prices = pseudo.simulated_prices().to_vec();
    let logs = log_prices(&prices).unwrap();
    let boot = bootstrap_covariance(&logs, 100, 2000, 616161).unwrap();
    let weights = weight_matrix(&boot.cov).unwrap();

    let spec = ObjectiveSpec::from_reference_prices(
        &prices,
        weights,
        3,
        params,
        FreeParamSet::with_default_bounds(&["delta", "sigma_z"]).unwrap(),
    )
    .unwrap();

    let msm = MsmObjective { spec: &spec, master_seed: 313131 };
    // Small population and generation count to keep the example quick; the
    // production run uses 100 chromosomes for 100 generations.
    let config = GaConfig {
        population_size: 24,
        generations: 25,
        replications: 3,
        ..GaConfig::default()
    };
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    let result = ga_run(&msm, &config, &mut rng).unwrap();

    println!("true parameters: delta 0.001, sigma_z 0.01");
    println!(
        "best chromosome: delta {:.6}, sigma_z {:.6} (f = {:.4e})",
        result.best_theta[0], result.best_theta[1], result.best_f
    );
    println!("\ngeneration   best f       mean f");
    for (g, (b, m)) in result.trace_best.iter().zip(&result.trace_mean).enumerate().step_by(5) {
        println!("{g:>10}   {b:.4e}   {m:.4e}");
    }
}

//! The full file-based pipeline through the command-line interface:
//! synth -> ingest -> weights -> simulate -> calibrate, end to end.

use abmcal::cli::dispatch;
use abmcal::ModelParams;
use std::fs;

fn run(args: &[&str]) {
    let mut argv = vec!["abmcal"];
    argv.extend_from_slice(args);
    let code = dispatch(argv.clone());
    assert_eq!(code, 0, "command failed: {argv:?}");
}

fn main() {
    let dir = std::env::temp_dir().join("abmcal-cli-example");
    fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();

    // A reduced parameter file keeps the example fast.
    let mut params = ModelParams::stylized_baseline();
    params.n_l = 300;
    params.n_h = 30;
    fs::write(path("params.json"), serde_json::to_string_pretty(&params).unwrap()).unwrap();

    run(&["synth", "--days", "5", "--seed", "1", "--out", &path("ticks.csv")]);
    run(&["ingest", "--ticks", &path("ticks.csv"), "--out", &path("bars.csv")]);
    run(&[
        "weights", "--bars", &path("bars.csv"), "--b", "100", "--n", "1000", "--seed", "2",
        "--out", &path("weights.json"),
    ]);
    run(&[
        "simulate", "--config", &path("params.json"), "--seed", "3", "--out", &path("prices.csv"),
    ]);
    run(&[
        "calibrate", "--method", "nm-ta", "--bars", &path("bars.csv"), "--config",
        &path("params.json"), "--weights", &path("weights.json"), "--free", "delta,sigma_z",
        "--iters", "8", "--reps", "2", "--seed", "4", "--out", &path("result.json"),
    ]);

    println!("\npipeline outputs under {}:", dir.display());
    let mut names: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
}

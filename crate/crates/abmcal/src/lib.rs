//! Intraday agent-based market simulation and calibration toolkit.
//!
//! The library simulates a double-auction market populated by low-frequency
//! (chartist/fundamentalist) and high-frequency traders posting limit orders
//! to a central order book that clears in per-session batches. On top of the
//! simulator it provides the full method-of-simulated-moments calibration
//! pipeline:
//!
//! * five summary statistics of log-price series (mean, standard deviation,
//!   kurtosis, Kolmogorov-Smirnov distance, generalized Hurst exponent),
//! * a moving block bootstrap and the inverse-covariance weight matrix,
//! * the weighted quadratic-form objective `f(theta) = G'(theta) W G(theta)`,
//! * two heuristic optimizers (Nelder-Mead simplex with threshold accepting,
//!   and a real-valued simple genetic algorithm),
//! * Sobol-sampled objective surfaces over parameter pairs with cubic
//!   interpolation onto a regular grid,
//! * tick-data ingestion to one-minute mid-price bars plus a synthetic tick
//!   generator for self-contained experiments.
//!
//! Everything is deterministic given a seed: simulations split one master
//! seed into per-purpose substreams, replications derive per-index seeds, and
//! parallel evaluation never changes results (only wall time).
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `abmcal` binary for the file-based pipeline (`synth`, `ingest`,
//! `weights`, `simulate`, `stylized`, `calibrate`, `surface`).

pub mod agents;
pub mod cli;
pub mod dataio;
pub mod engine;
pub mod lob;
pub mod moments;
pub mod objective;
pub mod optimize;
pub mod rng;
pub mod stats;
pub mod surface;

pub use agents::{ModelParams, ParamError};
pub use engine::{run_replications, run_simulation, SimulationResult};
pub use lob::{LimitOrder, OrderBook, Side, Trade};
pub use moments::MomentVector;
pub use objective::{FreeParam, FreeParamSet, ObjectiveSpec, WeightMatrix};

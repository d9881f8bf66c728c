//! Experiment harness: instance families, reproducible sweeps, the exact
//! decoupling verifier, and induced edge statistics.

pub mod decoupling;
pub mod edgestats;
pub mod families;
pub mod sweep;

pub use decoupling::{verify_decoupling, DecouplingReport};
pub use edgestats::{edge_stats, edge_stats_recursive, inducibility_shape, Graph};
pub use sweep::{run_sweep, Family, SweepSpec, CSV_SCHEMA};

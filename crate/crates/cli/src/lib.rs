//! Command-line front end: pencils from MatrixMarket files or built-in
//! models, scans, dispersion sweeps and single-point refinement, with CSV and
//! JSON outputs.

pub mod commands;
pub mod error;
pub mod input;
pub mod mtx;
pub mod output;

pub use commands::run;
pub use error::{CliError, CliResult};
pub use input::{load_pencil, parse_material, read_material, PencilSource};
pub use mtx::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market};
pub use output::{emit_results, fmt17, RunManifest};

//! Parameter sweeps over the electro-optic transducer model.

pub mod checks;
pub mod config;
pub mod error;
pub mod presets;
pub mod sweep;
pub mod table;

pub use config::{Axis, Direction, Format, SweepConfig};
pub use error::{LabError, Result};
pub use sweep::{evaluate_point, run_sweep, run_sweep_with_threads};
pub use table::{read_table, write_table, ResultTable};

//! Experiment orchestration: sweep configs, canned figures, validation,
//! and CSV output.

pub mod config;
pub mod figures;
pub mod sweep;
pub mod validate;

pub use config::{points_to_csv, CurveMode, CurvePoint, ExperimentConfig, SweepAxis, CSV_HEADER};
pub use figures::{run_figure, FigureOverrides};
pub use sweep::run_sweep;
pub use validate::{run_validate, run_validate_with_skew, CheckResult, ValidationReport};

//! Discrete sampling measures, holes, finite-section frame bounds, and gap
//! experiments that check the theorem bounds against estimated constants.

mod experiment;
mod frame;
mod measure;

pub use experiment::{
    reports_to_csv, run_battery, run_gap_experiment, ExperimentConfig, ExperimentEntry, ExperimentFile,
    ExperimentSetup, GapReport, MeasureSpec, CSV_HEADER, FINITE_SECTION_CAVEAT,
};
pub use frame::{atom_coefficients, frame_bounds_estimate, hermitian_eigenvalues, FrameEstimate, JACOBI_TOLERANCE};
pub use measure::{
    disk_grid_rings, make_disk_grid, make_timefreq_lattice, punch_hole, DiscreteMeasure, MeasureRegime, WeightedPoint,
};

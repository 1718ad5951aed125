//! Study harness for the segmented fire-spread model: index studies at one
//! wind mean or over a sweep, crossover detection, conditional output
//! profiles, convergence and timing.

mod conditional;
mod convergence;
mod stage;
mod study;
mod sweep;
mod timing;

pub use conditional::{
    conditional_profile, conditional_profile_of, ConditionalProfile, ConditionalSettings,
    OutputSummary, FIX_OFFSETS,
};
pub use convergence::{convergence_study, ConvergenceCell, ConvergenceResult};
pub use stage::{stage_classify, StageLabel};
pub use study::{
    delta_indices, mi_indices, orders_agree, pawn_indices, run_index_study, run_point_study,
    sobol_indices, IndexStudy, MethodIndices, PointStudy, SampleSizes, StudySettings,
};
pub use sweep::{
    crossover_of, detect_crossover, peak_location, sweep_grid, sweep_mu, sweep_point_seed,
    SweepResult,
};
pub use timing::{timing_study, TimingCell};

//! Random walks on growing graphs.
//!
//! A growing graph keeps its shape for `f(i)` steps at order `i`, then gains
//! one vertex. This crate builds the per-round kernels, computes the expected
//! number of never-visited vertices `E[U]` exactly (dense propagation of
//! occupancy and survival vectors, plus the `O(n)` complete-graph recurrence),
//! estimates the same quantities by seeded Monte Carlo, and runs the spectral
//! and theorem-level checks that tie the two together.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod schedule;
pub mod graph;
pub mod kernel;
pub mod montecarlo;
pub mod report;
pub mod theorems;

pub use analysis::{AnalysisReport, HittingTimes, MixingOutcome, SubstochasticKernel};
pub use error::{Error, Result};
pub use exact::{ExactOptions, ExpectedUnvisited, StartState, TrajectoryPoint};
pub use montecarlo::{EstimateRecord, SimulationPlan, TrialOutcome};
pub use theorems::{Certificate, EngineChoice, TheoremCase, TheoremId, Verdict};
pub use graph::{Family, FamilyTag, GraphSnapshot};
pub use kernel::{KernelFlags, TransitionKernel, WalkKind};
pub use schedule::{DurationFn, GrowthSchedule};

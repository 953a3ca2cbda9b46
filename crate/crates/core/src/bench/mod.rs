//! Task registry, timed execution and timing statistics.

mod registry;
mod runner;
mod stats;
mod suite;

pub use registry::{
    checksum_f64, checksum_u64, digest_f64, digest_u64, Digest, Group, Job, KernelEntry, KernelVariant, Registry, SizeRule, Sizes, TaskDef,
    TaskParams,
};
pub use runner::{run_suite, run_suite_with, run_task, run_task_with_clock, Clock, Measurement, MonotonicClock, SuiteConfig, TaskResult};
pub use stats::{median, TimingStats};
pub use suite::{builtin_registry, register_builtin_suite, Preset, SuiteSelection, GCD_MAX_VALUE, POWER_EXPONENT};

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::registry::{checksum_u64, Group, KernelVariant, Registry, Sizes, TaskDef};
use super::stats::TimingStats;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Monotonic time source. Tests substitute an instrumented clock.
pub trait Clock {
    /// Time elapsed since an arbitrary fixed origin.
    fn now(&self) -> Duration;
}

#[derive(Debug, Clone, Copy)]
pub struct MonotonicClock {
    origin: Instant,
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Clock for MonotonicClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub repetitions: usize,
    pub warmups: usize,
    /// Multiplier on every base size (linear dimensions and element counts).
    pub scale_factor: f64,
    /// Variant names to run; empty runs all.
    pub variant_filter: Vec<String>,
    /// Task ids to run; empty runs all.
    pub task_filter: Vec<String>,
    /// Whether input generation falls inside the timed region.
    pub include_generation_in_timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            repetitions: 10,
            warmups: 1,
            scale_factor: 1.0,
            variant_filter: Vec::new(),
            task_filter: Vec::new(),
            include_generation_in_timing: true,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions must be >= 1"));
        }
        if !(self.scale_factor > 0.0) || !self.scale_factor.is_finite() {
            return Err(Error::invalid(format!("scale factor must be positive, got {}", self.scale_factor)));
        }
        Ok(())
    }

    fn wants_task(&self, id: &str) -> bool {
        self.task_filter.is_empty() || self.task_filter.iter().any(|t| t == id)
    }

    fn wants_variant(&self, name: &str) -> bool {
        self.variant_filter.is_empty() || self.variant_filter.iter().any(|v| v == name)
    }
}

/// Timings plus a checksum folded over every timed run's kernel output.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub stats: TimingStats,
    pub checksum: u64,
    pub run_checksums: Vec<u64>,
}

/// One row of suite output. Exactly one of `stats` / `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task_id: String,
    pub group: Group,
    pub operation: String,
    pub variant: String,
    pub sizes: Option<Sizes>,
    pub stats: Option<TimingStats>,
    pub checksum: Option<String>,
    pub error: Option<String>,
}

// Warmups draw from their own index range so that changing the warmup
// count never changes the inputs of timed runs.
const WARMUP_INDEX_BASE: u64 = 1 << 63;

pub fn run_task(task: &TaskDef, variant: &KernelVariant, cfg: &SuiteConfig) -> Result<Measurement> {
    run_task_with_clock(task, variant, cfg, &MonotonicClock::default())
}

/// `warmups` untimed runs, then `repetitions` timed runs, strictly in
/// sequence. Run `i` draws its inputs from `RngStream::for_run(seed, task, i)`.
pub fn run_task_with_clock(
    task: &TaskDef,
    variant: &KernelVariant,
    cfg: &SuiteConfig,
    clock: &dyn Clock,
) -> Result<Measurement> {
    cfg.validate()?;
    let wrap = |e: Error| Error::Kernel {
        task: task.id.clone(),
        variant: variant.variant_name.clone(),
        source: Box::new(e),
    };
    let sizes = task.sizes(cfg.scale_factor).map_err(wrap)?;

    for w in 0..cfg.warmups {
        let mut rng = RngStream::for_run(cfg.seed, &task.id, WARMUP_INDEX_BASE + w as u64);
        let job = (variant.entry)(&mut rng, &sizes).map_err(wrap)?;
        drop(job().map_err(wrap)?);
    }

    let mut samples = Vec::with_capacity(cfg.repetitions);
    let mut run_checksums = Vec::with_capacity(cfg.repetitions);
    for i in 0..cfg.repetitions {
        let mut rng = RngStream::for_run(cfg.seed, &task.id, i as u64);
        let (start, job) = if cfg.include_generation_in_timing {
            let start = clock.now();
            (start, (variant.entry)(&mut rng, &sizes).map_err(wrap)?)
        } else {
            let job = (variant.entry)(&mut rng, &sizes).map_err(wrap)?;
            (clock.now(), job)
        };
        let digest = job().map_err(wrap)?;
        let elapsed = clock.now().saturating_sub(start);
        samples.push(elapsed.as_secs_f64());
        run_checksums.push(digest());
    }

    Ok(Measurement {
        stats: TimingStats::from_samples(samples, cfg.warmups)?,
        checksum: checksum_u64(run_checksums.iter().copied()),
        run_checksums,
    })
}

pub fn run_suite(registry: &Registry, cfg: &SuiteConfig) -> Result<Vec<TaskResult>> {
    run_suite_with(registry, cfg, &MonotonicClock::default(), |_| {})
}

/// Runs every selected (task, variant) in registration order. Kernel
/// failures are recorded in their row and the suite carries on.
pub fn run_suite_with(
    registry: &Registry,
    cfg: &SuiteConfig,
    clock: &dyn Clock,
    mut on_result: impl FnMut(&TaskResult),
) -> Result<Vec<TaskResult>> {
    if registry.is_empty() {
        return Err(Error::invalid("registry has no tasks"));
    }
    cfg.validate()?;
    let mut out = Vec::new();
    for task in registry.tasks().iter().filter(|t| cfg.wants_task(&t.id)) {
        let sizes = task.sizes(cfg.scale_factor).ok();
        let operation = sizes.map_or_else(|| task.id.clone(), |s| task.label(&s));
        for variant in task.variants().iter().filter(|v| cfg.wants_variant(&v.variant_name)) {
            let mut row = TaskResult {
                task_id: task.id.clone(),
                group: task.group,
                operation: operation.clone(),
                variant: variant.variant_name.clone(),
                sizes,
                stats: None,
                checksum: None,
                error: None,
            };
            match run_task_with_clock(task, variant, cfg, clock) {
                Ok(m) => {
                    row.stats = Some(m.stats);
                    row.checksum = Some(format!("{:016x}", m.checksum));
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            on_result(&row);
            out.push(row);
        }
    }
    Ok(out)
}

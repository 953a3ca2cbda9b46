use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::power_of_two_floor;
use crate::rng::RngStream;

/// Result table a task reports into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "Matrix calculation")]
    MatrixCalculation,
    #[serde(rename = "Matrix functions")]
    MatrixFunctions,
    #[serde(rename = "Programmation")]
    Programmation,
    #[serde(rename = "Solving linear systems")]
    SolvingLinearSystems,
    #[serde(rename = "Balassa indices")]
    BalassaIndices,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::MatrixCalculation,
        Group::MatrixFunctions,
        Group::Programmation,
        Group::SolvingLinearSystems,
        Group::BalassaIndices,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Group::MatrixCalculation => "Matrix calculation",
            Group::MatrixFunctions => "Matrix functions",
            Group::Programmation => "Programmation",
            Group::SolvingLinearSystems => "Solving linear systems",
            Group::BalassaIndices => "Balassa indices",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

/// Base sizes of a task and the multiplier applied to them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskParams {
    pub size: usize,
    pub secondary_size: Option<usize>,
    pub scale_factor: f64,
}

/// How a scaled size is snapped to something the kernel accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeRule {
    AtLeast(usize),
    /// Rounded down to even, at least the given minimum.
    Even(usize),
    /// Largest power of two not above the scaled size.
    PowerOfTwo,
}

/// Sizes a kernel actually runs at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub primary: usize,
    pub secondary: Option<usize>,
    /// Scaled primary size before the size rule was applied.
    pub requested: usize,
}

impl Sizes {
    pub fn coerced(&self) -> bool {
        self.primary != self.requested
    }

    pub fn secondary_or_primary(&self) -> usize {
        self.secondary.unwrap_or(self.primary)
    }
}

impl TaskParams {
    fn scale(&self, base: usize) -> usize {
        ((base as f64 * self.scale_factor).round() as usize).max(1)
    }

    pub fn resolve(&self, rule: SizeRule) -> Result<Sizes> {
        if !(self.scale_factor > 0.0) || !self.scale_factor.is_finite() {
            return Err(Error::invalid(format!("scale factor must be positive, got {}", self.scale_factor)));
        }
        let requested = self.scale(self.size);
        let primary = match rule {
            SizeRule::AtLeast(min) => requested.max(min),
            SizeRule::Even(min) => (requested - requested % 2).max(min),
            SizeRule::PowerOfTwo => power_of_two_floor(requested),
        };
        Ok(Sizes {
            primary,
            secondary: self.secondary_size.map(|s| self.scale(s)),
            requested,
        })
    }
}

/// Checksum of a kernel's output, evaluated after the clock has stopped.
pub type Digest = Box<dyn FnOnce() -> u64>;

/// The timed part of one run. Returns the output wrapped in a [`Digest`].
pub type Job = Box<dyn FnOnce() -> Result<Digest>>;

/// Builds the inputs for one run from a seeded stream, returning the timed
/// part as a [`Job`].
pub type KernelEntry = Arc<dyn Fn(&mut RngStream, &Sizes) -> Result<Job> + Send + Sync>;

#[derive(Clone)]
pub struct KernelVariant {
    pub task_id: String,
    pub variant_name: String,
    pub entry: KernelEntry,
}

impl KernelVariant {
    pub fn new(
        task_id: impl Into<String>,
        variant_name: impl Into<String>,
        entry: impl Fn(&mut RngStream, &Sizes) -> Result<Job> + Send + Sync + 'static,
    ) -> Self {
        Self {
            task_id: task_id.into(),
            variant_name: variant_name.into(),
            entry: Arc::new(entry),
        }
    }
}

impl fmt::Debug for KernelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelVariant")
            .field("task_id", &self.task_id)
            .field("variant_name", &self.variant_name)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct TaskDef {
    pub id: String,
    pub group: Group,
    pub base_size: usize,
    pub base_secondary: Option<usize>,
    pub rule: SizeRule,
    label: fn(&Sizes) -> String,
    variants: Vec<KernelVariant>,
}

impl TaskDef {
    pub fn new(
        id: impl Into<String>,
        group: Group,
        base_size: usize,
        base_secondary: Option<usize>,
        rule: SizeRule,
        label: fn(&Sizes) -> String,
    ) -> Self {
        Self {
            id: id.into(),
            group,
            base_size,
            base_secondary,
            rule,
            label,
            variants: Vec::new(),
        }
    }

    /// Same task identity and label at different base sizes, with no variants.
    pub fn resized(&self, base_size: usize, base_secondary: Option<usize>) -> Self {
        Self {
            base_size,
            base_secondary,
            variants: Vec::new(),
            ..self.clone()
        }
    }

    pub fn params(&self, scale_factor: f64) -> TaskParams {
        TaskParams {
            size: self.base_size,
            secondary_size: self.base_secondary,
            scale_factor,
        }
    }

    pub fn sizes(&self, scale_factor: f64) -> Result<Sizes> {
        self.params(scale_factor).resolve(self.rule)
    }

    /// Human-readable operation name at the given sizes.
    pub fn label(&self, sizes: &Sizes) -> String {
        (self.label)(sizes)
    }

    pub fn variants(&self) -> &[KernelVariant] {
        &self.variants
    }

    pub fn variant(&self, name: &str) -> Option<&KernelVariant> {
        self.variants.iter().find(|v| v.variant_name == name)
    }
}

/// Tasks in registration order; `(task_id, variant_name)` is unique.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    tasks: Vec<TaskDef>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_task(&mut self, task: TaskDef) -> Result<()> {
        if self.task(&task.id).is_some() {
            return Err(Error::invalid(format!("task `{}` already registered", task.id)));
        }
        self.tasks.push(task);
        Ok(())
    }

    pub fn add_variant(&mut self, variant: KernelVariant) -> Result<()> {
        let task = self
            .tasks
            .iter_mut()
            .find(|t| t.id == variant.task_id)
            .ok_or_else(|| Error::invalid(format!("unknown task `{}`", variant.task_id)))?;
        if task.variant(&variant.variant_name).is_some() {
            return Err(Error::invalid(format!(
                "variant `{}` of task `{}` already registered",
                variant.variant_name, variant.task_id
            )));
        }
        task.variants.push(variant);
        Ok(())
    }

    pub fn task(&self, id: &str) -> Option<&TaskDef> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn tasks(&self) -> &[TaskDef] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }
}

const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

/// Defers hashing `values` (a matrix, vector or array of `f64`).
pub fn digest_f64(values: impl AsRef<[f64]> + 'static) -> Digest {
    Box::new(move || checksum_f64(values.as_ref()))
}

pub fn digest_u64(values: impl AsRef<[u64]> + 'static) -> Digest {
    Box::new(move || checksum_u64(values.as_ref().iter().copied()))
}

/// FNV-1a over the bit patterns of `values`.
pub fn checksum_f64(values: &[f64]) -> u64 {
    checksum_u64(values.iter().map(|v| v.to_bits()))
}

pub fn checksum_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    let mut h = FNV_OFFSET;
    for v in values {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(_: &Sizes) -> String {
        "t".into()
    }

    fn noop() -> KernelVariant {
        KernelVariant::new("t", "reference", |_, _| Ok(Box::new(|| Ok(digest_u64([0]))) as Job))
    }

    #[test]
    fn duplicates_are_rejected() {
        let mut r = Registry::new();
        r.add_task(TaskDef::new("t", Group::Programmation, 10, None, SizeRule::AtLeast(1), label)).unwrap();
        assert!(r
            .add_task(TaskDef::new("t", Group::Programmation, 10, None, SizeRule::AtLeast(1), label))
            .is_err());
        r.add_variant(noop()).unwrap();
        assert!(r.add_variant(noop()).is_err());
        let mut orphan = noop();
        orphan.task_id = "missing".into();
        assert!(r.add_variant(orphan).is_err());
    }

    #[test]
    fn size_rules() {
        let p = TaskParams { size: 2500, secondary_size: Some(1000), scale_factor: 0.05 };
        assert_eq!(p.resolve(SizeRule::AtLeast(1)).unwrap().primary, 125);
        assert_eq!(p.resolve(SizeRule::Even(2)).unwrap().primary, 124);
        assert_eq!(p.resolve(SizeRule::AtLeast(1)).unwrap().secondary, Some(50));
        let fft = TaskParams { size: 2_400_000, secondary_size: None, scale_factor: 1.0 };
        let s = fft.resolve(SizeRule::PowerOfTwo).unwrap();
        assert_eq!((s.primary, s.requested, s.coerced()), (2_097_152, 2_400_000, true));
        let tiny = TaskParams { size: 45, secondary_size: None, scale_factor: 0.001 };
        assert_eq!(tiny.resolve(SizeRule::AtLeast(3)).unwrap().primary, 3);
        let bad = TaskParams { size: 5, secondary_size: None, scale_factor: 0.0 };
        assert!(bad.resolve(SizeRule::AtLeast(1)).is_err());
    }

    #[test]
    fn checksums_see_every_bit() {
        assert_ne!(checksum_f64(&[0.0]), checksum_f64(&[-0.0]));
        assert_eq!(checksum_f64(&[1.5, 2.5]), checksum_f64(&[1.5, 2.5]));
        assert_ne!(checksum_f64(&[1.5, 2.5]), checksum_f64(&[2.5, 1.5]));
    }
}

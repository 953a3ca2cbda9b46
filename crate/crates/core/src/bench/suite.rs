use crate::balassa::{balassa_matrix, synthetic_trade_matrix};
use crate::calc::{crossprod, elementwise_power, randn_matrix, sort_values, transpose_naive};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, determinant, eigenvalues_sym, fft_in_place, inverse, least_squares};
use crate::linalg::{solve_naive, solve_smart, LinearSystem};
use crate::matrix::{ComplexVector, DenseMatrix};
use crate::prog::{binet, draw_pairs, escoufier_select, gcd, hilbert_matrix, toeplitz_matrix};
use crate::rng::RngStream;

use super::registry::{
    checksum_u64, digest_f64, digest_u64, Digest, Group, Job, KernelVariant, Registry, SizeRule, Sizes,
    TaskDef,
};

/// Exponent of the element-wise power task.
pub const POWER_EXPONENT: f64 = 1000.0;
/// Upper bound of the integers fed to the GCD task.
pub const GCD_MAX_VALUE: u64 = 1000;

/// Size presets. `Cluster` multiplies every base size by five.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Local,
    Cluster,
}

impl Preset {
    pub fn factor(self) -> f64 {
        match self {
            Preset::Local => 1.0,
            Preset::Cluster => 5.0,
        }
    }
}

/// Which task groups a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    Att,
    Solve,
    Balassa,
    All,
}

impl SuiteSelection {
    pub fn includes(self, group: Group) -> bool {
        match self {
            SuiteSelection::All => true,
            SuiteSelection::Solve => group == Group::SolvingLinearSystems,
            SuiteSelection::Balassa => group == Group::BalassaIndices,
            SuiteSelection::Att => matches!(
                group,
                Group::MatrixCalculation | Group::MatrixFunctions | Group::Programmation
            ),
        }
    }

    /// Ids of the registry tasks in this selection, in registration order.
    pub fn task_ids(self, registry: &Registry) -> Vec<String> {
        registry
            .tasks()
            .iter()
            .filter(|t| self.includes(t.group))
            .map(|t| t.id.clone())
            .collect()
    }
}

/// `2500` → `2,500`.
fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

fn square(s: &Sizes) -> String {
    let n = thousands(s.primary);
    format!("{n} × {n}")
}

fn randn(rng: &mut RngStream, r: usize, c: usize) -> Result<DenseMatrix<f64>> {
    randn_matrix(rng, r, c, 1.0)
}

fn job(f: impl FnOnce() -> Result<Digest> + 'static) -> Result<Job> {
    Ok(Box::new(f))
}

struct Builtin {
    id: &'static str,
    group: Group,
    base: usize,
    secondary: Option<usize>,
    rule: SizeRule,
    label: fn(&Sizes) -> String,
}

const BUILTINS: &[Builtin] = &[
    Builtin {
        id: "power",
        group: Group::MatrixCalculation,
        base: 2400,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("{} matrix^1,000", square(s)),
    },
    Builtin {
        id: "crossprod",
        group: Group::MatrixCalculation,
        base: 2800,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("{} cross-product matrix", square(s)),
    },
    Builtin {
        id: "create-modify",
        group: Group::MatrixCalculation,
        base: 2500,
        secondary: None,
        rule: SizeRule::Even(2),
        label: |s| format!("Creation and modification of a {} matrix", square(s)),
    },
    Builtin {
        id: "regression",
        group: Group::MatrixCalculation,
        base: 3000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Linear regression over a {} matrix", square(s)),
    },
    Builtin {
        id: "sort",
        group: Group::MatrixCalculation,
        base: 7_000_000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Sorting of {} values", thousands(s.primary)),
    },
    Builtin {
        id: "transpose",
        group: Group::MatrixCalculation,
        base: 2500,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Transpose of a {} matrix", square(s)),
    },
    Builtin {
        id: "cholesky",
        group: Group::MatrixFunctions,
        base: 3000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Cholesky decomposition of a {} matrix", square(s)),
    },
    Builtin {
        id: "determinant",
        group: Group::MatrixFunctions,
        base: 2500,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Determinant of a {} matrix", square(s)),
    },
    Builtin {
        id: "eigenvalues",
        group: Group::MatrixFunctions,
        base: 640,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Eigenvalues of a {} matrix", square(s)),
    },
    Builtin {
        id: "fft",
        group: Group::MatrixFunctions,
        base: 2_400_000,
        secondary: None,
        rule: SizeRule::PowerOfTwo,
        label: |s| format!("Fast Fourier Transform over {} values", thousands(s.primary)),
    },
    Builtin {
        id: "inverse",
        group: Group::MatrixFunctions,
        base: 1600,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Inverse of a {} matrix", square(s)),
    },
    Builtin {
        id: "fibonacci",
        group: Group::Programmation,
        base: 3_500_000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("{} Fibonacci numbers calculation", thousands(s.primary)),
    },
    Builtin {
        id: "hilbert",
        group: Group::Programmation,
        base: 3000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Creation of a {} Hilbert matrix", square(s)),
    },
    Builtin {
        id: "toeplitz",
        group: Group::Programmation,
        base: 500,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Creation of a {} Toeplitz matrix", square(s)),
    },
    Builtin {
        id: "escoufier",
        group: Group::Programmation,
        base: 45,
        secondary: None,
        rule: SizeRule::AtLeast(3),
        label: |s| format!("Escoufier's method on a {} matrix", square(s)),
    },
    Builtin {
        id: "gcd",
        group: Group::Programmation,
        base: 400_000,
        secondary: None,
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Greatest common divisors of {} pairs", thousands(s.primary)),
    },
    Builtin {
        id: "solve",
        group: Group::SolvingLinearSystems,
        base: 30_000,
        secondary: Some(1000),
        rule: SizeRule::AtLeast(1),
        label: |s| format!("Solving a {} system with {} right-hand sides", square(s), thousands(s.secondary_or_primary())),
    },
    Builtin {
        id: "balassa",
        group: Group::BalassaIndices,
        base: 234,
        secondary: Some(5386),
        rule: SizeRule::AtLeast(1),
        label: |s| {
            format!(
                "Balassa indices of {} countries × {} products",
                thousands(s.primary),
                thousands(s.secondary_or_primary())
            )
        },
    },
];

fn reference(id: &str, rng: &mut RngStream, s: &Sizes) -> Result<Job> {
    let n = s.primary;
    match id {
        "power" => {
            let base = randn(rng, n, n)?.map(|x| x.abs() / 2.0);
            job(move || Ok(digest_f64(elementwise_power(&base, POWER_EXPONENT))))
        }
        "crossprod" => {
            let a = randn(rng, n, n)?;
            job(move || Ok(digest_f64(crossprod(&a))))
        }
        "create-modify" => {
            let a = randn_matrix::<f64>(rng, n, n, 10.0)?;
            job(move || {
                let b = a.transpose().reshape(n / 2, 2 * n)?.transpose();
                Ok(digest_f64(b))
            })
        }
        "regression" => {
            let a = randn(rng, n, n)?;
            let y = randn(rng, n, 1)?;
            job(move || Ok(digest_f64(least_squares(&a, &y)?)))
        }
        "sort" => {
            let v: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            job(move || Ok(digest_f64(sort_values(v)?)))
        }
        "transpose" => {
            let a = randn(rng, n, n)?;
            job(move || Ok(digest_f64(DenseMatrix::from_fn(n, n, |i, j| a[(j, i)]))))
        }
        "cholesky" => {
            let a = randn(rng, n, n)?;
            let mut spd = crossprod(&a);
            for i in 0..n {
                spd[(i, i)] += n as f64;
            }
            job(move || Ok(digest_f64(cholesky(&spd)?)))
        }
        "determinant" => {
            let a = randn(rng, n, n)?;
            job(move || Ok(digest_f64([determinant(&a)?])))
        }
        "eigenvalues" => {
            let a = randn(rng, n, n)?;
            let sym = DenseMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) / 2.0);
            job(move || Ok(digest_f64(eigenvalues_sym(&sym)?)))
        }
        "fft" => {
            let re: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let mut v = ComplexVector::from_real(&re);
            job(move || {
                fft_in_place(&mut v)?;
                Ok(Box::new(move || checksum_u64(v.values().iter().flat_map(|c| [c.re.to_bits(), c.im.to_bits()]))) as Digest)
            })
        }
        "inverse" => {
            let a = randn(rng, n, n)?;
            job(move || Ok(digest_f64(inverse(&a)?)))
        }
        "fibonacci" => {
            let exps: Vec<u32> = (0..n).map(|_| (1000.0 * rng.uniform()).floor() as u32).collect();
            job(move || Ok(digest_f64(exps.iter().map(|&a| binet(a)).collect::<Vec<_>>())))
        }
        "hilbert" => job(move || Ok(digest_f64(hilbert_matrix::<f64>(n)?))),
        "toeplitz" => job(move || Ok(digest_f64(toeplitz_matrix::<f64>(n)?))),
        "escoufier" => {
            let x = randn(rng, n, n)?.map(f64::abs);
            job(move || {
                let r = escoufier_select(&x)?;
                Ok(digest_u64(r.ordering.into_iter().map(|i| i as u64).collect::<Vec<_>>()))
            })
        }
        "gcd" => {
            let pairs = draw_pairs(rng, n, GCD_MAX_VALUE)?;
            job(move || Ok(digest_u64(pairs.iter().map(|&(a, b)| gcd(a, b)).collect::<Vec<_>>())))
        }
        "solve" => {
            let sys = LinearSystem::<f64>::planted(rng, n, s.secondary_or_primary())?;
            job(move || Ok(digest_f64(solve_smart(&sys)?)))
        }
        "balassa" => {
            let t = synthetic_trade_matrix(rng, n, s.secondary_or_primary())?;
            job(move || Ok(digest_f64(balassa_matrix(&t)?.b)))
        }
        other => Err(Error::invalid(format!("no reference kernel for task `{other}`"))),
    }
}

/// Registers the built-in tasks, each with a `reference` variant. `transpose`
/// also carries `naive-loop` and `builtin`; `solve` also carries `naive`.
pub fn register_builtin_suite(registry: &mut Registry) -> Result<()> {
    for spec in BUILTINS {
        registry.add_task(TaskDef::new(spec.id, spec.group, spec.base, spec.secondary, spec.rule, spec.label))?;
        let id = spec.id;
        registry.add_variant(KernelVariant::new(id, "reference", move |rng: &mut RngStream, s: &Sizes| {
            reference(id, rng, s)
        }))?;
    }
    registry.add_variant(KernelVariant::new("transpose", "naive-loop", |rng: &mut RngStream, s: &Sizes| {
        let a = randn(rng, s.primary, s.primary)?;
        job(move || Ok(digest_f64(transpose_naive(&a))))
    }))?;
    registry.add_variant(KernelVariant::new("transpose", "builtin", |rng: &mut RngStream, s: &Sizes| {
        let a = randn(rng, s.primary, s.primary)?;
        job(move || Ok(digest_f64(a.transpose())))
    }))?;
    registry.add_variant(KernelVariant::new("solve", "naive", |rng: &mut RngStream, s: &Sizes| {
        let sys = LinearSystem::<f64>::planted(rng, s.primary, s.secondary_or_primary())?;
        job(move || Ok(digest_f64(solve_naive(&sys)?)))
    }))?;
    Ok(())
}

pub fn builtin_registry() -> Registry {
    let mut r = Registry::new();
    register_builtin_suite(&mut r).expect("built-in task ids are unique");
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::runner::{run_suite, SuiteConfig};

    #[test]
    fn census() {
        let r = builtin_registry();
        assert_eq!(r.len(), 18);
        assert!(r.tasks().iter().all(|t| t.variant("reference").is_some()));
        let names: Vec<_> = r.task("transpose").unwrap().variants().iter().map(|v| v.variant_name.as_str()).collect();
        assert_eq!(names, ["reference", "naive-loop", "builtin"]);
        assert_eq!(SuiteSelection::Att.task_ids(&r).len(), 16);
        assert_eq!(SuiteSelection::Solve.task_ids(&r), ["solve"]);
        assert!(register_builtin_suite(&mut r.clone()).is_err());
    }

    #[test]
    fn local_base_sizes_and_labels() {
        let r = builtin_registry();
        let label = |id: &str, scale: f64| {
            let t = r.task(id).unwrap();
            t.label(&t.sizes(scale).unwrap())
        };
        assert_eq!(label("inverse", 1.0), "Inverse of a 1,600 × 1,600 matrix");
        assert_eq!(label("sort", 1.0), "Sorting of 7,000,000 values");
        assert_eq!(label("escoufier", 1.0), "Escoufier's method on a 45 × 45 matrix");
        assert_eq!(label("power", 1.0), "2,400 × 2,400 matrix^1,000");
        assert_eq!(label("fibonacci", 1.0), "3,500,000 Fibonacci numbers calculation");
        let expected = [
            ("power", 2400),
            ("crossprod", 2800),
            ("create-modify", 2500),
            ("regression", 3000),
            ("sort", 7_000_000),
            ("cholesky", 3000),
            ("determinant", 2500),
            ("eigenvalues", 640),
            ("fft", 2_400_000),
            ("inverse", 1600),
            ("fibonacci", 3_500_000),
            ("hilbert", 3000),
            ("toeplitz", 500),
            ("escoufier", 45),
            ("gcd", 400_000),
            ("solve", 30_000),
        ];
        for (id, base) in expected {
            assert_eq!(r.task(id).unwrap().base_size, base, "{id}");
        }
        assert_eq!(r.task("solve").unwrap().base_secondary, Some(1000));
        let fft = r.task("fft").unwrap().sizes(1.0).unwrap();
        assert_eq!((fft.requested, fft.primary), (2_400_000, 2_097_152));
    }

    #[test]
    fn cluster_preset_multiplies_by_five() {
        let r = builtin_registry();
        let inv = r.task("inverse").unwrap();
        let s = inv.sizes(Preset::Cluster.factor()).unwrap();
        assert_eq!(s.primary, 8000);
        assert_eq!(inv.label(&s), "Inverse of a 8,000 × 8,000 matrix");
        assert_eq!(r.task("sort").unwrap().sizes(5.0).unwrap().primary, 35_000_000);
    }

    #[test]
    fn tiny_suite_runs_clean_and_reproducibly() {
        let r = builtin_registry();
        let cfg = SuiteConfig { scale_factor: 0.005, repetitions: 2, warmups: 0, ..SuiteConfig::default() };
        let a = run_suite(&r, &cfg).unwrap();
        for row in &a {
            assert!(row.error.is_none(), "{}/{}: {:?}", row.task_id, row.variant, row.error);
        }
        assert_eq!(a.len(), 18 + 3);
        let b = run_suite(&r, &cfg).unwrap();
        let sums = |v: &[crate::bench::TaskResult]| v.iter().map(|r| r.checksum.clone()).collect::<Vec<_>>();
        assert_eq!(sums(&a), sums(&b));
    }

    #[test]
    fn transpose_variants_agree() {
        let r = builtin_registry();
        let t = r.task("transpose").unwrap();
        let s = t.sizes(0.01).unwrap();
        let sums: Vec<u64> = t
            .variants()
            .iter()
            .map(|v| (v.entry)(&mut RngStream::new(3), &s).unwrap()().unwrap()())
            .collect();
        assert!(sums.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn thousands_separator() {
        assert_eq!(thousands(7), "7");
        assert_eq!(thousands(640), "640");
        assert_eq!(thousands(1000), "1,000");
        assert_eq!(thousands(35_000_000), "35,000,000");
    }
}

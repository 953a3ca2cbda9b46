//! Median-time rank tables and their Markdown / JSON / CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bench::{Group, TaskResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub task_id: String,
    pub operation: String,
    pub variant: String,
    pub median: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub group: Group,
    pub rows: Vec<RankRow>,
}

/// A (task, variant) that produced no timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub task_id: String,
    pub operation: String,
    pub variant: String,
    pub error: String,
}

/// Size a task actually ran at after snapping, when it differs from the
/// requested one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoercedSize {
    pub task_id: String,
    pub requested: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub scale_factor: f64,
    pub repetitions: usize,
    pub warmups: usize,
    pub include_generation_in_timing: bool,
    pub coerced_sizes: Vec<CoercedSize>,
    pub timestamp: String,
    pub host: String,
}

impl Metadata {
    pub fn new(seed: u64, scale_factor: f64, repetitions: usize, warmups: usize) -> Self {
        Self {
            seed,
            scale_factor,
            repetitions,
            warmups,
            include_generation_in_timing: true,
            coerced_sizes: Vec::new(),
            timestamp: String::new(),
            host: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub metadata: Metadata,
    pub tables: Vec<RankTable>,
    pub failures: Vec<Failure>,
    /// Raw rows, kept so the machine formats carry every sample.
    pub results: Vec<TaskResult>,
}

impl ReportDocument {
    /// Ranks `results` and records any coerced sizes in the metadata.
    pub fn from_results(mut metadata: Metadata, results: Vec<TaskResult>) -> Self {
        let mut seen = BTreeMap::new();
        for r in &results {
            if let Some(s) = r.sizes.filter(|s| s.coerced()) {
                seen.entry(r.task_id.clone()).or_insert(CoercedSize {
                    task_id: r.task_id.clone(),
                    requested: s.requested,
                    actual: s.primary,
                });
            }
        }
        metadata.coerced_sizes = seen.into_values().collect();
        let (tables, failures) = rank_results(&results);
        Self { metadata, tables, failures, results }
    }
}

/// Groups successful rows into one table per group (fixed group order) and
/// ranks variants within each task by ascending median, ties by variant name.
/// Rows are ordered by operation label, then rank. Failed rows go to the
/// returned failure list instead.
pub fn rank_results(results: &[TaskResult]) -> (Vec<RankTable>, Vec<Failure>) {
    let mut failures = Vec::new();
    let mut by_task: BTreeMap<(Group, &str), Vec<RankRow>> = BTreeMap::new();
    for r in results {
        match (&r.stats, &r.error) {
            (Some(stats), None) => by_task.entry((r.group, &r.task_id)).or_default().push(RankRow {
                task_id: r.task_id.clone(),
                operation: r.operation.clone(),
                variant: r.variant.clone(),
                median: stats.median,
                rank: 0,
            }),
            (_, err) => failures.push(Failure {
                task_id: r.task_id.clone(),
                operation: r.operation.clone(),
                variant: r.variant.clone(),
                error: err.clone().unwrap_or_else(|| "no timings recorded".into()),
            }),
        }
    }

    let mut tables: Vec<RankTable> = Vec::new();
    for ((group, _), mut rows) in by_task {
        rows.sort_by(|a, b| a.median.total_cmp(&b.median).then_with(|| a.variant.cmp(&b.variant)));
        for (i, row) in rows.iter_mut().enumerate() {
            row.rank = i + 1;
        }
        match tables.iter_mut().find(|t| t.group == group) {
            Some(t) => t.rows.extend(rows),
            None => tables.push(RankTable { group, rows }),
        }
    }
    for t in &mut tables {
        t.rows.sort_by(|a, b| {
            a.operation
                .cmp(&b.operation)
                .then_with(|| a.task_id.cmp(&b.task_id))
                .then(a.rank.cmp(&b.rank))
        });
    }
    tables.sort_by_key(|t| Group::ALL.iter().position(|g| *g == t.group));
    (tables, failures)
}

/// Three decimals from 0.01 s up; below that, two significant digits in
/// scientific notation with a two-digit exponent (`4.6e-06`).
pub fn format_seconds(s: f64) -> String {
    if s == 0.0 || s.abs() >= 0.01 || !s.is_finite() {
        return format!("{s:.3}");
    }
    let sci = format!("{s:.1e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn render_markdown(doc: &ReportDocument) -> String {
    let m = &doc.metadata;
    let mut out = String::new();
    let _ = writeln!(out, "# Benchmark report\n");
    let _ = writeln!(out, "- seed: {}", m.seed);
    let _ = writeln!(out, "- scale factor: {}", m.scale_factor);
    let _ = writeln!(out, "- repetitions: {} (warmups: {})", m.repetitions, m.warmups);
    let _ = writeln!(out, "- generation timed: {}", m.include_generation_in_timing);
    if !m.timestamp.is_empty() {
        let _ = writeln!(out, "- timestamp: {}", m.timestamp);
    }
    if !m.host.is_empty() {
        let _ = writeln!(out, "- host: {}", m.host);
    }
    for c in &m.coerced_sizes {
        let _ = writeln!(out, "- {} size coerced from {} to {}", c.task_id, c.requested, c.actual);
    }

    for t in &doc.tables {
        let _ = writeln!(out, "\nTable: {}\n", t.group);
        let _ = writeln!(out, "| Operation | Median time (s) | Rank |");
        let _ = writeln!(out, "|:--|--:|--:|");
        for r in &t.rows {
            let _ = writeln!(
                out,
                "| {} - {} | {} | {} |",
                r.operation,
                r.variant,
                format_seconds(r.median),
                r.rank
            );
        }
    }

    if !doc.failures.is_empty() {
        let _ = writeln!(out, "\n## Failures\n");
        for f in &doc.failures {
            let _ = writeln!(out, "- {} - {}: {}", f.operation, f.variant, f.error);
        }
    }
    out
}

const CSV_HEADER: [&str; 16] = [
    "group",
    "task_id",
    "operation",
    "variant",
    "rank",
    "median",
    "mean",
    "min",
    "max",
    "stddev",
    "repetitions",
    "warmups",
    "size",
    "checksum",
    "error",
    "samples",
];

/// `json` (pretty, stable key order) or `csv` (metadata as `#` comment lines,
/// then one row per task/variant).
pub fn render_machine(doc: &ReportDocument, format: &str) -> Result<String> {
    match format {
        "json" => {
            let mut s = serde_json::to_string_pretty(doc)?;
            s.push('\n');
            Ok(s)
        }
        "csv" => render_csv(doc),
        other => Err(Error::invalid(format!("unknown report format `{other}` (expected json or csv)"))),
    }
}

pub fn parse_json(text: &str) -> Result<ReportDocument> {
    Ok(serde_json::from_str(text)?)
}

fn render_csv(doc: &ReportDocument) -> Result<String> {
    let m = &doc.metadata;
    let mut out = String::new();
    let _ = writeln!(out, "# seed={}", m.seed);
    let _ = writeln!(out, "# scale_factor={}", m.scale_factor);
    let _ = writeln!(out, "# repetitions={}", m.repetitions);
    let _ = writeln!(out, "# warmups={}", m.warmups);
    let _ = writeln!(out, "# include_generation_in_timing={}", m.include_generation_in_timing);
    let _ = writeln!(out, "# timestamp={}", m.timestamp);
    let _ = writeln!(out, "# host={}", m.host);
    for c in &m.coerced_sizes {
        let _ = writeln!(out, "# coerced {}={}->{}", c.task_id, c.requested, c.actual);
    }

    let ranks: BTreeMap<(&str, &str), usize> = doc
        .tables
        .iter()
        .flat_map(|t| &t.rows)
        .map(|r| ((r.task_id.as_str(), r.variant.as_str()), r.rank))
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &doc.results {
        let rank = ranks.get(&(r.task_id.as_str(), r.variant.as_str()));
        let size = r.sizes.map(|s| match s.secondary {
            Some(m) => format!("{}x{}", s.primary, m),
            None => s.primary.to_string(),
        });
        let stat = |f: fn(&crate::bench::TimingStats) -> String| r.stats.as_ref().map(f).unwrap_or_default();
        w.write_record([
            r.group.title().to_string(),
            r.task_id.clone(),
            r.operation.clone(),
            r.variant.clone(),
            rank.map(|k| k.to_string()).unwrap_or_default(),
            stat(|s| s.median.to_string()),
            stat(|s| s.mean.to_string()),
            stat(|s| s.min.to_string()),
            stat(|s| s.max.to_string()),
            stat(|s| s.stddev.to_string()),
            stat(|s| s.repetitions.to_string()),
            stat(|s| s.warmups.to_string()),
            size.unwrap_or_default(),
            r.checksum.clone().unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
            stat(|s| s.samples.iter().map(f64::to_string).collect::<Vec<_>>().join(";")),
        ])?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::bench::{Sizes, TimingStats};

    fn row(task: &str, group: Group, variant: &str, median: f64) -> TaskResult {
        TaskResult {
            task_id: task.into(),
            group,
            operation: format!("op {task}"),
            variant: variant.into(),
            sizes: Some(Sizes { primary: 8, secondary: None, requested: 10 }),
            stats: Some(TimingStats::from_samples(vec![median], 0).unwrap()),
            checksum: Some("00ff".into()),
            error: None,
        }
    }

    fn failed(task: &str, variant: &str) -> TaskResult {
        TaskResult {
            stats: None,
            checksum: None,
            error: Some("boom".into()),
            ..row(task, Group::Programmation, variant, 1.0)
        }
    }

    #[test]
    fn tie_broken_by_variant_name() {
        let g = Group::MatrixCalculation;
        let (tables, _) = rank_results(&[row("t", g, "b", 0.2), row("t", g, "c", 0.3), row("t", g, "a", 0.3)]);
        let got: Vec<_> = tables[0].rows.iter().map(|r| (r.variant.as_str(), r.rank)).collect();
        assert_eq!(got, [("b", 1), ("a", 2), ("c", 3)]);
    }

    #[test]
    fn single_variant_is_rank_one() {
        let (tables, failures) = rank_results(&[row("t", Group::Programmation, "reference", 5.0)]);
        assert_eq!(tables[0].rows[0].rank, 1);
        assert!(failures.is_empty());
    }

    #[test]
    fn three_rows_per_operation() {
        let g = Group::SolvingLinearSystems;
        let mut input = Vec::new();
        for task in ["naive", "smart"] {
            for (v, m) in [("x", 3.0), ("y", 1.0), ("z", 2.0)] {
                input.push(row(task, g, v, m));
            }
        }
        let (tables, _) = rank_results(&input);
        assert_eq!(tables.len(), 1);
        let rows = &tables[0].rows;
        assert_eq!(rows.len(), 6);
        for chunk in rows.chunks(3) {
            assert!(chunk.iter().all(|r| r.operation == chunk[0].operation));
            assert_eq!(chunk.iter().map(|r| r.rank).collect::<Vec<_>>(), [1, 2, 3]);
            assert_eq!(chunk[0].variant, "y");
        }
    }

    #[test]
    fn groups_in_fixed_order_and_failures_apart() {
        let input = [
            row("z", Group::BalassaIndices, "reference", 1.0),
            failed("f", "reference"),
            row("a", Group::MatrixCalculation, "reference", 1.0),
        ];
        let (tables, failures) = rank_results(&input);
        let groups: Vec<_> = tables.iter().map(|t| t.group).collect();
        assert_eq!(groups, [Group::MatrixCalculation, Group::BalassaIndices]);
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].task_id, "f");
    }

    #[test]
    fn seconds_formatting() {
        assert_eq!(format_seconds(0.0000046), "4.6e-06");
        assert_eq!(format_seconds(0.188), "0.188");
        assert_eq!(format_seconds(18.358), "18.358");
        assert_eq!(format_seconds(0.01), "0.010");
        assert_eq!(format_seconds(0.021), "0.021");
        assert_eq!(format_seconds(0.0099), "9.9e-03");
        assert_eq!(format_seconds(0.00999), "1.0e-02");
        assert_eq!(format_seconds(1.23e-12), "1.2e-12");
    }

    #[test]
    fn markdown_layout() {
        let doc = ReportDocument::from_results(
            Metadata::new(42, 0.05, 1, 0),
            vec![row("t", Group::Programmation, "reference", 0.0000046)],
        );
        let md = render_markdown(&doc);
        assert!(md.contains("- seed: 42"));
        assert!(md.contains("Table: Programmation"));
        assert!(md.contains("| Operation | Median time (s) | Rank |"));
        assert!(md.contains("| op t - reference | 4.6e-06 | 1 |"));
        assert!(md.contains("t size coerced from 10 to 8"));
    }

    #[test]
    fn empty_doc_is_metadata_only() {
        let doc = ReportDocument::from_results(Metadata::new(1, 1.0, 10, 1), Vec::new());
        let md = render_markdown(&doc);
        assert!(md.contains("- seed: 1"));
        assert!(!md.contains("Table:"));
        let json = render_machine(&doc, "json").unwrap();
        assert_eq!(parse_json(&json).unwrap(), doc);
        let csv = render_machine(&doc, "csv").unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut r = row("t", Group::MatrixFunctions, "reference", 0.1);
        r.stats = Some(TimingStats::from_samples(vec![0.1, 1.0 / 3.0, 2e-7, 0.30000000000000004], 1).unwrap());
        let mut meta = Metadata::new(7, 0.05, 4, 1);
        meta.timestamp = "2026-01-01T00:00:00Z".into();
        meta.host = "desk".into();
        let doc = ReportDocument::from_results(meta, vec![r, failed("f", "naive")]);
        let a = render_machine(&doc, "json").unwrap();
        let back = parse_json(&a).unwrap();
        assert_eq!(back, doc);
        assert_eq!(render_machine(&back, "json").unwrap(), a);
    }

    #[test]
    fn csv_rows_and_samples() {
        let mut r = row("t", Group::MatrixFunctions, "reference", 0.5);
        r.stats = Some(TimingStats::from_samples(vec![0.5, 0.25], 0).unwrap());
        let doc = ReportDocument::from_results(Metadata::new(3, 1.0, 2, 0), vec![r, failed("f", "naive")]);
        let csv = render_machine(&doc, "csv").unwrap();
        let body: Vec<_> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.len(), 3);
        assert!(body[0].starts_with("group,task_id,operation"));
        assert!(body[1].ends_with("0.5;0.25"));
        assert!(body[2].contains("boom"));
        assert!(csv.contains("# seed=3"));
    }

    #[test]
    fn unknown_format_rejected() {
        let doc = ReportDocument::from_results(Metadata::new(1, 1.0, 1, 0), Vec::new());
        assert!(matches!(render_machine(&doc, "xml"), Err(Error::InvalidArgument(_))));
    }

    proptest! {
        #[test]
        fn ranks_invariant_under_rescaling(medians in prop::collection::vec(1e-6f64..10.0, 1..8), k in 1e-3f64..1e3) {
            let g = Group::MatrixCalculation;
            let rows = |scale: f64| -> Vec<TaskResult> {
                medians.iter().enumerate().map(|(i, m)| row("t", g, &format!("v{i}"), m * scale)).collect()
            };
            let ranks = |rs: &[TaskResult]| -> Vec<(String, usize)> {
                let (t, _) = rank_results(rs);
                let mut v: Vec<_> = t[0].rows.iter().map(|r| (r.variant.clone(), r.rank)).collect();
                v.sort();
                v
            };
            prop_assert_eq!(ranks(&rows(1.0)), ranks(&rows(k)));
        }

        #[test]
        fn every_row_appears_once(n_ok in 0usize..6, n_bad in 0usize..4) {
            let mut input: Vec<_> = (0..n_ok).map(|i| row(&format!("t{i}"), Group::Programmation, "reference", i as f64 + 0.5)).collect();
            input.extend((0..n_bad).map(|i| failed(&format!("f{i}"), "reference")));
            let (tables, failures) = rank_results(&input);
            let ranked: usize = tables.iter().map(|t| t.rows.len()).sum();
            prop_assert_eq!(ranked + failures.len(), n_ok + n_bad);
        }
    }
}

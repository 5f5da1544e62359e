//! Result rows and the versioned CSV layout.
//!
//! ```text
//! # bap-results v1
//! instance,algorithm,seed,value,time_ms,iterations,restarts,best_iter,converged
//! ...one row per run, sorted by (instance, algorithm, seed)...
//! # aggregate
//! group,algorithm,runs,mean_value,mean_time_ms,mean_iterations,mean_restarts
//! ...
//! ```

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const VERSION_LINE: &str = "# bap-results v1";
pub const AGGREGATE_MARKER: &str = "# aggregate";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub value: i64,
    pub time_ms: u64,
    pub iterations: u64,
    pub restarts: u64,
    pub best_iter: u64,
    pub converged: bool,
}

pub type RowKey = (String, String, u64);

impl ResultRow {
    pub fn key(&self) -> RowKey {
        (self.instance.clone(), self.algorithm.clone(), self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub group: String,
    pub algorithm: String,
    pub runs: usize,
    pub mean_value: f64,
    pub mean_time_ms: f64,
    pub mean_iterations: f64,
    pub mean_restarts: f64,
}

/// Type and size part of a conventional instance name (`uniform 6x6 3` →
/// `uniform 6x6`); other names form their own group.
pub fn instance_group(name: &str) -> String {
    let parts: Vec<&str> = name.split_whitespace().collect();
    match parts.as_slice() {
        [kind, size, index] if index.parse::<usize>().is_ok() && size.contains('x') => format!("{kind} {size}"),
        _ => name.to_string(),
    }
}

/// Per-(group, algorithm) means, sorted by group then algorithm.
pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, String), Vec<&ResultRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((instance_group(&row.instance), row.algorithm.clone()))
            .or_default()
            .push(row);
    }
    groups
        .into_iter()
        .map(|((group, algorithm), members)| {
            let mean = |f: &dyn Fn(&ResultRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / members.len() as f64;
            AggregateRow {
                group,
                algorithm,
                runs: members.len(),
                mean_value: mean(&|r| r.value as f64),
                mean_time_ms: mean(&|r| r.time_ms as f64),
                mean_iterations: mean(&|r| r.iterations as f64),
                mean_restarts: mean(&|r| r.restarts as f64),
            }
        })
        .collect()
}

pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by_key(ResultRow::key);
}

/// CSV text of a single row without header.
pub fn row_line(row: &ResultRow) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.serialize(row)?;
    w.flush()?;
    Ok(w.into_inner().expect("flushed writer"))
}

/// Version line and column header.
pub fn write_header(out: &mut impl Write) -> Result<()> {
    writeln!(out, "{VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance",
        "algorithm",
        "seed",
        "value",
        "time_ms",
        "iterations",
        "restarts",
        "best_iter",
        "converged",
    ])?;
    out.write_all(&w.into_inner().expect("flushed writer"))?;
    Ok(())
}

/// Full results document: sorted rows followed by the aggregate section.
pub fn write_results(out: &mut impl Write, rows: &[ResultRow]) -> Result<()> {
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    write_header(out)?;
    for row in &rows {
        out.write_all(&row_line(row)?)?;
    }
    writeln!(out, "{AGGREGATE_MARKER}")?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "group",
        "algorithm",
        "runs",
        "mean_value",
        "mean_time_ms",
        "mean_iterations",
        "mean_restarts",
    ])?;
    for a in aggregate(&rows) {
        w.write_record([
            a.group,
            a.algorithm,
            a.runs.to_string(),
            format!("{:.3}", a.mean_value),
            format!("{:.3}", a.mean_time_ms),
            format!("{:.3}", a.mean_iterations),
            format!("{:.3}", a.mean_restarts),
        ])?;
    }
    out.write_all(&w.into_inner().expect("flushed writer"))?;
    Ok(())
}

/// Rows of a results document, tolerating a file cut short mid-write:
/// everything after the last newline and any malformed row is dropped, and
/// reading stops at the aggregate section.
pub fn read_results(text: &str) -> Vec<ResultRow> {
    let complete = match text.rfind('\n') {
        Some(end) => &text[..=end],
        None => "",
    };
    let body = complete
        .split_inclusive('\n')
        .take_while(|line| line.trim_end() != AGGREGATE_MARKER)
        .collect::<String>();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(body.as_bytes());
    reader.deserialize::<ResultRow>().filter_map(|r| r.ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, algorithm: &str, seed: u64, value: i64) -> ResultRow {
        ResultRow {
            instance: instance.into(),
            algorithm: algorithm.into(),
            seed,
            value,
            time_ms: 3,
            iterations: 10,
            restarts: 1,
            best_iter: 0,
            converged: true,
        }
    }

    #[test]
    fn groups() {
        assert_eq!(instance_group("uniform 6x6 3"), "uniform 6x6");
        assert_eq!(instance_group("exchange_trap"), "exchange_trap");
        assert_eq!(instance_group("hp_trap 5x5 2"), "hp_trap 5x5");
    }

    #[test]
    fn round_trip_and_sorting() {
        let rows = vec![
            row("uniform 4x4 1", "random/2ex", 2, -5),
            row("uniform 4x4 0", "random/aa", 1, 7),
            row("uniform 4x4 0", "random/2ex", 1, 9),
        ];
        let mut out = Vec::new();
        write_results(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# bap-results v1\ninstance,algorithm,seed,value,time_ms"));
        let back = read_results(&text);
        let mut sorted = rows.clone();
        sort_rows(&mut sorted);
        assert_eq!(back, sorted);
        assert_eq!(back[0].algorithm, "random/2ex");
        assert!(text.contains("# aggregate\ngroup,algorithm,runs"));
        assert!(text.contains("uniform 4x4,random/2ex,2,2.000,3.000,10.000,1.000"));
    }

    #[test]
    fn aggregate_means() {
        let rows = vec![row("a", "x", 0, 1), row("a", "x", 1, 2), row("a", "y", 0, 4)];
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 2);
        assert_eq!(agg[0].mean_value, 1.5);
        assert_eq!(agg[1].runs, 1);
    }

    #[test]
    fn truncated_files_keep_complete_rows() {
        let rows = vec![row("a", "x", 0, 1), row("a", "x", 1, -100)];
        let mut out = Vec::new();
        write_header(&mut out).unwrap();
        for r in &rows {
            out.extend(row_line(r).unwrap());
        }
        let text = String::from_utf8(out).unwrap();
        assert_eq!(read_results(&text), rows);
        for cut in 1..text.len() {
            let partial = read_results(&text[..cut]);
            assert!(partial.len() <= 2);
            assert!(partial.iter().all(|r| rows.contains(r)), "cut at {cut}");
        }
    }
}

//! Per-knot result records, the batch pipeline, and summary counts.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use vknot_core::cobordism::{slice_genus_bounds, SliceCtx};
use vknot_core::GaussDiagram;

/// Slice status derived from a bound interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "SLICE")]
    Slice,
    #[serde(rename = "NOT-SLICE")]
    NotSlice,
    #[serde(rename = "INTERVAL")]
    Interval,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Slice => "SLICE",
            Status::NotSlice => "NOT-SLICE",
            Status::Interval => "INTERVAL",
            Status::Unknown => "UNKNOWN",
        })
    }
}

impl std::str::FromStr for Status {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "SLICE" => Status::Slice,
            "NOT-SLICE" => Status::NotSlice,
            "INTERVAL" => Status::Interval,
            "UNKNOWN" => Status::Unknown,
            other => bail!("unknown status {other:?}"),
        })
    }
}

/// One output row of the batch pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub code: String,
    pub n: usize,
    pub theta: Option<usize>,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
    pub status: Status,
    pub method: String,
}

impl KnotRecord {
    /// Status from a computed interval: `SLICE` iff `[0,0]`, `NOT-SLICE` iff
    /// the lower bound is positive, `INTERVAL` otherwise.
    pub fn status_of(lower: i64, upper: i64) -> Status {
        if lower == 0 && upper == 0 {
            Status::Slice
        } else if lower >= 1 {
            Status::NotSlice
        } else {
            Status::Interval
        }
    }

    /// Structural sanity used to gate exit code 2.
    pub fn invariants_hold(&self) -> bool {
        match (self.lower, self.upper, self.theta) {
            (Some(l), Some(u), Some(t)) => {
                l <= u && self.status == Self::status_of(l, u) && l >= (t as i64 + 1) / 2
            }
            (None, None, _) => self.status == Status::Unknown,
            _ => false,
        }
    }
}

/// Batch configuration.
#[derive(Debug, Clone)]
pub struct TabConfig {
    pub ctx: SliceCtx,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Records with more chords than this are marked `UNKNOWN` instead of
    /// searched.
    pub max_chords: usize,
}

impl Default for TabConfig {
    fn default() -> Self {
        TabConfig {
            ctx: SliceCtx::default(),
            jobs: None,
            max_chords: 6,
        }
    }
}

fn compute_record(name: &str, d: &GaussDiagram, config: &TabConfig) -> KnotRecord {
    let code = d.display_code();
    let n = d.chord_count();
    let error_row = |method: String| KnotRecord {
        name: name.to_string(),
        code: code.clone(),
        n,
        theta: None,
        lower: None,
        upper: None,
        status: Status::Unknown,
        method,
    };
    if n > config.max_chords {
        return error_row(format!(
            "skipped: {n} chords exceeds limit {}",
            config.max_chords
        ));
    }
    match slice_genus_bounds(d, &config.ctx) {
        Ok(b) => KnotRecord {
            name: name.to_string(),
            code,
            n,
            theta: Some(b.theta),
            lower: Some(b.lower),
            upper: Some(b.upper),
            status: KnotRecord::status_of(b.lower, b.upper),
            method: b.method.render(),
        },
        Err(e) => error_row(format!("error: {e}")),
    }
}

/// Runs the pipeline over all records.  Output order equals input order for
/// any job count; failures are recorded per row.
pub fn tabulate(records: &[(String, GaussDiagram)], config: &TabConfig) -> Result<Vec<KnotRecord>> {
    let work = || -> Vec<KnotRecord> {
        records
            .par_iter()
            .map(|(name, d)| compute_record(name, d, config))
            .collect()
    };
    let rows = match config.jobs {
        None => work(),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(work),
    };
    Ok(rows)
}

/// Summary counts for one crossing number.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CrossingSummary {
    pub total: usize,
    pub theta_zero: usize,
    pub slice: usize,
    /// Knots with a pinned genus (`lower == upper`), keyed by that genus.
    pub per_gs: BTreeMap<i64, usize>,
    /// Rows with an unresolved interval or a computation failure.
    pub unknown: usize,
}

/// Counts grouped by crossing number; buckets partition each total.
pub type SummaryCounts = BTreeMap<usize, CrossingSummary>;

pub fn summarize(rows: &[KnotRecord]) -> SummaryCounts {
    let mut out: SummaryCounts = BTreeMap::new();
    for row in rows {
        let s = out.entry(row.n).or_default();
        s.total += 1;
        if row.theta == Some(0) {
            s.theta_zero += 1;
        }
        if row.status == Status::Slice {
            s.slice += 1;
        }
        match (row.lower, row.upper) {
            (Some(l), Some(u)) if l == u => *s.per_gs.entry(l).or_default() += 1,
            _ => s.unknown += 1,
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Rendering

pub const CSV_HEADER: &str = "name,code,n,theta,lower,upper,status,method";

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn records_to_csv(rows: &[KnotRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.name,
            r.code,
            r.n,
            opt(&r.theta),
            opt(&r.lower),
            opt(&r.upper),
            r.status,
            r.method
        ));
    }
    out
}

pub fn records_to_json(rows: &[KnotRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)? + "\n")
}

/// Parses rows back from the CSV emitted by [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<KnotRecord>> {
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => bail!("line 1: expected header {CSV_HEADER:?}, found {h:?}"),
        None => return Ok(rows),
    }
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        // `method` may contain no commas by construction, so a plain split
        // with a bounded field count is exact.
        let fields: Vec<&str> = line.splitn(8, ',').collect();
        if fields.len() != 8 {
            bail!("line {lineno}: expected 8 comma-separated fields");
        }
        let parse_opt = |s: &str, what: &str| -> Result<Option<i64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(s.parse().map_err(|_| {
                    anyhow::anyhow!("line {lineno}: bad {what} {s:?}")
                })?))
            }
        };
        rows.push(KnotRecord {
            name: fields[0].to_string(),
            code: fields[1].to_string(),
            n: fields[2]
                .parse()
                .map_err(|_| anyhow::anyhow!("line {lineno}: bad chord count {:?}", fields[2]))?,
            theta: parse_opt(fields[3], "theta")?.map(|v| v as usize),
            lower: parse_opt(fields[4], "lower")?,
            upper: parse_opt(fields[5], "upper")?,
            status: fields[6].parse()?,
            method: fields[7].to_string(),
        });
    }
    Ok(rows)
}

pub fn summary_to_csv(summary: &SummaryCounts) -> String {
    let max_gs = summary
        .values()
        .flat_map(|s| s.per_gs.keys().copied())
        .max()
        .unwrap_or(0)
        .max(2);
    let mut out = String::from("n,total,theta_zero,slice");
    for g in 0..=max_gs {
        out.push_str(&format!(",gs_{g}"));
    }
    out.push_str(",unknown\n");
    for (n, s) in summary {
        out.push_str(&format!("{n},{},{},{}", s.total, s.theta_zero, s.slice));
        for g in 0..=max_gs {
            out.push_str(&format!(",{}", s.per_gs.get(&g).copied().unwrap_or(0)));
        }
        out.push_str(&format!(",{}\n", s.unknown));
    }
    out
}

pub fn summary_to_json(summary: &SummaryCounts) -> Result<String> {
    Ok(serde_json::to_string_pretty(summary)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(name: &str, n: usize, theta: usize, lower: i64, upper: i64) -> KnotRecord {
        KnotRecord {
            name: name.into(),
            code: String::new(),
            n,
            theta: Some(theta),
            lower: Some(lower),
            upper: Some(upper),
            status: KnotRecord::status_of(lower, upper),
            method: "!".into(),
        }
    }

    #[test]
    fn status_derivation() {
        assert_eq!(KnotRecord::status_of(0, 0), Status::Slice);
        assert_eq!(KnotRecord::status_of(1, 1), Status::NotSlice);
        assert_eq!(KnotRecord::status_of(1, 2), Status::NotSlice);
        assert_eq!(KnotRecord::status_of(0, 1), Status::Interval);
    }

    #[test]
    fn summarize_empty_input_is_all_zeros() {
        assert!(summarize(&[]).is_empty());
    }

    #[test]
    fn summarize_partitions_totals() {
        let rows = vec![
            row("a", 3, 1, 1, 1),
            row("b", 3, 0, 0, 0),
            row("c", 3, 0, 0, 1),
            row("d", 4, 2, 2, 2),
        ];
        let s = summarize(&rows);
        assert_eq!(s[&3].total, 3);
        assert_eq!(s[&3].theta_zero, 2);
        assert_eq!(s[&3].slice, 1);
        assert_eq!(s[&3].per_gs[&0], 1);
        assert_eq!(s[&3].per_gs[&1], 1);
        assert_eq!(s[&3].unknown, 1);
        assert_eq!(s[&4].per_gs[&2], 1);
        for per_n in s.values() {
            let bucketed: usize = per_n.per_gs.values().sum::<usize>() + per_n.unknown;
            assert_eq!(bucketed, per_n.total);
        }
    }

    #[test]
    fn csv_roundtrip_preserves_rows() {
        let rows = vec![
            row("2.1", 2, 1, 1, 1),
            KnotRecord {
                name: "x".into(),
                code: "O1+U1+".into(),
                n: 1,
                theta: None,
                lower: None,
                upper: None,
                status: Status::Unknown,
                method: "error: overflowed".into(),
            },
        ];
        let text = records_to_csv(&rows);
        assert_eq!(records_from_csv(&text).unwrap(), rows);
    }
}

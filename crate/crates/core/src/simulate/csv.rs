use std::collections::BTreeMap;

use super::confidence::ConfidenceTable;
use super::sampler::{TallyKind, TallyTable, GENERATOR};
use crate::error::{Error, Result};

pub const ESTIMATES_CSV_HEADER: &str = "k,count,estimate,ci_lower,ci_upper";

/// Writes a tally with its intervals; metadata goes in `# key value` lines.
pub fn tally_to_csv(t: &TallyTable, ci: &ConfidenceTable) -> String {
    let mut out = format!(
        "# kind {}\n# window {}\n# samples {}\n# seed {}\n# generator {}\n# level {}\n# overflow {}\n",
        t.kind.as_str(),
        t.window,
        t.samples,
        t.seed,
        GENERATOR,
        ci.level,
        t.overflow
    );
    if t.kind != TallyKind::M {
        out.push_str("# note missing sums at or beyond the window are not counted\n");
    }
    out.push_str(ESTIMATES_CSV_HEADER);
    out.push('\n');
    for r in &ci.rows {
        out.push_str(&format!(
            "{},{},{:.9},{:.9},{:.9}\n",
            r.k, r.count, r.estimate, r.lower, r.upper
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub k: usize,
    pub count: u64,
    pub estimate: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

/// A parsed estimates file.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EstimatesTable {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<EstimateRow>,
}

impl EstimatesTable {
    pub fn estimates(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.estimate).collect()
    }

    /// Interval half-widths, usable as standard-error proxies for weights.
    pub fn half_widths(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| 0.5 * (r.ci_upper - r.ci_lower))
            .collect()
    }
}

/// Rows must run `k = 0, 1, …` with `0 ≤ ci_lower ≤ estimate ≤ ci_upper ≤ 1`.
pub fn parse_estimates_csv(text: &str) -> Result<EstimatesTable> {
    let mut table = EstimatesTable::default();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.trim().split_once(' ') {
                table.meta.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != ESTIMATES_CSV_HEADER {
                return Err(Error::parse(no, "unexpected header"));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(Error::parse(
                no,
                format!("expected 5 fields, got {}", f.len()),
            ));
        }
        let k: usize = f[0].parse().map_err(|_| Error::parse(no, "bad k"))?;
        if k != table.rows.len() {
            return Err(Error::parse(
                no,
                format!("expected k = {}", table.rows.len()),
            ));
        }
        let count: u64 = f[1].parse().map_err(|_| Error::parse(no, "bad count"))?;
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::parse(no, format!("bad number {s:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(no, "non-finite value"));
            }
            Ok(v)
        };
        let (estimate, ci_lower, ci_upper) = (num(f[2])?, num(f[3])?, num(f[4])?);
        if !(0.0 <= ci_lower && ci_lower <= estimate && estimate <= ci_upper && ci_upper <= 1.0) {
            return Err(Error::parse(
                no,
                "need 0 <= ci_lower <= estimate <= ci_upper <= 1",
            ));
        }
        table.rows.push(EstimateRow {
            k,
            count,
            estimate,
            ci_lower,
            ci_upper,
        });
    }
    if !header_seen {
        return Err(Error::parse(0, "missing header"));
    }
    if let Some(s) = table.meta.get("samples") {
        let samples: u64 = s
            .parse()
            .map_err(|_| Error::parse(0, "bad samples metadata"))?;
        if table.rows.iter().any(|r| r.count > samples) {
            return Err(Error::parse(0, "count exceeds sample size"));
        }
    }
    Ok(table)
}

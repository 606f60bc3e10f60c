//! Line-oriented text checkpoints for [`BoundsAccumulator`].
//!
//! ```text
//! sumsets-checkpoint 1
//! n 12
//! n1 10
//! shards 0-3
//! processed 4096
//! <32 lower entries, 32 upper entries, 32 overhang entries, one per line>
//! sha256 <hex digest of every preceding byte>
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use super::accumulator::{shard_count, BoundsAccumulator};
use super::beta::TABULATED;
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &str = "sumsets-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Compresses a sorted id set into `a-b,c,...` ranges.
pub fn format_ranges(ids: &BTreeSet<u64>) -> String {
    let mut parts = Vec::new();
    let mut iter = ids.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end = iter.next().unwrap();
        }
        parts.push(if start == end {
            start.to_string()
        } else {
            format!("{start}-{end}")
        });
    }
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(",")
    }
}

/// Inverse of [`format_ranges`]; rejects overlaps, reversed ranges and ids
/// at or above `limit`.
pub fn parse_ranges(s: &str, limit: u64) -> std::result::Result<BTreeSet<u64>, String> {
    let mut out = BTreeSet::new();
    if s == "-" {
        return Ok(out);
    }
    for part in s.split(',') {
        let (a, b) = match part.split_once('-') {
            Some((a, b)) => (a, b),
            None => (part, part),
        };
        let a: u64 = a.parse().map_err(|_| format!("bad shard id {a:?}"))?;
        let b: u64 = b.parse().map_err(|_| format!("bad shard id {b:?}"))?;
        if a > b {
            return Err(format!("reversed range {part}"));
        }
        if b >= limit {
            return Err(format!("shard {b} outside 0..{limit}"));
        }
        for id in a..=b {
            if !out.insert(id) {
                return Err(format!("shard {id} listed twice"));
            }
        }
    }
    Ok(out)
}

pub fn checkpoint_to_string(acc: &BoundsAccumulator) -> String {
    let mut body = format!(
        "{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}\nn {}\nn1 {}\nshards {}\nprocessed {}\n",
        acc.n,
        acc.n1,
        format_ranges(&acc.shards),
        acc.processed
    );
    for v in [&acc.lower, &acc.upper, &acc.overhang] {
        for x in v {
            body.push_str(&x.to_str_radix(10));
            body.push('\n');
        }
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(&format!("sha256 {digest}\n"));
    body
}

fn keyed<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (no, text) = line.ok_or_else(|| Error::parse(0, format!("missing {key} line")))?;
    match text.split_once(' ') {
        Some((k, v)) if k == key => Ok((no, v)),
        _ => Err(Error::parse(no, format!("expected `{key} <value>`"))),
    }
}

fn number<T: std::str::FromStr>(no: usize, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(no, format!("bad number {v:?}")))
}

/// Parses and verifies a checkpoint text.
pub fn parse_checkpoint(text: &str) -> Result<BoundsAccumulator> {
    let digest_at = text
        .rfind("sha256 ")
        .ok_or_else(|| Error::parse(0, "missing digest line"))?;
    let (body, trailer) = text.split_at(digest_at);
    let lines_before = body.lines().count() + 1;
    let claimed = trailer
        .strip_prefix("sha256 ")
        .and_then(|t| t.strip_suffix('\n'))
        .ok_or_else(|| Error::parse(lines_before, "malformed digest line"))?;
    let actual = hex::encode(Sha256::digest(body.as_bytes()));
    if claimed != actual {
        return Err(Error::parse(lines_before, "digest mismatch"));
    }
    let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (no, version) = keyed(lines.next(), CHECKPOINT_MAGIC)?;
    if number::<u32>(no, version)? != CHECKPOINT_VERSION {
        return Err(Error::parse(no, format!("unsupported version {version}")));
    }
    let (no, n) = keyed(lines.next(), "n")?;
    let n: u32 = number(no, n)?;
    let (no, n1) = keyed(lines.next(), "n1")?;
    let n1: u32 = number(no, n1)?;
    let (no, shards) = keyed(lines.next(), "shards")?;
    let limit = shard_count(n, n1).map_err(|e| Error::parse(no, e.to_string()))?;
    let shards = parse_ranges(shards, limit).map_err(|e| Error::parse(no, e))?;
    let (no, processed) = keyed(lines.next(), "processed")?;
    let processed: u64 = number(no, processed)?;
    let mut values = Vec::with_capacity(3 * TABULATED);
    for (no, l) in lines.by_ref().take(3 * TABULATED) {
        if l.is_empty() || !l.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(no, format!("bad integer {l:?}")));
        }
        values.push(BigUint::parse_bytes(l.as_bytes(), 10).unwrap());
    }
    if values.len() != 3 * TABULATED {
        return Err(Error::parse(
            0,
            format!("expected {} entries", 3 * TABULATED),
        ));
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::parse(no, "trailing content before digest"));
    }
    let overhang = values.split_off(2 * TABULATED);
    let upper = values.split_off(TABULATED);
    let acc = BoundsAccumulator {
        n,
        n1,
        shards,
        processed,
        lower: values,
        upper,
        overhang,
    };
    acc.validate()
        .map_err(|e| Error::parse(0, format!("inconsistent checkpoint: {e}")))?;
    Ok(acc)
}

fn checkpoint_error(path: &Path, reason: impl ToString) -> Error {
    Error::Checkpoint {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

/// Writes `acc` to `path` through a temporary file and a rename, so a
/// reader never sees a partial checkpoint.
pub fn checkpoint_save(acc: &BoundsAccumulator, path: &Path) -> Result<()> {
    let text = checkpoint_to_string(acc);
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| checkpoint_error(path, "not a file path"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_load(path: &Path) -> Result<BoundsAccumulator> {
    let text = fs::read_to_string(path).map_err(|e| checkpoint_error(path, e))?;
    parse_checkpoint(&text).map_err(|e| checkpoint_error(path, e))
}

/// Merges `acc` into the checkpoint at `path` (creating it if absent) and
/// returns the merged accumulator.
pub fn checkpoint_merge(acc: &BoundsAccumulator, path: &Path) -> Result<BoundsAccumulator> {
    let merged = if path.exists() {
        let mut on_disk = checkpoint_load(path)?;
        on_disk.merge(acc).map_err(|e| checkpoint_error(path, e))?;
        on_disk
    } else {
        acc.clone()
    };
    checkpoint_save(&merged, path)?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigbounds::enumerate_shard;

    #[test]
    fn round_trip() {
        let acc = enumerate_shard(2, 2, 0).unwrap();
        let text = checkpoint_to_string(&acc);
        assert_eq!(parse_checkpoint(&text).unwrap(), acc);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("n2.ckpt");
        checkpoint_save(&acc, &path).unwrap();
        assert_eq!(checkpoint_load(&path).unwrap(), acc);
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn merge_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("merged.ckpt");
        let s0 = enumerate_shard(12, 11, 0).unwrap();
        let s1 = enumerate_shard(12, 11, 1).unwrap();
        checkpoint_merge(&s0, &path).unwrap();
        let merged = checkpoint_merge(&s1, &path).unwrap();
        let single = enumerate_shard(12, 12, 0).unwrap();
        assert_eq!(merged.upper, single.upper);
        assert_eq!(merged.overhang, single.overhang);
        assert_eq!(merged.lower, single.lower);
        assert!(merged.is_complete());
        assert!(matches!(
            checkpoint_merge(&s1, &path),
            Err(Error::Checkpoint { .. })
        ));
    }

    #[test]
    fn corruption_detected() {
        let text = checkpoint_to_string(&enumerate_shard(6, 5, 1).unwrap());
        let tampered = text.replacen("processed 16", "processed 17", 1);
        assert_ne!(tampered, text);
        assert!(parse_checkpoint(&tampered).is_err());
        assert!(parse_checkpoint(&text[..text.len() - 3]).is_err());
        assert!(parse_checkpoint("").is_err());
    }

    #[test]
    fn ranges() {
        let ids: BTreeSet<u64> = [0, 1, 2, 3, 7, 9, 10].into_iter().collect();
        assert_eq!(format_ranges(&ids), "0-3,7,9-10");
        assert_eq!(parse_ranges("0-3,7,9-10", 16).unwrap(), ids);
        assert_eq!(parse_ranges("-", 16).unwrap(), BTreeSet::new());
        assert!(parse_ranges("0-3,7,9-10", 10).is_err());
        assert!(parse_ranges("3-1", 16).is_err());
        assert!(parse_ranges("1,1", 16).is_err());
        assert!(parse_ranges("x", 16).is_err());
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::accumulator::{enumerate_shard, shard_count, BoundsAccumulator};
use super::checkpoint::{checkpoint_load, checkpoint_save};
use crate::error::{Error, Result};

/// Which shards a run computed and which it found already on disk.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub computed: Vec<u64>,
    pub reused: Vec<u64>,
    pub files: Vec<PathBuf>,
}

pub fn shard_path(dir: &Path, n: u32, n1: u32, shard: u64) -> PathBuf {
    dir.join(format!("bounds-n{n}-n1_{n1}-shard{shard:07}.ckpt"))
}

fn reusable(path: &Path, n: u32, n1: u32, shard: u64) -> Result<bool> {
    if !path.exists() {
        return Ok(false);
    }
    let acc = checkpoint_load(path)?;
    if acc.n != n || acc.n1 != n1 || acc.shards.len() != 1 || !acc.shards.contains(&shard) {
        return Err(Error::Checkpoint {
            path: path.to_path_buf(),
            reason: format!("does not hold shard {shard} of (n, n1) = ({n}, {n1})"),
        });
    }
    Ok(true)
}

/// Computes the given shards (all of them when `shards` is `None`) into
/// `dir`, one immutable checkpoint per shard. Shards whose checkpoint
/// already exists and verifies are skipped, so an interrupted run resumes.
pub fn run_shards(n: u32, n1: u32, shards: Option<&[u64]>, dir: &Path) -> Result<RunSummary> {
    let count = shard_count(n, n1)?;
    let wanted: Vec<u64> = match shards {
        Some(list) => {
            if let Some(bad) = list.iter().find(|&&s| s >= count) {
                return Err(Error::invalid(format!("shard {bad} outside 0..{count}")));
            }
            list.to_vec()
        }
        None => (0..count).collect(),
    };
    fs::create_dir_all(dir)?;
    let outcomes: Vec<(u64, bool, PathBuf)> = wanted
        .par_iter()
        .map(|&s| {
            let path = shard_path(dir, n, n1, s);
            if reusable(&path, n, n1, s)? {
                return Ok((s, false, path));
            }
            let acc = enumerate_shard(n, n1, s)?;
            checkpoint_save(&acc, &path)?;
            Ok((s, true, path))
        })
        .collect::<Result<_>>()?;
    let mut summary = RunSummary::default();
    for (s, fresh, path) in outcomes {
        if fresh {
            summary.computed.push(s);
        } else {
            summary.reused.push(s);
        }
        summary.files.push(path);
    }
    Ok(summary)
}

/// Loads and merges every checkpoint file in `dir` (those ending `.ckpt`),
/// in name order. Returns the merged accumulator and the files read.
pub fn merge_dir(dir: &Path) -> Result<(BoundsAccumulator, Vec<PathBuf>)> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ckpt"))
        .collect();
    files.sort();
    let mut merged: Option<BoundsAccumulator> = None;
    for path in &files {
        let acc = checkpoint_load(path)?;
        match merged.as_mut() {
            None => merged = Some(acc),
            Some(m) => m.merge(&acc).map_err(|e| Error::Checkpoint {
                path: path.clone(),
                reason: e.to_string(),
            })?,
        }
    }
    let merged =
        merged.ok_or_else(|| Error::Coverage(format!("no checkpoints in {}", dir.display())))?;
    Ok((merged, files))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigbounds::{combine, enumerate_shard};

    #[test]
    fn run_resume_and_merge() {
        let dir = tempfile::tempdir().unwrap();
        let first = run_shards(12, 10, Some(&[0, 2]), dir.path()).unwrap();
        assert_eq!(first.computed, vec![0, 2]);
        let (partial, _) = merge_dir(dir.path()).unwrap();
        assert!(matches!(combine(&partial), Err(Error::Coverage(_))));
        let second = run_shards(12, 10, None, dir.path()).unwrap();
        assert_eq!(second.reused, vec![0, 2]);
        assert_eq!(second.computed, vec![1, 3]);
        let (merged, files) = merge_dir(dir.path()).unwrap();
        assert_eq!(files.len(), 4);
        let single = enumerate_shard(12, 12, 0).unwrap();
        assert_eq!(combine(&merged).unwrap(), combine(&single).unwrap());
    }

    #[test]
    fn foreign_checkpoint_rejected() {
        let dir = tempfile::tempdir().unwrap();
        run_shards(8, 7, Some(&[0]), dir.path()).unwrap();
        fs::rename(
            shard_path(dir.path(), 8, 7, 0),
            shard_path(dir.path(), 8, 7, 1),
        )
        .unwrap();
        assert!(matches!(
            run_shards(8, 7, None, dir.path()),
            Err(Error::Checkpoint { .. })
        ));
    }
}

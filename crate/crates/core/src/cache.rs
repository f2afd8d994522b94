//! Append-only JSON-lines store of search reports.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Shape;
use crate::search::{ExtremalReport, Mode};

/// Version tag of the front-decomposition engine. Bump when its results could change.
pub const FRONT_ENGINE_TAG: &str = "front-v1";
/// Version tag of the flat oracle.
pub const FLAT_ENGINE_TAG: &str = "flat-v1";

pub const DEFAULT_CACHE_PATH: &str = "islands-cache.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub shape: Shape,
    pub cubic: bool,
    pub mode: Mode,
    pub engine: String,
    pub report: ExtremalReport,
}

impl CacheEntry {
    fn matches(&self, shape: &Shape, cubic: bool, mode: Mode, engine: &str) -> bool {
        self.shape == *shape && self.cubic == cubic && self.mode == mode && self.engine == engine
    }
}

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    entries: Vec<CacheEntry>,
    skipped_lines: usize,
}

impl ResultCache {
    /// Loads `path`, treating a missing file as empty. Lines that do not parse are
    /// ignored and counted.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut entries = Vec::new();
        let mut skipped_lines = 0;
        match File::open(&path) {
            Ok(file) => {
                for line in BufReader::new(file).lines() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<CacheEntry>(&line) {
                        Ok(entry) => entries.push(entry),
                        Err(_) => skipped_lines += 1,
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(ResultCache {
            path,
            entries,
            skipped_lines,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn skipped_lines(&self) -> usize {
        self.skipped_lines
    }

    /// A stored report for exactly this shape, flag, mode and engine tag.
    pub fn lookup(
        &self,
        shape: &Shape,
        cubic: bool,
        mode: Mode,
        engine: &str,
    ) -> Option<&ExtremalReport> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.matches(shape, cubic, mode, engine))
            .map(|e| &e.report)
    }

    pub fn insert(&mut self, engine: &str, report: ExtremalReport) -> Result<()> {
        let entry = CacheEntry {
            shape: report.shape.clone(),
            cubic: report.cubic,
            mode: report.mode,
            engine: engine.to_owned(),
            report,
        };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.write_all(line.as_bytes())?;
        self.entries.push(entry);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{extremal_size, SearchConfig};

    #[test]
    fn store_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let shape = Shape::new(vec![2, 3]).unwrap();
        let report = extremal_size(&shape, &SearchConfig::new(Mode::Max, false)).unwrap();

        let mut cache = ResultCache::open(&path).unwrap();
        assert!(cache.is_empty());
        cache.insert(FRONT_ENGINE_TAG, report.clone()).unwrap();

        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("not json\n");
        std::fs::write(&path, text).unwrap();

        let reloaded = ResultCache::open(&path).unwrap();
        assert_eq!(reloaded.len(), 1);
        assert_eq!(reloaded.skipped_lines(), 1);
        // Elapsed time is stored in whole milliseconds.
        let found = reloaded
            .lookup(&shape, false, Mode::Max, FRONT_ENGINE_TAG)
            .unwrap();
        assert_eq!(found.elapsed.as_millis(), report.elapsed.as_millis());
        assert_eq!(
            ExtremalReport {
                elapsed: report.elapsed,
                ..found.clone()
            },
            report
        );
    }

    #[test]
    fn lookup_requires_exact_key() {
        let dir = tempfile::tempdir().unwrap();
        let shape = Shape::new(vec![2, 3]).unwrap();
        let mut cache = ResultCache::open(dir.path().join("c.jsonl")).unwrap();
        cache
            .insert(
                FRONT_ENGINE_TAG,
                extremal_size(&shape, &SearchConfig::new(Mode::Max, false)).unwrap(),
            )
            .unwrap();
        assert!(cache
            .lookup(&shape, false, Mode::Min, FRONT_ENGINE_TAG)
            .is_none());
        assert!(cache
            .lookup(&shape, true, Mode::Max, FRONT_ENGINE_TAG)
            .is_none());
        assert!(cache
            .lookup(&shape, false, Mode::Max, FLAT_ENGINE_TAG)
            .is_none());
        assert!(cache
            .lookup(
                &Shape::new(vec![3, 2]).unwrap(),
                false,
                Mode::Max,
                FRONT_ENGINE_TAG
            )
            .is_none());
        assert!(cache.lookup(&shape, false, Mode::Max, "front-v0").is_none());
    }
}

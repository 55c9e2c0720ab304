use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::{LabError, Result};

const MAGIC: &str = "# negpell-lab scan cache v1";

/// Per-radicand scan outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub d: u64,
    pub pellian: bool,
    pub rk4: u8,
}

#[derive(Clone, Copy, Debug)]
struct Section {
    offset: u64,
    len: u64,
    count: usize,
}

/// Append-only text cache of scan records, grouped into chunks `[lo, hi)`.
///
/// Each chunk is written in one piece between `chunk lo hi` and
/// `end lo hi count` lines. A chunk without its `end` line, as left by an
/// interrupted run, is ignored and recomputed. Chunks are read back on
/// demand, so opening a large cache only indexes it.
#[derive(Debug)]
pub struct ScanCache {
    path: Option<PathBuf>,
    index: BTreeMap<(u64, u64), Section>,
    /// Length of the prefix made of complete chunks.
    valid_len: u64,
}

impl ScanCache {
    /// A cache that stores nothing.
    pub fn disabled() -> Self {
        ScanCache {
            path: None,
            index: BTreeMap::new(),
            valid_len: 0,
        }
    }

    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = ScanCache {
            path: Some(path.to_path_buf()),
            index: BTreeMap::new(),
            valid_len: 0,
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(LabError::io(path, e)),
        };
        let bad = |line: usize, message: String| LabError::Cache {
            path: path.into(),
            line,
            message,
        };
        let mut reader = BufReader::new(file);
        let mut offset = 0u64;
        let mut open: Option<(u64, u64, u64, usize)> = None;
        let mut buf = String::new();
        for lineno in 1.. {
            buf.clear();
            let n = reader
                .read_line(&mut buf)
                .map_err(|e| LabError::io(path, e))?;
            if n == 0 {
                break;
            }
            let start = offset;
            offset += n as u64;
            if !buf.ends_with('\n') {
                // Torn final line.
                break;
            }
            let line = buf.trim_end();
            if lineno == 1 {
                if line != MAGIC {
                    return Err(bad(1, format!("expected {MAGIC:?}")));
                }
                cache.valid_len = offset;
                continue;
            }
            let fields: Vec<&str> = line.split(' ').collect();
            match fields[0] {
                "chunk" => {
                    let (lo, hi) =
                        parse_pair(&fields).ok_or_else(|| bad(lineno, "bad chunk line".into()))?;
                    open = Some((lo, hi, offset, 0));
                }
                "end" => {
                    let (lo, hi) =
                        parse_pair(&fields).ok_or_else(|| bad(lineno, "bad end line".into()))?;
                    let count: usize = fields
                        .get(3)
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| bad(lineno, "bad count".into()))?;
                    match open.take() {
                        Some((l, h, first, seen)) if (l, h) == (lo, hi) && seen == count => {
                            cache.index.insert(
                                (lo, hi),
                                Section {
                                    offset: first,
                                    len: start - first,
                                    count,
                                },
                            );
                            cache.valid_len = offset;
                        }
                        _ => {
                            return Err(bad(
                                lineno,
                                format!("end of chunk [{lo}, {hi}) does not match its records"),
                            ))
                        }
                    }
                }
                _ => match open.as_mut() {
                    Some(sec) => {
                        parse_record(line)
                            .ok_or_else(|| bad(lineno, format!("bad record {line:?}")))?;
                        sec.3 += 1;
                    }
                    None => return Err(bad(lineno, "record outside a chunk".into())),
                },
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn contains(&self, lo: u64, hi: u64) -> bool {
        self.index.contains_key(&(lo, hi))
    }

    pub fn get(&self, lo: u64, hi: u64) -> Result<Option<Vec<ScanRecord>>> {
        let (Some(path), Some(sec)) = (&self.path, self.index.get(&(lo, hi))) else {
            return Ok(None);
        };
        let mut f = File::open(path).map_err(|e| LabError::io(path, e))?;
        f.seek(SeekFrom::Start(sec.offset))
            .map_err(|e| LabError::io(path, e))?;
        let mut text = String::with_capacity(sec.len as usize);
        f.take(sec.len)
            .read_to_string(&mut text)
            .map_err(|e| LabError::io(path, e))?;
        let records: Vec<ScanRecord> = text.lines().filter_map(parse_record).collect();
        if records.len() != sec.count {
            return Err(LabError::Cache {
                path: path.clone(),
                line: 0,
                message: format!("chunk [{lo}, {hi}) changed on disk"),
            });
        }
        Ok(Some(records))
    }

    /// Appends a chunk unless it is already present.
    pub fn insert(&mut self, lo: u64, hi: u64, records: &[ScanRecord]) -> Result<()> {
        let Some(path) = self.path.clone() else {
            return Ok(());
        };
        if self.contains(lo, hi) {
            return Ok(());
        }
        let mut f = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(false)
            .open(&path)
            .map_err(|e| LabError::io(&path, e))?;
        // Drop any torn chunk left by an interrupted run.
        f.set_len(self.valid_len)
            .map_err(|e| LabError::io(&path, e))?;
        f.seek(SeekFrom::Start(self.valid_len))
            .map_err(|e| LabError::io(&path, e))?;
        let mut text = String::new();
        if self.valid_len == 0 {
            text.push_str(MAGIC);
            text.push('\n');
        }
        text.push_str(&format!("chunk {lo} {hi}\n"));
        let body_start = self.valid_len + text.len() as u64;
        let mut body = String::with_capacity(records.len() * 12);
        for r in records {
            body.push_str(&format!("{} {} {}\n", r.d, u8::from(r.pellian), r.rk4));
        }
        text.push_str(&body);
        text.push_str(&format!("end {lo} {hi} {}\n", records.len()));
        f.write_all(text.as_bytes())
            .map_err(|e| LabError::io(&path, e))?;
        f.sync_data().map_err(|e| LabError::io(&path, e))?;
        self.valid_len += text.len() as u64;
        self.index.insert(
            (lo, hi),
            Section {
                offset: body_start,
                len: body.len() as u64,
                count: records.len(),
            },
        );
        Ok(())
    }
}

fn parse_pair(fields: &[&str]) -> Option<(u64, u64)> {
    Some((fields.get(1)?.parse().ok()?, fields.get(2)?.parse().ok()?))
}

fn parse_record(line: &str) -> Option<ScanRecord> {
    let mut it = line.split(' ');
    let d = it.next()?.parse().ok()?;
    let pellian = match it.next()? {
        "0" => false,
        "1" => true,
        _ => return None,
    };
    let rk4 = it.next()?.parse().ok()?;
    it.next()
        .is_none()
        .then_some(ScanRecord { d, pellian, rk4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(n: u64) -> Vec<ScanRecord> {
        (0..n)
            .map(|i| ScanRecord {
                d: 5 + i,
                pellian: i % 3 == 0,
                rk4: (i % 4) as u8,
            })
            .collect()
    }

    #[test]
    fn chunks_survive_reopening() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let mut c = ScanCache::open(&path).unwrap();
        c.insert(0, 100, &recs(7)).unwrap();
        c.insert(100, 200, &recs(3)).unwrap();
        c.insert(0, 100, &recs(2)).unwrap();
        let c = ScanCache::open(&path).unwrap();
        assert_eq!(c.get(0, 100).unwrap().unwrap(), recs(7));
        assert_eq!(c.get(100, 200).unwrap().unwrap(), recs(3));
        assert!(c.get(200, 300).unwrap().is_none());
    }

    #[test]
    fn torn_chunk_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let mut c = ScanCache::open(&path).unwrap();
        c.insert(0, 100, &recs(4)).unwrap();
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"chunk 100 200\n5 1 0\n6 0").unwrap();
        let mut c = ScanCache::open(&path).unwrap();
        assert!(c.contains(0, 100) && !c.contains(100, 200));
        c.insert(100, 200, &recs(5)).unwrap();
        let c = ScanCache::open(&path).unwrap();
        assert_eq!(c.get(0, 100).unwrap().unwrap(), recs(4));
        assert_eq!(c.get(100, 200).unwrap().unwrap(), recs(5));
    }

    #[test]
    fn corrupt_cache_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, format!("{MAGIC}\nchunk 0 10\n5 1 0\nend 0 10 2\n")).unwrap();
        assert!(matches!(
            ScanCache::open(&path),
            Err(LabError::Cache { line: 4, .. })
        ));
        std::fs::write(&path, "garbage\n").unwrap();
        assert!(ScanCache::open(&path).is_err());
    }
}

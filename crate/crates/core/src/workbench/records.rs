//! Append-only JSONL persistence for candidate records.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use crate::search::CandidateRecord;

use super::WorkbenchError;

/// The result of scanning a record file leniently: every parseable record
/// plus the line numbers (and reasons) of anything corrupt.
#[derive(Debug, Default)]
pub struct RecordScan {
    pub records: Vec<CandidateRecord>,
    pub corrupt: Vec<(usize, String)>,
}

impl RecordScan {
    /// Derivation keys of all readable records, for resuming a search.
    pub fn done_keys(&self) -> HashSet<String> {
        self.records.iter().map(|r| r.key.clone()).collect()
    }
}

/// Appends records as one JSON object per line, creating the file if
/// needed. Returns how many records were written.
pub fn append_records(path: &Path, records: &[CandidateRecord]) -> Result<usize, WorkbenchError> {
    let io_err = |source| WorkbenchError::Io { path: path.to_path_buf(), source };
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(
            &serde_json::to_string(r).expect("records contain no non-serializable data"),
        );
        buf.push('\n');
    }
    file.write_all(buf.as_bytes()).map_err(io_err)?;
    Ok(records.len())
}

/// Reads a JSONL record file. In strict mode the first corrupt line aborts
/// with its line number; otherwise corrupt lines are collected and parsing
/// continues, so a truncated tail cannot hide earlier results.
pub fn read_records(path: &Path, strict: bool) -> Result<RecordScan, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut scan = RecordScan::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CandidateRecord>(line) {
            Ok(record) => scan.records.push(record),
            Err(e) => {
                if strict {
                    return Err(WorkbenchError::Parse {
                        path: path.to_path_buf(),
                        line: line_no,
                        msg: e.to_string(),
                    });
                }
                scan.corrupt.push((line_no, e.to_string()));
            }
        }
    }
    Ok(scan)
}

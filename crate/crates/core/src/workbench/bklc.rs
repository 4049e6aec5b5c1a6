//! Best-known-linear-code lookup table, loaded from a small strict CSV.

use std::collections::BTreeMap;
use std::path::Path;

use crate::galois::FieldSpec;

use super::WorkbenchError;

/// Maps (q, n, k) to the best published minimum distance. Immutable once
/// loaded; lookups that miss return `None` so callers can mark candidates
/// as incomparable instead of guessing.
#[derive(Clone, Debug, Default)]
pub struct BklcTable {
    map: BTreeMap<(u8, usize, usize), u32>,
}

impl BklcTable {
    /// Builds a table from in-memory rows (q, n, k, d) with the same
    /// validation as the CSV loader.
    pub fn from_rows(rows: Vec<(u8, usize, usize, u32)>) -> Result<Self, WorkbenchError> {
        let mut table = BklcTable::default();
        for (i, (q, n, k, d)) in rows.into_iter().enumerate() {
            table.insert(q, n, k, d).map_err(|msg| WorkbenchError::Parse {
                path: "<memory>".into(),
                line: i + 1,
                msg,
            })?;
        }
        Ok(table)
    }

    fn insert(&mut self, q: u8, n: usize, k: usize, d: u32) -> Result<(), String> {
        FieldSpec::new(q).map_err(|e| e.to_string())?;
        if n == 0 || k == 0 || k > n {
            return Err(format!("invalid length/dimension pair [{n}, {k}]"));
        }
        if d == 0 || d as usize > n - k + 1 {
            return Err(format!(
                "distance {d} violates the Singleton bound for [{n}, {k}]"
            ));
        }
        if self.map.insert((q, n, k), d).is_some() {
            return Err(format!("duplicate key q={q} n={n} k={k}"));
        }
        Ok(())
    }

    pub fn lookup(&self, q: u8, n: usize, k: usize) -> Option<u32> {
        self.map.get(&(q, n, k)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Reads a `q,n,k,d` CSV. Blank lines and `#` comments are skipped; every
/// other deviation is an error with its line number. Duplicate (q, n, k)
/// keys and Singleton-violating distances are rejected.
pub fn load_bklc(path: &Path) -> Result<BklcTable, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let err = |line: usize, msg: String| WorkbenchError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut table = BklcTable::default();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "q,n,k,d" {
                return Err(err(line_no, format!("expected header q,n,k,d, found {line:?}")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err(line_no, format!("expected 4 fields, found {}", fields.len())));
        }
        let q: u8 = fields[0].parse().map_err(|_| err(line_no, format!("bad q {:?}", fields[0])))?;
        let n: usize =
            fields[1].parse().map_err(|_| err(line_no, format!("bad n {:?}", fields[1])))?;
        let k: usize =
            fields[2].parse().map_err(|_| err(line_no, format!("bad k {:?}", fields[2])))?;
        let d: u32 = fields[3].parse().map_err(|_| err(line_no, format!("bad d {:?}", fields[3])))?;
        table.insert(q, n, k, d).map_err(|msg| err(line_no, msg))?;
    }
    if !saw_header {
        return Err(err(1, "missing header q,n,k,d".into()));
    }
    Ok(table)
}

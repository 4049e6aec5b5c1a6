//! Published-table fixtures and the claim verifier.
//!
//! A fixture row carries everything a published QT code claim needs:
//! field, claimed [n, k, d], shift constant, long length N, block length m,
//! provenance flags, and the defining polynomials as digit strings. The
//! verifier rebuilds the code and checks the claim, trying both coefficient
//! conventions (digit i as the coefficient of x^i, and the reverse) because
//! published tables are not consistent about which one they print.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::galois::FieldSpec;
use crate::lincode::{min_distance_auto, Distance, Engine, EngineBudget};
use crate::polyring::parse_poly;
use crate::qtcore::join_blocks;

use super::WorkbenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureFlag {
    /// Claimed to beat the previously best known distance.
    Record,
    /// Claimed as new to at least one standard code table.
    NewQt,
    /// Same parameters as an earlier code but a cheaper construction.
    BetterConstruction,
}

impl FixtureFlag {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "record" => Some(Self::Record),
            "new-qt" => Some(Self::NewQt),
            "better-construction" => Some(Self::BetterConstruction),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureRow {
    /// Line number in the source CSV, for reporting.
    pub line: usize,
    pub q: u8,
    pub n: usize,
    pub k: usize,
    pub d: u32,
    pub a: u8,
    #[serde(rename = "N")]
    pub n_long: usize,
    pub m: usize,
    pub flags: Vec<FixtureFlag>,
    /// Digit strings, one per block.
    pub polys: Vec<String>,
}

/// Reads a `q,n,k,d,a,N,m,flags,polys` CSV: flags are `|`-separated (may be
/// empty), polys are `;`-separated digit strings. Digits must be valid
/// residues for the row's field.
pub fn load_fixtures(path: &Path) -> Result<Vec<FixtureRow>, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let err = |line: usize, msg: String| WorkbenchError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    const HEADER: &str = "q,n,k,d,a,N,m,flags,polys";
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != HEADER {
                return Err(err(line_no, format!("expected header {HEADER}, found {line:?}")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 9 {
            return Err(err(line_no, format!("expected 9 fields, found {}", fields.len())));
        }
        let q: u8 = fields[0].parse().map_err(|_| err(line_no, format!("bad q {:?}", fields[0])))?;
        let field = FieldSpec::new(q).map_err(|e| err(line_no, e.to_string()))?;
        let n: usize =
            fields[1].parse().map_err(|_| err(line_no, format!("bad n {:?}", fields[1])))?;
        let k: usize =
            fields[2].parse().map_err(|_| err(line_no, format!("bad k {:?}", fields[2])))?;
        let d: u32 = fields[3].parse().map_err(|_| err(line_no, format!("bad d {:?}", fields[3])))?;
        let a: u8 = fields[4].parse().map_err(|_| err(line_no, format!("bad a {:?}", fields[4])))?;
        field.check(a).map_err(|e| err(line_no, e.to_string()))?;
        if a == 0 {
            return Err(err(line_no, "shift constant a must be nonzero".into()));
        }
        let n_long: usize =
            fields[5].parse().map_err(|_| err(line_no, format!("bad N {:?}", fields[5])))?;
        let m: usize =
            fields[6].parse().map_err(|_| err(line_no, format!("bad m {:?}", fields[6])))?;
        let mut flags = Vec::new();
        if !fields[7].is_empty() {
            for part in fields[7].split('|') {
                let flag = FixtureFlag::parse(part)
                    .ok_or_else(|| err(line_no, format!("unknown flag {part:?}")))?;
                flags.push(flag);
            }
        }
        let polys: Vec<String> = fields[8]
            .split(';')
            .map(|s| s.trim().to_string())
            .collect();
        if polys.is_empty() || polys.iter().any(|p| p.is_empty()) {
            return Err(err(line_no, "polys must be a nonempty ;-separated list".into()));
        }
        for p in &polys {
            for ch in p.chars() {
                let digit = ch.to_digit(10).filter(|&v| v < q as u32);
                if digit.is_none() {
                    return Err(err(
                        line_no,
                        format!("polynomial {p:?} has a digit outside GF({q})"),
                    ));
                }
            }
        }
        rows.push(FixtureRow { line: line_no, q, n, k, d, a, n_long, m, flags, polys });
    }
    if !saw_header {
        return Err(err(1, format!("missing header {HEADER}")));
    }
    Ok(rows)
}

/// Which way the digit strings are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Digit i is the coefficient of x^i.
    LowFirst,
    /// Digit i is the coefficient of x^(L-1-i) for an L-digit string.
    HighFirst,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::LowFirst => write!(f, "low-first"),
            Convention::HighFirst => write!(f, "high-first"),
        }
    }
}

/// The verifier's conclusion for one row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyVerdict {
    /// An engine certified exactly the claimed distance (and n, k match).
    Confirmed,
    /// n and k match and a certified interval contains the claimed
    /// distance, but the budget ran out before the claim became exact.
    Partial,
    /// A rebuilt code certified a distance that contradicts the claim.
    Mismatch,
    /// The row contradicts itself: either its printed arithmetic fails
    /// (n, m, block count, digit lengths) or no coefficient convention
    /// rebuilds a code of the claimed dimension.
    InconsistentFixture,
}

impl std::fmt::Display for VerifyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyVerdict::Confirmed => write!(f, "confirmed"),
            VerifyVerdict::Partial => write!(f, "partial"),
            VerifyVerdict::Mismatch => write!(f, "mismatch"),
            VerifyVerdict::InconsistentFixture => write!(f, "inconsistent-fixture"),
        }
    }
}

/// What one coefficient convention produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConventionOutcome {
    pub convention: Convention,
    /// Dimension of the rebuilt code, when the join succeeded.
    pub k: Option<usize>,
    pub d: Option<Distance>,
    pub engine: Option<Engine>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub row: FixtureRow,
    pub verdict: VerifyVerdict,
    /// The convention that carried the verdict, for confirmed/partial rows.
    pub convention: Option<Convention>,
    pub outcomes: Vec<ConventionOutcome>,
    /// What makes the row inconsistent; nonempty exactly for such rows.
    pub notes: Vec<String>,
}

enum Level {
    Confirmed,
    Partial,
    /// The code rebuilt with the claimed dimension, but its certified
    /// distance contradicts the claim.
    Contradicted,
    /// No code with the claimed dimension could be rebuilt this way.
    Unrebuilt,
}

fn try_convention(
    row: &FixtureRow,
    convention: Convention,
    budget: &EngineBudget,
) -> (ConventionOutcome, Level) {
    let field = FieldSpec::new(row.q).expect("validated at load");
    let mut outcome = ConventionOutcome {
        convention,
        k: None,
        d: None,
        engine: None,
        note: None,
    };
    let defs: Result<Vec<_>, _> = row
        .polys
        .iter()
        .map(|s| {
            let text: String = match convention {
                Convention::LowFirst => s.clone(),
                Convention::HighFirst => s.chars().rev().collect(),
            };
            parse_poly(field, &text)
        })
        .collect();
    let defs = match defs {
        Ok(d) => d,
        Err(e) => {
            outcome.note = Some(e.to_string());
            return (outcome, Level::Unrebuilt);
        }
    };
    let joined = match join_blocks(&defs, row.m, row.a) {
        Ok(j) => j,
        Err(e) => {
            outcome.note = Some(e.to_string());
            return (outcome, Level::Unrebuilt);
        }
    };
    outcome.k = Some(joined.rows());
    if joined.rows() != row.k {
        outcome.note = Some(format!("dimension {} differs from the claimed {}", joined.rows(), row.k));
        return (outcome, Level::Unrebuilt);
    }
    match min_distance_auto(&joined, budget) {
        Ok(report) => {
            outcome.d = Some(report.params.d);
            outcome.engine = Some(report.engine);
            match report.params.d {
                Distance::Exact { exact } if exact == row.d => (outcome, Level::Confirmed),
                Distance::Exact { exact } => {
                    outcome.note =
                        Some(format!("certified distance {exact} differs from the claimed {}", row.d));
                    (outcome, Level::Contradicted)
                }
                Distance::Interval { low, high } if low <= row.d && row.d <= high => {
                    (outcome, Level::Partial)
                }
                Distance::Interval { low, high } => {
                    outcome.note = Some(format!(
                        "certified interval [{low}, {high}] excludes the claimed {}",
                        row.d
                    ));
                    (outcome, Level::Contradicted)
                }
            }
        }
        Err(e) => {
            outcome.note = Some(e.to_string());
            (outcome, Level::Unrebuilt)
        }
    }
}

/// Rebuilds the row's code and checks the claimed parameters.
///
/// Structural contradictions (n not equal to m times the number of blocks,
/// N not a multiple of m, digit strings longer than m, a claimed d beyond
/// the Singleton bound) short-circuit to `InconsistentFixture`. Otherwise
/// the primary low-first convention runs, and the reversed convention is
/// attempted only when the primary fails outright — a budget-limited
/// partial under one convention stays partial rather than paying for a
/// second engine run on an equivalent code.
///
/// When both conventions fail, the failures decide the verdict. If either
/// rebuilt a code of the claimed dimension whose certified distance
/// contradicts the claim, the claim itself is falsified: `Mismatch`. If
/// neither convention can even rebuild the claimed dimension, the printed
/// polynomials cannot be the data behind the claim, so the row is reported
/// as `InconsistentFixture` with the rebuilt dimensions in the notes.
pub fn verify_table_entry(row: &FixtureRow, budget: &EngineBudget) -> VerifyReport {
    let mut notes = Vec::new();
    let implied = row.m * row.polys.len();
    if implied != row.n {
        notes.push(format!(
            "claimed n = {} but m*t = {}*{} = {implied}",
            row.n,
            row.m,
            row.polys.len()
        ));
    }
    if row.m == 0 || !row.n_long.is_multiple_of(row.m) {
        notes.push(format!("block length {} does not divide N = {}", row.m, row.n_long));
    }
    for (i, p) in row.polys.iter().enumerate() {
        if p.len() > row.m {
            notes.push(format!(
                "polynomial {} has {} digits, more than the block length {}",
                i + 1,
                p.len(),
                row.m
            ));
        }
    }
    if row.k == 0 || row.k > row.n || row.d == 0 || row.d as usize > row.n - row.k + 1 {
        notes.push(format!(
            "claimed [{}, {}, {}] violates the Singleton bound",
            row.n, row.k, row.d
        ));
    }
    if !notes.is_empty() {
        return VerifyReport {
            row: row.clone(),
            verdict: VerifyVerdict::InconsistentFixture,
            convention: None,
            outcomes: Vec::new(),
            notes,
        };
    }

    let (primary, level) = try_convention(row, Convention::LowFirst, budget);
    let mut outcomes = vec![primary];
    let (verdict, convention) = match level {
        Level::Confirmed => (VerifyVerdict::Confirmed, Some(Convention::LowFirst)),
        Level::Partial => (VerifyVerdict::Partial, Some(Convention::LowFirst)),
        primary_failure => {
            let (fallback, fb_level) = try_convention(row, Convention::HighFirst, budget);
            outcomes.push(fallback);
            match fb_level {
                Level::Confirmed => (VerifyVerdict::Confirmed, Some(Convention::HighFirst)),
                Level::Partial => (VerifyVerdict::Partial, Some(Convention::HighFirst)),
                fallback_failure => {
                    let contradicted = matches!(primary_failure, Level::Contradicted)
                        || matches!(fallback_failure, Level::Contradicted);
                    if contradicted {
                        (VerifyVerdict::Mismatch, None)
                    } else {
                        for o in &outcomes {
                            if let Some(note) = &o.note {
                                notes.push(format!("{}: {note}", o.convention));
                            }
                        }
                        (VerifyVerdict::InconsistentFixture, None)
                    }
                }
            }
        }
    };
    VerifyReport { row: row.clone(), verdict, convention, outcomes, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "q,n,k,d,a,N,m,flags,polys\n";

    #[test]
    fn loads_flags_and_polys() {
        let f = write_temp(&format!(
            "{HEADER}5,8,3,4,1,8,4,record,41;41\n7,6,2,4,1,12,3,new-qt|better-construction,25;25\n5,4,3,2,1,4,4,,41\n"
        ));
        let rows = load_fixtures(f.path()).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].flags, vec![FixtureFlag::Record]);
        assert_eq!(
            rows[1].flags,
            vec![FixtureFlag::NewQt, FixtureFlag::BetterConstruction]
        );
        assert!(rows[2].flags.is_empty());
        assert_eq!(rows[0].polys, vec!["41".to_string(), "41".to_string()]);
        assert_eq!(rows[1].line, 3);
    }

    #[test]
    fn load_rejects_bad_rows() {
        for (body, needle) in [
            ("5,8,3,4,1,8,4,record\n", "9 fields"),
            ("5,8,3,4,1,8,4,shiny,41;41\n", "unknown flag"),
            ("5,8,3,4,1,8,4,,41;\n", "nonempty"),
            ("5,8,3,4,1,8,4,,47\n", "digit outside"),
            ("5,8,3,4,0,8,4,,41\n", "nonzero"),
            ("9,8,3,4,1,8,4,,41\n", "unsupported"),
        ] {
            let f = write_temp(&format!("{HEADER}{body}"));
            let e = load_fixtures(f.path()).unwrap_err();
            assert!(
                e.to_string().to_lowercase().contains(&needle.to_lowercase()),
                "expected {needle:?} in: {e}"
            );
            assert!(e.to_string().contains(":2:"), "line number in: {e}");
        }
    }

    fn row(csv: &str) -> FixtureRow {
        let f = write_temp(&format!("{HEADER}{csv}\n"));
        load_fixtures(f.path()).unwrap().remove(0)
    }

    #[test]
    fn confirms_a_true_claim() {
        // two copies of the x - 1 block over GF(5), m = 4: an [8, 3, 4] code
        let r = row("5,8,3,4,1,8,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::Confirmed);
        assert_eq!(report.convention, Some(Convention::LowFirst));
        assert_eq!(report.outcomes.len(), 1, "no fallback needed");
        assert_eq!(report.outcomes[0].k, Some(3));
        assert_eq!(report.outcomes[0].d, Some(Distance::Exact { exact: 4 }));
    }

    #[test]
    fn flags_wrong_distance_as_mismatch_under_both_conventions() {
        let r = row("5,8,3,5,1,8,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::Mismatch);
        assert_eq!(report.outcomes.len(), 2, "fallback was attempted");
        assert!(report.outcomes.iter().all(|o| o.note.is_some()));
    }

    #[test]
    fn unrebuildable_dimension_reports_inconsistent_fixture() {
        // the blocks rebuild a k = 3 code, so a claimed k = 2 can never be
        // reconstructed; no engine runs and the row is flagged, not failed
        let r = row("5,8,2,4,1,8,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::InconsistentFixture);
        assert_eq!(report.outcomes.len(), 2, "both conventions were tried");
        assert_eq!(report.outcomes[0].k, Some(3));
        assert!(report.outcomes.iter().all(|o| o.d.is_none()));
        assert!(report.notes.iter().any(|n| n.contains("dimension 3")));
    }

    #[test]
    fn structural_contradictions_report_inconsistent_fixture() {
        // claimed n = 12 but two blocks of length 4 give 8
        let r = row("5,12,3,4,1,8,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::InconsistentFixture);
        assert!(report.notes.iter().any(|n| n.contains("m*t")));
        assert!(report.outcomes.is_empty(), "no construction is attempted");

        // m does not divide N
        let r = row("5,8,3,4,1,9,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::InconsistentFixture);

        // digit string longer than the block
        let r = row("5,8,3,4,1,8,4,,41401;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::InconsistentFixture);
        assert!(report.notes.iter().any(|n| n.contains("digits")));

        // Singleton-impossible claim
        let r = row("5,8,3,7,1,8,4,,41;41");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::InconsistentFixture);
    }

    #[test]
    fn budget_limited_runs_report_partial() {
        // dimension reconstructs instantly, distance stays an interval
        let r = row("5,8,3,4,1,8,4,,41;41");
        let budget = EngineBudget {
            exhaustive_messages: 0,
            bz_patterns: 0,
            deadline: None,
        };
        let report = verify_table_entry(&r, &budget);
        assert_eq!(report.verdict, VerifyVerdict::Partial);
        let d = report.outcomes[0].d.unwrap();
        assert!(d.exact().is_none());
        assert!(d.low() <= 4 && 4 <= d.high());
    }

    #[test]
    fn high_first_convention_is_attempted_on_primary_failure() {
        // an impossible claim (true d is 4 either way) forces the verifier
        // through both conventions; the padded string "4100" parses
        // differently under each, so this also exercises the re-parse
        let r = row("5,8,3,2,1,8,4,,41;4100");
        let report = verify_table_entry(&r, &EngineBudget::default());
        assert_eq!(report.verdict, VerifyVerdict::Mismatch);
        assert_eq!(report.outcomes.len(), 2);
        assert_eq!(report.outcomes[0].convention, Convention::LowFirst);
        assert_eq!(report.outcomes[1].convention, Convention::HighFirst);
        assert!(report.outcomes.iter().all(|o| o.note.is_some()));
    }
}

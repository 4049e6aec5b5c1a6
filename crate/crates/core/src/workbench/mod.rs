//! Verification workbench: best-known-distance tables, fixture
//! verification, persisted candidate records, and the command-line front
//! end that ties the library together.

mod bklc;
mod cli;
mod fixtures;
mod records;

pub use bklc::{load_bklc, BklcTable};
pub use cli::run;
pub use fixtures::{
    load_fixtures, verify_table_entry, Convention, ConventionOutcome, FixtureFlag, FixtureRow,
    VerifyReport, VerifyVerdict,
};
pub use records::{append_records, read_records, RecordScan};

use std::path::PathBuf;

use thiserror::Error;

use crate::galois::GaloisError;
use crate::lincode::LinCodeError;
use crate::polyring::PolyError;
use crate::qtcore::QtError;
use crate::search::SearchError;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("invalid budget {0:?}: expected a pattern count like 2000000 or a deadline like 2h, 30m, 45s")]
    BadBudget(String),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    LinCode(#[from] LinCodeError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

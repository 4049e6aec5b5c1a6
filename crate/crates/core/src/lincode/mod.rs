//! Linear-code linear algebra over GF(q) and the two exact minimum-distance
//! engines.
//!
//! [`min_distance_exhaustive`] walks every nonzero message in a q-ary
//! Gray-code order (one row addition per codeword); it is the right tool when
//! `q^k` is small enough to touch. [`min_distance_bz`] is Brouwer–Zimmermann:
//! it enumerates low-weight messages through several information sets and
//! squeezes a lower bound against the lightest codeword seen, certifying
//! exactness when the two meet. Both report a witness codeword for the upper
//! bound so results can be re-checked independently.

mod bz;
mod exhaustive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{FieldSpec, GaloisError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinCodeError {
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error("matrix needs at least one row and one column")]
    Empty,
    #[error("row {row} has length {got}, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("matrix generates the zero code, which has no minimum distance")]
    ZeroCode,
    #[error("message space {q}^{k} = {space} exceeds the exhaustive budget {budget}")]
    BudgetExceeded { q: u8, k: usize, space: String, budget: u128 },
    #[error("generator is rank-deficient (rank {rank} of {rows} rows); row-reduce it first")]
    RankDeficient { rank: usize, rows: usize },
}

/// Row-major generator matrix over GF(q). Entries are reduced residues.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl GenMatrix {
    pub fn new(field: FieldSpec, rows: Vec<Vec<u8>>) -> Result<Self, LinCodeError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 {
            return Err(LinCodeError::Empty);
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinCodeError::RaggedRow { row: i, got: r.len(), expected: cols });
            }
            for &c in r {
                field.check(c)?;
            }
            data.extend_from_slice(r);
        }
        Ok(GenMatrix { field, rows: rows.len(), cols, data })
    }

    pub(crate) fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        debug_assert!(data.iter().all(|&c| c < field.q()));
        GenMatrix { field, rows, cols, data }
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.cols)
    }

    /// `message x M` as a reduced residue vector.
    pub fn mul_left(&self, message: &[u8]) -> Vec<u8> {
        assert_eq!(message.len(), self.rows, "message length must equal row count");
        let mut acc = vec![0u16; self.cols];
        for (i, &mi) in message.iter().enumerate() {
            if mi == 0 {
                continue;
            }
            for (a, &r) in acc.iter_mut().zip(self.row(i)) {
                *a += (mi as u16) * (r as u16);
            }
        }
        let q = self.field.q() as u16;
        acc.into_iter().map(|v| (v % q) as u8).collect()
    }

    /// Horizontal concatenation `[A | B | ...]`; all blocks must agree on the
    /// field and row count.
    pub fn hstack(blocks: &[&GenMatrix]) -> Result<Self, LinCodeError> {
        let first = blocks.first().ok_or(LinCodeError::Empty)?;
        let rows = first.rows;
        let field = first.field;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                assert_eq!(b.field, field, "hstack blocks must share a field");
                assert_eq!(b.rows, rows, "hstack blocks must share a row count");
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(GenMatrix { field, rows, cols, data })
    }
}

/// Hamming weight of a residue vector.
pub fn weight(v: &[u8]) -> u32 {
    v.iter().filter(|&&c| c != 0).count() as u32
}

/// `acc += row (mod q)` fused with a nonzero count of the result. The inner
/// loops of both engines live on this; wrapping arithmetic keeps the codegen
/// branch-free so it vectorizes.
#[inline]
pub(crate) fn add_row_count(acc: &mut [u8], row: &[u8], q: u8) -> u32 {
    debug_assert_eq!(acc.len(), row.len());
    let mut w = 0u32;
    for (a, &r) in acc.iter_mut().zip(row.iter()) {
        let mut v = a.wrapping_add(r);
        if v >= q {
            v = v.wrapping_sub(q);
        }
        *a = v;
        w += (v != 0) as u32;
    }
    w
}

/// `acc += row (mod q)` without the count.
#[inline]
pub(crate) fn add_row(acc: &mut [u8], row: &[u8], q: u8) {
    debug_assert_eq!(acc.len(), row.len());
    for (a, &r) in acc.iter_mut().zip(row.iter()) {
        let v = a.wrapping_add(r);
        *a = if v >= q { v.wrapping_sub(q) } else { v };
    }
}

#[derive(Clone, Debug)]
pub struct RrefOutcome {
    /// Fully reduced matrix, zero rows (if any) at the bottom.
    pub matrix: GenMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row, ascending.
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form with deterministic pivoting: leftmost eligible
/// column, first qualifying row.
pub fn rref(m: &GenMatrix) -> RrefOutcome {
    let f = m.field;
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<u8>> = m.iter_rows().map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, pr);
        let inv = f.inv(a[r][col]);
        if inv != 1 {
            for x in a[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        for i in 0..rows {
            if i != r && a[i][col] != 0 {
                let c = a[i][col];
                let (head, tail) = a.split_at_mut(r.max(i));
                let (src, dst) = if i < r { (&tail[0], &mut head[i]) } else { (&head[r], &mut tail[0]) };
                for (x, &s) in dst.iter_mut().zip(src.iter()) {
                    *x = f.sub(*x, f.mul(c, s));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let data: Vec<u8> = a.into_iter().flatten().collect();
    RrefOutcome { matrix: GenMatrix::from_flat(f, rows, cols, data), rank: r, pivots }
}

/// The nonzero rows of the reduced form: a basis of the row space.
pub fn row_space_basis(m: &GenMatrix) -> Result<GenMatrix, LinCodeError> {
    let out = rref(m);
    if out.rank == 0 {
        return Err(LinCodeError::ZeroCode);
    }
    let rows: Vec<Vec<u8>> = (0..out.rank).map(|i| out.matrix.row(i).to_vec()).collect();
    GenMatrix::new(m.field, rows)
}

/// Whether `v` lies in the row space of an already-reduced matrix.
pub(crate) fn in_row_space(reduced: &RrefOutcome, v: &[u8]) -> bool {
    let f = reduced.matrix.field;
    let mut residue = v.to_vec();
    for (row_idx, &pc) in reduced.pivots.iter().enumerate() {
        let c = residue[pc];
        if c != 0 {
            for (x, &s) in residue.iter_mut().zip(reduced.matrix.row(row_idx)) {
                *x = f.sub(*x, f.mul(c, s));
            }
        }
    }
    residue.iter().all(|&c| c == 0)
}

/// Minimum distance, exact or as a certified interval when an engine was
/// stopped by its budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Distance {
    Exact { exact: u32 },
    Interval { low: u32, high: u32 },
}

impl Distance {
    pub fn exact(self) -> Option<u32> {
        match self {
            Distance::Exact { exact } => Some(exact),
            Distance::Interval { .. } => None,
        }
    }

    /// Largest value the true distance may take.
    pub fn high(self) -> u32 {
        match self {
            Distance::Exact { exact } => exact,
            Distance::Interval { high, .. } => high,
        }
    }

    /// Smallest value the true distance may take.
    pub fn low(self) -> u32 {
        match self {
            Distance::Exact { exact } => exact,
            Distance::Interval { low, .. } => low,
        }
    }

    pub fn admits(self, claim: u32) -> bool {
        self.low() <= claim && claim <= self.high()
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Exact { exact } => write!(f, "{exact}"),
            Distance::Interval { low, high } => write!(f, "[{low}, {high}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: Distance,
}

/// An actual codeword backing a reported upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    pub weight: u32,
}

impl Witness {
    pub(crate) fn checked(m: &GenMatrix, message: Vec<u8>) -> Self {
        let codeword = m.mul_left(&message);
        let w = weight(&codeword);
        Witness { message, codeword, weight: w }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exhaustive,
    Bz,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Exhaustive => write!(f, "exhaustive"),
            Engine::Bz => write!(f, "bz"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub params: CodeParams,
    pub engine: Engine,
    pub witness: Witness,
    /// Messages (exhaustive) or weight patterns (BZ) enumerated.
    pub work: u64,
    /// True when the distance is certified exact.
    pub complete: bool,
}

/// Budgets for the engines. Integer budgets keep runs deterministic; the
/// optional deadline exists for interactive use and is only consulted at
/// deterministic pass boundaries.
#[derive(Clone, Copy, Debug)]
pub struct EngineBudget {
    /// Refuse exhaustive enumeration when `q^k` exceeds this.
    pub exhaustive_messages: u128,
    /// Stop Brouwer–Zimmermann before a pass that would exceed this many
    /// weight patterns in total.
    pub bz_patterns: u128,
    /// Wall-clock cutoff checked between BZ passes.
    pub deadline: Option<std::time::Duration>,
}

impl Default for EngineBudget {
    fn default() -> Self {
        EngineBudget {
            exhaustive_messages: 1 << 31,
            bz_patterns: u128::MAX,
            deadline: None,
        }
    }
}

impl EngineBudget {
    pub fn with_patterns(patterns: u128) -> Self {
        EngineBudget {
            exhaustive_messages: patterns,
            bz_patterns: patterns,
            deadline: None,
        }
    }
}

fn require_full_rank(m: &GenMatrix) -> Result<(), LinCodeError> {
    let out = rref(m);
    if out.rank == 0 {
        Err(LinCodeError::ZeroCode)
    } else if out.rank < m.rows {
        Err(LinCodeError::RankDeficient { rank: out.rank, rows: m.rows })
    } else {
        Ok(())
    }
}

fn singleton_check(params: &CodeParams) {
    assert!(params.k >= 1 && params.k <= params.n);
    assert!(
        params.d.high() as usize <= params.n - params.k + 1,
        "distance {} violates the Singleton bound for [{}, {}]",
        params.d,
        params.n,
        params.k
    );
    assert!(params.d.low() >= 1 && params.d.low() <= params.d.high());
}

/// Exact minimum distance by Gray-code enumeration of all `q^k - 1` nonzero
/// messages. Refuses (naming `q^k`) when the space exceeds the budget.
pub fn min_distance_exhaustive(
    m: &GenMatrix,
    budget: &EngineBudget,
) -> Result<DistanceReport, LinCodeError> {
    require_full_rank(m)?;
    let report = exhaustive::run(m, budget)?;
    singleton_check(&report.params);
    Ok(report)
}

/// Brouwer–Zimmermann minimum distance: exact when the bounds meet within
/// budget, otherwise a certified interval with a witness for the upper end.
pub fn min_distance_bz(m: &GenMatrix, budget: &EngineBudget) -> Result<DistanceReport, LinCodeError> {
    require_full_rank(m)?;
    let report = bz::run(m, budget)?;
    singleton_check(&report.params);
    Ok(report)
}

/// Picks the exhaustive engine when `q^k` fits its budget, else BZ.
pub fn min_distance_auto(m: &GenMatrix, budget: &EngineBudget) -> Result<DistanceReport, LinCodeError> {
    let space = message_space(m.field.q(), m.rows);
    if space.is_some_and(|s| s <= budget.exhaustive_messages) {
        min_distance_exhaustive(m, budget)
    } else {
        min_distance_bz(m, budget)
    }
}

/// `q^k` if it fits in u128.
pub(crate) fn message_space(q: u8, k: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// Cheap upper bound on d: the lightest codeword among all rows, all scaled
/// row pairs, and `trials` seeded random messages.
pub fn random_weight_probe(
    m: &GenMatrix,
    trials: u64,
    seed: u64,
) -> Result<Witness, LinCodeError> {
    use rand::{Rng, SeedableRng};
    let f = m.field;
    let q = f.q();
    let k = m.rows;
    let mut best: Option<Witness> = None;
    let consider = |message: Vec<u8>, best: &mut Option<Witness>| {
        let w = Witness::checked(m, message);
        if w.weight == 0 {
            return; // zero codeword: possible for rank-deficient inputs
        }
        if best.as_ref().is_none_or(|b| w.weight < b.weight) {
            *best = Some(w);
        }
    };

    for i in 0..k {
        let mut msg = vec![0u8; k];
        msg[i] = 1;
        consider(msg, &mut best);
    }
    for i in 0..k {
        for j in i + 1..k {
            for c in 1..q {
                let mut msg = vec![0u8; k];
                msg[i] = 1;
                msg[j] = c;
                consider(msg, &mut best);
            }
        }
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let msg: Vec<u8> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        if msg.iter().all(|&c| c == 0) {
            continue;
        }
        consider(msg, &mut best);
    }
    best.ok_or(LinCodeError::ZeroCode)
}

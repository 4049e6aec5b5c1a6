//! Greedy column selection driven by the block weight matrix.
//!
//! For defining polynomials g_1, …, g_p the weight matrix is the p×p array
//! whose row i holds the weights of (x^i·g_1, …, x^i·g_p) modulo x^m - a.
//! Multiplying by x is a constacyclic shift, which rotates coefficients and
//! scales one of them by the (nonzero) constant — it never changes the
//! weight — so every row repeats the first and storing that one row
//! suffices. The greedy strategy grows a column set one column at a time,
//! always picking the column that maximizes the minimum row sum over the
//! chosen columns. That score is a cheap stand-in for distance — larger
//! minimum row sums tend to produce heavier joins — but it is recorded as a
//! heuristic only and never as a certified distance.

use crate::lincode::min_distance_auto;
use crate::polyring::{format_poly, Polynomial};
use crate::qtcore::join_blocks;

use super::{
    mix_parts, now_secs, CandidateRecord, CandidateStatus, SearchConfig, SearchError, Verdict,
};

/// The first row of the weight matrix plus row-sum queries; the full p×p
/// matrix is never materialized because all of its rows coincide.
#[derive(Clone, Debug)]
pub struct WeightMatrixView {
    first_row: Vec<u32>,
}

impl WeightMatrixView {
    /// Weights are taken after reduction mod x^m - a so they match the
    /// defining polynomials actually used in blocks.
    pub fn new(defs: &[Polynomial], m: usize, a: u8) -> Result<Self, SearchError> {
        if defs.is_empty() {
            return Err(SearchError::Config("weight matrix needs at least one block".into()));
        }
        let mut first_row = Vec::with_capacity(defs.len());
        for g in defs {
            let reduced = g.reduce_mod_xn_minus_a(m, a);
            first_row.push(reduced.weight() as u32);
        }
        Ok(Self { first_row })
    }

    pub fn first_row(&self) -> &[u32] {
        &self.first_row
    }

    pub fn size(&self) -> usize {
        self.first_row.len()
    }

    /// Minimum row sum of the matrix restricted to the chosen columns.
    /// Because the shift rows repeat the first row, this is the plain sum
    /// of the selected column weights.
    pub fn min_row_sum(&self, cols: &[usize]) -> u32 {
        cols.iter().map(|&c| self.first_row[c]).sum()
    }
}

/// Grows a block selection greedily by weight-matrix score and emits one
/// evaluated record per size t = 1, …, t_max. Each record carries both the
/// heuristic score and the engine-certified distance, so disagreements stay
/// visible.
pub fn weight_matrix_greedy(
    config: &SearchConfig,
    defs: &[Polynomial],
    m: usize,
    t_max: usize,
) -> Result<Vec<CandidateRecord>, SearchError> {
    let p = defs.len();
    if t_max == 0 || t_max > p {
        return Err(SearchError::Config(format!(
            "t_max = {t_max} must lie in [1, {p}] for {p} blocks"
        )));
    }
    let view = WeightMatrixView::new(defs, m, config.a)?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let mut best: Option<(u32, usize)> = None;
        for c in 0..p {
            if chosen.contains(&c) {
                continue;
            }
            chosen.push(c);
            let score = view.min_row_sum(&chosen);
            chosen.pop();
            // strict improvement keeps the lowest index on ties
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, c));
            }
        }
        let (score, col) = best.expect("t_max <= p leaves a free column");
        chosen.push(col);

        let selection: Vec<Polynomial> = chosen.iter().map(|&i| defs[i].clone()).collect();
        let joined = join_blocks(&selection, m, config.a)?;
        let report = min_distance_auto(&joined, &config.budget())?;
        out.push(CandidateRecord {
            key: format!(
                "greedy|m{m}x{p}|t{t}|b{}",
                chosen.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
            ),
            q: config.q,
            a: config.a,
            n_long: m * p,
            m,
            p,
            t,
            rank_class: joined.rows(),
            defs: selection.iter().map(format_poly).collect(),
            n: joined.cols(),
            k: joined.rows(),
            status: CandidateStatus::Evaluated,
            d: Some(report.params.d),
            engine: Some(report.engine),
            witness_weight: Some(report.witness.weight),
            seed: mix_parts(&[config.seed, t as u64]),
            verdict: Verdict::Unknown,
            greedy_score: Some(score),
            timestamp: now_secs(),
        });
    }
    Ok(out)
}

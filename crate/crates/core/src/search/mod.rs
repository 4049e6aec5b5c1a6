//! Search driver over long-generator ensembles.
//!
//! The pipeline: enumerate divisors `G` of `x^N - a` inside a degree window,
//! try every factorization `N = m·p`, split `G` into `p` defining
//! polynomials, keep only the blocks whose rank is `k` or `k - 1` (where
//! `k = m - deg(gcd(x^m - a, g_1, …, g_p))`), sample `t`-subsets of one rank
//! class under a combination cap, and evaluate each candidate in stages:
//! join, dimension check, cheap random-weight probe against the best-known
//! distance, and only then an exact (or certified-interval) engine run.
//!
//! Everything is seeded: per-candidate sub-seeds derive from the root seed
//! and the candidate's position in the enumeration, so a rerun with the same
//! config reproduces the same record stream, and a resume can skip records
//! by their derivation key.

mod greedy;

pub use greedy::{weight_matrix_greedy, WeightMatrixView};

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{FieldSpec, GaloisError};
use crate::lincode::{
    min_distance_auto, random_weight_probe, Distance, Engine, EngineBudget, LinCodeError,
};
use crate::polyring::{
    enumerate_divisors, factorize_xn_minus_a, format_poly, PolyError, Polynomial,
};
use crate::qtcore::{
    join_blocks, split_defining_polys, twistulant, EnsembleSpec, QtError, TwistulantBlock,
};
use crate::workbench::BklcTable;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    Config(String),
    #[error("cannot choose {t} blocks from a pool of {pool}")]
    SubsetTooLarge { t: usize, pool: usize },
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    LinCode(#[from] LinCodeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn default_divisor_cap() -> u64 {
    1000
}
fn default_combo_cap() -> u64 {
    20_000
}
fn default_t_min() -> usize {
    1
}
fn default_k_floor() -> usize {
    6
}
fn default_m_floor() -> usize {
    1
}
fn default_probe_trials() -> u64 {
    2000
}
fn default_exhaustive_budget() -> u64 {
    1 << 31
}
fn default_bz_patterns() -> u64 {
    u64::MAX
}

/// Full description of one search run. Unknown keys are rejected so config
/// typos fail fast instead of silently running a different search.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub q: u8,
    pub a: u8,
    /// Long length N; the search factors x^N - a.
    #[serde(rename = "N")]
    pub n_long: usize,
    /// Degree window for the long generators.
    pub deg_min: usize,
    pub deg_max: usize,
    #[serde(default = "default_divisor_cap")]
    pub divisor_cap: u64,
    /// Cap on t-subsets examined per (generator, m, p, t, rank class).
    #[serde(default = "default_combo_cap")]
    pub combo_cap: u64,
    #[serde(default = "default_t_min")]
    pub t_min: usize,
    pub t_max: usize,
    /// Skip splits whose dimension k falls below this.
    #[serde(default = "default_k_floor")]
    pub k_floor: usize,
    /// Skip factor pairs with block length below this.
    #[serde(default = "default_m_floor")]
    pub m_floor: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_probe_trials")]
    pub probe_trials: u64,
    /// Exhaustive engine refusal threshold on q^k.
    #[serde(default = "default_exhaustive_budget")]
    pub exhaustive_budget: u64,
    #[serde(default = "default_bz_patterns")]
    pub bz_patterns: u64,
    #[serde(default)]
    pub bklc_path: Option<PathBuf>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let field = FieldSpec::new(self.q).map_err(|e| SearchError::Config(e.to_string()))?;
        field.check(self.a).map_err(|e| SearchError::Config(e.to_string()))?;
        if self.a == 0 {
            return Err(SearchError::Config("shift constant a must be nonzero".into()));
        }
        if self.n_long == 0 {
            return Err(SearchError::Config("N must be at least 1".into()));
        }
        if self.deg_min > self.deg_max || self.deg_max > self.n_long {
            return Err(SearchError::Config(format!(
                "degree window [{}, {}] must lie within [0, {}]",
                self.deg_min, self.deg_max, self.n_long
            )));
        }
        if self.divisor_cap == 0 || self.combo_cap == 0 {
            return Err(SearchError::Config("caps must be at least 1".into()));
        }
        if self.t_min == 0 || self.t_min > self.t_max {
            return Err(SearchError::Config(format!(
                "t range [{}, {}] must satisfy 1 <= t_min <= t_max",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    pub fn budget(&self) -> EngineBudget {
        EngineBudget {
            exhaustive_messages: self.exhaustive_budget as u128,
            bz_patterns: self.bz_patterns as u128,
            deadline: None,
        }
    }
}

/// How far a candidate got through the staged evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateStatus {
    /// The exact/interval engine ran.
    Evaluated,
    /// A cheap probe already found a codeword no heavier than the best
    /// known distance; no engine ran.
    RejectedAtProbe,
    /// The joined matrix has a different rank than its class promised.
    DimensionMismatch,
}

/// Comparison against the best-known-distance table. `Below` means the
/// candidate is certified not to beat the table (its distance is at most the
/// table value); `New` requires a certified improvement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    New,
    Ties,
    Below,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::New => write!(f, "new"),
            Verdict::Ties => write!(f, "ties"),
            Verdict::Below => write!(f, "below"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// One evaluated candidate, as persisted to the record stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// Derivation key: position of this candidate in the deterministic
    /// enumeration; used for resuming.
    pub key: String,
    pub q: u8,
    pub a: u8,
    #[serde(rename = "N")]
    pub n_long: usize,
    pub m: usize,
    pub p: usize,
    pub t: usize,
    /// The rank class the blocks were drawn from (k or k - 1).
    pub rank_class: usize,
    /// Selected defining polynomials as digit strings, low degree first.
    pub defs: Vec<String>,
    pub n: usize,
    pub k: usize,
    pub status: CandidateStatus,
    /// Absent when no distance information was computed
    /// (dimension mismatch).
    pub d: Option<Distance>,
    /// Engine that produced `d`; absent for probe rejections.
    pub engine: Option<Engine>,
    pub witness_weight: Option<u32>,
    pub seed: u64,
    pub verdict: Verdict,
    /// Heuristic minimum-row-sum score; only set by the greedy strategy.
    pub greedy_score: Option<u32>,
    /// Seconds since the epoch at record creation; excluded from
    /// determinism comparisons.
    pub timestamp: u64,
}

pub(crate) fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Splitmix-style mixer for deriving per-candidate sub-seeds; stable across
/// runs and platforms, unlike the std hasher.
pub(crate) fn mix_parts(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9e3779b97f4a7c15;
    for &p in parts {
        h = h.wrapping_add(p).wrapping_mul(0xbf58476d1ce4e5b9);
        h ^= h >> 30;
        h = h.wrapping_mul(0x94d049bb133111eb);
        h ^= h >> 31;
    }
    h
}

/// All ordered pairs (m, p) with m·p = N, sorted by m ascending.
pub fn factor_pairs(n_long: usize) -> Vec<(usize, usize)> {
    (1..=n_long).filter(|m| n_long.is_multiple_of(*m)).map(|m| (m, n_long / m)).collect()
}

/// Splits blocks into the two admissible rank classes, returning indices
/// into the input slice; everything else is discarded.
pub fn rank_filter(blocks: &[TwistulantBlock], k: usize) -> (Vec<usize>, Vec<usize>) {
    let mut full = Vec::new();
    let mut deficient = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if b.rank() == k {
            full.push(i);
        } else if k >= 1 && b.rank() == k - 1 {
            deficient.push(i);
        }
    }
    (full, deficient)
}

/// Histogram rank -> count over a block family; counts always sum to the
/// number of blocks.
pub fn rank_distribution(blocks: &[TwistulantBlock]) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for b in blocks {
        *hist.entry(b.rank()).or_insert(0) += 1;
    }
    hist
}

/// One-line rendering of a rank histogram, highest rank first:
/// `840 = 21·40 -> 19:35, 18:5`.
pub fn format_rank_distribution(
    n_long: usize,
    m: usize,
    p: usize,
    hist: &BTreeMap<usize, usize>,
) -> String {
    let body = hist
        .iter()
        .rev()
        .map(|(rank, count)| format!("{rank}:{count}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{n_long} = {m}\u{b7}{p} -> {body}")
}

fn binom_big(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let r = r.min(n - r);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn unrank_combination_big(mut rank: BigUint, pool: usize, t: usize) -> Vec<usize> {
    let mut comb = Vec::with_capacity(t);
    let mut start = 0;
    for pos in 0..t {
        let remaining = t - pos - 1;
        for c in start..pool {
            let block = binom_big(pool - 1 - c, remaining);
            if rank < block {
                comb.push(c);
                start = c + 1;
                break;
            }
            rank -= block;
        }
    }
    debug_assert_eq!(comb.len(), t);
    comb
}

/// Either every t-subset of `0..pool_size` in lexicographic order (when
/// there are at most `cap` of them) or `cap` distinct subsets sampled
/// uniformly without replacement, deterministically from the seed.
pub fn sample_combinations(
    pool_size: usize,
    t: usize,
    cap: u64,
    seed: u64,
) -> Result<Vec<Vec<usize>>, SearchError> {
    if t == 0 {
        return Err(SearchError::Config("subset size t must be at least 1".into()));
    }
    if t > pool_size {
        return Err(SearchError::SubsetTooLarge { t, pool: pool_size });
    }
    let total = binom_big(pool_size, t);
    if total <= BigUint::from(cap) {
        let mut out = Vec::new();
        let mut comb: Vec<usize> = (0..t).collect();
        loop {
            out.push(comb.clone());
            // lexicographic successor
            let mut i = t;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if comb[i] < pool_size - (t - i) {
                    comb[i] += 1;
                    for j in i + 1..t {
                        comb[j] = comb[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        return Ok(out);
    }

    // Floyd's sampling: ranks drawn without replacement, then emitted in
    // ascending (lexicographic) order.
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut chosen: std::collections::BTreeSet<BigUint> = Default::default();
    let mut j = &total - BigUint::from(cap);
    while j < total {
        let r = rng.gen_biguint_below(&(&j + 1u32));
        if !chosen.insert(r) {
            chosen.insert(j.clone());
        }
        j += 1u32;
    }
    Ok(chosen
        .into_iter()
        .map(|rank| unrank_combination_big(rank, pool_size, t))
        .collect())
}

/// Everything `evaluate_candidate` needs to know about where a selection
/// came from.
pub struct CandidateContext<'a> {
    pub config: &'a SearchConfig,
    pub key: String,
    pub m: usize,
    pub p: usize,
    pub rank_class: usize,
    pub defs: &'a [Polynomial],
    pub seed: u64,
}

fn verdict_against(d: Distance, best: Option<u32>) -> Verdict {
    let Some(db) = best else { return Verdict::Unknown };
    match d {
        Distance::Exact { exact } => {
            if exact > db {
                Verdict::New
            } else if exact == db {
                Verdict::Ties
            } else {
                Verdict::Below
            }
        }
        Distance::Interval { low, high } => {
            if low > db {
                Verdict::New
            } else if high <= db {
                Verdict::Below
            } else {
                Verdict::Unknown
            }
        }
    }
}

/// Staged evaluation of one block selection: join, check the dimension,
/// probe cheaply against the table, and only run a full engine when the
/// probe could not already rule the candidate out.
pub fn evaluate_candidate(
    ctx: &CandidateContext<'_>,
    bklc: Option<&BklcTable>,
) -> Result<CandidateRecord, SearchError> {
    let config = ctx.config;
    let joined = join_blocks(ctx.defs, ctx.m, config.a)?;
    let n = joined.cols();
    let k = joined.rows();
    let mut record = CandidateRecord {
        key: ctx.key.clone(),
        q: config.q,
        a: config.a,
        n_long: config.n_long,
        m: ctx.m,
        p: ctx.p,
        t: ctx.defs.len(),
        rank_class: ctx.rank_class,
        defs: ctx.defs.iter().map(format_poly).collect(),
        n,
        k,
        status: CandidateStatus::Evaluated,
        d: None,
        engine: None,
        witness_weight: None,
        seed: ctx.seed,
        verdict: Verdict::Unknown,
        greedy_score: None,
        timestamp: now_secs(),
    };
    if k != ctx.rank_class {
        record.status = CandidateStatus::DimensionMismatch;
        return Ok(record);
    }
    let best = bklc.and_then(|b| b.lookup(config.q, n, k));
    let probe = random_weight_probe(&joined, config.probe_trials, ctx.seed)?;
    if let Some(db) = best {
        if probe.weight <= db {
            record.status = CandidateStatus::RejectedAtProbe;
            record.d = Some(Distance::Interval { low: 1, high: probe.weight });
            record.witness_weight = Some(probe.weight);
            record.verdict = Verdict::Below;
            return Ok(record);
        }
    }
    let report = min_distance_auto(&joined, &config.budget())?;
    record.d = Some(report.params.d);
    record.engine = Some(report.engine);
    record.witness_weight = Some(report.witness.weight);
    record.verdict = verdict_against(report.params.d, best);
    Ok(record)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub emitted: usize,
    pub skipped: usize,
}

/// Runs the full pipeline, pushing records through `sink` in a canonical
/// order (divisor index, then m ascending, then rank class k before k-1,
/// then t, then subset order). Keys in `done` are skipped, which makes an
/// interrupted run resumable from its record file.
pub fn run_search<F>(
    config: &SearchConfig,
    bklc: Option<&BklcTable>,
    done: &HashSet<String>,
    mut sink: F,
) -> Result<SearchStats, SearchError>
where
    F: FnMut(CandidateRecord) -> Result<(), SearchError>,
{
    config.validate()?;
    let field = FieldSpec::new(config.q)?;
    let factored = factorize_xn_minus_a(field, config.n_long, config.a)?;
    let window = enumerate_divisors(
        &factored,
        config.deg_min,
        config.deg_max,
        config.divisor_cap,
        config.seed,
    )?;
    let mut stats = SearchStats::default();

    for (gi, long_gen) in window.divisors.iter().enumerate() {
        if long_gen.is_zero() || long_gen.degree() == Some(config.n_long) {
            continue; // x^N - a itself generates the zero code
        }
        for (m, p) in factor_pairs(config.n_long) {
            if m < config.m_floor || p < config.t_min {
                continue;
            }
            let spec = EnsembleSpec::new(field, config.a, config.n_long, m)?;
            let split = split_defining_polys(long_gen, &spec)?;
            if split.k < config.k_floor {
                continue;
            }
            let blocks: Vec<TwistulantBlock> = split
                .defs
                .iter()
                .map(|g| twistulant(g, m, config.a))
                .collect::<Result<_, _>>()?;
            let (full, deficient) = rank_filter(&blocks, split.k);
            for (class_idx, pool) in [(0usize, &full), (1usize, &deficient)] {
                let rank_class = split.k - class_idx;
                if rank_class == 0 || pool.is_empty() {
                    continue;
                }
                for t in config.t_min..=config.t_max.min(pool.len()) {
                    let sub_seed = mix_parts(&[
                        config.seed,
                        gi as u64,
                        m as u64,
                        t as u64,
                        rank_class as u64,
                    ]);
                    let subsets =
                        sample_combinations(pool.len(), t, config.combo_cap, sub_seed)?;
                    for subset in &subsets {
                        let sel: Vec<usize> = subset.iter().map(|&i| pool[i]).collect();
                        let key = derivation_key(gi, m, p, t, rank_class, &sel);
                        if done.contains(&key) {
                            stats.skipped += 1;
                            continue;
                        }
                        let defs: Vec<Polynomial> =
                            sel.iter().map(|&i| split.defs[i].clone()).collect();
                        let ctx = CandidateContext {
                            config,
                            key,
                            m,
                            p,
                            rank_class,
                            defs: &defs,
                            seed: mix_parts(&[sub_seed, subset_tag(&sel)]),
                        };
                        let record = evaluate_candidate(&ctx, bklc)?;
                        sink(record)?;
                        stats.emitted += 1;
                    }
                }
            }
        }
    }
    Ok(stats)
}

fn subset_tag(sel: &[usize]) -> u64 {
    mix_parts(&sel.iter().map(|&i| i as u64).collect::<Vec<_>>())
}

pub fn derivation_key(
    gen_index: usize,
    m: usize,
    p: usize,
    t: usize,
    rank_class: usize,
    selection: &[usize],
) -> String {
    let blocks = selection
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".");
    format!("g{gen_index}|m{m}x{p}|t{t}|r{rank_class}|b{blocks}")
}

//! Brouwer–Zimmermann exact minimum distance.
//!
//! The engine builds information sets that are as disjoint as possible by
//! repeated Gaussian elimination, pivoting greedily on columns no earlier set
//! has claimed. Set `j` covers `new_cols[j]` fresh columns; its deficiency
//! `k - new_cols[j]` discounts its contribution to the lower bound. After
//! completing all messages of systematic weight `<= w_j` through every set,
//! any still-unseen codeword has weight at least
//!
//! ```text
//! d_low = sum_j max(0, (w_j + 1) - (k - new_cols[j]))
//! ```
//!
//! while `d_high` is the lightest codeword seen so far. When `d_low` reaches
//! `d_high` the distance is certified exact: anything cheaper would already
//! have been enumerated.
//!
//! Messages of weight `w` are enumerated per support (a w-subset of the k
//! systematic positions) with the first support position fixed to value 1 —
//! one representative per scalar class, since scaling preserves weight. The
//! remaining positions run through an odometer over values `1..q`, each step
//! a single precomputed-row addition. Work is measured in such patterns:
//! a weight-w pass over one set costs `C(k, w) * (q-1)^(w-1)` of them, and
//! the scheduler refuses to start a pass that would blow the budget, so
//! integer budgets give bit-identical results on every run.
//!
//! The scheduler advances whichever set currently has the lowest completed
//! weight among the sets whose next pass actually raises `d_low` (ties to the
//! lowest index). Deficient sets whose next pass gains nothing stay parked;
//! for block-structured generators the full-rank sets carry the bound.

use std::time::Instant;

use rayon::prelude::*;

use super::{
    add_row, add_row_count, weight, CodeParams, Distance, DistanceReport, Engine, EngineBudget,
    GenMatrix, LinCodeError, Witness,
};
use crate::galois::FieldSpec;

struct InfoSet {
    /// Pivot column of each systematic row, in row order. Kept for
    /// diagnostics; the enumeration itself only needs the scaled rows.
    #[allow(dead_code)]
    pivots: Vec<usize>,
    /// How many pivots landed on previously unclaimed columns.
    new_cols: usize,
    /// Row i of the systematic form = transform[i] . original matrix.
    transform: Vec<Vec<u8>>,
    /// scaled[i][s] = s * (systematic row i), s in 0..q.
    scaled: Vec<Vec<Vec<u8>>>,
}

pub(crate) fn run(m: &GenMatrix, budget: &EngineBudget) -> Result<DistanceReport, LinCodeError> {
    let f = m.field();
    let q = f.q();
    let k = m.rows();
    let n = m.cols();
    let started = Instant::now();

    let sets = build_info_sets(m);
    debug_assert!(!sets.is_empty() && sets[0].new_cols == k);

    // Initial upper bound: the lightest row of the first systematic form.
    // Such a row has weight at most 1 + (n - k), so the bound respects the
    // Singleton invariant even if the budget allows no enumeration at all.
    let mut d_high = u32::MAX;
    let mut witness_msg = vec![0u8; k];
    for i in 0..k {
        let w = weight(&sets[0].scaled[i][1]);
        if w < d_high {
            d_high = w;
            witness_msg = sets[0].transform[i].clone();
        }
    }
    let mut witness = Witness::checked(m, witness_msg);
    debug_assert_eq!(witness.weight, d_high);

    let mut wlev = vec![0usize; sets.len()];
    let mut consumed: u128 = 0;
    let mut complete = false;

    loop {
        if lower_bound(&sets, &wlev, k) >= d_high {
            complete = true;
            break;
        }
        if sets.iter().zip(&wlev).any(|(s, &wl)| s.new_cols == k && wl == k) {
            // a full set finished weight k: the whole message space was seen
            complete = true;
            break;
        }
        let mut pick: Option<usize> = None;
        for j in 0..sets.len() {
            if wlev[j] >= k {
                continue;
            }
            let deficiency = k - sets[j].new_cols;
            if wlev[j] + 2 <= deficiency {
                continue; // this pass would not move d_low
            }
            if pick.is_none_or(|b| wlev[j] < wlev[b]) {
                pick = Some(j);
            }
        }
        let Some(j) = pick else { break };
        let wnext = wlev[j] + 1;
        let Some(cost) = pass_cost(k, wnext, q) else { break };
        if consumed.saturating_add(cost) > budget.bz_patterns || cost > u64::MAX as u128 {
            break;
        }
        if budget.deadline.is_some_and(|dl| started.elapsed() > dl) {
            break;
        }

        let best = run_pass(&sets[j], wnext, q, n, k);
        consumed += cost;
        wlev[j] = wnext;
        if let Some(b) = best {
            if b.weight < d_high {
                let msg = sys_to_input(&b.sys_message, &sets[j].transform, f);
                let cand = Witness::checked(m, msg);
                assert_eq!(
                    cand.weight, b.weight,
                    "systematic witness must survive the change of basis"
                );
                d_high = b.weight;
                witness = cand;
            }
        }
    }

    let d = if complete {
        Distance::Exact { exact: d_high }
    } else {
        let low = lower_bound(&sets, &wlev, k).clamp(1, d_high);
        Distance::Interval { low, high: d_high }
    };
    Ok(DistanceReport {
        params: CodeParams { n, k, d },
        engine: Engine::Bz,
        witness,
        work: u64::try_from(consumed).unwrap_or(u64::MAX),
        complete,
    })
}

fn lower_bound(sets: &[InfoSet], wlev: &[usize], k: usize) -> u32 {
    sets.iter()
        .zip(wlev)
        .map(|(s, &wl)| ((wl + 1).saturating_sub(k - s.new_cols)) as u32)
        .sum()
}

fn pass_cost(k: usize, w: usize, q: u8) -> Option<u128> {
    let supports = binom_u128(k, w)?;
    let patterns = (q as u128 - 1).checked_pow(w as u32 - 1)?;
    supports.checked_mul(patterns)
}

fn build_info_sets(m: &GenMatrix) -> Vec<InfoSet> {
    let f = m.field();
    let q = f.q();
    let k = m.rows();
    let n = m.cols();
    let mut used = vec![false; n];
    let mut sets = Vec::new();

    loop {
        let mut a: Vec<Vec<u8>> = m.iter_rows().map(|r| r.to_vec()).collect();
        let mut t: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                let mut row = vec![0u8; k];
                row[i] = 1;
                row
            })
            .collect();
        let mut pivots = Vec::with_capacity(k);
        let mut r = 0;
        for col in 0..n {
            if r == k {
                break;
            }
            if used[col] {
                continue;
            }
            if let Some(pr) = (r..k).find(|&i| a[i][col] != 0) {
                eliminate(f, &mut a, &mut t, r, pr, col);
                pivots.push(col);
                r += 1;
            }
        }
        let new_cols = r;
        if new_cols == 0 {
            break;
        }
        for col in 0..n {
            if r == k {
                break;
            }
            if !used[col] || pivots.contains(&col) {
                continue;
            }
            if let Some(pr) = (r..k).find(|&i| a[i][col] != 0) {
                eliminate(f, &mut a, &mut t, r, pr, col);
                pivots.push(col);
                r += 1;
            }
        }
        assert_eq!(r, k, "full-rank input must always complete an information set");
        for &c in &pivots[..new_cols] {
            used[c] = true;
        }
        let scaled = a
            .iter()
            .map(|row| {
                (0..q)
                    .map(|s| row.iter().map(|&x| f.mul(x, s)).collect::<Vec<u8>>())
                    .collect::<Vec<_>>()
            })
            .collect();
        sets.push(InfoSet { pivots, new_cols, transform: t, scaled });
    }
    sets
}

/// Pivot at (r, col) after swapping row `pr` up: normalize the pivot row and
/// clear the column everywhere else, mirroring every row operation into the
/// transform matrix.
fn eliminate(
    f: FieldSpec,
    a: &mut [Vec<u8>],
    t: &mut [Vec<u8>],
    r: usize,
    pr: usize,
    col: usize,
) {
    a.swap(r, pr);
    t.swap(r, pr);
    let inv = f.inv(a[r][col]);
    if inv != 1 {
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for x in t[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    let arow = a[r].clone();
    let trow = t[r].clone();
    for i in 0..a.len() {
        if i == r {
            continue;
        }
        let c = a[i][col];
        if c != 0 {
            for (x, &s) in a[i].iter_mut().zip(&arow) {
                *x = f.sub(*x, f.mul(c, s));
            }
            for (x, &s) in t[i].iter_mut().zip(&trow) {
                *x = f.sub(*x, f.mul(c, s));
            }
        }
    }
}

struct PassBest {
    weight: u32,
    support_rank: u64,
    pattern: u64,
    sys_message: Vec<u8>,
}

/// Enumerates all scalar-class representatives of systematic weight `w`
/// through one information set; returns the best codeword found.
fn run_pass(set: &InfoSet, w: usize, q: u8, n: usize, k: usize) -> Option<PassBest> {
    let total_supports = binom_u64(k, w);
    let patterns_per = (q as u64 - 1).pow(w as u32 - 1);
    let chunks = total_supports.min(64);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let s = total_supports * c / chunks;
            let e = total_supports * (c + 1) / chunks;
            scan_supports(set, w, q, n, k, s, e, patterns_per)
        })
        .reduce(
            || None,
            |x, y| match (x, y) {
                (None, b) => b,
                (a, None) => a,
                (Some(a), Some(b)) => {
                    if (a.weight, a.support_rank, a.pattern) <= (b.weight, b.support_rank, b.pattern)
                    {
                        Some(a)
                    } else {
                        Some(b)
                    }
                }
            },
        )
}

#[allow(clippy::too_many_arguments)]
fn scan_supports(
    set: &InfoSet,
    w: usize,
    q: u8,
    n: usize,
    k: usize,
    s_start: u64,
    s_end: u64,
    patterns_per: u64,
) -> Option<PassBest> {
    let mut comb = unrank_combination(s_start, k, w);
    let mut best: Option<PassBest> = None;
    let mut acc = vec![0u8; n];
    let mut digits = vec![1u8; w]; // value of each support position; digits[0] stays 1

    for srank in s_start..s_end {
        digits.fill(1);
        acc.fill(0);
        for &c in &comb {
            add_row(&mut acc, &set.scaled[c][1], q);
        }
        let base_w = weight(&acc);
        if best.as_ref().is_none_or(|b| base_w < b.weight) {
            best = Some(capture(base_w, srank, 0, &comb, &digits, k));
        }

        let mut p = 1u64;
        while p < patterns_per {
            let mut idx = 1;
            loop {
                debug_assert!(idx < w, "odometer must stay within its pattern budget");
                if digits[idx] == q - 1 {
                    digits[idx] = 1;
                    // delta from q-1 back to 1 is (1 - (q-1)) mod q = 2
                    add_row(&mut acc, &set.scaled[comb[idx]][2], q);
                    idx += 1;
                } else {
                    digits[idx] += 1;
                    let wgt = add_row_count(&mut acc, &set.scaled[comb[idx]][1], q);
                    if best.as_ref().is_none_or(|b| wgt < b.weight) {
                        best = Some(capture(wgt, srank, p, &comb, &digits, k));
                    }
                    break;
                }
            }
            p += 1;
        }
        next_combination(&mut comb, k);
    }
    best
}

fn capture(
    weight: u32,
    support_rank: u64,
    pattern: u64,
    comb: &[usize],
    digits: &[u8],
    k: usize,
) -> PassBest {
    let mut sys_message = vec![0u8; k];
    for (i, &c) in comb.iter().enumerate() {
        sys_message[c] = digits[i];
    }
    PassBest { weight, support_rank, pattern, sys_message }
}

fn sys_to_input(sys: &[u8], transform: &[Vec<u8>], f: FieldSpec) -> Vec<u8> {
    let k = transform.len();
    let mut out = vec![0u16; k];
    for (i, &v) in sys.iter().enumerate() {
        if v != 0 {
            for (o, &t) in out.iter_mut().zip(&transform[i]) {
                *o += (v as u16) * (t as u16);
            }
        }
    }
    out.into_iter().map(|x| (x % f.q() as u16) as u8).collect()
}

fn binom_u64(n: usize, r: usize) -> u64 {
    u64::try_from(binom_u128(n, r).expect("fits u128 for n <= 63")).expect("fits u64 for n <= 63")
}

fn binom_u128(n: usize, r: usize) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Rank -> combination in lexicographic order over ascending index tuples.
fn unrank_combination(mut rank: u64, k: usize, w: usize) -> Vec<usize> {
    let mut comb = Vec::with_capacity(w);
    let mut start = 0;
    for pos in 0..w {
        let remaining = w - pos - 1;
        for c in start..k {
            let block = binom_u64(k - 1 - c, remaining);
            if rank < block {
                comb.push(c);
                start = c + 1;
                break;
            }
            rank -= block;
        }
    }
    debug_assert_eq!(comb.len(), w);
    comb
}

fn next_combination(comb: &mut [usize], k: usize) {
    let w = comb.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if comb[i] < k - (w - i) {
            comb[i] += 1;
            for j in i + 1..w {
                comb[j] = comb[j - 1] + 1;
            }
            return;
        }
    }
    // last combination reached; the caller's range bound stops the scan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;
    use crate::lincode::{min_distance_bz, min_distance_exhaustive};

    fn gm(q: u8, rows: &[&[u8]]) -> GenMatrix {
        GenMatrix::new(FieldSpec::new(q).unwrap(), rows.iter().map(|r| r.to_vec()).collect())
            .unwrap()
    }

    #[test]
    fn combinatorics_helpers() {
        assert_eq!(binom_u64(19, 10), 92378);
        assert_eq!(binom_u64(5, 0), 1);
        assert_eq!(binom_u128(4, 7), Some(0));
        // unrank agrees with sequential stepping
        let k = 7;
        let w = 3;
        let mut comb = unrank_combination(0, k, w);
        assert_eq!(comb, vec![0, 1, 2]);
        for rank in 1..binom_u64(k, w) {
            next_combination(&mut comb, k);
            assert_eq!(comb, unrank_combination(rank, k, w), "rank {rank}");
        }
    }

    #[test]
    fn hamming_7_4_certified() {
        let m = gm(
            2,
            &[
                &[1, 1, 0, 1, 0, 0, 0],
                &[0, 1, 1, 0, 1, 0, 0],
                &[0, 0, 1, 1, 0, 1, 0],
                &[0, 0, 0, 1, 1, 0, 1],
            ],
        );
        let r = min_distance_bz(&m, &EngineBudget::default()).unwrap();
        assert_eq!(r.params.d, Distance::Exact { exact: 3 });
        assert!(r.complete);
        assert_eq!(r.witness.weight, 3);
    }

    #[test]
    fn info_sets_cover_disjoint_columns() {
        let m = gm(
            5,
            &[
                &[1, 0, 0, 2, 3, 1, 0, 4, 2],
                &[0, 1, 0, 1, 1, 2, 3, 0, 1],
                &[0, 0, 1, 4, 0, 3, 1, 1, 2],
            ],
        );
        let sets = build_info_sets(&m);
        assert!(sets.len() >= 3, "9 columns / rank 3 should give at least 3 sets");
        assert_eq!(sets[0].new_cols, 3);
        let mut seen = std::collections::HashSet::new();
        for s in &sets {
            for &c in &s.pivots[..s.new_cols] {
                assert!(seen.insert(c), "new columns must not repeat across sets");
            }
            // systematic shape: row i is 1 at pivots[i], 0 at the other pivots
            for (i, row_scaled) in s.scaled.iter().enumerate() {
                let row = &row_scaled[1];
                for (j, &pc) in s.pivots.iter().enumerate() {
                    assert_eq!(row[pc], u8::from(i == j));
                }
            }
        }
    }

    #[test]
    fn budget_stop_returns_interval_with_witness() {
        // pseudo-random full-rank [14, 6] code over GF(5); one pattern is never enough
        let mut state = 99u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let rows: Vec<Vec<u8>> = (0..6)
            .map(|i| {
                (0..14)
                    .map(|j| if j == i { 1 } else { (next() % 5) as u8 })
                    .collect()
            })
            .collect();
        let m = GenMatrix::new(FieldSpec::new(5).unwrap(), rows).unwrap();
        let tight = EngineBudget { bz_patterns: 1, ..EngineBudget::default() };
        let r = min_distance_bz(&m, &tight).unwrap();
        assert!(!r.complete);
        match r.params.d {
            Distance::Interval { low, high } => {
                assert!(low >= 1 && low <= high);
                assert_eq!(r.witness.weight, high);
            }
            Distance::Exact { .. } => panic!("tight budget cannot certify"),
        }
        // and with a real budget the same input certifies
        let full = min_distance_bz(&m, &EngineBudget::default()).unwrap();
        assert!(full.complete);
        let ex = min_distance_exhaustive(&m, &EngineBudget::default()).unwrap();
        assert_eq!(full.params.d, ex.params.d);
    }

    #[test]
    fn agreement_with_exhaustive_on_random_codes() {
        let mut state = 7u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0;
        while checked < 25 {
            let q = [2u8, 3, 5][(next() % 3) as usize];
            let k = 2 + (next() % 5) as usize;
            let n = k + 2 + (next() % 10) as usize;
            let rows: Vec<Vec<u8>> =
                (0..k).map(|_| (0..n).map(|_| (next() % q as u64) as u8).collect()).collect();
            let m = match GenMatrix::new(FieldSpec::new(q).unwrap(), rows) {
                Ok(m) => m,
                Err(_) => continue,
            };
            let bz = match min_distance_bz(&m, &EngineBudget::default()) {
                Ok(r) => r,
                Err(LinCodeError::RankDeficient { .. } | LinCodeError::ZeroCode) => continue,
                Err(e) => panic!("unexpected: {e}"),
            };
            let ex = min_distance_exhaustive(&m, &EngineBudget::default()).unwrap();
            assert!(bz.complete);
            assert_eq!(bz.params.d, ex.params.d, "q={q} k={k} n={n}");
            checked += 1;
        }
    }

    #[test]
    fn gf7_small_code_exact() {
        // [8,3] over GF(7): two repeated blocks of a [4,3] code
        let m = gm(
            7,
            &[
                &[1, 0, 0, 1, 1, 0, 0, 1],
                &[0, 1, 0, 3, 0, 1, 0, 3],
                &[0, 0, 1, 5, 0, 0, 1, 5],
            ],
        );
        let bz = min_distance_bz(&m, &EngineBudget::default()).unwrap();
        let ex = min_distance_exhaustive(&m, &EngineBudget::default()).unwrap();
        assert_eq!(bz.params.d, ex.params.d);
        assert!(bz.complete);
    }
}

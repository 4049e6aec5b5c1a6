//! Degree-windowed enumeration of monic divisors of `x^N - a`.
//!
//! A divisor is an exponent vector `(e_1, ..., e_F)` with `0 <= e_i <= m_i`
//! against the factorization `x^N - a = prod f_i^{m_i}`. The number of
//! qualifying vectors can be astronomical, so the enumeration first counts
//! them exactly (dynamic programming over suffix degree sums, arbitrary
//! precision) and, when the count exceeds the cap, draws a uniform
//! without-replacement sample of ranks which are then unranked back into
//! exponent vectors. Everything is deterministic for a fixed seed.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::{FactoredModulus, PolyError, Polynomial};

#[derive(Clone, Debug)]
pub struct DivisorEnumeration {
    /// Exact number of exponent vectors inside the degree window.
    pub total: BigUint,
    /// The divisors themselves, sorted by degree then coefficient sequence.
    /// Contains every qualifying divisor when `total <= cap`, otherwise a
    /// seeded uniform sample of exactly `cap` distinct ones.
    pub divisors: Vec<Polynomial>,
    /// True when sampling kicked in.
    pub truncated: bool,
}

/// Suffix-count tables. `prefix[i][d]` = number of exponent vectors over
/// factors `i..` with total degree `<= d` (degrees capped at the window top).
struct CountTables {
    prefix: Vec<Vec<BigUint>>,
    degrees: Vec<usize>,
    mults: Vec<usize>,
    deg_cap: usize,
}

impl CountTables {
    fn build(fm: &FactoredModulus, deg_cap: usize) -> Self {
        let degrees: Vec<usize> =
            fm.factors.iter().map(|(p, _)| p.degree().expect("factors are nonzero")).collect();
        let mults: Vec<usize> = fm.factors.iter().map(|(_, m)| *m).collect();
        let levels = degrees.len() + 1;

        let mut exact = vec![BigUint::zero(); deg_cap + 1];
        exact[0] = BigUint::one();
        let mut prefix = vec![Vec::new(); levels];
        prefix[levels - 1] = to_prefix(&exact);
        for i in (0..degrees.len()).rev() {
            let mut next = vec![BigUint::zero(); deg_cap + 1];
            for d in 0..=deg_cap {
                let mut acc = BigUint::zero();
                for e in 0..=mults[i] {
                    match e.checked_mul(degrees[i]) {
                        Some(used) if used <= d => acc += &exact[d - used],
                        _ => break,
                    }
                }
                next[d] = acc;
            }
            exact = next;
            prefix[i] = to_prefix(&exact);
        }
        CountTables { prefix, degrees, mults, deg_cap }
    }

    /// Count of suffix vectors (factors `i..`) with degree in `[lo, hi]`.
    fn window(&self, i: usize, lo: usize, hi: usize) -> BigUint {
        if lo > hi || lo > self.deg_cap {
            return BigUint::zero();
        }
        let hi = hi.min(self.deg_cap);
        let upto_hi = self.prefix[i][hi].clone();
        if lo == 0 {
            upto_hi
        } else {
            &upto_hi - &self.prefix[i][lo - 1]
        }
    }

    /// Maps a rank in `[0, window(0, lo, hi))` to its exponent vector, in the
    /// order that enumerates `e_0` outermost, smallest exponent first.
    fn unrank(&self, mut rank: BigUint, mut lo: usize, mut hi: usize) -> Vec<usize> {
        let mut exps = Vec::with_capacity(self.degrees.len());
        for i in 0..self.degrees.len() {
            let mut chosen = None;
            for e in 0..=self.mults[i] {
                let used = match e.checked_mul(self.degrees[i]) {
                    Some(u) if u <= hi => u,
                    _ => break,
                };
                let cnt = self.window(i + 1, lo.saturating_sub(used), hi - used);
                if rank < cnt {
                    chosen = Some((e, used));
                    break;
                }
                rank -= cnt;
            }
            let (e, used) = chosen.expect("rank below window count");
            exps.push(e);
            lo = lo.saturating_sub(used);
            hi -= used;
        }
        debug_assert!(rank.is_zero() && lo == 0);
        exps
    }
}

fn to_prefix(exact: &[BigUint]) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(exact.len());
    let mut acc = BigUint::zero();
    for v in exact {
        acc += v;
        out.push(acc.clone());
    }
    out
}

/// Monic divisors of `x^N - a` with degree in `[deg_min, deg_max]`.
/// See [`DivisorEnumeration`] for the cap/sampling contract.
pub fn enumerate_divisors(
    fm: &FactoredModulus,
    deg_min: usize,
    deg_max: usize,
    cap: u64,
    seed: u64,
) -> Result<DivisorEnumeration, PolyError> {
    if deg_min > deg_max || deg_max > fm.n {
        return Err(PolyError::BadWindow { deg_min, deg_max, n: fm.n });
    }
    if cap == 0 {
        return Err(PolyError::ZeroCap);
    }

    let tables = CountTables::build(fm, deg_max);
    let total = tables.window(0, deg_min, deg_max);

    let exps_list: Vec<Vec<usize>> = if total <= BigUint::from(cap) {
        let mut out = Vec::new();
        enumerate_all(&tables, 0, deg_min, deg_max, &mut Vec::new(), &mut out);
        out
    } else {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        sample_ranks(&total, cap, &mut rng)
            .into_iter()
            .map(|r| tables.unrank(r, deg_min, deg_max))
            .collect()
    };
    let truncated = BigUint::from(exps_list.len() as u64) < total;

    let mut divisors: Vec<Polynomial> = exps_list
        .into_iter()
        .map(|exps| {
            let mut acc = Polynomial::one(fm.field);
            for ((f, _), e) in fm.factors.iter().zip(exps) {
                for _ in 0..e {
                    acc = acc.mul(f);
                }
            }
            acc
        })
        .collect();
    divisors.sort_by(|x, y| x.canonical_cmp(y));

    Ok(DivisorEnumeration { total, divisors, truncated })
}

fn enumerate_all(
    tables: &CountTables,
    i: usize,
    lo: usize,
    hi: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == tables.degrees.len() {
        if lo == 0 {
            out.push(current.clone());
        }
        return;
    }
    for e in 0..=tables.mults[i] {
        let used = match e.checked_mul(tables.degrees[i]) {
            Some(u) if u <= hi => u,
            _ => break,
        };
        if tables.window(i + 1, lo.saturating_sub(used), hi - used).is_zero() {
            continue;
        }
        current.push(e);
        enumerate_all(tables, i + 1, lo.saturating_sub(used), hi - used, current, out);
        current.pop();
    }
}

/// Floyd's algorithm: `cap` distinct uniform ranks from `[0, total)`.
fn sample_ranks(total: &BigUint, cap: u64, rng: &mut ChaCha12Rng) -> Vec<BigUint> {
    let mut chosen = std::collections::HashSet::new();
    let mut j = total - BigUint::from(cap);
    for _ in 0..cap {
        let bound = &j + BigUint::one();
        let t = rng.gen_biguint_below(&bound);
        if !chosen.insert(t) {
            chosen.insert(j.clone());
        }
        j += BigUint::one();
    }
    let mut out: Vec<BigUint> = chosen.into_iter().collect();
    out.sort();
    debug_assert_eq!(out.len() as u64, cap);
    out
}

//! Gray-code exhaustive enumeration.
//!
//! Nonzero messages are indexed by `i in [1, q^k)`. Writing `a` for the
//! base-q digits of `i` (least significant first), the message is the q-ary
//! Gray map `g_j = (a_j - a_{j+1}) mod q`. Stepping `i -> i+1` changes `g` in
//! exactly one position `t` (the lowest digit of `i` that does not wrap), and
//! the change is always `g_t += 1`, so each successive codeword costs one row
//! addition. Chunks of the index range are independent because both the
//! digits and the Gray message can be computed directly at any starting
//! index; the chunk count is fixed, keeping results independent of the
//! thread count.

use rayon::prelude::*;

use super::{
    add_row_count, message_space, weight, CodeParams, Distance, DistanceReport, Engine,
    EngineBudget, GenMatrix, LinCodeError, Witness,
};

struct ChunkBest {
    weight: u32,
    step: u128,
    message: Vec<u8>,
}

pub(crate) fn run(m: &GenMatrix, budget: &EngineBudget) -> Result<DistanceReport, LinCodeError> {
    let q = m.field().q();
    let k = m.rows();
    let n = m.cols();
    let space = match message_space(q, k) {
        Some(s) if s <= budget.exhaustive_messages => s,
        other => {
            return Err(LinCodeError::BudgetExceeded {
                q,
                k,
                space: other.map_or_else(|| "beyond u128 range".to_string(), |v| v.to_string()),
                budget: budget.exhaustive_messages,
            })
        }
    };

    let total = space - 1; // nonzero messages
    let chunks = total.min(128) as u32;
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = 1 + total * c as u128 / chunks as u128;
            let end = 1 + total * (c as u128 + 1) / chunks as u128;
            scan(m, start, end)
        })
        .min_by(|x, y| (x.weight, x.step).cmp(&(y.weight, y.step)))
        .expect("at least one chunk");

    let witness = Witness::checked(m, best.message);
    debug_assert_eq!(witness.weight, best.weight);
    Ok(DistanceReport {
        params: CodeParams { n, k, d: Distance::Exact { exact: best.weight } },
        engine: Engine::Exhaustive,
        witness,
        work: u64::try_from(total).unwrap_or(u64::MAX),
        complete: true,
    })
}

fn scan(m: &GenMatrix, start: u128, end: u128) -> ChunkBest {
    let f = m.field();
    let q = f.q();
    let k = m.rows();

    // digits of the start index and its Gray message
    let mut digits = vec![0u8; k];
    let mut rem = start;
    for d in digits.iter_mut() {
        *d = (rem % q as u128) as u8;
        rem /= q as u128;
    }
    debug_assert_eq!(rem, 0);
    let mut g: Vec<u8> = (0..k)
        .map(|j| f.sub(digits[j], if j + 1 < k { digits[j + 1] } else { 0 }))
        .collect();

    let mut cw = m.mul_left(&g);
    let mut best = ChunkBest { weight: weight(&cw), step: start, message: g.clone() };

    let rows: Vec<&[u8]> = (0..k).map(|i| m.row(i)).collect();
    let mut i = start + 1;
    while i < end {
        let mut t = 0;
        loop {
            digits[t] += 1;
            if digits[t] == q {
                digits[t] = 0;
                t += 1;
            } else {
                break;
            }
        }
        g[t] = f.add(g[t], 1);
        let w = add_row_count(&mut cw, rows[t], q);
        if w < best.weight {
            best = ChunkBest { weight: w, step: i, message: g.clone() };
        }
        i += 1;
    }
    best
}

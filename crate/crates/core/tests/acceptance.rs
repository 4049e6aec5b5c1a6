//! End-to-end acceptance checks for the shipped guarantees, one test per
//! guarantee. Every test asserts its whole claim and finishes with a single
//! PASS line (visible under `--nocapture`), so the suite reads as a
//! checklist. The heavy distance certifications are real: expect the full
//! run to take tens of minutes on one core.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use qtcodes::galois::FieldSpec;
use qtcodes::lincode::{
    min_distance_auto, min_distance_bz, min_distance_exhaustive, row_space_basis, Distance,
    Engine, EngineBudget, GenMatrix,
};
use qtcodes::polyring::{enumerate_divisors, factorize_xn_minus_a, parse_poly, Polynomial};
use qtcodes::qtcore::{
    asr_distance_bound, asr_generate, check_highest_rank_gcd, interleave_defs, is_qt_closed,
    join_blocks, rank_of_block, split_defining_polys, standard_generator, twistulant,
    EnsembleSpec, TwistulantBlock,
};
use qtcodes::search::{
    format_rank_distribution, rank_distribution, run_search, sample_combinations, CandidateRecord,
    SearchConfig,
};
use qtcodes::workbench::{
    load_bklc, load_fixtures, verify_table_entry, Convention, FixtureFlag, FixtureRow,
    VerifyVerdict,
};

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn fixture_rows() -> Vec<FixtureRow> {
    load_fixtures(&data_path("qt_fixtures.csv")).expect("fixture file loads")
}

fn find_row(rows: &[FixtureRow], q: u8, n: usize, k: usize, d: u32) -> &FixtureRow {
    rows.iter()
        .find(|r| r.q == q && r.n == n && r.k == k && r.d == d)
        .unwrap_or_else(|| panic!("no fixture row [{n}, {k}, {d}] over GF({q})"))
}

fn parse_defs(row: &FixtureRow) -> Vec<Polynomial> {
    let field = FieldSpec::new(row.q).unwrap();
    row.polys.iter().map(|s| parse_poly(field, s).unwrap()).collect()
}

fn random_poly(rng: &mut ChaCha12Rng, field: FieldSpec, len: usize) -> Polynomial {
    let coeffs: Vec<u8> = (0..len).map(|_| rng.gen_range(0..field.q())).collect();
    Polynomial::from_coeffs(field, coeffs).unwrap()
}

fn random_nonzero_poly(rng: &mut ChaCha12Rng, field: FieldSpec, len: usize) -> Polynomial {
    loop {
        let p = random_poly(rng, field, len);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Every shipped fixture row either rebuilds to its claimed length and
/// dimension under one of the two digit conventions, or is called out as
/// internally inconsistent — never silently passed or failed. Runs with a
/// minimal engine budget, so the whole sweep takes seconds.
#[test]
fn a01_fixture_rows_reconstruct_or_are_flagged() {
    let rows = fixture_rows();
    assert_eq!(rows.len(), 45, "the shipped table has 45 claims");

    // (q, n, k, d) of the rows that are inconsistent as printed: three with
    // broken row arithmetic, six whose polynomials cannot rebuild the
    // claimed dimension under any convention.
    let inconsistent: [(u8, usize, usize, u32); 9] = [
        (7, 66, 11, 40),
        (7, 84, 11, 54),
        (7, 88, 10, 59),
        (7, 75, 15, 42),
        (5, 78, 23, 33),
        (5, 84, 13, 47),
        (5, 54, 15, 25),
        (5, 48, 20, 17),
        (5, 54, 16, 24), // the N = 2394 claim; the N = 2520 twin rebuilds
    ];

    let budget = EngineBudget::with_patterns(1);
    let mut flagged = Vec::new();
    let mut rebuilt = 0usize;
    for row in &rows {
        let report = verify_table_entry(row, &budget);
        match report.verdict {
            VerifyVerdict::InconsistentFixture => {
                assert!(!report.notes.is_empty(), "flagged rows explain themselves");
                flagged.push((row.q, row.n, row.k, row.d));
            }
            VerifyVerdict::Confirmed | VerifyVerdict::Partial => {
                let convention = report.convention.expect("a convention carried the verdict");
                let outcome = report
                    .outcomes
                    .iter()
                    .find(|o| o.convention == convention)
                    .expect("outcome recorded for the carrying convention");
                assert_eq!(outcome.k, Some(row.k), "claimed dimension rebuilt");
                rebuilt += 1;
            }
            VerifyVerdict::Mismatch => {
                panic!("row [{}, {}, {}]_{} reported a falsified claim", row.n, row.k, row.d, row.q)
            }
        }
    }
    assert_eq!(rebuilt, 36);
    let expected: HashSet<_> = inconsistent.iter().copied().collect();
    let got: HashSet<_> = flagged.iter().copied().collect();
    assert_eq!(got, expected, "exactly the known inconsistent rows are flagged");
    assert_eq!(flagged.len(), 9);

    // every record-flagged row (the previous-best-beating claims) rebuilds
    let records: Vec<_> =
        rows.iter().filter(|r| r.flags.contains(&FixtureFlag::Record)).collect();
    assert_eq!(records.len(), 5);
    for row in records {
        let report = verify_table_entry(row, &budget);
        assert!(
            matches!(report.verdict, VerifyVerdict::Confirmed | VerifyVerdict::Partial),
            "record row [{}, {}, {}]_{} rebuilds",
            row.n,
            row.k,
            row.d,
            row.q
        );
    }
    println!("PASS: 36 rows rebuild (n, k); 9 inconsistent rows flagged with notes");
}

/// The exhaustive Gray-code engine certifies the claimed distances of the
/// small-dimension codes exactly: the [84, 13, 48] record over GF(5) and
/// the [76, 10, 50] claim over GF(7) straight from the fixture file, plus
/// the two claims whose printed block lengths are typos — rebuilt at the
/// block length their own n and N imply, they certify exactly.
#[test]
fn a02_exhaustive_tier_certifies_claimed_distances() {
    let rows = fixture_rows();
    let budget = EngineBudget::default();

    for (q, n, k, d) in [(5u8, 84usize, 13usize, 48u32), (7, 76, 10, 50)] {
        let row = find_row(&rows, q, n, k, d);
        let report = verify_table_entry(row, &budget);
        assert_eq!(report.verdict, VerifyVerdict::Confirmed);
        assert_eq!(report.convention, Some(Convention::LowFirst));
        let outcome = &report.outcomes[0];
        assert_eq!(outcome.engine, Some(Engine::Exhaustive));
        assert_eq!(outcome.d, Some(Distance::Exact { exact: d }));
        println!("  [{n}, {k}, {d}]_{q}: certified exactly (exhaustive)");
    }

    // diagnostic rebuilds: the verifier flags these rows because their
    // printed m contradicts n and N, but the implied block length rebuilds
    // the claim exactly. The fixture stays verbatim; this documents that
    // the claims themselves are sound.
    for (q, n, k, d, implied_m) in [(7u8, 88usize, 10usize, 59u32, 11usize), (7, 84, 11, 54, 12)] {
        let row = find_row(&rows, q, n, k, d);
        assert_eq!(
            verify_table_entry(row, &budget).verdict,
            VerifyVerdict::InconsistentFixture,
            "the verbatim row stays flagged"
        );
        assert_eq!(n, implied_m * row.polys.len());
        assert_eq!(row.n_long % implied_m, 0);
        let joined = join_blocks(&parse_defs(row), implied_m, row.a).unwrap();
        assert_eq!(joined.rows(), k);
        let report = min_distance_auto(&joined, &budget).unwrap();
        assert_eq!(report.engine, Engine::Exhaustive);
        assert_eq!(report.params.d, Distance::Exact { exact: d });
        println!("  [{n}, {k}, {d}]_{q}: certified exactly at the implied m = {implied_m}");
    }
    println!("PASS: exhaustive tier certified 48, 50, 59, 54 exactly");
}

/// The Brouwer–Zimmermann engine certifies the four large record claims
/// exactly within a two-hour-per-code ceiling. If a run ever hits the
/// ceiling, the degraded bar still applies: the certified floor must reach
/// the claim while a witness codeword pins the ceiling to it.
#[test]
fn a03_bz_tier_certifies_record_distances() {
    let rows = fixture_rows();
    let budget = EngineBudget {
        deadline: Some(Duration::from_secs(2 * 60 * 60)),
        ..EngineBudget::default()
    };
    for (q, n, k, d) in
        [(5u8, 85usize, 16usize, 45u32), (5, 84, 19, 41), (7, 65, 12, 39), (7, 78, 13, 47)]
    {
        let row = find_row(&rows, q, n, k, d);
        let report = verify_table_entry(row, &budget);
        let outcome = &report.outcomes[0];
        assert_eq!(outcome.engine, Some(Engine::Bz));
        match report.verdict {
            VerifyVerdict::Confirmed => {
                assert_eq!(outcome.d, Some(Distance::Exact { exact: d }));
                println!("  [{n}, {k}, {d}]_{q}: certified exactly (bz)");
            }
            VerifyVerdict::Partial => {
                // the ceiling fired: the degraded bar — floor at the claim
                // and a witness codeword of exactly the claimed weight
                // (the interval's upper end is always witness-backed)
                let got = outcome.d.expect("interval recorded");
                assert!(
                    got.low() >= d && got.high() == d,
                    "[{n}, {k}, {d}]_{q}: budget expired with insufficient certificate {got}"
                );
                println!("  [{n}, {k}, {d}]_{q}: certified via the degraded bar {got}");
            }
            other => panic!("[{n}, {k}, {d}]_{q}: unexpected verdict {other}"),
        }
    }
    println!("PASS: BZ tier certified 45, 41, 39, 47");
}

/// On fifty seeded random codes small enough to enumerate, the BZ engine's
/// exact answer always equals the exhaustive engine's.
#[test]
fn a04_engines_agree_on_small_random_codes() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA04);
    let budget = EngineBudget::default();
    let start = std::time::Instant::now();
    let mut done = 0usize;
    while done < 50 {
        let q = [2u8, 3, 5][done % 3];
        let field = FieldSpec::new(q).unwrap();
        let k = rng.gen_range(1..=8usize);
        let n = rng.gen_range(k.max(2)..=24usize);
        let rows: Vec<Vec<u8>> =
            (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        let m = GenMatrix::new(field, rows).unwrap();
        let basis = match row_space_basis(&m) {
            Ok(b) => b,
            Err(_) => continue, // sampled the zero code; resample
        };
        let ex = min_distance_exhaustive(&basis, &budget).unwrap();
        let bz = min_distance_bz(&basis, &budget).unwrap();
        let (Some(de), Some(db)) = (ex.params.d.exact(), bz.params.d.exact()) else {
            panic!("both engines must finish exactly on [{n}, {}] over GF({q})", basis.rows());
        };
        assert_eq!(
            de,
            db,
            "engines disagree on a [{n}, {}] code over GF({q})",
            basis.rows()
        );
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "agreement sweep took {elapsed:?}");
    println!("PASS: BZ = exhaustive on 50/50 random codes in {elapsed:?}");
}

/// The algebraic block-rank formula (via gcd with x^m - a) matches the
/// row-reduction rank of the materialized block on 500 seeded blocks.
#[test]
fn a05_block_rank_formula_matches_row_reduction() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA05);
    for i in 0..500 {
        let q = [2u8, 3, 5, 7][i % 4];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(1..=12usize);
        let a = rng.gen_range(1..q);
        let g = random_poly(&mut rng, field, m);
        let formula = rank_of_block(&g, m, a).unwrap();
        let reduced = twistulant(&g, m, a).unwrap().rank();
        assert_eq!(formula, reduced, "block {g} with m = {m}, a = {a} over GF({q})");
    }
    println!("PASS: rank formula = rref rank on 500/500 blocks");
}

/// Whenever some block attains the split's full rank k = m - deg(gcd of
/// all blocks), the gcd over just the highest-rank blocks already equals
/// the gcd over all of them. Checked on 200 seeded instances satisfying
/// the hypothesis.
#[test]
fn a06_highest_rank_gcd_identity() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA06);
    let mut kept = 0usize;
    let mut attempts = 0usize;
    while kept < 200 {
        attempts += 1;
        assert!(attempts < 10_000, "hypothesis should hold on a fair share of instances");
        let q = [2u8, 3, 5, 7][attempts % 4];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(2..=10usize);
        let a = rng.gen_range(1..q);
        let p = rng.gen_range(2..=6usize);
        let defs: Vec<Polynomial> = (0..p).map(|_| random_poly(&mut rng, field, m)).collect();
        if defs.iter().all(|g| g.is_zero()) {
            continue;
        }
        let (_, k) = standard_generator(&defs, m, a).unwrap();
        let top = defs
            .iter()
            .map(|g| rank_of_block(g, m, a).unwrap())
            .max()
            .unwrap();
        if top != k {
            continue; // hypothesis not satisfied; resample
        }
        let (gcd_all, gcd_top, equal) = check_highest_rank_gcd(&defs, m, a).unwrap();
        assert!(equal, "gcd over top-rank blocks {gcd_top} != gcd over all {gcd_all}");
        kept += 1;
    }
    println!("PASS: highest-rank gcd identity on 200/200 qualifying instances");
}

/// Codes built from one base divisor g and coprime multipliers are never
/// worse than the guaranteed floor: exhaustive d >= (number of blocks) x
/// d(base code). 100 seeded instances, and the floor is attained at least
/// ten times so the bound is witnessed tight.
#[test]
fn a07_asr_bound_holds_with_tight_instances() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA07);
    let budget = EngineBudget::default();
    let mut tight = 0usize;
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 10_000, "instance generation should rarely reject");
        let q = [2u8, 3, 5][attempts % 3];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(4..=8usize);
        let a = rng.gen_range(1..q);
        let fm = factorize_xn_minus_a(field, m, a).unwrap();
        let window = enumerate_divisors(&fm, 1, m - 1, 64, rng.gen()).unwrap();
        if window.divisors.is_empty() {
            continue;
        }
        let g = window.divisors[rng.gen_range(0..window.divisors.len())].clone();
        let modulus = Polynomial::x_pow_minus_const(field, m, a).unwrap();
        let h = modulus.div_exact(&g).expect("enumerated divisors divide the modulus");
        let ell = rng.gen_range(1..=3usize);
        // every fourth instance repeats one multiplier across all blocks:
        // the code is then ell juxtaposed copies of the base code, so the
        // floor is attained and tightness gets witnessed by construction
        let repeat = done.is_multiple_of(4);
        let mut multipliers = Vec::with_capacity(ell);
        let mut guard = 0;
        while multipliers.len() < ell {
            guard += 1;
            if guard > 500 {
                break;
            }
            let f = random_nonzero_poly(&mut rng, field, m);
            let coprime = h.is_one() || f.gcd(&h).map(|d| d.is_one()).unwrap_or(false);
            if !coprime {
                continue;
            }
            if repeat && !multipliers.is_empty() {
                let first: &Polynomial = &multipliers[0];
                multipliers.push(first.clone());
            } else {
                multipliers.push(f);
            }
        }
        if multipliers.len() < ell {
            continue; // could not find coprime multipliers; resample
        }
        let matrix = asr_generate(&g, &multipliers, m, a).unwrap();
        assert!(is_qt_closed(&matrix, m, a).unwrap());
        let d = min_distance_exhaustive(&matrix, &budget)
            .unwrap()
            .params
            .d
            .exact()
            .expect("small instances finish");
        let bound = asr_distance_bound(&g, ell, m, a, &budget).unwrap();
        assert!(
            d >= bound,
            "certified d = {d} under the guaranteed floor {bound} (g = {g}, ell = {ell})"
        );
        if d == bound {
            tight += 1;
        }
        done += 1;
    }
    assert!(tight >= 10, "only {tight} of 100 instances attained the floor");
    println!("PASS: floor held on 100/100 instances, attained on {tight}");
}

/// The core algebra round-trips: twistulant blocks respect polynomial
/// multiplication, factorizations multiply back to their modulus (with the
/// characteristic-power multiplicity handled), splits invert, and every
/// constructed code is closed under the blockwise constacyclic shift.
#[test]
fn a08_algebra_suite_roundtrips() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA08);

    // twistulant homomorphism: T(f g) = T(f) T(g) over the quotient ring
    for i in 0..60 {
        let q = [2u8, 3, 5, 7][i % 4];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(1..=9usize);
        let a = rng.gen_range(1..q);
        let f = random_poly(&mut rng, field, m);
        let g = random_poly(&mut rng, field, m);
        let product = f.mul(&g).reduce_mod_xn_minus_a(m, a);
        let lhs = twistulant(&product, m, a).unwrap().materialize();
        let tf = twistulant(&f, m, a).unwrap().materialize();
        let tg = twistulant(&g, m, a).unwrap().materialize();
        let mut rows = Vec::with_capacity(m);
        for r in 0..m {
            let mut row = vec![0u8; m];
            for (c, slot) in row.iter_mut().enumerate() {
                let mut acc = 0u8;
                for j in 0..m {
                    acc = field.add(acc, field.mul(tf.row(r)[j], tg.row(j)[c]));
                }
                *slot = acc;
            }
            rows.push(row);
        }
        let rhs = GenMatrix::new(field, rows).unwrap();
        assert_eq!(lhs, rhs, "homomorphism failed for f = {f}, g = {g}, m = {m}, a = {a}");
    }

    // factorization reconstruction, including characteristic-dividing N
    for (q, n, a) in [
        (2u8, 7usize, 1u8),
        (2, 24, 1),
        (3, 13, 1),
        (3, 18, 2),
        (5, 11, 4),
        (5, 12, 1),
        (7, 16, 3),
        (7, 21, 1),
        (5, 840, 1),
    ] {
        let field = FieldSpec::new(q).unwrap();
        let fm = factorize_xn_minus_a(field, n, a).unwrap();
        assert_eq!(fm.reconstruct(), fm.modulus(), "x^{n} - {a} over GF({q})");
        let squarefree_deg: usize = fm.factors.iter().map(|(f, _)| f.degree().unwrap()).sum();
        assert_eq!(squarefree_deg * fm.multiplicity(), n);
    }
    // the characteristic-power case in full: every factor of x^840 - 1
    // over GF(5) divides x^168 - 1 and recurs exactly 5 times
    let fm = factorize_xn_minus_a(FieldSpec::new(5).unwrap(), 840, 1).unwrap();
    assert_eq!(fm.n_prime, 168);
    assert_eq!(fm.multiplicity(), 5);
    assert!(fm.factors.iter().all(|(_, mult)| *mult == 5));
    let sq = fm.squarefree_part();
    assert!(fm.factors.iter().all(|(f, _)| f.divides(&sq)));

    // split round-trip: de-interleave then re-interleave is the identity
    for _ in 0..100 {
        let q = [2u8, 3, 5, 7][rng.gen_range(0..4)];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(2..=6usize);
        let p = rng.gen_range(2..=8usize);
        let n_long = m * p;
        let a = rng.gen_range(1..q);
        let long = random_nonzero_poly(&mut rng, field, n_long);
        let spec = EnsembleSpec::new(field, a, n_long, m).unwrap();
        let split = split_defining_polys(&long, &spec).unwrap();
        assert_eq!(split.defs.len(), p);
        assert_eq!(interleave_defs(&split.defs, &spec).unwrap(), long);
        let (_, k) = standard_generator(&split.defs, m, a).unwrap();
        assert_eq!(split.k, k);
    }

    // closure of constructed codes under the blockwise shift
    for _ in 0..50 {
        let q = [2u8, 3, 5][rng.gen_range(0..3)];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(2..=8usize);
        let a = rng.gen_range(1..q);
        let t = rng.gen_range(1..=4usize);
        let defs: Vec<Polynomial> =
            (0..t).map(|_| random_poly(&mut rng, field, m)).collect();
        if defs.iter().all(|d| d.is_zero()) {
            continue;
        }
        let joined = join_blocks(&defs, m, a).unwrap();
        assert!(is_qt_closed(&joined, m, a).unwrap());
    }
    println!("PASS: homomorphism, factorization, split round-trip, closure all hold");
}

/// Search runs are reproducible and bounded: the same config yields the
/// same record stream twice, derivation keys never repeat, and no
/// (generator, split, class, t) group exceeds the 20,000-subset cap even
/// when its pool is combinatorially larger.
#[test]
fn a09_search_determinism_and_sampling_cap() {
    // the sampler itself: C(41, 4) = 101,270 exceeds the cap
    let cap = 20_000u64;
    let sampled = sample_combinations(41, 4, cap, 0xA09).unwrap();
    assert_eq!(sampled.len(), cap as usize);
    let distinct: HashSet<_> = sampled.iter().cloned().collect();
    assert_eq!(distinct.len(), sampled.len(), "sampled subsets are distinct");
    assert!(sampled.iter().all(|s| s.windows(2).all(|w| w[0] < w[1])));
    let twice = sample_combinations(41, 4, cap, 0xA09).unwrap();
    assert_eq!(sampled, twice, "sampling is a pure function of the seed");

    // a full search over x^82 - 1 at m = 2: each split yields 41 blocks,
    // so t = 4 pools overflow the cap and exercise the sampler in situ
    let config: SearchConfig = serde_json::from_str(
        r#"{
            "q": 5, "a": 1, "N": 82,
            "deg_min": 60, "deg_max": 62,
            "divisor_cap": 4, "combo_cap": 20000,
            "t_min": 4, "t_max": 4,
            "k_floor": 1, "m_floor": 2,
            "seed": 20260825, "probe_trials": 4,
            "exhaustive_budget": 4096, "bz_patterns": 4096
        }"#,
    )
    .unwrap();
    let run = |cfg: &SearchConfig| -> Vec<CandidateRecord> {
        let mut out = Vec::new();
        let stats = run_search(cfg, None, &HashSet::new(), |r| {
            out.push(r);
            Ok(())
        })
        .unwrap();
        assert_eq!(stats.emitted, out.len());
        assert_eq!(stats.skipped, 0);
        out
    };
    let strip = |records: &[CandidateRecord]| -> Vec<CandidateRecord> {
        records.iter().cloned().map(|mut r| {
            r.timestamp = 0;
            r
        })
        .collect()
    };
    let first = run(&config);
    let second = run(&config);
    assert_eq!(strip(&first), strip(&second), "identical record streams");
    assert!(!first.is_empty());

    let keys: HashSet<_> = first.iter().map(|r| r.key.clone()).collect();
    assert_eq!(keys.len(), first.len(), "derivation keys are unique");

    let mut groups: BTreeMap<String, u64> = BTreeMap::new();
    for r in &first {
        let group = r.key.rsplit_once("|b").expect("key has a block suffix").0.to_string();
        *groups.entry(group).or_insert(0) += 1;
    }
    assert!(groups.values().all(|&c| c <= cap), "a group exceeded the subset cap");
    assert!(
        groups.values().any(|&c| c == cap),
        "at least one pool was large enough to engage the cap"
    );
    println!(
        "PASS: deterministic over {} records in {} groups, cap respected",
        first.len(),
        groups.len()
    );
}

/// The rank-histogram reporting used for split summaries: counts always
/// sum to the number of blocks, and the rendered line follows the
/// `N = m·p -> rank:count, …` schema with ranks descending.
#[test]
fn a10_rank_distribution_reporting_schema() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA10);
    for _ in 0..100 {
        let q = [2u8, 3, 5, 7][rng.gen_range(0..4)];
        let field = FieldSpec::new(q).unwrap();
        let m = rng.gen_range(2..=6usize);
        let p = rng.gen_range(2..=8usize);
        let n_long = m * p;
        let a = rng.gen_range(1..q);
        let long = random_nonzero_poly(&mut rng, field, n_long);
        let spec = EnsembleSpec::new(field, a, n_long, m).unwrap();
        let split = split_defining_polys(&long, &spec).unwrap();
        let blocks: Vec<TwistulantBlock> = split
            .defs
            .iter()
            .map(|g| twistulant(g, m, a).unwrap())
            .collect();
        let hist = rank_distribution(&blocks);
        assert_eq!(hist.values().sum::<usize>(), p, "histogram covers every block");

        let line = format_rank_distribution(n_long, m, p, &hist);
        let (head, body) = line.split_once(" -> ").expect("schema has an arrow");
        assert_eq!(head, format!("{n_long} = {m}\u{b7}{p}"));
        let mut last_rank: Option<usize> = None;
        let mut total = 0usize;
        for part in body.split(", ") {
            let (rank, count) = part.split_once(':').expect("rank:count entries");
            let rank: usize = rank.parse().unwrap();
            let count: usize = count.parse().unwrap();
            assert!(last_rank.is_none_or(|prev| rank < prev), "ranks descend");
            assert!(rank <= m);
            last_rank = Some(rank);
            total += count;
        }
        assert_eq!(total, p);
    }

    // the reporting is also what the library exposes for summarizing
    // block families loaded from records: spot-check one fixed rendering
    let field = FieldSpec::new(5).unwrap();
    let defs = ["123", "444", "1", "0"];
    let blocks: Vec<TwistulantBlock> = defs
        .iter()
        .map(|s| twistulant(&parse_poly(field, s).unwrap(), 3, 1).unwrap())
        .collect();
    // "123" is coprime to x^3 - 1 (rank 3), "444" = 4(x^2 + x + 1) shares
    // the degree-2 factor (rank 1), "1" is a unit (rank 3), "0" is rank 0
    let hist = rank_distribution(&blocks);
    assert_eq!(format_rank_distribution(12, 3, 4, &hist), "12 = 3\u{b7}4 -> 3:2, 1:1, 0:1");
    println!("PASS: 100 histograms sum to p and render in schema");
}

/// Loading the shipped sample best-known-distance table works and its
/// entries line up with the fixture claims they were seeded from.
#[test]
fn a11_sample_bklc_table_is_consistent_with_fixtures() {
    let table = load_bklc(&data_path("bklc_sample.csv")).expect("sample table loads");
    assert_eq!(table.len(), 43);
    let rows = fixture_rows();
    for row in &rows {
        let best = table
            .lookup(row.q, row.n, row.k)
            .unwrap_or_else(|| panic!("no entry for [{}, {}] over GF({})", row.n, row.k, row.q));
        if row.flags.contains(&FixtureFlag::Record) {
            assert_eq!(best, row.d - 1, "record rows imply the previous best was d - 1");
        } else {
            assert!(best >= row.d - 1, "claims never beat the seeded table by more than one");
        }
    }
    println!("PASS: 43-entry sample table covers every fixture key");
}

//! Acceptance suite: every release-gating claim, one test per criterion.
//!
//! Run with `cargo test -p toi-core --test acceptance -- --nocapture` to see
//! the per-criterion pass lines.

use std::time::{Duration, Instant};

use toi_core::shuffle::Xorshift64Star;
use toi_core::{
    alleviated_split, apply_strategy, brute_force_pair_coverage, build_distributed, count_points,
    detect_row_duplicates, interior_pair_range, make_plan, pair_coverage, period_analysis,
    row_diversity, suggest_prime, toi_ratio, GrayscaleMatrix, Ratio, ToiStrategy, TokenStream,
};

fn stream_of(t: usize) -> TokenStream {
    TokenStream::from_ids((0..t).map(|i| i as u32).collect())
}

fn report(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{criterion}: took {elapsed:?}, budget {budget:?}"
    );
    println!("[PASS] {criterion} ({elapsed:?})");
}

// criterion 1: the worked 13-token examples reproduce exactly
#[test]
fn criterion_1_overlapped_split_counts() {
    let started = Instant::now();

    let plan = make_plan(3, 3, false).unwrap();
    let seq = alleviated_split(&stream_of(13), &plan).unwrap();
    assert_eq!(seq.points.len(), 11);
    assert_eq!(seq.per_sequence_counts, vec![4, 4, 3]);
    assert_eq!(count_points(13, &plan), 11);

    let plan = make_plan(4, 1, false).unwrap();
    let seq = alleviated_split(&stream_of(13), &plan).unwrap();
    assert_eq!(seq.points.len(), 3);
    assert_eq!(count_points(13, &plan), 3);

    report(
        "criterion 1: 13-token stream splits to 11 (n=3, p=3) and 3 (n=4, p=1) points",
        started,
        Duration::from_secs(1),
    );
}

// criterion 2: period table for batch size 20
#[test]
fn criterion_2_period_table_k20() {
    let started = Instant::now();

    for (p, period, repetitions) in [(2, 10, 2), (5, 4, 5), (7, 20, 1), (10, 2, 10)] {
        let got = period_analysis(p, 20);
        assert_eq!(got.period, period, "p={p}");
        assert_eq!(got.repetitions, repetitions, "p={p}");
    }

    report(
        "criterion 2: period analysis at k=20 gives (2->10x2, 5->4x5, 7->20x1, 10->2x10)",
        started,
        Duration::from_secs(1),
    );
}

// criterion 3: the repetition law holds on every sampled exact matrix
#[test]
fn criterion_3_gcd_repetition_law() {
    let started = Instant::now();
    let mut rng = Xorshift64Star::new(0x0DDB1A5E5BAD5EED);
    let mut checked = 0;

    while checked < 500 {
        let p = rng.next_below(12) as usize + 1; // 1..=12
        let k = rng.next_below(24) as usize + 2; // 2..=25
        let step = rng.next_below(3) as usize + 1;
        let mult = rng.next_below(3) as usize + 2;
        let n = p * step;
        let m = k * mult; // multiple of k, > k
        let t = m * n + (p - 1) * step;

        let plan = make_plan(n, p, false).unwrap();
        let seq = alleviated_split(&stream_of(t), &plan).unwrap();
        assert_eq!(seq.points.len(), p * m, "p={p} k={k} step={step} m={m}");

        let matrix = build_distributed(&seq.points, k).unwrap();
        assert_eq!(matrix.dropped, 0);

        let g = period_analysis(p, k).gcd;
        let duplicates = detect_row_duplicates(&matrix, n);
        assert_eq!(
            duplicates.has_overlap(),
            g > 1,
            "overlap mismatch at p={p} k={k} step={step} m={m}"
        );
        for row in &duplicates.rows {
            assert_eq!(
                row.max_cluster, g,
                "cluster mismatch in row {} at p={p} k={k} step={step} m={m}",
                row.row
            );
        }
        checked += 1;
    }

    report(
        &format!("criterion 3: gcd repetition law holds on {checked} sampled configurations"),
        started,
        Duration::from_secs(30),
    );
}

// criterion 4: suggested prime batch sizes
#[test]
fn criterion_4_prime_suggestions() {
    let started = Instant::now();

    assert_eq!(suggest_prime(20).unwrap(), 19);
    assert_eq!(suggest_prime(80).unwrap(), 79);
    assert_eq!(suggest_prime(60).unwrap(), 59);

    report(
        "criterion 4: suggest_prime maps 20->19, 80->79, 60->59",
        started,
        Duration::from_secs(1),
    );
}

// criterion 5: closed-form coverage equals the brute-force oracle
#[test]
fn criterion_5_coverage_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = Xorshift64Star::new(0xC0FFEE);
    let mut checked = 0;

    while checked < 1000 {
        let n = rng.next_below(9) as usize + 2; // 2..=10
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let p = divisors[rng.next_below(divisors.len() as u64) as usize];
        let t = n + rng.next_below((500 - n) as u64 + 1) as usize; // n..=500

        let plan = make_plan(n, p, false).unwrap();
        let closed = pair_coverage(t, &plan).unwrap();
        let seq = alleviated_split(&stream_of(t), &plan).unwrap();
        let brute = brute_force_pair_coverage(&seq, t).unwrap();
        assert_eq!(closed, brute, "mismatch at t={t} n={n} p={p}");

        for i in interior_pair_range(t, &plan) {
            let c = closed.counts[i];
            assert!(
                c as usize == p || c as usize + 1 == p,
                "interior count {c} at position {i} (t={t} n={n} p={p})"
            );
        }
        checked += 1;
    }

    report(
        &format!("criterion 5: pair coverage matches the oracle on {checked} instances"),
        started,
        Duration::from_secs(60),
    );
}

// criterion 6: the strategy identities
#[test]
fn criterion_6_strategy_identities() {
    let started = Instant::now();

    // 211 tokens, n=4 -> 52 points; k=4 divides them, so nothing is dropped
    let stream = stream_of(211);
    let(n, k) = (4, 4);

    let standard = apply_strategy(&stream, n, k, ToiStrategy::Standard).unwrap();

    // a single-overlap plan built directly is byte-identical to standard
    let plan = make_plan(n, 1, false).unwrap();
    let single = alleviated_split(&stream, &plan).unwrap();
    let single_matrix = build_distributed(&single.points, k).unwrap();
    assert_eq!(
        single_matrix.to_manifest_string(),
        standard.to_manifest_string()
    );

    // extreme permutes standard's cells
    let extreme = apply_strategy(&stream, n, k, ToiStrategy::Extreme { seed: 77 }).unwrap();
    let mut extreme_cells = extreme.cells.clone();
    let mut standard_cells = standard.cells.clone();
    extreme_cells.sort();
    standard_cells.sort();
    assert_eq!(extreme_cells, standard_cells);
    assert_ne!(extreme.cells, standard.cells);

    // interbatch permutes standard's rows
    let interbatch = apply_strategy(&stream, n, k, ToiStrategy::InterBatch { seed: 77 }).unwrap();
    let mut interbatch_rows: Vec<_> = interbatch.rows().map(|r| r.to_vec()).collect();
    let mut standard_rows: Vec<_> = standard.rows().map(|r| r.to_vec()).collect();
    interbatch_rows.sort();
    standard_rows.sort();
    assert_eq!(interbatch_rows, standard_rows);

    report(
        "criterion 6: alleviated(1) == standard byte-for-byte; extreme/interbatch permute it",
        started,
        Duration::from_secs(1),
    );
}

// criterion 7: prime batch width spreads rows measurably better, and
// renderings are byte-stable
#[test]
fn criterion_7_rendering_and_row_diversity() {
    let started = Instant::now();

    // m = 456 points per offset sequence: 10 * 456 is a multiple of both 20
    // and 19, so neither matrix drops points and both tile exactly
    let plan = make_plan(70, 10, false).unwrap();
    let stream = stream_of(456 * 70 + 9 * 7);
    let seq = alleviated_split(&stream, &plan).unwrap();
    assert_eq!(seq.points.len(), 4560);

    let composite = build_distributed(&seq.points, 20).unwrap();
    let prime = build_distributed(&seq.points, 19).unwrap();
    assert_eq!(composite.dropped, 0);
    assert_eq!(prime.dropped, 0);
    let composite_diversity = row_diversity(&composite, stream.len());
    let prime_diversity = row_diversity(&prime, stream.len());
    assert!(
        composite_diversity.mean_distinct < prime_diversity.mean_distinct,
        "k=20 mean distinct {} not below k=19 mean distinct {}",
        composite_diversity.mean_distinct,
        prime_diversity.mean_distinct
    );

    let render_once = || GrayscaleMatrix::from_batches(&composite, stream.len()).to_pgm_bytes();
    assert_eq!(render_once(), render_once());

    report(
        "criterion 7: k=20 rows are less diverse than k=19 rows; pgm bytes reproducible",
        started,
        Duration::from_secs(5),
    );
}

// criterion 8: the coverage ratio is exact and strictly increasing
#[test]
fn criterion_8_toi_ratio() {
    let started = Instant::now();

    assert_eq!(toi_ratio(1).unwrap(), Ratio::new(0, 1));
    assert_eq!(toi_ratio(2).unwrap(), Ratio::new(1, 2));
    assert_eq!(toi_ratio(10).unwrap(), Ratio::new(9, 10));
    for p in 1..100 {
        assert!(
            toi_ratio(p).unwrap() < toi_ratio(p + 1).unwrap(),
            "ratio not increasing at p={p}"
        );
    }

    report(
        "criterion 8: coverage ratio is 0, 1/2, 9/10 at p=1,2,10 and strictly increasing",
        started,
        Duration::from_secs(1),
    );
}

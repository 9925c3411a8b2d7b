//! Acceptance suite: one test per release criterion, each asserting exact
//! values (no tolerances anywhere: every quantity is a rational) and the
//! stated time budget. Run with `cargo test --test acceptance` and add
//! `-- --nocapture` to see the per-criterion summary lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use cantorq::distortion::{self, Codebook};
use cantorq::engine;
use cantorq::oracle::{self, DpMode};
use cantorq::rational::{int, pow, rat, Rational};
use cantorq::word_measure::{self, Word};

fn words(list: &[&str]) -> Vec<Word> {
    let mut v: Vec<Word> = list.iter().map(|s| s.parse().unwrap()).collect();
    v.sort();
    v
}

fn report(criterion: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed < budget,
        "{criterion}: {elapsed:?} exceeds the {budget:?} budget"
    );
    println!("criterion {criterion}: PASS ({elapsed:?} < {budget:?})");
}

#[test]
fn criterion_01_moments_exact() {
    word_measure::moments(); // warm the fixed-parameter cell
    let t = Instant::now();
    let m = word_measure::moments();
    let elapsed = t.elapsed();
    assert_eq!(m.mean, rat(2, 3));
    assert_eq!(m.variance, rat(16, 153));
    assert_eq!(m.second_moment, rat(28, 51));
    report("01 moments", elapsed, Duration::from_millis(1));
}

#[test]
fn criterion_02_small_stage_errors_exact() {
    engine::optimal_error(4).unwrap(); // warm the class schedule
    let t = Instant::now();
    let v2 = engine::optimal_error(2).unwrap();
    let v3 = engine::optimal_error(3).unwrap();
    let v4 = engine::optimal_error(4).unwrap();
    let elapsed = t.elapsed();
    assert_eq!(v2, rat(13, 612));
    assert_eq!(v3, rat(55, 9792));
    assert_eq!(v4, rat(421, 156672));
    report("02 small-n errors", elapsed, Duration::from_millis(1));
}

#[test]
fn criterion_03_listed_stage_errors_exact() {
    engine::optimal_error(13).unwrap();
    let t = Instant::now();
    let values: Vec<Rational> = (9..=13)
        .map(|n| engine::optimal_error(n).unwrap())
        .collect();
    let elapsed = t.elapsed();
    assert_eq!(
        values,
        vec![
            rat(9805, 40108032),
            rat(7969, 40108032),
            rat(6133, 40108032),
            rat(4297, 40108032),
            rat(3481, 40108032),
        ]
    );
    report("03 listed errors", elapsed, Duration::from_millis(10));
}

#[test]
fn criterion_04_listed_optimal_sets_exact() {
    let t = Instant::now();
    let expected: Vec<(u64, Vec<Vec<Word>>)> = vec![
        (
            9,
            vec![words(&[
                "11", "121", "122", "211", "212", "221", "2221", "22221", "22222",
            ])],
        ),
        (
            10,
            vec![
                words(&[
                    "11", "121", "122", "211", "212", "2211", "2212", "2221", "22221", "22222",
                ]),
                words(&[
                    "11", "121", "122", "211", "221", "2121", "2122", "2221", "22221", "22222",
                ]),
                words(&[
                    "11", "121", "211", "212", "221", "1221", "1222", "2221", "22221", "22222",
                ]),
            ],
        ),
        (
            11,
            vec![
                words(&[
                    "11", "121", "122", "211", "2121", "2122", "2211", "2212", "2221", "22221",
                    "22222",
                ]),
                words(&[
                    "11", "121", "211", "212", "1221", "1222", "2211", "2212", "2221", "22221",
                    "22222",
                ]),
                words(&[
                    "11", "121", "211", "221", "1221", "1222", "2121", "2122", "2221", "22221",
                    "22222",
                ]),
            ],
        ),
        (
            12,
            vec![words(&[
                "11", "121", "211", "1221", "1222", "2121", "2122", "2211", "2212", "2221",
                "22221", "22222",
            ])],
        ),
        (
            13,
            vec![words(&[
                "111", "112", "121", "211", "1221", "1222", "2121", "2122", "2211", "2212",
                "2221", "22221", "22222",
            ])],
        ),
    ];
    for (n, expected_sets) in expected {
        let family = engine::enumerate_optimal_sets(n, 100).unwrap();
        let got: BTreeSet<Vec<Word>> = family.sets.unwrap().into_iter().collect();
        let want: BTreeSet<Vec<Word>> = expected_sets.into_iter().collect();
        assert_eq!(got, want, "stage {n} listing");
    }
    report("04 listed sets", t.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_05_count_table() {
    engine::count_optimal_sets(5).unwrap();
    let t = Instant::now();
    let expected: [u64; 78] = [
        1, 1, 2, 1, 1, 3, 3, 1, 1, 1, 4, 6, 4, 1, 3, 3, 1, 1, 5, 10, 10, 5, 1, 6, 15, 20, 15, 6,
        1, 1, 1, 6, 15, 20, 15, 6, 1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1, 1, 4, 6, 4, 1,
        7, 21, 35, 35, 21, 7, 1, 15, 105, 455, 1365, 3003, 5005, 6435, 6435, 5005, 3003, 1365,
        455, 105, 15, 1, 1, 10, 45, 120,
    ];
    for (offset, expect) in expected.iter().enumerate() {
        let n = 5 + offset as u64;
        let got = engine::count_optimal_sets(n).unwrap();
        assert_eq!(got.to_u64(), Some(*expect), "count at stage {n}");
    }
    report("05 count table", t.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_06_genealogy_edges_9_to_12() {
    let t = Instant::now();
    let graph = engine::genealogy(9, 12, 100).unwrap();
    let sizes: Vec<usize> = graph.stages.iter().map(|s| s.sets.len()).collect();
    assert_eq!(sizes, vec![1, 3, 3, 1]);
    let got: BTreeSet<(u64, usize, usize)> = graph
        .edges
        .iter()
        .map(|e| (e.parent_n, e.from + 1, e.to + 1))
        .collect();
    // The stage-9 set feeds all three stage-10 sets, each stage-10 set
    // feeds two of the three stage-11 sets, and all of those collapse into
    // the unique stage-12 set. Indices follow the canonical (lexicographic)
    // labeling.
    let want: BTreeSet<(u64, usize, usize)> = [
        (9u64, 1usize, 1usize),
        (9, 1, 2),
        (9, 1, 3),
        (10, 1, 1),
        (10, 1, 2),
        (10, 2, 1),
        (10, 2, 3),
        (10, 3, 2),
        (10, 3, 3),
        (11, 1, 1),
        (11, 2, 1),
        (11, 3, 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(got, want);
    report("06 genealogy", t.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_07_oracle_bracket_depth_12() {
    let t = Instant::now();
    let results = oracle::oracle_sweep(13, 12, DpMode::Exact).unwrap();
    let elapsed = t.elapsed();
    let bound = pow(&rat(13, 64), 12) * rat(16, 153);
    assert_eq!(results.len(), 13);
    for result in &results {
        let diff = &result.engine_error - &result.discrete_error;
        assert!(diff >= Rational::zero(), "stage {}: negative gap", result.n);
        assert!(diff <= bound, "stage {}: gap exceeds the bound", result.n);
        assert!(result.bracket_ok, "stage {}", result.n);
        assert!(
            matches!(result.structure, oracle::StructureCheck::Match { .. }),
            "stage {}: discrete codes leave the optimal cylinders",
            result.n
        );
    }
    report("07 oracle bracket", elapsed, Duration::from_secs(60));
}

#[test]
fn criterion_08_certified_evaluation() {
    let t = Instant::now();
    let gap = rat(1, 1_000_000_000_000);
    for n in 1..=13u64 {
        let cut = engine::canonical_optimal_words(n).unwrap();
        let points = engine::codebook_from_words(&cut).unwrap();
        let codebook = Codebook::new(points).unwrap();
        let estimate = distortion::evaluate_codebook(&codebook, &gap, 1_000_000).unwrap();
        let expect = engine::optimal_error(n).unwrap();
        assert!(
            estimate.lower <= expect && expect <= estimate.upper,
            "stage {n}: enclosure misses the engine error"
        );
        assert!(
            &estimate.upper - &estimate.lower <= gap,
            "stage {n}: requested gap not reached"
        );
    }
    let perturbed = Codebook::new(vec![rat(1, 6) + rat(1, 100), rat(5, 6)]).unwrap();
    let estimate = distortion::evaluate_codebook(&perturbed, &gap, 1_000_000).unwrap();
    assert!(
        estimate.lower > rat(13, 612),
        "perturbed codebook not certified suboptimal: lower = {}",
        estimate.lower
    );
    report("08 certified evaluation", t.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_09_error_recursion() {
    engine::optimal_error(20).unwrap();
    let t = Instant::now();
    let recursion = engine::verify_recursion(20).unwrap();
    let elapsed = t.elapsed();
    assert!(recursion.ok(), "first violation: {:?}", recursion.first_violation);
    assert_eq!(recursion.entries.len(), 19);
    report("09 recursion", elapsed, Duration::from_millis(100));
}

#[test]
fn criterion_10_property_suites() {
    let t = Instant::now();

    // Conservation identities over every full level k <= 12.
    for k in 0..=12u32 {
        let mut mass = Rational::zero();
        let mut mean = Rational::zero();
        let mut weight_sum = Rational::zero();
        let mut level = vec![Word::empty()];
        for _ in 0..k {
            level = level
                .iter()
                .flat_map(|w| [w.child(1), w.child(2)])
                .collect();
        }
        for w in &level {
            let p = word_measure::prob(w);
            mean += &p * word_measure::centroid(w);
            mass += p;
            weight_sum += word_measure::weight(w);
        }
        assert_eq!(mass, int(1), "mass at level {k}");
        assert_eq!(mean, rat(2, 3), "expectation at level {k}");
        assert_eq!(weight_sum, pow(&rat(13, 64), k), "weight at level {k}");
    }

    // Split delta V_{n+1} = V_n − (51/64)·w_max(n)·V for n <= 100.
    let table = engine::error_table(101).unwrap();
    let factor = rat(51, 64) * rat(16, 153);
    for n in 1..=100u64 {
        let delta = engine::max_leaf_weight(n).unwrap() * &factor;
        assert_eq!(
            &table[(n - 1) as usize] - &table[n as usize],
            delta,
            "split delta at stage {n}"
        );
        assert!(table[n as usize] < table[(n - 1) as usize]);
    }

    // Parent dominance on every enumerated optimal set for n <= 30.
    for n in 2..=30u64 {
        let family = engine::enumerate_optimal_sets(n, 100_000).unwrap();
        let sets = family.sets.expect("stages up to 30 are enumerable");
        assert_eq!(BigUint::from(sets.len()), family.count, "stage {n} count");
        for set in sets {
            let mut interior = BTreeSet::new();
            for leaf in &set {
                let mut cur = leaf.parent();
                while let Some(p) = cur {
                    interior.insert(p);
                    cur = p.parent();
                }
            }
            let min_interior = interior.iter().map(word_measure::weight).min().unwrap();
            let max_leaf = set.iter().map(word_measure::weight).max().unwrap();
            assert!(min_interior >= max_leaf, "dominance fails at stage {n}");
        }
    }

    report("10 property suites", t.elapsed(), Duration::from_secs(60));
}

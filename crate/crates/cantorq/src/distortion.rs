//! Certified distortion of an arbitrary codebook against the measure.
//!
//! A cylinder lying entirely inside one Voronoi region contributes its exact
//! distortion in closed form. A cylinder straddling a region boundary is
//! bracketed from below by zero and from above by the cost of serving the
//! whole cylinder with the single codebook point nearest its centroid, then
//! refined into its children until the total bracket width reaches the
//! requested gap. Serving a cylinder with one fixed point costs
//! `mass·(length²·V + (centroid − point)²)`, and each child's own nearest
//! point only improves on the parent's choice, so the upper bound never
//! increases and the lower bound never decreases as refinement proceeds.
//! The straddling mass shrinks geometrically (a boundary stays inside at
//! most one child, of relative mass at most 3/4), so the bracket converges.
//!
//! All bounds are exact rationals; a reported enclosure is a proof.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::Zero;

use crate::engine::ensure_prefix_free;
use crate::error::Error;
use crate::rational::{int, rat, Rational};
use crate::word_measure::{self, Word};

/// Default number of cylinder expansions allowed before giving up.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A finite codebook: strictly increasing points with the induced Voronoi
/// boundaries at consecutive midpoints.
#[derive(Debug, Clone)]
pub struct Codebook {
    points: Vec<Rational>,
}

impl Codebook {
    pub fn new(points: Vec<Rational>) -> Result<Codebook, Error> {
        if points.is_empty() {
            return Err(Error::EmptyCodebook);
        }
        for (i, pair) in points.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(Error::UnsortedCodebook(i + 1));
            }
        }
        Ok(Codebook { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Midpoints between consecutive points; empty for a single point.
    pub fn boundaries(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|pair| (&pair[0] + &pair[1]) / int(2))
            .collect()
    }

    /// Index of the point nearest to `x` (either one on an exact tie).
    fn nearest(&self, x: &Rational) -> usize {
        let boundaries = self.boundaries();
        boundaries.partition_point(|b| b < x).min(self.points.len() - 1)
    }
}

/// The Voronoi boundaries of a validated codebook.
pub fn voronoi_boundaries(codebook: &Codebook) -> Vec<Rational> {
    codebook.boundaries()
}

/// A certified enclosure of the distortion of a codebook.
#[derive(Debug, Clone)]
pub struct DistortionEstimate {
    pub lower: Rational,
    pub upper: Rational,
    pub requested_gap: Rational,
    pub cylinders_expanded: u64,
}

impl DistortionEstimate {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

struct WorkItem {
    word: Word,
    prob: Rational,
    scale: Rational,
    offset: Rational,
}

impl WorkItem {
    fn child(&self, symbol: u8) -> WorkItem {
        let (p, r, t) = if symbol == 1 {
            (rat(1, 4), rat(1, 4), int(0))
        } else {
            (rat(3, 4), rat(1, 2), rat(1, 2))
        };
        WorkItem {
            word: self.word.child(symbol),
            prob: &self.prob * p,
            offset: &self.offset + &self.scale * t,
            scale: &self.scale * r,
        }
    }
}

struct HeapEntry {
    upper: Rational,
    item: WorkItem,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest bracket contribution first; word as a deterministic
        // tie-break (later words first, which is immaterial but fixed).
        self.upper
            .cmp(&other.upper)
            .then_with(|| self.item.word.cmp(&other.item.word))
    }
}

enum Classified {
    /// Entire cylinder inside one region: exact contribution.
    Exact(Rational),
    /// Straddles a boundary: upper bound from single-point service.
    Straddle(Rational),
}

struct Evaluator<'a> {
    codebook: &'a Codebook,
    boundaries: Vec<Rational>,
    mean: Rational,
    variance: Rational,
}

impl<'a> Evaluator<'a> {
    fn new(codebook: &'a Codebook) -> Evaluator<'a> {
        let moments = word_measure::moments();
        Evaluator {
            codebook,
            boundaries: codebook.boundaries(),
            mean: moments.mean,
            variance: moments.variance,
        }
    }

    /// Cost of serving the whole cylinder with the point at `index`.
    fn single_point_cost(&self, item: &WorkItem, index: usize) -> Rational {
        let centroid = &item.offset + &item.scale * &self.mean;
        let d = centroid - &self.codebook.points()[index];
        &item.prob * (&item.scale * &item.scale * &self.variance + &d * &d)
    }

    fn classify(&self, item: &WorkItem) -> Classified {
        let left = &item.offset;
        let right = &(&item.offset + &item.scale);
        // Region i spans [boundary i-1, boundary i]. A cylinder whose
        // endpoint coincides with a boundary belongs to the region on its
        // own side, so both adjacent regions are admissible candidates.
        let lo = self.boundaries.partition_point(|b| b < left);
        let hi = self.boundaries.partition_point(|b| b <= left);
        for region in lo..=hi {
            let below_ok = region == 0 || &self.boundaries[region - 1] <= left;
            let above_ok = region == self.boundaries.len() || right <= &self.boundaries[region];
            if below_ok && above_ok {
                return Classified::Exact(self.single_point_cost(item, region));
            }
        }
        let centroid = &item.offset + &item.scale * &self.mean;
        let nearest = self.codebook.nearest(&centroid);
        Classified::Straddle(self.single_point_cost(item, nearest))
    }
}

/// Certified two-sided distortion bounds, refined until
/// `upper − lower <= gap` or the expansion budget runs out.
pub fn evaluate_codebook(
    codebook: &Codebook,
    gap: &Rational,
    budget: u64,
) -> Result<DistortionEstimate, Error> {
    evaluate_codebook_observed(codebook, gap, budget, |_, _| {})
}

/// Same as [`evaluate_codebook`], invoking `observe(lower, upper)` after the
/// initial classification and after every expansion.
pub fn evaluate_codebook_observed(
    codebook: &Codebook,
    gap: &Rational,
    budget: u64,
    mut observe: impl FnMut(&Rational, &Rational),
) -> Result<DistortionEstimate, Error> {
    if gap <= &Rational::zero() {
        return Err(Error::BadParams(format!("gap must be positive, got {gap}")));
    }
    let evaluator = Evaluator::new(codebook);
    let mut exact_sum = Rational::zero();
    let mut straddle_sum = Rational::zero();
    let mut heap = BinaryHeap::new();
    let mut expanded = 0u64;

    let root = WorkItem {
        word: Word::empty(),
        prob: int(1),
        scale: int(1),
        offset: int(0),
    };
    match evaluator.classify(&root) {
        Classified::Exact(value) => exact_sum = value,
        Classified::Straddle(upper) => {
            straddle_sum = upper.clone();
            heap.push(HeapEntry { upper, item: root });
        }
    }
    observe(&exact_sum, &(&exact_sum + &straddle_sum));

    while &straddle_sum > gap {
        if expanded >= budget {
            return Err(Error::BudgetExhausted {
                budget,
                gap: gap.to_string(),
            });
        }
        let entry = heap.pop().expect("positive straddle sum implies work");
        straddle_sum -= &entry.upper;
        expanded += 1;
        for symbol in [1, 2] {
            let child = entry.item.child(symbol);
            match evaluator.classify(&child) {
                Classified::Exact(value) => exact_sum += value,
                Classified::Straddle(upper) => {
                    straddle_sum += &upper;
                    heap.push(HeapEntry { upper, item: child });
                }
            }
        }
        observe(&exact_sum, &(&exact_sum + &straddle_sum));
    }

    let upper = &exact_sum + &straddle_sum;
    Ok(DistortionEstimate {
        lower: exact_sum,
        upper,
        requested_gap: gap.clone(),
        cylinders_expanded: expanded,
    })
}

/// Exact distortion of the codebook of centroids of a complete prefix-free
/// cut, each centroid serving its own cylinder: `Σ weight(σ)·V`.
pub fn distortion_of_words(words: &[Word]) -> Result<Rational, Error> {
    ensure_prefix_free(words)?;
    let mass: Rational = words.iter().map(word_measure::prob).sum();
    if mass != int(1) {
        return Err(Error::IncompleteCut(mass.to_string()));
    }
    let variance = word_measure::variance();
    Ok(words
        .iter()
        .map(|w| word_measure::weight(w) * &variance)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use crate::word_measure::word;

    fn codebook(points: &[Rational]) -> Codebook {
        Codebook::new(points.to_vec()).unwrap()
    }

    fn tiny_gap() -> Rational {
        rat(1, 1_000_000_000_000)
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(
            voronoi_boundaries(&codebook(&[rat(1, 6), rat(5, 6)])),
            vec![rat(1, 2)]
        );
        assert_eq!(
            voronoi_boundaries(&codebook(&[rat(1, 6), rat(7, 12), rat(11, 12)])),
            vec![rat(3, 8), rat(3, 4)]
        );
        assert_eq!(voronoi_boundaries(&codebook(&[rat(2, 3)])), vec![]);
    }

    #[test]
    fn codebook_validation() {
        assert!(Codebook::new(vec![]).is_err());
        assert!(Codebook::new(vec![rat(1, 2), rat(1, 2)]).is_err());
        assert!(Codebook::new(vec![rat(2, 3), rat(1, 3)]).is_err());
    }

    #[test]
    fn single_point_at_mean_is_exact_variance() {
        let est = evaluate_codebook(&codebook(&[rat(2, 3)]), &tiny_gap(), 10).unwrap();
        assert_eq!(est.lower, rat(16, 153));
        assert_eq!(est.upper, rat(16, 153));
        assert_eq!(est.cylinders_expanded, 0);
    }

    #[test]
    fn single_point_off_mean() {
        // V + (1/2 − 2/3)² = 9/68, exact with no refinement.
        let est = evaluate_codebook(&codebook(&[rat(1, 2)]), &tiny_gap(), 10).unwrap();
        assert_eq!(est.lower, rat(9, 68));
        assert_eq!(est.upper, rat(9, 68));
    }

    #[test]
    fn two_point_optimal_codebook_is_resolved_exactly() {
        let est =
            evaluate_codebook(&codebook(&[rat(1, 6), rat(5, 6)]), &tiny_gap(), 1000).unwrap();
        assert!(est.lower <= rat(13, 612) && rat(13, 612) <= est.upper);
        // The boundary 1/2 coincides with a cylinder endpoint, so refinement
        // terminates with a zero-width bracket after one expansion.
        assert_eq!(est.lower, rat(13, 612));
        assert_eq!(est.upper, rat(13, 612));
        assert_eq!(est.cylinders_expanded, 1);
    }

    #[test]
    fn engine_codebooks_bracket_engine_errors() {
        for n in 1..=13u64 {
            let words = engine::canonical_optimal_words(n).unwrap();
            let points = engine::codebook_from_words(&words).unwrap();
            let est = evaluate_codebook(&codebook(&points), &tiny_gap(), 100_000).unwrap();
            let expect = engine::optimal_error(n).unwrap();
            assert!(est.lower <= expect && expect <= est.upper, "stage {n}");
            assert!(&est.upper - &est.lower <= tiny_gap(), "stage {n}");
        }
    }

    #[test]
    fn perturbed_codebook_is_certified_suboptimal() {
        let perturbed = codebook(&[rat(1, 6) + rat(1, 100), rat(5, 6)]);
        let est = evaluate_codebook(&perturbed, &tiny_gap(), 100_000).unwrap();
        assert!(
            est.lower > rat(13, 612),
            "lower bound {} does not exceed the optimum",
            est.lower
        );
    }

    #[test]
    fn refinement_is_monotone() {
        let perturbed = codebook(&[rat(1, 6) + rat(1, 100), rat(5, 6)]);
        let mut history: Vec<(Rational, Rational)> = Vec::new();
        evaluate_codebook_observed(&perturbed, &tiny_gap(), 100_000, |lo, up| {
            history.push((lo.clone(), up.clone()));
        })
        .unwrap();
        assert!(history.len() > 2);
        for pair in history.windows(2) {
            assert!(pair[0].0 <= pair[1].0, "lower bound decreased");
            assert!(pair[0].1 >= pair[1].1, "upper bound increased");
        }
        for (lo, up) in &history {
            assert!(lo <= up);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let perturbed = codebook(&[rat(1, 6) + rat(1, 100), rat(5, 6)]);
        match evaluate_codebook(&perturbed, &tiny_gap(), 3) {
            Err(Error::BudgetExhausted { budget, .. }) => assert_eq!(budget, 3),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn gap_must_be_positive() {
        assert!(evaluate_codebook(&codebook(&[rat(2, 3)]), &int(0), 10).is_err());
    }

    #[test]
    fn cut_distortion_examples() {
        let two = [word("1"), word("2")];
        assert_eq!(distortion_of_words(&two).unwrap(), rat(13, 612));
        let four = [word("1"), word("21"), word("221"), word("222")];
        assert_eq!(distortion_of_words(&four).unwrap(), rat(421, 156672));
        assert_eq!(
            distortion_of_words(&[Word::empty()]).unwrap(),
            rat(16, 153)
        );
    }

    #[test]
    fn incomplete_or_nested_cuts_are_rejected() {
        assert!(matches!(
            distortion_of_words(&[word("1")]),
            Err(Error::IncompleteCut(_))
        ));
        assert!(matches!(
            distortion_of_words(&[word("1"), word("21")]),
            Err(Error::IncompleteCut(_))
        ));
        assert!(matches!(
            distortion_of_words(&[word("1"), word("2"), word("21")]),
            Err(Error::NotPrefixFree(_, _))
        ));
    }

    #[test]
    fn cut_distortion_agrees_with_per_cylinder_form() {
        for n in 1..=20u64 {
            let words = engine::canonical_optimal_words(n).unwrap();
            let via_weights = distortion_of_words(&words).unwrap();
            let via_integrals: Rational = words
                .iter()
                .map(|w| word_measure::interval_distortion(w, &word_measure::centroid(w)))
                .sum();
            assert_eq!(via_weights, via_integrals, "stage {n}");
            assert_eq!(via_weights, engine::optimal_error(n).unwrap(), "stage {n}");
        }
    }
}

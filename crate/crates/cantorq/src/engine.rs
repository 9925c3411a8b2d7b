//! Optimal codebooks by greedy splitting of the maximal-weight cylinder.
//!
//! Every optimal n-point codebook consists of cylinder centroids indexed by a
//! cut set of n words, and a stage-(n+1) set arises from a stage-n set by
//! replacing one maximal-weight word τ with its two children τ1, τ2. Each
//! split removes exactly 51/64 of the victim's weight from the frontier, so
//! the n-th error is `V · Σ weight(leaf)` over the frontier.
//!
//! A word's weight depends only on its (length, ones-count) signature,
//! and distinct signatures give distinct weights, so the greedy process
//! consumes whole signature classes in strictly decreasing weight order. A stage is therefore described by a prefix of fully split classes
//! plus `r` splits taken inside one active class of size `m`; the optimal
//! sets at that stage are exactly the `C(m, r)` choices of which class
//! members have been split. All counting, enumeration, and genealogy is
//! organized around that description, and the literal split-by-split
//! [`SplitState`] evolution is kept alongside as a cross-check.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::Error;
use crate::rational::{binomial, pow, rat, Rational};
use crate::word_measure::{self, Word};

/// Largest stage index accepted by the stage-indexed operations. Keeps word
/// lengths far below the packed representation's 64-symbol cap and bounds
/// the cost of materializing canonical sets.
pub const MAX_STAGE: u64 = 100_000;

fn check_stage(n: u64) -> Result<(), Error> {
    if !(1..=MAX_STAGE).contains(&n) {
        return Err(Error::StageOutOfRange { n, max: MAX_STAGE });
    }
    Ok(())
}

/// All words sharing a (length, ones-count) signature share one weight
/// `3^(len-ones) / 2^(4·len + 2·ones)`; the greedy frontier advances one
/// class at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct WeightClass {
    len: u32,
    ones: u32,
}

impl WeightClass {
    fn weight(&self) -> Rational {
        Rational::new(
            BigInt::from(3u32).pow(self.len - self.ones),
            BigInt::from(2u32).pow(4 * self.len + 2 * self.ones),
        )
    }

    fn size(&self) -> u64 {
        u64::try_from(binomial(u64::from(self.len), u64::from(self.ones)))
            .expect("class size exceeds u64")
    }

    /// All members in lexicographic order.
    fn members(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.size() as usize);
        fn rec(prefix: Word, ones_left: u32, twos_left: u32, out: &mut Vec<Word>) {
            if ones_left == 0 && twos_left == 0 {
                out.push(prefix);
                return;
            }
            if ones_left > 0 {
                rec(prefix.child(1), ones_left - 1, twos_left, out);
            }
            if twos_left > 0 {
                rec(prefix.child(2), ones_left, twos_left - 1, out);
            }
        }
        rec(Word::empty(), self.ones, self.len - self.ones, &mut out);
        out
    }
}

/// Signature classes in strictly decreasing weight order, covering at least
/// `min_splits + 1` splits so the class after the last split is always known.
/// The prefix for small stages is computed once and reused.
fn class_schedule(min_splits: u64) -> Vec<WeightClass> {
    const CACHED_SPLITS: u64 = 4096;
    static SMALL: std::sync::OnceLock<Vec<WeightClass>> = std::sync::OnceLock::new();
    if min_splits <= CACHED_SPLITS {
        return SMALL
            .get_or_init(|| generate_schedule(CACHED_SPLITS))
            .clone();
    }
    generate_schedule(min_splits)
}

fn generate_schedule(min_splits: u64) -> Vec<WeightClass> {
    let needed = min_splits + 1;
    let mut max_len = 16u32;
    loop {
        let mut classes: Vec<(Rational, WeightClass)> = (0..=max_len)
            .flat_map(|len| (0..=len).map(move |ones| WeightClass { len, ones }))
            .map(|c| (c.weight(), c))
            .collect();
        classes.sort_by(|a, b| b.0.cmp(&a.0));

        let mut cumulative = 0u64;
        let mut prefix = Vec::new();
        for (weight, class) in classes {
            prefix.push((weight, class));
            cumulative = cumulative.saturating_add(class.size());
            if cumulative >= needed {
                break;
            }
        }
        // Classes longer than max_len all have weight <= (3/16)^(max_len+1);
        // the prefix is complete only if it never dips below that.
        let omitted_bound = pow(&rat(3, 16), max_len + 1);
        if cumulative >= needed && prefix.last().unwrap().0 > omitted_bound {
            return prefix.into_iter().map(|(_, c)| c).collect();
        }
        max_len *= 2;
    }
}

/// Resolved greedy frontier for one stage: `full` classes are entirely
/// split, and `taken` members of `active` are split (0 <= taken < size).
struct Stage {
    n: u64,
    full: Vec<WeightClass>,
    active: WeightClass,
    taken: u64,
}

fn stage(n: u64) -> Result<Stage, Error> {
    check_stage(n)?;
    let splits = n - 1;
    let schedule = class_schedule(splits);
    let mut remaining = splits;
    let mut full = Vec::new();
    for class in schedule {
        let size = class.size();
        if remaining >= size {
            remaining -= size;
            full.push(class);
        } else {
            return Ok(Stage {
                n,
                full,
                active: class,
                taken: remaining,
            });
        }
    }
    unreachable!("schedule covers min_splits + 1")
}

impl Stage {
    /// Weight of the maximal-weight leaves (the members of the active class
    /// that are still unsplit).
    fn max_leaf_weight(&self) -> Rational {
        self.active.weight()
    }

    fn error(&self) -> Rational {
        let mut split_weight = Rational::zero();
        for class in &self.full {
            split_weight += class.weight() * Rational::from_integer(class.size().into());
        }
        split_weight += self.active.weight() * Rational::from_integer(self.taken.into());
        let removal = word_measure::IfsParams::standard().split_removal_factor();
        (Rational::one() - removal * split_weight) * word_measure::variance()
    }

    fn count(&self) -> BigUint {
        binomial(self.active.size(), self.taken)
    }

    /// Leaf set for a given choice of split members of the active class.
    fn leaves_for(&self, chosen: &[Word]) -> Vec<Word> {
        let mut split: HashSet<Word> = HashSet::new();
        for class in &self.full {
            split.extend(class.members());
        }
        split.extend(chosen.iter().copied());
        debug_assert_eq!(split.len() as u64, self.n - 1);

        let mut leaves = BTreeSet::new();
        if split.is_empty() {
            leaves.insert(Word::empty());
        }
        for word in &split {
            for symbol in [1, 2] {
                let child = word.child(symbol);
                if !split.contains(&child) {
                    leaves.insert(child);
                }
            }
        }
        let leaves: Vec<Word> = leaves.into_iter().collect();
        debug_assert_eq!(leaves.len() as u64, self.n);
        leaves
    }

    /// Canonical choice: the lexicographically smallest members split first.
    fn canonical_leaves(&self) -> Vec<Word> {
        let members = self.active.members();
        self.leaves_for(&members[..self.taken as usize])
    }
}

/// Exact n-th quantization error.
pub fn optimal_error(n: u64) -> Result<Rational, Error> {
    Ok(stage(n)?.error())
}

/// Errors for all stages `1..=n_max` in one schedule walk.
pub fn error_table(n_max: u64) -> Result<Vec<Rational>, Error> {
    check_stage(n_max)?;
    let schedule = class_schedule(n_max - 1);
    let removal = word_measure::IfsParams::standard().split_removal_factor();
    let variance = word_measure::variance();
    let mut table = Vec::with_capacity(n_max as usize);
    let mut frontier_weight = Rational::one();
    table.push(&frontier_weight * &variance); // n = 1
    let mut splits = 0u64;
    'outer: for class in &schedule {
        let w = class.weight();
        let delta = &removal * &w;
        for _ in 0..class.size() {
            if splits == n_max - 1 {
                break 'outer;
            }
            frontier_weight -= &delta;
            table.push(&frontier_weight * &variance);
            splits += 1;
        }
    }
    debug_assert_eq!(table.len() as u64, n_max);
    Ok(table)
}

/// Weight of the leaves that the next split must consume at stage `n`.
pub fn max_leaf_weight(n: u64) -> Result<Rational, Error> {
    Ok(stage(n)?.max_leaf_weight())
}

/// The deterministic representative optimal set: ties are broken by always
/// splitting the lexicographically smallest maximal-weight word first.
pub fn canonical_optimal_words(n: u64) -> Result<Vec<Word>, Error> {
    Ok(stage(n)?.canonical_leaves())
}

/// Number of distinct optimal sets at stage `n`, computed without
/// enumeration: splitting `r` members of the active class of size `m` can be
/// done in `C(m, r)` ways, and those choices are exactly the optimal sets.
pub fn count_optimal_sets(n: u64) -> Result<BigUint, Error> {
    Ok(stage(n)?.count())
}

/// A stage's family of optimal sets; the explicit listing is materialized
/// only when the count does not exceed the caller's limit.
#[derive(Debug, Clone)]
pub struct OptimalSetFamily {
    pub n: u64,
    pub count: BigUint,
    /// Each set sorted lexicographically; the list of sets sorted as well.
    pub sets: Option<Vec<Vec<Word>>>,
}

/// Lexicographic k-subsets of `items`.
fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(indices.iter().map(|&i| items[i]).collect());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if indices[i] != i + items.len() - k {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// All optimal sets at stage `n` when there are at most `limit` of them.
pub fn enumerate_optimal_sets(n: u64, limit: u64) -> Result<OptimalSetFamily, Error> {
    let st = stage(n)?;
    let count = st.count();
    if count > BigUint::from(limit) {
        return Ok(OptimalSetFamily {
            n,
            count,
            sets: None,
        });
    }
    let members = st.active.members();
    let mut sets: Vec<Vec<Word>> = combinations(&members, st.taken as usize)
        .iter()
        .map(|chosen| st.leaves_for(chosen))
        .collect();
    sets.sort();
    let distinct: HashSet<&Vec<Word>> = sets.iter().collect();
    debug_assert_eq!(BigUint::from(distinct.len()), count);
    Ok(OptimalSetFamily {
        n,
        count,
        sets: Some(sets),
    })
}

/// One stage of the genealogy: every optimal set at stage `n`, listed in
/// lexicographic order of the sorted word lists. Index `i` names the set
/// `α_{n, i+1}` in output.
#[derive(Debug, Clone)]
pub struct GenealogyStage {
    pub n: u64,
    pub sets: Vec<Vec<Word>>,
}

/// Edge `α_{parent_n, from+1} → α_{parent_n + 1, to+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GenealogyEdge {
    pub parent_n: u64,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct GenealogyGraph {
    pub stages: Vec<GenealogyStage>,
    pub edges: Vec<GenealogyEdge>,
}

/// Enumerates stages `n_from..=n_to` and every parent→child split edge. An
/// edge exists precisely when the child replaces one maximal-weight word τ
/// of the parent with τ1 and τ2.
pub fn genealogy(n_from: u64, n_to: u64, limit: u64) -> Result<GenealogyGraph, Error> {
    if n_from < 1 || n_from >= n_to {
        return Err(Error::BadRange(format!(
            "genealogy requires 1 <= from < to, got {n_from}..{n_to}"
        )));
    }
    check_stage(n_to)?;
    let mut stages = Vec::new();
    for n in n_from..=n_to {
        let family = enumerate_optimal_sets(n, limit)?;
        match family.sets {
            Some(sets) => stages.push(GenealogyStage { n, sets }),
            None => {
                return Err(Error::EnumerationLimit {
                    n,
                    count: family.count.to_string(),
                    limit,
                })
            }
        }
    }

    let mut edges = Vec::new();
    for si in 0..stages.len() - 1 {
        let child_index: HashMap<&Vec<Word>, usize> = stages[si + 1]
            .sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        for (pi, parent) in stages[si].sets.iter().enumerate() {
            for victim in max_weight_words(parent) {
                let mut child: Vec<Word> = parent
                    .iter()
                    .copied()
                    .filter(|w| *w != victim)
                    .collect();
                child.push(victim.child(1));
                child.push(victim.child(2));
                child.sort();
                let ci = *child_index
                    .get(&child)
                    .expect("every split of a maximal word yields a stage-(n+1) optimal set");
                edges.push(GenealogyEdge {
                    parent_n: stages[si].n,
                    from: pi,
                    to: ci,
                });
            }
        }
    }
    edges.sort();
    Ok(GenealogyGraph { stages, edges })
}

/// The words of maximal weight within a set.
fn max_weight_words(words: &[Word]) -> Vec<Word> {
    let mut best: Option<Rational> = None;
    for w in words {
        let wt = word_measure::weight(w);
        if best.as_ref().is_none_or(|b| wt > *b) {
            best = Some(wt);
        }
    }
    let best = best.expect("non-empty word set");
    words
        .iter()
        .copied()
        .filter(|w| word_measure::weight(w) == best)
        .collect()
}

/// Sorted centroids of a prefix-free word set.
pub fn codebook_from_words(words: &[Word]) -> Result<Vec<Rational>, Error> {
    ensure_prefix_free(words)?;
    let mut sorted: Vec<Word> = words.to_vec();
    sorted.sort();
    let codebook: Vec<Rational> = sorted.iter().map(word_measure::centroid).collect();
    debug_assert!(codebook.windows(2).all(|w| w[0] < w[1]));
    Ok(codebook)
}

/// Rejects sets in which one word addresses a cylinder nested inside
/// another's. After a lexicographic sort any prefix pair becomes adjacent.
pub fn ensure_prefix_free(words: &[Word]) -> Result<(), Error> {
    let mut sorted: Vec<Word> = words.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] || pair[0].is_prefix_of(&pair[1]) {
            return Err(Error::NotPrefixFree(pair[0], pair[1]));
        }
    }
    Ok(())
}

/// One greedy frontier, evolved split by split. The class-based stage
/// machinery above is the fast path; this literal form implements the
/// single-split operation and serves as its cross-check.
#[derive(Debug, Clone)]
pub struct SplitState {
    leaves: BTreeSet<Word>,
    error: Rational,
}

impl SplitState {
    /// The one-point stage: the root word alone, with error equal to the
    /// variance.
    pub fn root() -> SplitState {
        let mut leaves = BTreeSet::new();
        leaves.insert(Word::empty());
        SplitState {
            leaves,
            error: word_measure::variance(),
        }
    }

    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn error(&self) -> &Rational {
        &self.error
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Word> {
        self.leaves.iter()
    }

    pub fn max_weight(&self) -> Rational {
        self.leaves
            .iter()
            .map(word_measure::weight)
            .max()
            .expect("frontier is never empty")
    }

    /// The maximal-weight leaves (the only admissible split victims).
    pub fn max_entries(&self) -> Vec<Word> {
        let best = self.max_weight();
        self.leaves
            .iter()
            .copied()
            .filter(|w| word_measure::weight(w) == best)
            .collect()
    }

    /// Replaces `victim` by its two children. Splitting any other leaf would
    /// produce a strictly worse frontier, so non-maximal victims are
    /// rejected.
    pub fn split_step(&self, victim: &Word) -> Result<SplitState, Error> {
        let victim_weight = word_measure::weight(victim);
        if !self.leaves.contains(victim) || victim_weight != self.max_weight() {
            return Err(Error::VictimNotMaximal(*victim));
        }
        let mut leaves = self.leaves.clone();
        leaves.remove(victim);
        leaves.insert(victim.child(1));
        leaves.insert(victim.child(2));
        let removal = word_measure::IfsParams::standard().split_removal_factor();
        let error = &self.error - removal * victim_weight * word_measure::variance();
        Ok(SplitState { leaves, error })
    }

    /// Splits the lexicographically smallest maximal-weight leaf.
    pub fn advance_canonical(&self) -> SplitState {
        let victim = self.max_entries()[0];
        self.split_step(&victim).expect("victim is maximal")
    }
}

/// Outcome of checking `V_n = min_j (1/64)·V_j + (3/16)·V_{n-j}` for one n.
#[derive(Debug, Clone)]
pub struct RecursionEntry {
    pub n: u64,
    /// Smallest minimizing j.
    pub best_j: u64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct RecursionReport {
    pub n_max: u64,
    pub entries: Vec<RecursionEntry>,
    pub first_violation: Option<u64>,
}

impl RecursionReport {
    pub fn ok(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks the splitting recursion of the error sequence in exact arithmetic:
/// restricting an optimal set to the two first-level cylinders decomposes
/// `V_n` as `(1/64)·V_j + (3/16)·V_{n-j}` for the optimal split size j, and
/// no other split size does better.
pub fn verify_recursion(n_max: u64) -> Result<RecursionReport, Error> {
    if n_max < 2 {
        return Err(Error::BadRange(format!(
            "recursion check needs n_max >= 2, got {n_max}"
        )));
    }
    let table = error_table(n_max)?;
    let c1 = rat(1, 64);
    let c2 = rat(3, 16);
    let mut entries = Vec::new();
    let mut first_violation = None;
    for n in 2..=n_max {
        let mut best: Option<(Rational, u64)> = None;
        for j in 1..n {
            let value = &c1 * &table[(j - 1) as usize] + &c2 * &table[(n - j - 1) as usize];
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, j));
            }
        }
        let (minimum, best_j) = best.expect("n >= 2 has at least one split");
        let holds = minimum == table[(n - 1) as usize];
        if !holds && first_violation.is_none() {
            first_violation = Some(n);
        }
        entries.push(RecursionEntry { n, best_j, holds });
    }
    Ok(RecursionReport {
        n_max,
        entries,
        first_violation,
    })
}

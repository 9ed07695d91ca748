//! Factor complexity `p_u(n)`, the number of distinct length-`n` blocks of a
//! sequence, measured on finite prefixes.
//!
//! All values are lower bounds for the infinite sequence. Growth claims are
//! checked with fixed thresholds on measured profiles.

use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Letter, OrderedAlphabet};
use crate::automatic::AutomaticSequence;
use crate::catalog;
use crate::substitution::{system_from_morphism, Morphism};
use crate::{Error, Result};

/// Growth classes of factor complexity for fixed points of morphisms.
pub const PANSIOT_CLASSES: [&str; 5] = ["1", "n", "n log log n", "n log n", "n²"];

/// Minimal growth exponent accepted as quadratic evidence.
pub const QUADRATIC_EXPONENT_THRESHOLD: f64 = 1.7;
/// Minimal growth of `p(n)/n²` across the grid accepted as super-quadratic.
pub const SUPER_QUADRATIC_RATIO_THRESHOLD: f64 = 2.0;
/// Below this many terms the super-quadratic check is inconclusive.
pub const SUPER_QUADRATIC_MIN_TERMS: usize = 1000;

/// Outcome of a threshold-based check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Number of distinct factors of each length `1..=n_max` of a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub prefix_length: usize,
    /// `values[n - 1] = p(n)`.
    pub values: Vec<u64>,
    /// Largest `n` such that `p(1..=n)` already had its value on the first
    /// half of the prefix.
    pub exactness_horizon: usize,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `p(n)` for `1 ≤ n ≤ n_max`.
    pub fn p(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

/// Suffix automaton of a word, built online.
#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    len: Vec<usize>,
    link: Vec<Option<usize>>,
    next: Vec<Vec<(Letter, usize)>>,
    last: usize,
}

impl Default for SuffixAutomaton {
    fn default() -> Self {
        Self::new()
    }
}

impl SuffixAutomaton {
    pub fn new() -> Self {
        Self { len: vec![0], link: vec![None], next: vec![Vec::new()], last: 0 }
    }

    fn go(&self, state: usize, letter: Letter) -> Option<usize> {
        self.next[state].iter().find(|&&(a, _)| a == letter).map(|&(_, q)| q)
    }

    fn set(&mut self, state: usize, letter: Letter, target: usize) {
        match self.next[state].iter_mut().find(|(a, _)| *a == letter) {
            Some(edge) => edge.1 = target,
            None => self.next[state].push((letter, target)),
        }
    }

    fn add_state(&mut self, len: usize, link: Option<usize>, next: Vec<(Letter, usize)>) -> usize {
        self.len.push(len);
        self.link.push(link);
        self.next.push(next);
        self.len.len() - 1
    }

    pub fn push(&mut self, letter: Letter) {
        let cur = self.add_state(self.len[self.last] + 1, None, Vec::new());
        let mut p = Some(self.last);
        while let Some(q) = p {
            if self.go(q, letter).is_some() {
                break;
            }
            self.set(q, letter, cur);
            p = self.link[q];
        }
        match p {
            None => self.link[cur] = Some(0),
            Some(p) => {
                let q = self.go(p, letter).expect("edge found above");
                if self.len[p] + 1 == self.len[q] {
                    self.link[cur] = Some(q);
                } else {
                    let clone = self.add_state(self.len[p] + 1, self.link[q], self.next[q].clone());
                    let mut r = Some(p);
                    while let Some(s) = r {
                        if self.go(s, letter) != Some(q) {
                            break;
                        }
                        self.set(s, letter, clone);
                        r = self.link[s];
                    }
                    self.link[q] = Some(clone);
                    self.link[cur] = Some(clone);
                }
            }
        }
        self.last = cur;
    }

    pub fn num_states(&self) -> usize {
        self.len.len()
    }

    /// Lengths of the factors that first occurred with the last letter
    /// pushed: the suffixes with lengths in `(len(link(last)), len(last)]`.
    pub fn new_factor_lengths(&self) -> core::ops::RangeInclusive<usize> {
        let link = self.link[self.last].map_or(0, |l| self.len[l]);
        link + 1..=self.len[self.last]
    }

    /// Whether `factor` occurs in the word read so far.
    pub fn contains(&self, factor: &[Letter]) -> bool {
        factor.iter().try_fold(0, |q, &a| self.go(q, a)).is_some()
    }

    /// Distinct factors of each length `1..=n_max` of the word read so far.
    ///
    /// A state stands for the factors with lengths in
    /// `(len(link), len]`, each exactly once.
    pub fn factor_counts(&self, n_max: usize) -> Vec<u64> {
        let mut diff = vec![0i64; n_max + 2];
        for v in 1..self.len.len() {
            let lo = self.len[self.link[v].expect("non-root")] + 1;
            let hi = self.len[v].min(n_max);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut acc = 0i64;
        (1..=n_max)
            .map(|n| {
                acc += diff[n];
                acc as u64
            })
            .collect()
    }
}

/// Profile of the first `prefix_length` terms of `stream` (fewer if it ends).
pub fn factor_count<I>(stream: I, prefix_length: usize, n_max: usize) -> Result<ComplexityProfile>
where
    I: IntoIterator<Item = Letter>,
{
    if n_max > prefix_length {
        return Err(Error::PrefixTooShort { prefix: prefix_length, n_max });
    }
    let mut sam = SuffixAutomaton::new();
    let mut half = Vec::new();
    let mut read = 0;
    for letter in stream.into_iter().take(prefix_length) {
        sam.push(letter);
        read += 1;
        if read == prefix_length / 2 {
            half = sam.factor_counts(n_max);
        }
    }
    let values = sam.factor_counts(n_max);
    if half.is_empty() {
        half = vec![0; n_max];
    }
    let exactness_horizon = values.iter().zip(&half).take_while(|(a, b)| a == b).count();
    Ok(ComplexityProfile { prefix_length: read, values, exactness_horizon })
}

/// Least-squares slope of `log p(n)` against `log n` for `n ∈ [lo, hi]`.
pub fn growth_exponent(profile: &ComplexityProfile, lo: usize, hi: usize) -> f64 {
    let points: Vec<(f64, f64)> = (lo.max(1)..=hi)
        .filter_map(|n| profile.p(n).filter(|&p| p > 0).map(|p| (libm::log(n as f64), libm::log(p as f64))))
        .collect();
    let m = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(num, den), (x, y)| (num + (x - mx) * (y - my), den + (x - mx) * (x - mx)));
    num / den
}

/// Measurements on the quadratic witness `0 ↦ 01, 1 ↦ 12, 2 ↦ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticWitnessReport {
    pub prefix_length: usize,
    /// The constructed language is `a* ∪ a*ba* ∪ a*ba*ba*`.
    pub language_matches: bool,
    /// Profile of the fixed point `w`.
    pub w: ComplexityProfile,
    /// Profile of the automatic sequence `v` built from the morphism.
    pub v: ComplexityProfile,
    /// `p_v(n) ≥ p_w(n)` for every measured `n`.
    pub embedding_holds: bool,
    /// Largest `m` checked for the run `2^m`.
    pub run_bound: usize,
    /// Every run `2^m`, `m ≤ run_bound`, occurs in the prefix of `w`.
    pub runs_present: bool,
    pub exponent: f64,
    pub exponent_range: (usize, usize),
    pub exponent_threshold: f64,
}

impl QuadraticWitnessReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(
            self.language_matches
                && self.embedding_holds
                && self.runs_present
                && self.exponent >= self.exponent_threshold,
        )
    }
}

/// The witness morphism `0 ↦ 01, 1 ↦ 12, 2 ↦ 2`.
pub fn quadratic_witness_morphism() -> Morphism {
    let digits = OrderedAlphabet::new(["0", "1", "2"]).expect("distinct symbols");
    Morphism::endomorphism(digits, vec![vec![0, 1], vec![1, 2], vec![2]]).expect("valid images")
}

/// Builds `v` from the witness morphism and compares the profiles of `v`
/// and of `w = φ^ω(0)` up to length 30.
pub fn quadratic_witness_check(prefix_length: usize) -> Result<QuadraticWitnessReport> {
    const N_MAX: usize = 30;
    const RANGE: (usize, usize) = (8, 30);
    let phi = quadratic_witness_morphism();
    let (system, machine) = system_from_morphism(&phi, 0)?;
    let language_matches = system.language().equivalent(&catalog::two_b_language())?;
    let v = AutomaticSequence::new(system, machine)?;
    let w_prefix: Vec<Letter> = phi.fixed_point(0)?.take(prefix_length).collect();
    let w = factor_count(w_prefix.iter().copied(), prefix_length, N_MAX)?;
    let vp = factor_count(v.terms(), prefix_length, N_MAX)?;
    let embedding_holds = w.values.iter().zip(&vp.values).all(|(pw, pv)| pv >= pw);
    // φ^{m+1}(0) = 0 · 1 · 12 · 122 ··· 12^m has length 1 + (m+1)(m+2)/2
    let run_bound = (0..).take_while(|m| (m + 2) * (m + 3) / 2 < w_prefix.len()).last().unwrap_or(0);
    let longest = longest_run(&w_prefix, 2);
    let runs_present = longest >= run_bound;
    let exponent = growth_exponent(&w, RANGE.0, RANGE.1);
    Ok(QuadraticWitnessReport {
        prefix_length: w.prefix_length,
        language_matches,
        w,
        v: vp,
        embedding_holds,
        run_bound,
        runs_present,
        exponent,
        exponent_range: RANGE,
        exponent_threshold: QUADRATIC_EXPONENT_THRESHOLD,
    })
}

fn longest_run(word: &[Letter], letter: Letter) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &x in word {
        cur = if x == letter { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// `p(n) / n²` on a range, with doubling checks.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundReport {
    pub profile: ComplexityProfile,
    /// `(n, p(n)/n²)` for `n ∈ [2, n_max]`.
    pub ratios: Vec<(usize, f64)>,
    /// Largest ratio: `p(n) ≤ C·n²` on the range.
    pub constant: f64,
    /// `n` such that `p(2n) > 4·p(n)`, for `n = 2, 4, 8, ...` with `2n ≤ n_max`.
    pub doubling_violations: Vec<usize>,
}

impl UpperBoundReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.doubling_violations.is_empty())
    }
}

/// Checks that the measured complexity stays within a quadratic envelope.
pub fn upper_bound_check<I>(stream: I, prefix_length: usize, n_max: usize) -> Result<UpperBoundReport>
where
    I: IntoIterator<Item = Letter>,
{
    let profile = factor_count(stream, prefix_length, n_max)?;
    let ratios: Vec<(usize, f64)> = (2..=n_max)
        .map(|n| (n, profile.p(n).unwrap_or(0) as f64 / (n * n) as f64))
        .collect();
    let constant = ratios.iter().map(|&(_, r)| r).fold(0.0, f64::max);
    let doubling_violations = core::iter::successors(Some(2usize), |n| Some(n * 2))
        .take_while(|n| 2 * n <= n_max)
        .filter(|&n| profile.p(2 * n).unwrap_or(0) > 4 * profile.p(n).unwrap_or(0))
        .collect();
    Ok(UpperBoundReport { profile, ratios, constant, doubling_violations })
}

/// Upper-bound check on the terms of an automatic sequence.
pub fn upper_bound_check_sequence(u: &AutomaticSequence, prefix_length: usize, n_max: usize) -> Result<UpperBoundReport> {
    upper_bound_check(u.terms(), prefix_length, n_max)
}

/// The binary word `w = w_0 w_1 w_2 ···` where `w_{n-3}` concatenates the
/// length-`n` words with exactly three 1s in increasing lexicographic order.
#[derive(Debug, Clone)]
pub struct BinomialWord {
    n: usize,
    /// Positions of the three 1s of the current block word.
    ones: [usize; 3],
    offset: usize,
}

impl Default for BinomialWord {
    fn default() -> Self {
        Self::new()
    }
}

impl BinomialWord {
    pub fn new() -> Self {
        Self { n: 3, ones: [0, 1, 2], offset: 0 }
    }

    /// Next word in lexicographic order: ones further right first.
    fn advance_word(&mut self) {
        let n = self.n;
        let [i, j, k] = self.ones;
        if k > j + 1 {
            self.ones = [i, j, k - 1];
        } else if j > i + 1 {
            self.ones = [i, j - 1, n - 1];
        } else if i > 0 {
            self.ones = [i - 1, n - 2, n - 1];
        } else {
            self.n += 1;
            let n = self.n;
            self.ones = [n - 3, n - 2, n - 1];
        }
    }
}

impl Iterator for BinomialWord {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let bit = Letter::from(self.ones.contains(&self.offset));
        self.offset += 1;
        if self.offset == self.n {
            self.offset = 0;
            self.advance_word();
        }
        Some(bit)
    }
}

/// First bits of the binomial word and the positions of its 1s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPrefix {
    pub bits: Vec<Letter>,
    pub members: Vec<usize>,
}

pub fn binomial_word(n_terms: usize) -> BinomialPrefix {
    let bits: Vec<Letter> = BinomialWord::new().take(n_terms).collect();
    let members = bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).collect();
    BinomialPrefix { bits, members }
}

/// `p(n)/n²` on a geometric grid of the binomial word.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperQuadraticReport {
    pub n_terms: usize,
    /// `(n, p(n), p(n)/n²)` for `n = 4, 8, 16, ...`.
    pub grid: Vec<(usize, u64, f64)>,
    /// Ratio at the largest grid point over the ratio at the smallest.
    pub growth: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Largest grid point used for `n_terms` terms: `n³ ≤ n_terms`, so a
/// factor of length `n` has room to occur many times.
fn grid_limit(n_terms: usize) -> usize {
    (1..).take_while(|n: &usize| n * n * n <= n_terms).last().unwrap_or(1)
}

/// Escape of `p(n)/n²` on a prefix of the binomial word.
pub fn super_quadratic_check(n_terms: usize) -> SuperQuadraticReport {
    super_quadratic_check_on(BinomialWord::new(), n_terms)
}

/// Same check on any sequence, for comparison.
pub fn super_quadratic_check_on<I>(stream: I, n_terms: usize) -> SuperQuadraticReport
where
    I: IntoIterator<Item = Letter>,
{
    let limit = grid_limit(n_terms).max(4);
    let grid_points: Vec<usize> = core::iter::successors(Some(4usize), |n| Some(n * 2))
        .take_while(|&n| n <= limit)
        .collect();
    let profile = factor_count(stream, n_terms.max(limit), limit).expect("n_max ≤ prefix");
    let grid: Vec<(usize, u64, f64)> = grid_points
        .iter()
        .map(|&n| {
            let p = profile.p(n).unwrap_or(0);
            (n, p, p as f64 / (n * n) as f64)
        })
        .collect();
    let growth = match (grid.first(), grid.last()) {
        (Some(first), Some(last)) if first.2 > 0.0 => last.2 / first.2,
        _ => 0.0,
    };
    let verdict = if n_terms < SUPER_QUADRATIC_MIN_TERMS || grid.len() < 2 {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(growth >= SUPER_QUADRATIC_RATIO_THRESHOLD)
    };
    SuperQuadraticReport { n_terms, grid, growth, threshold: SUPER_QUADRATIC_RATIO_THRESHOLD, verdict }
}

/// Profile of the terms of an automatic sequence.
pub fn sequence_profile(u: &AutomaticSequence, prefix_length: usize, n_max: usize) -> Result<ComplexityProfile> {
    factor_count(u.terms(), prefix_length, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn naive(word: &[Letter], n_max: usize) -> Vec<u64> {
        (1..=n_max)
            .map(|n| word.windows(n).collect::<BTreeSet<_>>().len() as u64)
            .collect()
    }

    #[test]
    fn sam_matches_naive_on_small_words() {
        let words: [&[Letter]; 5] = [&[], &[0], &[0, 0, 0, 0], &[0, 1, 0, 1, 1, 0, 1], &[2, 0, 1, 2, 0, 1, 2, 2]];
        for w in words {
            let mut sam = SuffixAutomaton::new();
            w.iter().for_each(|&x| sam.push(x));
            assert_eq!(sam.factor_counts(9), naive(w, 9), "{w:?}");
        }
    }

    #[test]
    fn quadratic_witness_small_values() {
        let phi = quadratic_witness_morphism();
        let w7 = phi.iterate(0, 7);
        let p = factor_count(phi.fixed_point(0).unwrap(), 10_000, 5).unwrap();
        assert_eq!(p.p(1), Some(3));
        assert_eq!(p.p(2), Some(5));
        assert_eq!(naive(&w7, 2), vec![3, 5]);
    }

    #[test]
    fn constant_sequence() {
        let p = factor_count(core::iter::repeat(0), 500, 40).unwrap();
        assert!(p.values.iter().all(|&v| v == 1));
        assert_eq!(p.exactness_horizon, 40);
    }

    #[test]
    fn teaching_uses_four_letters() {
        let p = sequence_profile(&catalog::teaching_sequence(), 10_000, 3).unwrap();
        assert_eq!(p.p(1), Some(4));
    }

    #[test]
    fn n_max_beyond_prefix() {
        assert_eq!(
            factor_count(core::iter::repeat(0), 5, 6).unwrap_err(),
            Error::PrefixTooShort { prefix: 5, n_max: 6 }
        );
    }

    #[test]
    fn binomial_prefix() {
        let b = binomial_word(19);
        let s: alloc::string::String = b.bits.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect();
        assert_eq!(s, "1110111101111011110");
        let members: Vec<usize> = binomial_word(29).members;
        assert_eq!(members, vec![0, 1, 2, 4, 5, 6, 7, 9, 10, 11, 12, 14, 15, 16, 17, 21, 22, 23, 25, 27, 28]);
    }

    #[test]
    fn binomial_block_lengths() {
        // blocks for n = 3, 4, 5 have lengths n·C(n,3) = 3, 16, 50
        let bits = binomial_word(3 + 16 + 50 + 1).bits;
        let ones = |r: core::ops::Range<usize>| bits[r].iter().filter(|&&b| b == 1).count();
        assert_eq!(ones(0..3), 3);
        assert_eq!(ones(3..19), 12);
        assert_eq!(ones(19..69), 30);
        // the n = 6 block starts with 000111
        assert_eq!(&bits[69..70], &[0]);
    }

    #[test]
    fn super_quadratic_small_input_is_inconclusive() {
        assert_eq!(super_quadratic_check(500).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn thue_morse_is_linear() {
        let tm = Morphism::endomorphism(OrderedAlphabet::new(["0", "1"]).unwrap(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let p = factor_count(tm.fixed_point(0).unwrap(), 20_000, 30).unwrap();
        assert!((1..=30).all(|n| p.p(n).unwrap() <= 4 * n as u64));
        assert!(growth_exponent(&p, 8, 30) < QUADRATIC_EXPONENT_THRESHOLD);
    }

    #[test]
    fn growth_exponent_of_exact_powers() {
        let profile = ComplexityProfile { prefix_length: 0, values: (1..=20u64).map(|n| n * n * n).collect(), exactness_horizon: 0 };
        assert!((growth_exponent(&profile, 2, 20) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn eventually_periodic_is_bounded() {
        let word = [2, 1].into_iter().chain(core::iter::repeat([0, 1, 1]).flatten());
        let r = upper_bound_check(word, 3000, 40).unwrap();
        assert!(r.profile.values.iter().all(|&p| p <= 5));
        assert_eq!(r.verdict(), Verdict::Pass);
    }

    #[test]
    fn teaching_ratio_does_not_escape() {
        let r = super_quadratic_check_on(catalog::teaching_sequence().terms(), 20_000);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.growth < 1.0);
    }
}

//! Abstract numeration systems `S = (L, Σ, <)`.
//!
//! The integer `n` is represented by the `(n+1)`-th word of `L` in shortlex
//! order. Ranking and unranking walk the trimmed automaton of `L` guided by
//! per-state word counts `u_q(m)` (number of words of length `m` accepted
//! from `q`), which are arbitrary-precision and grown on demand.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use spin::{RwLock, RwLockReadGuard};

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::automaton::{Dfa, StateId, TransitionTable};
use crate::{Error, Result};

/// Rank of a word of `L`, i.e. the integer it represents.
pub type Rank = BigUint;

type CountTable = Vec<Vec<BigUint>>;

/// A numeration system on an infinite regular language.
///
/// The count table is the only mutable state; it is filled idempotently
/// behind a lock, so a system can be shared between threads.
pub struct NumerationSystem {
    language: Dfa,
    counts: RwLock<CountTable>,
}

impl Clone for NumerationSystem {
    fn clone(&self) -> Self {
        Self { language: self.language.clone(), counts: RwLock::new(self.counts.read().clone()) }
    }
}

impl fmt::Debug for NumerationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumerationSystem")
            .field("alphabet", self.language.alphabet())
            .field("states", &self.language.num_states())
            .field("cached_lengths", &self.counts.read().len())
            .finish()
    }
}

impl NumerationSystem {
    /// Builds the system on `L(language)`. Fails if the language is finite.
    pub fn new(language: &Dfa) -> Result<Self> {
        let language = language.trim();
        if !language.is_infinite() {
            return Err(Error::FiniteLanguage);
        }
        Ok(Self { language, counts: RwLock::new(Vec::new()) })
    }

    /// The trimmed automaton of `L`.
    pub fn language(&self) -> &Dfa {
        &self.language
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        self.language.alphabet()
    }

    /// Count rows `0..=len`, filling missing rows first.
    fn counts_upto(&self, len: usize) -> RwLockReadGuard<'_, CountTable> {
        {
            let table = self.counts.read();
            if table.len() > len {
                return table;
            }
        }
        {
            let mut table = self.counts.write();
            let dfa = &self.language;
            let n = dfa.num_states();
            let k = dfa.alphabet().len();
            if table.is_empty() {
                table.push((0..n).map(|q| BigUint::from(u8::from(dfa.is_final(q)))).collect());
            }
            while table.len() <= len {
                let prev = table.last().unwrap();
                let row: Vec<BigUint> = (0..n)
                    .map(|q| {
                        (0..k)
                            .filter_map(|a| dfa.next(q, a))
                            .fold(BigUint::zero(), |acc, t| acc + &prev[t])
                    })
                    .collect();
                table.push(row);
            }
        }
        self.counts.read()
    }

    /// Number of words of `L` of the given length.
    pub fn count_words(&self, length: usize) -> BigUint {
        self.counts_upto(length)[length][self.language.start()].clone()
    }

    /// Number of words of `L` of length at most `length`.
    pub fn count_up_to(&self, length: usize) -> BigUint {
        let table = self.counts_upto(length);
        let s = self.language.start();
        table.iter().take(length + 1).map(|row| &row[s]).sum()
    }

    /// `rep_S(n)`: the `(n+1)`-th word of `L` in shortlex order.
    pub fn rep(&self, n: &Rank) -> Word {
        let s = self.language.start();
        let mut rest = n.clone();
        let mut len = 0;
        loop {
            let table = self.counts_upto(len);
            let c = &table[len][s];
            if rest < *c {
                break;
            }
            rest -= c;
            len += 1;
        }
        let table = self.counts_upto(len);
        let k = self.alphabet().len();
        let mut word = Vec::with_capacity(len);
        let mut q = s;
        for pos in 0..len {
            let remaining = len - pos - 1;
            let mut chosen = None;
            for a in 0..k {
                if let Some(t) = self.language.next(q, a) {
                    let c = &table[remaining][t];
                    if rest < *c {
                        chosen = Some((a, t));
                        break;
                    }
                    rest -= c;
                }
            }
            let (a, t) = chosen.expect("count table is consistent");
            word.push(a);
            q = t;
        }
        word
    }

    pub fn rep_u64(&self, n: u64) -> Word {
        self.rep(&BigUint::from(n))
    }

    /// `val_S(w)`, the rank of `w` in `L`.
    pub fn val(&self, word: &[Letter]) -> Result<Rank> {
        self.language.check_member(word).map_err(Error::NotInLanguage)?;
        let len = word.len();
        let table = self.counts_upto(len);
        let s = self.language.start();
        let mut rank: BigUint = table.iter().take(len).map(|row| &row[s]).sum();
        let mut q = s;
        for (pos, &letter) in word.iter().enumerate() {
            let remaining = len - pos - 1;
            for b in 0..letter {
                if let Some(t) = self.language.next(q, b) {
                    rank += &table[remaining][t];
                }
            }
            q = self.language.next(q, letter).expect("word is a member");
        }
        Ok(rank)
    }

    /// Words `rep(from), rep(from + 1), ...`.
    pub fn enumerate(&self, from: &Rank) -> ShortlexWords<'_> {
        let first = self.rep(from);
        ShortlexWords::from_word(&self.language, self.language.start(), first)
    }

    pub fn is_member(&self, word: &[Letter]) -> bool {
        self.language.accepts(word)
    }
}

/// Lazy shortlex enumeration of the words accepted from a state of a DFA.
///
/// Finite (and empty) languages are supported: the stream ends after the
/// last word. Each step costs `O(|w| · |Σ|)` amortized, using a table of
/// which states can still accept in exactly `r` more letters.
#[derive(Debug, Clone)]
pub struct ShortlexWords<'a> {
    dfa: &'a Dfa,
    start: StateId,
    live: Vec<Vec<bool>>,
    infinite: bool,
    next_word: Option<Word>,
    states: Vec<StateId>,
}

impl<'a> ShortlexWords<'a> {
    /// All words accepted from `start`, in shortlex order.
    pub fn new(dfa: &'a Dfa, start: StateId) -> Self {
        let mut it = Self::empty(dfa, start);
        it.next_word = it.first_of_length_at_least(0);
        it
    }

    /// Words accepted from `start`, beginning at `first` (which must be
    /// accepted from `start`).
    pub fn from_word(dfa: &'a Dfa, start: StateId, first: Word) -> Self {
        let mut it = Self::empty(dfa, start);
        debug_assert!(dfa.run_from(start, &first).is_some_and(|q| dfa.is_final(q)));
        it.states = it.path(&first);
        it.next_word = Some(first);
        it
    }

    fn empty(dfa: &'a Dfa, start: StateId) -> Self {
        let infinite = dfa.with_start(start).is_infinite();
        Self {
            dfa,
            start,
            live: vec![(0..dfa.num_states()).map(|q| dfa.is_final(q)).collect()],
            infinite,
            next_word: None,
            states: Vec::new(),
        }
    }

    fn path(&self, word: &[Letter]) -> Vec<StateId> {
        let mut states = Vec::with_capacity(word.len() + 1);
        let mut q = self.start;
        states.push(q);
        for &a in word {
            q = self.dfa.next(q, a).expect("word is accepted");
            states.push(q);
        }
        states
    }

    fn live(&mut self, remaining: usize, q: StateId) -> bool {
        let k = self.dfa.alphabet().len();
        while self.live.len() <= remaining {
            let prev = self.live.last().unwrap();
            let row = (0..self.dfa.num_states())
                .map(|p| (0..k).any(|a| self.dfa.next(p, a).is_some_and(|t| prev[t])))
                .collect();
            self.live.push(row);
        }
        self.live[remaining][q]
    }

    /// Appends the least completion of length `remaining` from `states.last()`.
    fn complete_least(&mut self, word: &mut Word, remaining: usize) {
        let k = self.dfa.alphabet().len();
        for r in (0..remaining).rev() {
            let q = *self.states.last().unwrap();
            let (a, t) = (0..k)
                .find_map(|a| self.dfa.next(q, a).filter(|&t| self.live(r, t)).map(|t| (a, t)))
                .expect("live state has a live successor");
            word.push(a);
            self.states.push(t);
        }
    }

    fn first_of_length_at_least(&mut self, min_len: usize) -> Option<Word> {
        let limit = self.dfa.num_states();
        let mut len = min_len;
        loop {
            if !self.infinite && len >= limit {
                return None;
            }
            if self.live(len, self.start) {
                let mut word = Vec::with_capacity(len);
                self.states.clear();
                self.states.push(self.start);
                self.complete_least(&mut word, len);
                return Some(word);
            }
            len += 1;
        }
    }

    fn successor(&mut self, mut word: Word) -> Option<Word> {
        let len = word.len();
        let k = self.dfa.alphabet().len();
        for i in (0..len).rev() {
            let q = self.states[i];
            let remaining = len - i - 1;
            let found = (word[i] + 1..k)
                .find_map(|b| self.dfa.next(q, b).filter(|&t| self.live(remaining, t)).map(|t| (b, t)));
            if let Some((b, t)) = found {
                word.truncate(i);
                word.push(b);
                self.states.truncate(i + 1);
                self.states.push(t);
                self.complete_least(&mut word, remaining);
                return Some(word);
            }
        }
        self.first_of_length_at_least(len + 1)
    }
}

impl Iterator for ShortlexWords<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next_word.take()?;
        self.next_word = self.successor(current.clone());
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use alloc::string::String;

    /// Brute force: all words over the alphabet up to `max_len`, sorted
    /// shortlex, filtered by membership.
    fn brute_shortlex(dfa: &Dfa, max_len: usize) -> Vec<Word> {
        let k = dfa.alphabet().len();
        let mut out = Vec::new();
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..=max_len {
            out.extend(layer.iter().filter(|w| dfa.accepts(w)).cloned());
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..k {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            layer = next;
        }
        out
    }

    fn render(dfa: &Dfa, w: &[Letter]) -> String {
        dfa.alphabet().render(w)
    }

    #[test]
    fn ab_word_list() {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        let words: Vec<String> = s.enumerate(&Rank::zero()).take(10).map(|w| render(s.language(), &w)).collect();
        assert_eq!(words, ["@eps", "a", "b", "aa", "ab", "bb", "aaa", "aab", "abb", "bbb"]);
        assert_eq!(render(s.language(), &s.rep_u64(7)), "aab");
        assert_eq!(s.rep_u64(0), Vec::<Letter>::new());
        assert_eq!(s.val(&[0, 1]).unwrap(), BigUint::from(4u8));
        assert_eq!(s.val(&[]).unwrap(), BigUint::zero());
        assert_eq!(s.count_words(5), BigUint::from(6u8));
    }

    #[test]
    fn fibonacci_and_binary_values() {
        let fib = NumerationSystem::new(&catalog::fibonacci()).unwrap();
        let brute = brute_shortlex(fib.language(), 6);
        assert_eq!(render(fib.language(), &brute[4]), "101");
        assert_eq!(render(fib.language(), &fib.rep_u64(4)), "101");

        let bin = NumerationSystem::new(&catalog::binary()).unwrap();
        let brute = brute_shortlex(bin.language(), 4);
        assert_eq!(brute[5], vec![1, 0, 1]);
        assert_eq!(bin.val(&[1, 0, 1]).unwrap(), BigUint::from(5u8));
        // 2^(n-1) words of length n >= 1, confirmed by enumeration
        let brute = brute_shortlex(bin.language(), 6);
        assert_eq!(brute.iter().filter(|w| w.len() == 6).count(), 32);
        assert_eq!(bin.count_words(6), BigUint::from(32u8));
    }

    #[test]
    fn count_below_shortest_word_is_zero() {
        // words of L all have length >= 2: aa(a)*
        let sigma = OrderedAlphabet::new(["a"]).unwrap();
        let dfa = Dfa::from_edges(sigma, 3, 0, &[2], &[(0, 0, 1), (1, 0, 2), (2, 0, 2)]).unwrap();
        let s = NumerationSystem::new(&dfa).unwrap();
        assert_eq!(s.count_words(0), BigUint::zero());
        assert_eq!(s.count_words(1), BigUint::zero());
        assert_eq!(s.count_words(2), BigUint::from(1u8));
        assert_eq!(s.rep_u64(0), vec![0, 0]);
    }

    #[test]
    fn rejects_finite_language() {
        let sigma = OrderedAlphabet::new(["a"]).unwrap();
        let dfa = Dfa::from_edges(sigma, 2, 0, &[1], &[(0, 0, 1)]).unwrap();
        assert_eq!(NumerationSystem::new(&dfa).unwrap_err(), Error::FiniteLanguage);
    }

    #[test]
    fn val_rejects_non_members() {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        assert!(matches!(s.val(&[1, 0]), Err(Error::NotInLanguage(_))));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for dfa in [
            catalog::a_star_b_star(),
            catalog::binary(),
            catalog::fibonacci(),
            catalog::remark3_language(),
            catalog::two_b_language(),
        ] {
            let s = NumerationSystem::new(&dfa).unwrap();
            let brute = brute_shortlex(s.language(), 7);
            let listed: Vec<Word> = s.enumerate(&Rank::zero()).take(brute.len()).collect();
            assert_eq!(listed, brute);
            for (n, w) in brute.iter().enumerate() {
                assert_eq!(&s.rep_u64(n as u64), w);
                assert_eq!(s.val(w).unwrap(), BigUint::from(n));
            }
        }
    }

    #[test]
    fn finite_sublanguage_enumeration_terminates() {
        // from state 1 of a*b*b?-like automaton accepting only {ε, b}
        let sigma = OrderedAlphabet::new(["a", "b"]).unwrap();
        let dfa = Dfa::from_edges(sigma, 3, 0, &[0, 1, 2], &[(0, 0, 0), (0, 1, 1), (1, 1, 2)]).unwrap();
        let words: Vec<Word> = ShortlexWords::new(&dfa, 1).collect();
        assert_eq!(words, vec![vec![], vec![1]]);
        let none = Dfa::from_edges(OrderedAlphabet::new(["a"]).unwrap(), 2, 0, &[], &[(0, 0, 1)]).unwrap();
        assert_eq!(ShortlexWords::new(&none, 0).count(), 0);
    }

    #[test]
    fn counting_consistency() {
        let s = NumerationSystem::new(&catalog::fibonacci()).unwrap();
        for m in 0..20 {
            let first_longer = s.enumerate(&s.count_up_to(m)).next().unwrap();
            assert_eq!(first_longer.len(), m + 1);
            assert_eq!(s.val(&first_longer).unwrap(), s.count_up_to(m));
        }
    }
}

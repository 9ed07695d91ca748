//! Morphisms, their fixed points, and substitutions `(φ, h, c)` generating
//! `h(φ^ω(c))`.
//!
//! The bridge to automatic sequences goes both ways:
//!
//! * [`state_morphism`] turns a complete automaton into a morphism whose
//!   fixed point lists the states reached by the words of `Σ*` in shortlex
//!   order; [`substitution_from_automata`] composes it with an erasing weak
//!   coding to generate any S-automatic sequence.
//! * [`system_from_morphism`] turns a prolongable morphism into a numeration
//!   system and a DFAO whose sequence is `c φ(c) φ²(c) ...`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::automatic::AutomaticSequence;
use crate::automaton::{Dfa, Dfao, ProductAutomaton, StateId, TransitionTable, DEAD_NAME};
use crate::numeration::NumerationSystem;
use crate::{Error, Result, FRESH_PREFIX};

/// A monoid morphism `Σ* → Γ*`, given by the image of each letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    domain: OrderedAlphabet,
    codomain: OrderedAlphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: OrderedAlphabet, codomain: OrderedAlphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::InvalidLetter { letter: images.len(), size: domain.len() });
        }
        if let Some(&letter) = images.iter().flatten().find(|&&l| l >= codomain.len()) {
            return Err(Error::InvalidLetter { letter, size: codomain.len() });
        }
        Ok(Self { domain, codomain, images })
    }

    /// Morphism from an alphabet to itself.
    pub fn endomorphism(alphabet: OrderedAlphabet, images: Vec<Word>) -> Result<Self> {
        Self::new(alphabet.clone(), alphabet, images)
    }

    pub fn domain(&self) -> &OrderedAlphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &OrderedAlphabet {
        &self.codomain
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, word: &[Letter]) -> Word {
        word.iter().flat_map(|&a| self.images[a].iter().copied()).collect()
    }

    /// `φ^n(c)`; requires an endomorphism.
    pub fn iterate(&self, letter: Letter, n: usize) -> Word {
        (0..n).fold(vec![letter], |w, _| self.apply(&w))
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    /// `φ(c)` starts with `c` and has length at least 2.
    pub fn is_prolongable(&self, letter: Letter) -> bool {
        self.is_endomorphism() && self.images[letter].len() >= 2 && self.images[letter][0] == letter
    }

    pub fn is_uniform(&self) -> bool {
        self.images.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn is_erasing(&self) -> bool {
        self.images.iter().any(Vec::is_empty)
    }

    /// Every image has length at most one.
    pub fn is_weak_coding(&self) -> bool {
        self.images.iter().all(|w| w.len() <= 1)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The fixed point `φ^ω(c)` as a lazy stream.
    pub fn fixed_point(&self, letter: Letter) -> Result<FixedPoint> {
        if !self.is_prolongable(letter) {
            return Err(Error::NotProlongable(self.domain.symbol(letter).into()));
        }
        Ok(FixedPoint { buffer: self.images[letter].clone(), expanded: 1, emitted: 0, morphism: self.clone() })
    }
}

/// Lazy fixed point of a prolongable morphism.
///
/// The prefix produced so far is kept in a buffer; whenever the stream runs
/// past it, the next unexpanded letter `x` of the buffer contributes `φ(x)`.
/// This is `φ^ω(c)` because `φ(c) = c·y` gives `φ^ω(c) = c·y·φ(y)·φ²(y)···`.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    morphism: Morphism,
    buffer: Word,
    expanded: usize,
    emitted: usize,
}

impl Iterator for FixedPoint {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        while self.emitted >= self.buffer.len() {
            let x = *self.buffer.get(self.expanded)?;
            self.expanded += 1;
            self.buffer.extend_from_slice(&self.morphism.images[x]);
        }
        self.emitted += 1;
        Some(self.buffer[self.emitted - 1])
    }
}

/// A substitution `(φ, h, c)`: `φ` prolongable on `c`, `h` a weak coding,
/// generating the infinite word `h(φ^ω(c))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    phi: Morphism,
    coding: Morphism,
    seed: Letter,
}

impl Substitution {
    pub fn new(phi: Morphism, coding: Morphism, seed: Letter) -> Result<Self> {
        if !phi.is_prolongable(seed) {
            return Err(Error::NotProlongable(phi.domain.symbol(seed).into()));
        }
        if coding.domain != phi.domain {
            return Err(Error::AlphabetMismatch);
        }
        if let Some(a) = (0..coding.domain.len()).find(|&a| coding.images[a].len() > 1) {
            return Err(Error::NotWeakCoding(coding.domain.symbol(a).into()));
        }
        if !generates_infinite_word(&phi, &coding, seed) {
            return Err(Error::FiniteGeneration);
        }
        Ok(Self { phi, coding, seed })
    }

    pub fn phi(&self) -> &Morphism {
        &self.phi
    }

    pub fn coding(&self) -> &Morphism {
        &self.coding
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn is_erasing(&self) -> bool {
        self.coding.is_erasing()
    }

    /// Stream of `h(φ^ω(c))`.
    ///
    /// Letters all of whose descendants are erased by `h` are never
    /// expanded, so the cost follows the length of the output rather than
    /// the length of the fixed point.
    pub fn generate(&self) -> Generated {
        let fertile = fertile_letters(&self.phi, &self.coding);
        let image = &self.phi.images[self.seed];
        let mut buffer = vec![image[0]];
        buffer.extend(image[1..].iter().copied().filter(|&x| fertile[x]));
        Generated { phi: self.phi.clone(), coding: self.coding.clone(), fertile, buffer, expanded: 1, emitted: 0 }
    }
}

/// Letters from which some letter kept by `coding` is reachable.
fn fertile_letters(phi: &Morphism, coding: &Morphism) -> Vec<bool> {
    let n = phi.domain.len();
    let mut fertile: Vec<bool> = (0..n).map(|x| !coding.images[x].is_empty()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            if !fertile[x] && phi.images[x].iter().any(|&y| fertile[y]) {
                fertile[x] = true;
                changed = true;
            }
        }
    }
    fertile
}

/// Stream of the word generated by a substitution.
#[derive(Debug, Clone)]
pub struct Generated {
    phi: Morphism,
    coding: Morphism,
    fertile: Vec<bool>,
    buffer: Word,
    expanded: usize,
    emitted: usize,
}

impl Iterator for Generated {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        loop {
            while self.emitted >= self.buffer.len() {
                let x = *self.buffer.get(self.expanded)?;
                self.expanded += 1;
                let fertile = &self.fertile;
                self.buffer.extend(self.phi.images[x].iter().copied().filter(|&y| fertile[y]));
            }
            let x = self.buffer[self.emitted];
            self.emitted += 1;
            if let Some(&y) = self.coding.images[x].first() {
                return Some(y);
            }
        }
    }
}

/// Whether `h(φ^ω(c))` is infinite.
///
/// With `φ(c) = c·y`, the fixed point is `c·y·φ(y)·φ²(y)···`, so the
/// generated word is infinite iff some non-erased letter occurs in `φ^k(y)`
/// for infinitely many `k`, i.e. iff in the graph `x → letters of φ(x)` a
/// non-erased letter can be reached from `y` through a cycle.
fn generates_infinite_word(phi: &Morphism, coding: &Morphism, seed: Letter) -> bool {
    let n = phi.domain.len();
    let reach_from = |roots: &[Letter]| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack: Vec<Letter> = roots.to_vec();
        for &r in roots {
            seen[r] = true;
        }
        while let Some(x) = stack.pop() {
            for &z in &phi.images[x] {
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        seen
    };
    let tail = &phi.images[seed][1..];
    let from_tail = reach_from(tail);
    let on_cycle: Vec<Letter> = (0..n)
        .filter(|&x| from_tail[x] && reach_from(&phi.images[x])[x])
        .collect();
    let pumped = reach_from(&on_cycle);
    (0..n).any(|x| pumped[x] && !coding.images[x].is_empty())
}

/// Morphism of a complete automaton, with letters for its states and a fresh
/// letter `α`: `α ↦ α s` and `k ↦ δ(k, σ_1)···δ(k, σ_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMorphism {
    pub morphism: Morphism,
    pub alpha: Letter,
    /// Letter of the materialized dead state, when the automaton was partial.
    pub dead: Option<Letter>,
}

impl StateMorphism {
    /// States reached by the words of `Σ*` in shortlex order, starting with
    /// `δ(s, ε) = s`: the fixed point from `α` with `α` dropped. `None`
    /// stands for the dead state.
    pub fn state_stream(&self) -> impl Iterator<Item = Option<StateId>> + '_ {
        let dead = self.dead;
        self.morphism
            .fixed_point(self.alpha)
            .expect("α ↦ α s is prolongable")
            .skip(1)
            .map(move |x| if Some(x) == dead { None } else { Some(x) })
    }
}

/// Builds the state morphism of an automaton; a partial automaton is
/// completed with a dead letter first. Letter `q` stands for state `q`.
pub fn state_morphism<T, F>(automaton: &T, name: F) -> StateMorphism
where
    T: TransitionTable + ?Sized,
    F: Fn(StateId) -> String,
{
    let n = automaton.num_states();
    let k = automaton.alphabet().len();
    let dead = (!automaton.is_complete()).then_some(n);
    let alpha = n + usize::from(dead.is_some());
    let mut names: Vec<String> = (0..n).map(&name).collect();
    if dead.is_some() {
        names.push(String::from(DEAD_NAME));
    }
    names.push(format!("{FRESH_PREFIX}alpha"));
    let letters = OrderedAlphabet::new(names.iter().cloned())
        .unwrap_or_else(|_| OrderedAlphabet::new((0..alpha + 1).map(|i| format!("{FRESH_PREFIX}s{i}"))).unwrap());
    let mut images: Vec<Word> = (0..n)
        .map(|q| (0..k).map(|a| automaton.next(q, a).unwrap_or(n)).collect())
        .collect();
    if let Some(d) = dead {
        images.push(vec![d; k]);
    }
    images.push(vec![alpha, automaton.start()]);
    let morphism = Morphism::endomorphism(letters, images).expect("images are states");
    StateMorphism { morphism, alpha, dead }
}

/// What a letter of a [`StateSubstitution`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StateLetter {
    Alpha,
    /// Pair (language state, machine state); `None` is the dead state.
    Pair(Option<StateId>, Option<StateId>),
}

/// A substitution over `(K × K') ∪ {α}` together with the meaning of its
/// letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSubstitution {
    pub substitution: Substitution,
    pub letters: Vec<StateLetter>,
}

impl StateSubstitution {
    pub fn letter_of(&self, meaning: StateLetter) -> Option<Letter> {
        self.letters.iter().position(|&l| l == meaning)
    }
}

/// The substitution `(φ_M, h, α)` generating the sequence of `machine` on
/// the numeration system of `language`.
///
/// `φ_M` is the state morphism of the reachable product automaton
/// `(k, k') ↦ (δ(k, σ), δ'(k', σ))`, and the weak coding sends `α` and every
/// pair with `k` non-final to `ε`, and `(k, k')` to `τ(k')` otherwise.
pub fn substitution_from_automata(language: &Dfa, machine: &Dfao) -> Result<StateSubstitution> {
    let product = ProductAutomaton::new(language, machine)?;
    let sm = state_morphism(&product, |q| product.pair_name(q, language, machine));
    debug_assert!(sm.dead.is_none());
    let n = product.num_states();
    let mut coding: Vec<Word> = Vec::with_capacity(n + 1);
    for q in 0..n {
        if product.is_accepting(q) {
            let out = product.output(q).ok_or(Error::UndefinedOnLanguage)?;
            coding.push(vec![out]);
        } else {
            coding.push(Vec::new());
        }
    }
    coding.push(Vec::new());
    let h = Morphism::new(sm.morphism.domain().clone(), machine.outputs().clone(), coding)?;
    let mut letters: Vec<StateLetter> =
        product.pairs().iter().map(|&(p, r)| StateLetter::Pair(p, r)).collect();
    letters.push(StateLetter::Alpha);
    let substitution = Substitution::new(sm.morphism, h, sm.alpha)?;
    Ok(StateSubstitution { substitution, letters })
}

/// Substitution generating an automatic sequence.
pub fn substitution_of(u: &AutomaticSequence) -> Result<StateSubstitution> {
    substitution_from_automata(u.system().language(), u.machine())
}

/// The canonical substitution: [`substitution_from_automata`] applied to the
/// minimal automaton of `L` and a reduced, accessible copy of the machine.
pub fn canonical_substitution(language: &Dfa, machine: &Dfao) -> Result<StateSubstitution> {
    if language.alphabet() != machine.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    substitution_from_automata(&language.minimize(), &machine.reduce())
}

/// Numeration system and DFAO read off a prolongable morphism.
///
/// The automaton has the letters of `φ` as states, start `seed`, every state
/// final, and `δ(x, σ_i)` = the `i`-th letter of `φ(x)` (undefined beyond
/// `|φ(x)|`), over a fresh alphabet `a < b < ...` of size `max |φ(x)|`. The
/// DFAO is the same automaton with output `τ(x) = x`; its sequence is
/// `seed · φ(seed) · φ²(seed) ···`.
pub fn system_from_morphism(phi: &Morphism, seed: Letter) -> Result<(NumerationSystem, Dfao)> {
    if !phi.is_prolongable(seed) {
        return Err(Error::NotProlongable(phi.domain.symbol(seed).into()));
    }
    if let Some(x) = (0..phi.domain.len()).find(|&x| phi.images[x].is_empty()) {
        return Err(Error::EmptyImage(phi.domain.symbol(x).into()));
    }
    let sigma = OrderedAlphabet::latin(phi.max_image_len());
    let k = sigma.len();
    let n = phi.domain.len();
    let mut trans = vec![None; n * k];
    for x in 0..n {
        for (i, &y) in phi.images[x].iter().enumerate() {
            trans[x * k + i] = Some(y);
        }
    }
    let names: Vec<String> = phi.domain.symbols().to_vec();
    let dfa = Dfa::from_parts(sigma.clone(), names.clone(), seed, vec![true; n], trans.clone())?;
    let machine = Dfao::from_parts(
        sigma,
        phi.domain.clone(),
        names,
        seed,
        (0..n).map(Some).collect(),
        trans,
    )?
    .accessible();
    Ok((NumerationSystem::new(&dfa)?, machine))
}

/// Target of a letter under a map between substitutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterImage {
    /// A letter of the target's `Σ'`.
    Sigma(Letter),
    /// A letter of the target's `Δ'`.
    Delta(Letter),
}

/// A letter map `m : Σ ∪ Δ → Σ' ∪ Δ'`, given on `Σ` and on `Δ` separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterMap {
    pub sigma: Vec<LetterImage>,
    pub delta: Vec<LetterImage>,
}

/// Whether `m` is a morphism of substitutions `T → T'`: surjective with
/// `m(c) = c'`, `m(Σ) = Σ'`, `m(Δ) = Δ'`, `m(φ(σ)) = φ'(m(σ))` and
/// `m(h(σ)) = h'(m(σ))` for every `σ ∈ Σ`.
pub fn is_substitution_morphism(m: &LetterMap, t: &Substitution, target: &Substitution) -> Result<bool> {
    let sigma_len = t.phi.domain.len();
    let delta_len = t.coding.codomain.len();
    if m.sigma.len() != sigma_len {
        return Err(Error::MapNotTotal(format!("{} of {sigma_len} letters of Σ mapped", m.sigma.len())));
    }
    if m.delta.len() != delta_len {
        return Err(Error::MapNotTotal(format!("{} of {delta_len} letters of Δ mapped", m.delta.len())));
    }
    let sigma_map: Option<Vec<Letter>> = m
        .sigma
        .iter()
        .map(|img| match img {
            LetterImage::Sigma(x) if *x < target.phi.domain.len() => Some(*x),
            _ => None,
        })
        .collect();
    let delta_map: Option<Vec<Letter>> = m
        .delta
        .iter()
        .map(|img| match img {
            LetterImage::Delta(x) if *x < target.coding.codomain.len() => Some(*x),
            _ => None,
        })
        .collect();
    let (Some(sigma_map), Some(delta_map)) = (sigma_map, delta_map) else {
        return Ok(false);
    };
    let onto = |map: &[Letter], size: usize| map.iter().copied().collect::<BTreeSet<_>>().len() == size;
    if !onto(&sigma_map, target.phi.domain.len()) || !onto(&delta_map, target.coding.codomain.len()) {
        return Ok(false);
    }
    if sigma_map[t.seed] != target.seed {
        return Ok(false);
    }
    let commutes = (0..sigma_len).all(|s| {
        let mapped_phi: Word = t.phi.images[s].iter().map(|&x| sigma_map[x]).collect();
        let mapped_h: Word = t.coding.images[s].iter().map(|&x| delta_map[x]).collect();
        mapped_phi == target.phi.images[sigma_map[s]] && mapped_h == target.coding.images[sigma_map[s]]
    });
    Ok(commutes)
}

/// The substitution built from `(language, machine)`, the canonical one, and
/// the projection between them sending `(k, k')` to (class of `k` in the
/// minimal automaton, class of `k'` in the reduced machine).
pub fn canonical_projection(
    language: &Dfa,
    machine: &Dfao,
) -> Result<(StateSubstitution, StateSubstitution, LetterMap)> {
    let full = substitution_from_automata(language, machine)?;
    let (min, lmap) = language.minimize_with_map();
    let (red, mmap) = machine.reduce_with_map();
    let canonical = substitution_from_automata(&min, &red)?;
    let mut sigma = Vec::with_capacity(full.letters.len());
    for &letter in &full.letters {
        let image = match letter {
            StateLetter::Alpha => StateLetter::Alpha,
            StateLetter::Pair(p, r) => StateLetter::Pair(p.and_then(|p| lmap[p]), r.and_then(|r| mmap[r])),
        };
        let target = canonical
            .letter_of(image)
            .ok_or_else(|| Error::MapNotTotal(String::from("projected pair is not reachable")))?;
        sigma.push(LetterImage::Sigma(target));
    }
    let delta = (0..machine.outputs().len()).map(LetterImage::Delta).collect();
    Ok((full, canonical, LetterMap { sigma, delta }))
}

//! S-automatic sequences: `u_{n+1} = τ(δ(s, rep_S(n)))`.
//!
//! Positions are reported 0-based throughout: the term at index `n` is the
//! output on `rep_S(n)`, i.e. `u_{n+1}` in 1-based notation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::automaton::{Dfa, Dfao, Output, ProductAutomaton, StateId, TransitionTable};
use crate::numeration::{NumerationSystem, Rank, ShortlexWords};
use crate::refine::coarsest_partition;
use crate::{Error, Result};

/// A numeration system together with a DFAO defined on every word of its
/// language.
#[derive(Debug, Clone)]
pub struct AutomaticSequence {
    system: NumerationSystem,
    machine: Dfao,
}

impl AutomaticSequence {
    /// Fails if the alphabets differ, or if some word of `L` drives the
    /// machine into a missing transition or a `⊥` state.
    pub fn new(system: NumerationSystem, machine: Dfao) -> Result<Self> {
        let product = ProductAutomaton::new(system.language(), &machine)?;
        let undefined = (0..product.num_states())
            .any(|q| product.is_accepting(q) && product.output(q).is_none());
        if undefined {
            return Err(Error::UndefinedOnLanguage);
        }
        Ok(Self { system, machine })
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.system
    }

    pub fn machine(&self) -> &Dfao {
        &self.machine
    }

    pub fn outputs(&self) -> &OrderedAlphabet {
        self.machine.outputs()
    }

    /// Output on a word of `L`.
    fn output_on(&self, word: &[Letter]) -> usize {
        self.machine.eval(word).expect("machine is defined on L")
    }

    /// The term at 0-based index `n`.
    pub fn term(&self, n: &Rank) -> usize {
        self.output_on(&self.system.rep(n))
    }

    /// Lazy stream of all terms from index 0.
    pub fn terms(&self) -> Terms<'_> {
        self.terms_from(&Rank::default())
    }

    pub fn terms_from(&self, from: &Rank) -> Terms<'_> {
        Terms { words: self.system.enumerate(from), machine: &self.machine }
    }

    /// The fiber `{rep(n) : u_n = a}` as a minimal DFA: the machine with
    /// finals `τ⁻¹(a)`, intersected with `L`.
    pub fn fiber(&self, output: usize) -> Result<Dfa> {
        if output >= self.outputs().len() {
            return Err(Error::InvalidOutput { output, size: self.outputs().len() });
        }
        Ok(self.machine.preimage(output).intersection(self.system.language())?.minimize())
    }

    pub fn fiber_of_symbol(&self, symbol: &str) -> Result<Dfa> {
        let a = self.outputs().letter(symbol).ok_or_else(|| Error::UnknownOutput(symbol.into()))?;
        self.fiber(a)
    }

    /// Partition of the prefixes `w ∈ Σ*` into classes with the same kernel
    /// subsequence `n ↦ u_{val(w z_n)}`.
    ///
    /// Prefixes are first mapped to pair states of (minimal automaton of `L`)
    /// × (reduced machine), both completed; pair states are then merged when
    /// they agree on every continuation `z` on whether `wz ∈ L` and, if so, on
    /// the output. Each resulting class yields a single subsequence.
    pub fn kernel(&self) -> Kernel {
        let language = self.system.language().minimize().complete();
        let machine = self.machine.reduce().complete();
        let product = ProductAutomaton::new(&language, &machine).expect("alphabets match");
        let n = product.num_states();
        let k = product.alphabet().len();
        let trans: Vec<StateId> =
            (0..n).flat_map(|q| (0..k).map(move |a| (q, a))).map(|(q, a)| product.next(q, a).unwrap()).collect();
        let labels: Vec<Option<Output>> = (0..n)
            .map(|q| product.is_accepting(q).then(|| product.output(q)))
            .collect();
        let partition = coarsest_partition(n, k, &trans, &labels);

        let words = shortlex_least_words(&product);
        let live = language.coaccessible_states();
        let mut classes: Vec<KernelClass> = Vec::new();
        let mut class_index = BTreeMap::new();
        let mut class_of_state = vec![0; n];
        for q in 0..n {
            let id = *class_index.entry(partition[q]).or_insert_with(|| {
                let pair = product.pair(q);
                let l = pair.0.expect("complete automaton");
                let continuations = if !live[l] {
                    Continuations::Empty
                } else if language.with_start(l).is_infinite() {
                    Continuations::Infinite
                } else {
                    Continuations::Finite
                };
                classes.push(KernelClass {
                    id: classes.len(),
                    representative: words[q].clone(),
                    pair,
                    continuations,
                });
                classes.len() - 1
            });
            class_of_state[q] = id;
        }
        let bound = language.num_states() * machine.num_states();
        Kernel { classes, product, class_of_state, bound }
    }

    /// The subsequence `n ↦ u_{val(w z_n)}` where `K_w = {w z_0 < w z_1 < ...}`
    /// lists the words of `L` with prefix `w`. Empty if `K_w` is.
    pub fn subsequence_of_prefix(&self, prefix: &[Letter]) -> Subsequence<'_> {
        let language = self.system.language();
        let inner = language.run(prefix).map(|q| {
            let state = self.machine.run(prefix);
            (ShortlexWords::new(language, q), state)
        });
        Subsequence { inner, machine: &self.machine }
    }

    pub fn subsequence(&self, class: &KernelClass) -> Subsequence<'_> {
        self.subsequence_of_prefix(&class.representative)
    }
}

/// Stream of the terms of an [`AutomaticSequence`].
#[derive(Debug, Clone)]
pub struct Terms<'a> {
    words: ShortlexWords<'a>,
    machine: &'a Dfao,
}

impl Iterator for Terms<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let word = self.words.next()?;
        Some(self.machine.eval(&word).expect("machine is defined on L"))
    }
}

/// Stream of a kernel subsequence.
#[derive(Debug, Clone)]
pub struct Subsequence<'a> {
    inner: Option<(ShortlexWords<'a>, Option<StateId>)>,
    machine: &'a Dfao,
}

impl Iterator for Subsequence<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let (words, state) = self.inner.as_mut()?;
        let z = words.next()?;
        let q = state.and_then(|q| self.machine.run_from(q, &z));
        Some(q.and_then(|q| self.machine.output(q)).expect("machine is defined on L"))
    }
}

/// Whether the set `K_w` of continuations is empty, finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuations {
    Empty,
    Finite,
    Infinite,
}

/// One class of the kernel partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelClass {
    pub id: usize,
    /// Shortlex-least prefix in the class.
    pub representative: Word,
    /// Pair state (minimal `L` automaton, reduced machine) of the
    /// representative, indices into the completed automata.
    pub pair: (Option<StateId>, Option<StateId>),
    pub continuations: Continuations,
}

/// Result of [`AutomaticSequence::kernel`].
#[derive(Debug, Clone)]
pub struct Kernel {
    classes: Vec<KernelClass>,
    product: ProductAutomaton,
    class_of_state: Vec<usize>,
    bound: usize,
}

impl Kernel {
    pub fn classes(&self) -> &[KernelClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `#K_L · #K'`: states of the completed minimal automaton of `L` times
    /// states of the completed reduced machine.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of reachable pair states before merging.
    pub fn pair_states(&self) -> usize {
        self.product.num_states()
    }

    /// Class of the prefix `w`.
    pub fn class_of(&self, prefix: &[Letter]) -> &KernelClass {
        let q = self.product.run(prefix).expect("product is complete");
        &self.classes[self.class_of_state[q]]
    }
}

/// Shortlex-least word reaching each state of a complete automaton whose
/// states are numbered in BFS order.
fn shortlex_least_words<T: TransitionTable>(t: &T) -> Vec<Word> {
    let n = t.num_states();
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[t.start()] = Some(Vec::new());
    let mut queue = alloc::collections::VecDeque::from([t.start()]);
    while let Some(q) = queue.pop_front() {
        for a in 0..t.alphabet().len() {
            if let Some(r) = t.next(q, a) {
                if words[r].is_none() {
                    let mut w = words[q].clone().unwrap();
                    w.push(a);
                    words[r] = Some(w);
                    queue.push_back(r);
                }
            }
        }
    }
    words.into_iter().map(|w| w.unwrap_or_default()).collect()
}

/// Rebuilds a DFAO from the fibers of a sequence.
///
/// `fibers` lists `(output, DFA of its fiber)`; outputs without an entry have
/// an empty fiber. The fibers must be pairwise disjoint and cover `L`. The
/// result runs all fiber automata in parallel; a tuple state outputs the
/// unique `a` whose fiber automaton accepts there, and `⊥` when there is no
/// such `a` (those states are never reached by a word of `L`).
pub fn dfao_from_fibers(
    system: &NumerationSystem,
    outputs: &OrderedAlphabet,
    fibers: &[(usize, Dfa)],
) -> Result<Dfao> {
    let language = system.language();
    for (out, fiber) in fibers {
        if *out >= outputs.len() {
            return Err(Error::InvalidOutput { output: *out, size: outputs.len() });
        }
        if !fiber.difference(language)?.is_empty() {
            return Err(Error::FiberOutsideLanguage);
        }
    }
    for (i, (a, fa)) in fibers.iter().enumerate() {
        for (b, fb) in &fibers[i + 1..] {
            if a == b || !fa.intersection(fb)?.is_empty() {
                return Err(Error::FibersOverlap(outputs.symbol(*a).into(), outputs.symbol(*b).into()));
            }
        }
    }
    let mut union = Dfa::from_edges(language.alphabet().clone(), 1, 0, &[], &[])?;
    for (_, f) in fibers {
        union = union.union(f)?;
    }
    if !union.equivalent(language)? {
        return Err(Error::FibersDoNotCover);
    }

    let k = language.alphabet().len();
    let mut ids: BTreeMap<Vec<Option<StateId>>, StateId> = BTreeMap::new();
    let start: Vec<Option<StateId>> = fibers.iter().map(|(_, f)| Some(f.start())).collect();
    let mut tuples = vec![start.clone()];
    ids.insert(start, 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < tuples.len() {
        for a in 0..k {
            let next: Vec<Option<StateId>> = tuples[i]
                .iter()
                .zip(fibers)
                .map(|(q, (_, f))| q.and_then(|q| f.next(q, a)))
                .collect();
            let fresh = ids.len();
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                tuples.push(next);
                fresh
            });
            trans.push(Some(id));
        }
        i += 1;
    }
    let output: Vec<Output> = tuples
        .iter()
        .map(|t| {
            let mut accepting = t
                .iter()
                .zip(fibers)
                .filter(|(q, (_, f))| q.is_some_and(|q| f.is_final(q)))
                .map(|(_, (out, _))| *out);
            match (accepting.next(), accepting.next()) {
                (Some(out), None) => Some(out),
                _ => None,
            }
        })
        .collect();
    let names = (0..tuples.len()).map(|i| format!("q{i}")).collect();
    Dfao::from_parts(language.alphabet().clone(), outputs.clone(), names, 0, output, trans)
}

/// Limits for [`dfao_from_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSearch {
    /// Number of leading terms compared when telling subsequences apart.
    pub horizon: usize,
    /// Give up once this many distinct subsequences have been found.
    pub max_states: usize,
}

impl Default for KernelSearch {
    fn default() -> Self {
        Self { horizon: 64, max_states: 256 }
    }
}

/// Builds a DFAO for a sequence given only as a term oracle (`term(n)` is the
/// output index at rank `n`), by exploring the kernel.
///
/// States are the subsequences `q_w = (n ↦ u_{val(w z_n)})`, explored from
/// `q_ε` with `δ(q_w, σ) = q_{wσ}` and `τ(q_w) = u_{val(w)}` for `w ∈ L`
/// (`⊥` otherwise). Two prefixes are identified when they reach the same
/// state of the minimal automaton of `L` and their subsequences agree on
/// the first `search.horizon` terms. Fails with
/// [`Error::NotRecognizedWithinBound`] when more than `search.max_states`
/// subsequences appear.
pub fn dfao_from_kernel<F>(
    system: &NumerationSystem,
    outputs: &OrderedAlphabet,
    mut term: F,
    search: KernelSearch,
) -> Result<Dfao>
where
    F: FnMut(&Rank) -> usize,
{
    let language = system.language().minimize().complete();
    let k = language.alphabet().len();

    let mut signature = |prefix: &[Letter], state: StateId| -> Result<(StateId, Vec<usize>)> {
        let mut terms = Vec::with_capacity(search.horizon);
        let mut word: Word = prefix.to_vec();
        for z in ShortlexWords::new(&language, state).take(search.horizon) {
            word.truncate(prefix.len());
            word.extend_from_slice(&z);
            let out = term(&system.val(&word)?);
            if out >= outputs.len() {
                return Err(Error::InvalidOutput { output: out, size: outputs.len() });
            }
            terms.push(out);
        }
        Ok((state, terms))
    };

    let mut ids: BTreeMap<(StateId, Vec<usize>), StateId> = BTreeMap::new();
    let root = signature(&[], language.start())?;
    let mut states: Vec<(Word, StateId, Output)> = Vec::new();
    let output_of = |sig: &(StateId, Vec<usize>)| {
        if language.is_final(sig.0) {
            sig.1.first().copied()
        } else {
            None
        }
    };
    states.push((Vec::new(), root.0, output_of(&root)));
    ids.insert(root, 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (prefix, l, _) = states[i].clone();
        for a in 0..k {
            let mut w = prefix.clone();
            w.push(a);
            let l2 = language.next(l, a).expect("complete automaton");
            let sig = signature(&w, l2)?;
            let id = match ids.get(&sig) {
                Some(&id) => id,
                None => {
                    if states.len() >= search.max_states {
                        return Err(Error::NotRecognizedWithinBound { states: states.len() + 1 });
                    }
                    let id = states.len();
                    states.push((w, sig.0, output_of(&sig)));
                    ids.insert(sig, id);
                    id
                }
            };
            trans.push(Some(id));
        }
        i += 1;
    }
    let names: Vec<String> = (0..states.len()).map(|i| format!("q{i}")).collect();
    let output = states.iter().map(|s| s.2).collect();
    Dfao::from_parts(language.alphabet().clone(), outputs.clone(), names, 0, output, trans)
}

/// Occurrences of a factor in a prefix of a stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Occurrences {
    /// 0-based start positions.
    pub positions: Vec<usize>,
    /// Differences between consecutive positions.
    pub gaps: Vec<usize>,
}

impl Occurrences {
    pub fn max_gap(&self) -> Option<usize> {
        self.gaps.iter().copied().max()
    }
}

/// Start positions of `factor` within the first `horizon` terms of `stream`,
/// and the gaps between consecutive occurrences.
pub fn occurrence_gaps<I>(stream: I, factor: &[usize], horizon: usize) -> Occurrences
where
    I: IntoIterator<Item = usize>,
{
    let mut occ = Occurrences::default();
    if factor.is_empty() {
        return occ;
    }
    let mut window: alloc::collections::VecDeque<usize> = alloc::collections::VecDeque::new();
    for (i, x) in stream.into_iter().take(horizon).enumerate() {
        window.push_back(x);
        if window.len() > factor.len() {
            window.pop_front();
        }
        if window.len() == factor.len() && window.iter().eq(factor.iter()) {
            let pos = i + 1 - factor.len();
            if let Some(&last) = occ.positions.last() {
                occ.gaps.push(pos - last);
            }
            occ.positions.push(pos);
        }
    }
    occ
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use alloc::string::String;
    use num_bigint::BigUint;

    const TEACHING: &str = "01023031200231010123023031203120231002310123010123";

    fn teaching() -> AutomaticSequence {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        AutomaticSequence::new(s, catalog::teaching_dfao()).unwrap()
    }

    fn thue_morse() -> AutomaticSequence {
        let s = NumerationSystem::new(&catalog::binary()).unwrap();
        AutomaticSequence::new(s, catalog::thue_morse_dfao()).unwrap()
    }

    fn render(u: &AutomaticSequence, terms: impl Iterator<Item = usize>) -> String {
        terms.map(|t| u.outputs().symbol(t)).collect()
    }

    #[test]
    fn teaching_prefix() {
        let u = teaching();
        assert_eq!(render(&u, u.terms().take(50)), TEACHING);
        assert_eq!(u.term(&BigUint::from(4u8)), 3);
    }

    #[test]
    fn thue_morse_prefix() {
        let u = thue_morse();
        for (n, t) in u.terms().take(1 << 12).enumerate() {
            assert_eq!(t, (n.count_ones() % 2) as usize);
        }
    }

    #[test]
    fn constant_machine_gives_constant_stream() {
        let s = NumerationSystem::new(&catalog::fibonacci()).unwrap();
        let m = Dfao::constant(s.alphabet().clone(), OrderedAlphabet::new(["7"]).unwrap(), 0).unwrap();
        let u = AutomaticSequence::new(s, m).unwrap();
        assert!(u.terms().take(200).all(|t| t == 0));
        let fiber = u.fiber(0).unwrap();
        assert!(fiber.equivalent(u.system().language()).unwrap());
    }

    #[test]
    fn rejects_machine_undefined_on_language() {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        let ab = s.alphabet().clone();
        let partial = Dfao::from_edges(ab, OrderedAlphabet::new(["0"]).unwrap(), 0, vec![Some(0)], &[(0, 0, 0)])
            .unwrap();
        assert_eq!(AutomaticSequence::new(s, partial).unwrap_err(), Error::UndefinedOnLanguage);
    }

    #[test]
    fn teaching_zero_fiber() {
        let u = teaching();
        let f0 = u.fiber(0).unwrap();
        assert!(f0.equivalent(&catalog::teaching_zero_fiber()).unwrap());
        assert!(matches!(u.fiber(9), Err(Error::InvalidOutput { .. })));
        assert!(matches!(u.fiber_of_symbol("x"), Err(Error::UnknownOutput(_))));
    }

    #[test]
    fn fibers_round_trip() {
        let u = teaching();
        let fibers: Vec<(usize, Dfa)> = (0..4).map(|a| (a, u.fiber(a).unwrap())).collect();
        let m = dfao_from_fibers(u.system(), u.outputs(), &fibers).unwrap();
        let v = AutomaticSequence::new(u.system().clone(), m).unwrap();
        assert_eq!(render(&v, v.terms().take(50)), TEACHING);
    }

    #[test]
    fn fibers_must_partition() {
        let u = teaching();
        let f0 = u.fiber(0).unwrap();
        let err = dfao_from_fibers(u.system(), u.outputs(), &[(0, f0.clone()), (1, f0.clone())]).unwrap_err();
        assert_eq!(err, Error::FibersOverlap("0".into(), "1".into()));
        let err = dfao_from_fibers(u.system(), u.outputs(), &[(0, f0)]).unwrap_err();
        assert_eq!(err, Error::FibersDoNotCover);
        let all = Dfa::universal(u.system().alphabet().clone());
        let err = dfao_from_fibers(u.system(), u.outputs(), &[(0, all)]).unwrap_err();
        assert_eq!(err, Error::FiberOutsideLanguage);
    }

    #[test]
    fn single_fiber_gives_constant_machine() {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        let outs = OrderedAlphabet::new(["x"]).unwrap();
        let m = dfao_from_fibers(&s, &outs, &[(0, s.language().clone())]).unwrap();
        let u = AutomaticSequence::new(s, m).unwrap();
        assert!(u.terms().take(100).all(|t| t == 0));
        // the state after `b` differs from the start only on words outside L
        let reduced = u.machine().reduce();
        assert_eq!(reduced.num_states(), 2);
        assert!((0..2).all(|q| reduced.output(q) == Some(0)));
    }

    #[test]
    fn thue_morse_fibers_reduce_to_two_states() {
        let u = thue_morse();
        let fibers: Vec<(usize, Dfa)> = (0..2).map(|a| (a, u.fiber(a).unwrap())).collect();
        let m = dfao_from_fibers(u.system(), u.outputs(), &fibers).unwrap();
        let reduced = m.reduce();
        // start, even and odd: the start state is the only one without a
        // 0-transition inside L, so it stays apart from the even state
        let live = (0..reduced.num_states()).filter(|&q| reduced.output(q).is_some()).count();
        assert_eq!(live, 3);
        let v = AutomaticSequence::new(u.system().clone(), reduced).unwrap();
        assert!(v.terms().take(4096).eq(u.terms().take(4096)));
    }

    #[test]
    fn kernel_of_b_is_constant_zero() {
        let u = teaching();
        let sub: Vec<usize> = u.subsequence_of_prefix(&[1]).take(30).collect();
        assert_eq!(sub, vec![0; 30]);
        let kernel = u.kernel();
        assert!(kernel.len() <= kernel.bound());
        let class = kernel.class_of(&[1]);
        assert!(u.subsequence(class).take(30).all(|t| t == 0));
    }

    #[test]
    fn kernel_of_empty_prefix_is_the_sequence() {
        let u = teaching();
        let kernel = u.kernel();
        let first = kernel.class_of(&[]);
        assert_eq!(first.representative, Vec::<Letter>::new());
        assert!(u.subsequence(first).take(500).eq(u.terms().take(500)));
    }

    #[test]
    fn kernel_flags_empty_continuations() {
        let u = teaching();
        let kernel = u.kernel();
        // "ba" has no continuation in a*b*
        assert_eq!(kernel.class_of(&[1, 0]).continuations, Continuations::Empty);
        assert_eq!(u.subsequence_of_prefix(&[1, 0]).count(), 0);
        assert_eq!(kernel.class_of(&[0]).continuations, Continuations::Infinite);
    }

    #[test]
    fn kernel_reconstruction_of_constant() {
        let outs = OrderedAlphabet::new(["0"]).unwrap();
        let full = Dfa::universal(OrderedAlphabet::new(["a", "b"]).unwrap());
        let s = NumerationSystem::new(&full).unwrap();
        let m = dfao_from_kernel(&s, &outs, |_| 0, KernelSearch::default()).unwrap();
        assert_eq!(m.num_states(), 1);
        // on a*b* the states also track the automaton of L
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        let m = dfao_from_kernel(&s, &outs, |_| 0, KernelSearch::default()).unwrap();
        assert_eq!(m.num_states(), 3);
    }

    #[test]
    fn kernel_reconstruction_respects_state_limit() {
        let s = NumerationSystem::new(&catalog::a_star_b_star()).unwrap();
        let u = teaching();
        let err = dfao_from_kernel(&s, u.outputs(), |n| u.term(n), KernelSearch { horizon: 16, max_states: 3 })
            .unwrap_err();
        assert!(matches!(err, Error::NotRecognizedWithinBound { .. }));
    }

    #[test]
    fn gaps_basic() {
        let occ = occurrence_gaps([0, 0, 1, 0, 0, 0, 1], &[0, 0], 7);
        assert_eq!(occ.positions, vec![0, 3, 4]);
        assert_eq!(occ.gaps, vec![3, 1]);
        assert!(occurrence_gaps([1, 2, 3], &[4], 3).positions.is_empty());
    }

    #[test]
    fn thue_morse_is_cube_free_on_zeros() {
        let u = thue_morse();
        assert!(occurrence_gaps(u.terms(), &[0, 0, 0], 1 << 14).positions.is_empty());
    }
}

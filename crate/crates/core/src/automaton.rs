//! Deterministic automata over ordered alphabets.
//!
//! Automata are *partial*: a missing transition leads to an implicit dead
//! state. [`Dfa::complete`] and [`Dfao::complete`] materialize it when a
//! construction needs a total transition function. Constructed automata
//! number their states in breadth-first order from the start state, visiting
//! letters in alphabet order, and name them `q0, q1, ...`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::error::NotInLanguage;
use crate::refine::coarsest_partition;
use crate::{Error, Result, BOTTOM_TOKEN, FRESH_PREFIX};

pub type StateId = usize;

/// Output of a DFAO state: an index into the output alphabet, or `None` for
/// the placeholder `⊥` carried by states whose output does not matter.
pub type Output = Option<usize>;

/// Name given to a materialized dead state.
pub const DEAD_NAME: &str = "%dead";

/// Read access to a deterministic, possibly partial, transition function.
pub trait TransitionTable {
    fn alphabet(&self) -> &OrderedAlphabet;
    fn num_states(&self) -> usize;
    fn start(&self) -> StateId;
    fn next(&self, state: StateId, letter: Letter) -> Option<StateId>;

    fn run_from(&self, state: StateId, word: &[Letter]) -> Option<StateId> {
        word.iter().try_fold(state, |q, &a| self.next(q, a))
    }

    /// State reached from the start state, `None` if the run falls into the
    /// dead state.
    fn run(&self, word: &[Letter]) -> Option<StateId> {
        self.run_from(self.start(), word)
    }

    /// Whether every transition is defined.
    fn is_complete(&self) -> bool {
        let k = self.alphabet().len();
        (0..self.num_states()).all(|q| (0..k).all(|a| self.next(q, a).is_some()))
    }
}

/// Breadth-first order of the states reachable from `start`. Returns the
/// visit order and the map old id -> new id.
pub(crate) fn bfs_order<T: TransitionTable + ?Sized>(t: &T) -> (Vec<StateId>, Vec<Option<StateId>>) {
    let mut index = vec![None; t.num_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    index[t.start()] = Some(0);
    order.push(t.start());
    queue.push_back(t.start());
    while let Some(q) = queue.pop_front() {
        for a in 0..t.alphabet().len() {
            if let Some(r) = t.next(q, a) {
                if index[r].is_none() {
                    index[r] = Some(order.len());
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
    }
    (order, index)
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

fn check_table(
    alphabet: &OrderedAlphabet,
    names: &[String],
    start: StateId,
    trans: &[Option<StateId>],
) -> Result<()> {
    let n = names.len();
    if start >= n {
        return Err(Error::InvalidState { state: start, count: n });
    }
    if trans.len() != n * alphabet.len() {
        return Err(Error::InvalidState { state: trans.len() / alphabet.len().max(1), count: n });
    }
    if let Some(&state) = trans.iter().flatten().find(|&&t| t >= n) {
        return Err(Error::InvalidState { state, count: n });
    }
    Ok(())
}

fn edge_table(
    n: usize,
    k: usize,
    edges: &[(StateId, Letter, StateId)],
) -> Result<Vec<Option<StateId>>> {
    let mut trans = vec![None; n * k];
    for &(p, a, q) in edges {
        if p >= n || q >= n {
            return Err(Error::InvalidState { state: p.max(q), count: n });
        }
        if a >= k {
            return Err(Error::InvalidLetter { letter: a, size: k });
        }
        trans[p * k + a] = Some(q);
    }
    Ok(trans)
}

/// Deterministic finite automaton with final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: OrderedAlphabet,
    names: Vec<String>,
    start: StateId,
    finals: Vec<bool>,
    trans: Vec<Option<StateId>>,
}

impl TransitionTable for Dfa {
    fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }
    fn num_states(&self) -> usize {
        self.names.len()
    }
    fn start(&self) -> StateId {
        self.start
    }
    fn next(&self, state: StateId, letter: Letter) -> Option<StateId> {
        self.trans[state * self.alphabet.len() + letter]
    }
}

impl Dfa {
    /// Builds a DFA from a row-major transition table (`state * |Σ| + letter`).
    pub fn from_parts(
        alphabet: OrderedAlphabet,
        names: Vec<String>,
        start: StateId,
        finals: Vec<bool>,
        trans: Vec<Option<StateId>>,
    ) -> Result<Self> {
        check_table(&alphabet, &names, start, &trans)?;
        if finals.len() != names.len() {
            return Err(Error::InvalidState { state: finals.len(), count: names.len() });
        }
        Ok(Self { alphabet, names, start, finals, trans })
    }

    /// Builds a DFA with states `0..num_states` named `q0, q1, ...`.
    pub fn from_edges(
        alphabet: OrderedAlphabet,
        num_states: usize,
        start: StateId,
        finals: &[StateId],
        edges: &[(StateId, Letter, StateId)],
    ) -> Result<Self> {
        let trans = edge_table(num_states, alphabet.len(), edges)?;
        let mut flags = vec![false; num_states];
        for &f in finals {
            *flags
                .get_mut(f)
                .ok_or(Error::InvalidState { state: f, count: num_states })? = true;
        }
        Self::from_parts(alphabet, default_names(num_states), start, flags, trans)
    }

    /// Automaton accepting every word over `alphabet`.
    pub fn universal(alphabet: OrderedAlphabet) -> Self {
        let k = alphabet.len();
        Self {
            alphabet,
            names: default_names(1),
            start: 0,
            finals: vec![true],
            trans: vec![Some(0); k],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    /// Same automaton with another start state.
    pub fn with_start(&self, start: StateId) -> Self {
        assert!(start < self.num_states(), "state out of range");
        Self { start, ..self.clone() }
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.run(word).is_some_and(|q| self.finals[q])
    }

    /// Membership test reporting where the run fails.
    pub fn check_member(&self, word: &[Letter]) -> core::result::Result<(), NotInLanguage> {
        let mut q = self.start;
        for (pos, &a) in word.iter().enumerate() {
            q = self.next(q, a).ok_or(NotInLanguage::DeadAt(pos))?;
        }
        if self.finals[q] {
            Ok(())
        } else {
            Err(NotInLanguage::NonFinalEnd)
        }
    }

    fn select(&self, keep: &[StateId], index: &[Option<StateId>]) -> Self {
        let k = self.alphabet.len();
        let mut trans = Vec::with_capacity(keep.len() * k);
        for &q in keep {
            for a in 0..k {
                trans.push(self.next(q, a).and_then(|r| index[r]));
            }
        }
        Self {
            alphabet: self.alphabet.clone(),
            names: keep.iter().map(|&q| self.names[q].clone()).collect(),
            start: index[self.start].expect("start is kept"),
            finals: keep.iter().map(|&q| self.finals[q]).collect(),
            trans,
        }
    }

    /// Restriction to the states reachable from the start, in BFS order.
    pub fn accessible(&self) -> Self {
        let (order, index) = bfs_order(self);
        self.select(&order, &index)
    }

    /// States from which some final state is reachable.
    pub fn coaccessible_states(&self) -> Vec<bool> {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                if let Some(r) = self.next(q, a) {
                    preds[r].push(q);
                }
            }
        }
        let mut live = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Accessible and co-accessible part. The start state is always kept, so
    /// the trim of an empty language is a single non-final state.
    pub fn trim(&self) -> Self {
        let acc = self.accessible();
        let live = acc.coaccessible_states();
        let n = acc.num_states();
        let keep: Vec<StateId> = (0..n).filter(|&q| live[q] || q == acc.start).collect();
        let mut index = vec![None; n];
        for (i, &q) in keep.iter().enumerate() {
            index[q] = Some(i);
        }
        acc.select(&keep, &index)
    }

    /// Total version of the automaton; adds a non-final sink named `%dead`
    /// if some transition is missing.
    pub fn complete(&self) -> Self {
        if self.is_complete() {
            return self.clone();
        }
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut trans: Vec<Option<StateId>> =
            self.trans.iter().map(|t| Some(t.unwrap_or(n))).collect();
        trans.extend(core::iter::repeat_n(Some(n), k));
        let mut names = self.names.clone();
        names.push(String::from(DEAD_NAME));
        let mut finals = self.finals.clone();
        finals.push(false);
        Self { alphabet: self.alphabet.clone(), names, start: self.start, finals, trans }
    }

    /// Minimal partial DFA for the same language.
    pub fn minimize(&self) -> Self {
        self.minimize_with_map().0
    }

    /// Minimal partial DFA, together with the map sending every state of
    /// `self` to its class in the result (`None` for unreachable states and
    /// states equivalent to the dead state).
    pub fn minimize_with_map(&self) -> (Self, Vec<Option<StateId>>) {
        let k = self.alphabet.len();
        let (order, acc_index) = bfs_order(self);
        let n = order.len();
        let dead = n;
        let mut trans = Vec::with_capacity((n + 1) * k);
        for &q in &order {
            for a in 0..k {
                trans.push(self.next(q, a).map_or(dead, |r| acc_index[r].unwrap()));
            }
        }
        trans.extend(core::iter::repeat_n(dead, k));
        let mut labels: Vec<bool> = order.iter().map(|&q| self.finals[q]).collect();
        labels.push(false);
        let class = coarsest_partition(n + 1, k, &trans, &labels);
        let (quotient, class_index) = quotient(&class, &trans, class[dead], class[0], k);
        let finals = quotient
            .reps
            .iter()
            .map(|&r| labels[r])
            .collect();
        let dfa = Self {
            alphabet: self.alphabet.clone(),
            names: default_names(quotient.reps.len()),
            start: 0,
            finals,
            trans: quotient.trans,
        };
        let map = acc_index
            .iter()
            .map(|i| i.and_then(|i| class_index[class[i]]))
            .collect();
        (dfa, map)
    }

    /// Whether the accepted language is empty.
    pub fn is_empty(&self) -> bool {
        let (order, _) = bfs_order(self);
        !order.iter().any(|&q| self.finals[q])
    }

    /// Whether the accepted language is infinite: the trimmed automaton has a
    /// cycle.
    pub fn is_infinite(&self) -> bool {
        let t = self.trim();
        if t.is_empty() {
            return false;
        }
        has_cycle(&t)
    }

    /// Synchronous product of two automata over the same alphabet; a word is
    /// accepted iff `op(accepted by self, accepted by other)`. `op(false,
    /// false)` must be false.
    pub fn combine(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        debug_assert!(!op(false, false));
        let k = self.alphabet.len();
        let mut ids: BTreeMap<(Option<StateId>, Option<StateId>), StateId> = BTreeMap::new();
        let mut pairs = vec![(Some(self.start), Some(other.start))];
        ids.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let np = p.and_then(|p| self.next(p, a));
                let nq = q.and_then(|q| other.next(q, a));
                if np.is_none() && nq.is_none() {
                    trans.push(None);
                    continue;
                }
                let next = ids.len();
                let id = *ids.entry((np, nq)).or_insert_with(|| {
                    pairs.push((np, nq));
                    next
                });
                trans.push(Some(id));
            }
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| op(p.is_some_and(|p| self.finals[p]), q.is_some_and(|q| other.finals[q])))
            .collect();
        Ok(Self {
            alphabet: self.alphabet.clone(),
            names: default_names(pairs.len()),
            start: 0,
            finals,
            trans,
        })
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Self> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Self> {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Self> {
        self.combine(other, |a, b| a && !b)
    }

    /// Shortlex-least word accepted by exactly one of the two automata, or
    /// `None` if they recognize the same language.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Word>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let accept = |p: Option<StateId>, q: Option<StateId>| {
            p.is_some_and(|p| self.finals[p]) != q.is_some_and(|q| other.finals[q])
        };
        let mut seen = BTreeMap::new();
        let mut queue = VecDeque::new();
        let root = (Some(self.start), Some(other.start));
        seen.insert(root, None::<((Option<StateId>, Option<StateId>), Letter)>);
        queue.push_back(root);
        while let Some(pair) = queue.pop_front() {
            if accept(pair.0, pair.1) {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some(&Some((parent, a))) = seen.get(&cur) {
                    word.push(a);
                    cur = parent;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for a in 0..k {
                let np = pair.0.and_then(|p| self.next(p, a));
                let nq = pair.1.and_then(|q| other.next(q, a));
                if np.is_none() && nq.is_none() {
                    continue;
                }
                if let alloc::collections::btree_map::Entry::Vacant(e) = seen.entry((np, nq)) {
                    e.insert(Some((pair, a)));
                    queue.push_back((np, nq));
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.distinguishing_word(other)?.is_none())
    }
}

struct Quotient {
    reps: Vec<usize>,
    trans: Vec<Option<StateId>>,
}

/// Quotient of a complete table by `class`, dropping the class of the dead
/// state, numbered in BFS order from `start_class`.
fn quotient(
    class: &[usize],
    trans: &[usize],
    dead_class: usize,
    start_class: usize,
    k: usize,
) -> (Quotient, Vec<Option<StateId>>) {
    let nclasses = class.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; nclasses];
    for (q, &c) in class.iter().enumerate().rev() {
        rep[c] = q;
    }
    let mut index = vec![None; nclasses];
    let mut reps = vec![rep[start_class]];
    index[start_class] = Some(0);
    let mut out = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        let q = reps[i];
        for a in 0..k {
            let c = class[trans[q * k + a]];
            if c == dead_class {
                out.push(None);
                continue;
            }
            let id = match index[c] {
                Some(id) => id,
                None => {
                    let id = reps.len();
                    index[c] = Some(id);
                    reps.push(rep[c]);
                    id
                }
            };
            out.push(Some(id));
        }
        i += 1;
    }
    if start_class == dead_class {
        // empty behaviour: keep a lone start state without transitions
        out = vec![None; k];
    }
    (Quotient { reps, trans: out }, index)
}

fn has_cycle<T: TransitionTable>(t: &T) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = t.num_states();
    let k = t.alphabet().len();
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&mut (q, ref mut a)) = stack.last_mut() {
            if *a == k {
                mark[q] = Mark::Done;
                stack.pop();
                continue;
            }
            let letter = *a;
            *a += 1;
            if let Some(r) = t.next(q, letter) {
                match mark[r] {
                    Mark::Active => return true,
                    Mark::New => {
                        mark[r] = Mark::Active;
                        stack.push((r, 0));
                    }
                    Mark::Done => {}
                }
            }
        }
    }
    false
}

/// Deterministic finite automaton with output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    alphabet: OrderedAlphabet,
    outputs: OrderedAlphabet,
    names: Vec<String>,
    start: StateId,
    output: Vec<Output>,
    trans: Vec<Option<StateId>>,
}

impl TransitionTable for Dfao {
    fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }
    fn num_states(&self) -> usize {
        self.names.len()
    }
    fn start(&self) -> StateId {
        self.start
    }
    fn next(&self, state: StateId, letter: Letter) -> Option<StateId> {
        self.trans[state * self.alphabet.len() + letter]
    }
}

impl Dfao {
    pub fn from_parts(
        alphabet: OrderedAlphabet,
        outputs: OrderedAlphabet,
        names: Vec<String>,
        start: StateId,
        output: Vec<Output>,
        trans: Vec<Option<StateId>>,
    ) -> Result<Self> {
        check_table(&alphabet, &names, start, &trans)?;
        if output.len() != names.len() {
            return Err(Error::InvalidState { state: output.len(), count: names.len() });
        }
        if let Some(&o) = output.iter().flatten().find(|&&o| o >= outputs.len()) {
            return Err(Error::InvalidOutput { output: o, size: outputs.len() });
        }
        Ok(Self { alphabet, outputs, names, start, output, trans })
    }

    /// Builds a DFAO with states `0..output.len()` named `q0, q1, ...`.
    pub fn from_edges(
        alphabet: OrderedAlphabet,
        outputs: OrderedAlphabet,
        start: StateId,
        output: Vec<Output>,
        edges: &[(StateId, Letter, StateId)],
    ) -> Result<Self> {
        let n = output.len();
        let trans = edge_table(n, alphabet.len(), edges)?;
        Self::from_parts(alphabet, outputs, default_names(n), start, output, trans)
    }

    /// One-state machine with a constant output.
    pub fn constant(alphabet: OrderedAlphabet, outputs: OrderedAlphabet, value: usize) -> Result<Self> {
        let k = alphabet.len();
        Self::from_parts(alphabet, outputs, default_names(1), 0, vec![Some(value)], vec![Some(0); k])
    }

    pub fn outputs(&self) -> &OrderedAlphabet {
        &self.outputs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn output(&self, q: StateId) -> Output {
        self.output[q]
    }

    /// Output symbol as text, `⊥` for the placeholder.
    pub fn output_symbol(&self, out: Output) -> &str {
        out.map_or(BOTTOM_TOKEN, |o| self.outputs.symbol(o))
    }

    /// `τ(δ(s, w))`; `None` if the run dies or ends on a `⊥` state.
    pub fn eval(&self, word: &[Letter]) -> Output {
        self.run(word).and_then(|q| self.output[q])
    }

    /// The DFA `(K, s, Σ, δ, τ⁻¹(a))`.
    pub fn preimage(&self, value: usize) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            names: self.names.clone(),
            start: self.start,
            finals: self.output.iter().map(|&o| o == Some(value)).collect(),
            trans: self.trans.clone(),
        }
    }

    pub fn accessible(&self) -> Self {
        let (order, index) = bfs_order(self);
        let k = self.alphabet.len();
        let mut trans = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for a in 0..k {
                trans.push(self.next(q, a).and_then(|r| index[r]));
            }
        }
        Self {
            alphabet: self.alphabet.clone(),
            outputs: self.outputs.clone(),
            names: order.iter().map(|&q| self.names[q].clone()).collect(),
            start: 0,
            output: order.iter().map(|&q| self.output[q]).collect(),
            trans,
        }
    }

    /// Total version; a missing transition goes to a `⊥` sink named `%dead`.
    pub fn complete(&self) -> Self {
        if self.is_complete() {
            return self.clone();
        }
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut trans: Vec<Option<StateId>> =
            self.trans.iter().map(|t| Some(t.unwrap_or(n))).collect();
        trans.extend(core::iter::repeat_n(Some(n), k));
        let mut names = self.names.clone();
        names.push(String::from(DEAD_NAME));
        let mut output = self.output.clone();
        output.push(None);
        Self { alphabet: self.alphabet.clone(), outputs: self.outputs.clone(), names, start: self.start, output, trans }
    }

    /// Accessible, reduced copy: states `p`, `q` are merged when
    /// `τ(δ(p, w)) = τ(δ(q, w))` for every word `w`.
    pub fn reduce(&self) -> Self {
        self.reduce_with_map().0
    }

    /// Like [`Dfao::reduce`], also returning where each original state went
    /// (`None` for unreachable states and states behaving like the `⊥` sink).
    pub fn reduce_with_map(&self) -> (Self, Vec<Option<StateId>>) {
        let k = self.alphabet.len();
        let (order, acc_index) = bfs_order(self);
        let n = order.len();
        let dead = n;
        let mut trans = Vec::with_capacity((n + 1) * k);
        for &q in &order {
            for a in 0..k {
                trans.push(self.next(q, a).map_or(dead, |r| acc_index[r].unwrap()));
            }
        }
        trans.extend(core::iter::repeat_n(dead, k));
        let mut labels: Vec<Output> = order.iter().map(|&q| self.output[q]).collect();
        labels.push(None);
        let class = coarsest_partition(n + 1, k, &trans, &labels);
        let (quotient, class_index) =
            quotient(&class, &trans, class[dead], class[0], k);
        let output = quotient.reps.iter().map(|&r| labels[r]).collect();
        let dfao = Self {
            alphabet: self.alphabet.clone(),
            outputs: self.outputs.clone(),
            names: default_names(quotient.reps.len()),
            start: 0,
            output,
            trans: quotient.trans,
        };
        let map = acc_index
            .iter()
            .map(|i| i.and_then(|i| class_index[class[i]]))
            .collect();
        (dfao, map)
    }
}

/// Reachable part of the synchronous product of a completed DFA and a
/// completed DFAO. Each pair state records both components (`None` standing
/// for the materialized dead state), the DFA's finality and the DFAO's
/// output. The transition function is total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductAutomaton {
    alphabet: OrderedAlphabet,
    outputs: OrderedAlphabet,
    pairs: Vec<(Option<StateId>, Option<StateId>)>,
    accepting: Vec<bool>,
    output: Vec<Output>,
    trans: Vec<StateId>,
}

impl TransitionTable for ProductAutomaton {
    fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }
    fn num_states(&self) -> usize {
        self.pairs.len()
    }
    fn start(&self) -> StateId {
        0
    }
    fn next(&self, state: StateId, letter: Letter) -> Option<StateId> {
        Some(self.trans[state * self.alphabet.len() + letter])
    }
}

impl ProductAutomaton {
    /// `ν((k, k'), σ) = (δ(k, σ), δ'(k', σ))`, restricted to pairs reachable
    /// from `(s, s')`.
    pub fn new(language: &Dfa, machine: &Dfao) -> Result<Self> {
        if language.alphabet != machine.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = language.alphabet.len();
        let mut ids = BTreeMap::new();
        let mut pairs = vec![(Some(language.start), Some(machine.start))];
        ids.insert(pairs[0], 0usize);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let np = p.and_then(|p| language.next(p, a));
                let nq = q.and_then(|q| machine.next(q, a));
                let next = ids.len();
                let id = *ids.entry((np, nq)).or_insert_with(|| {
                    pairs.push((np, nq));
                    next
                });
                trans.push(id);
            }
            i += 1;
        }
        let accepting = pairs.iter().map(|&(p, _)| p.is_some_and(|p| language.finals[p])).collect();
        let output = pairs.iter().map(|&(_, q)| q.and_then(|q| machine.output[q])).collect();
        Ok(Self {
            alphabet: language.alphabet.clone(),
            outputs: machine.outputs.clone(),
            pairs,
            accepting,
            output,
            trans,
        })
    }

    pub fn pair(&self, q: StateId) -> (Option<StateId>, Option<StateId>) {
        self.pairs[q]
    }

    pub fn pairs(&self) -> &[(Option<StateId>, Option<StateId>)] {
        &self.pairs
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn output(&self, q: StateId) -> Output {
        self.output[q]
    }

    pub fn outputs(&self) -> &OrderedAlphabet {
        &self.outputs
    }

    /// Human-readable name `(k,k')` using the component names.
    pub fn pair_name(&self, q: StateId, language: &Dfa, machine: &Dfao) -> String {
        let (p, r) = self.pairs[q];
        let p = p.map_or(DEAD_NAME, |p| language.state_name(p));
        let r = r.map_or(DEAD_NAME, |r| machine.state_name(r));
        format!("{FRESH_PREFIX}({p},{r})")
    }

    /// The product viewed as a DFAO (outputs of the machine component).
    pub fn to_dfao(&self) -> Dfao {
        Dfao {
            alphabet: self.alphabet.clone(),
            outputs: self.outputs.clone(),
            names: default_names(self.pairs.len()),
            start: 0,
            output: self.output.clone(),
            trans: self.trans.iter().map(|&t| Some(t)).collect(),
        }
    }

    /// The product viewed as a DFA accepting on the language component.
    pub fn to_dfa(&self) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            names: default_names(self.pairs.len()),
            start: 0,
            finals: self.accepting.clone(),
            trans: self.trans.iter().map(|&t| Some(t)).collect(),
        }
    }
}

//! Small systems and machines that recur in examples and tests.

use alloc::vec::Vec;

use crate::{AutomaticSequence, Dfa, Dfao, NumerationSystem, OrderedAlphabet};

fn alphabet(symbols: &[&str]) -> OrderedAlphabet {
    OrderedAlphabet::new(symbols.iter().copied()).expect("valid alphabet")
}

/// Minimal DFA of `a*b*` over `a < b`.
pub fn a_star_b_star() -> Dfa {
    Dfa::from_edges(alphabet(&["a", "b"]), 2, 0, &[0, 1], &[(0, 0, 0), (0, 1, 1), (1, 1, 1)])
        .expect("valid dfa")
}

/// `{ε} ∪ 1{0,1}*` over `0 < 1`: binary expansions without leading zeros,
/// with `ε` representing 0.
pub fn binary() -> Dfa {
    Dfa::from_edges(alphabet(&["0", "1"]), 2, 0, &[0, 1], &[(0, 1, 1), (1, 0, 1), (1, 1, 1)])
        .expect("valid dfa")
}

/// `{ε} ∪ 1{0,01}*` over `0 < 1`: Fibonacci (Zeckendorf) representations.
pub fn fibonacci() -> Dfa {
    Dfa::from_edges(
        alphabet(&["0", "1"]),
        3,
        0,
        &[0, 1, 2],
        &[(0, 1, 1), (1, 0, 2), (2, 0, 2), (2, 1, 1)],
    )
    .expect("valid dfa")
}

/// `{a,c}*{b,d}{a,b}* ∪ {a,c}*` over `a < b < c < d`.
pub fn remark3_language() -> Dfa {
    Dfa::from_edges(
        alphabet(&["a", "b", "c", "d"]),
        2,
        0,
        &[0, 1],
        &[(0, 0, 0), (0, 2, 0), (0, 1, 1), (0, 3, 1), (1, 0, 1), (1, 1, 1)],
    )
    .expect("valid dfa")
}

/// `a* ∪ a*ba* ∪ a*ba*ba*` over `a < b`.
pub fn two_b_language() -> Dfa {
    Dfa::from_edges(
        alphabet(&["a", "b"]),
        3,
        0,
        &[0, 1, 2],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 2), (2, 0, 2)],
    )
    .expect("valid dfa")
}

/// `a*b* ∪ a*c*` over `a < b < c`. There are `2l + 1` words of length `l`,
/// so `a^n` has rank `n²` and the squares are recognizable.
pub fn a_star_b_star_or_c_star() -> Dfa {
    Dfa::from_edges(
        alphabet(&["a", "b", "c"]),
        3,
        0,
        &[0, 1, 2],
        &[(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 1), (2, 2, 2)],
    )
    .expect("valid dfa")
}

/// The 12-state machine over `a < b` tracking `(#a mod 4, #b mod 3)`.
///
/// On `a^p b^q` it outputs `0` when `p ≡ 0 (mod 4)` and otherwise
/// `1 + 2(q − p + 1) mod 3`, so that `a^{4r+1}b^{3s}`, `a^{4r+2}b^{3s+1}`,
/// `a^{4r+3}b^{3s+2}` give `1`, and the other two residue rows give `2`
/// and `3`. Fed with `a*b*` it produces
/// `01023031200231010123023031203120231002310123010123...`.
pub fn teaching_dfao() -> Dfao {
    let state = |p: usize, q: usize| p * 3 + q;
    let mut edges = Vec::new();
    let mut output = Vec::new();
    for p in 0..4 {
        for q in 0..3 {
            edges.push((state(p, q), 0, state((p + 1) % 4, q)));
            edges.push((state(p, q), 1, state(p, (q + 1) % 3)));
            let out = if p == 0 { 0 } else { 1 + (2 * (q + 4 - p)) % 3 };
            output.push(Some(out));
        }
    }
    Dfao::from_edges(alphabet(&["a", "b"]), alphabet(&["0", "1", "2", "3"]), 0, output, &edges)
        .expect("valid dfao")
}

/// Parity of the number of `1`s, over `0 < 1`.
pub fn thue_morse_dfao() -> Dfao {
    Dfao::from_edges(
        alphabet(&["0", "1"]),
        alphabet(&["0", "1"]),
        0,
        alloc::vec![Some(0), Some(1)],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
    )
    .expect("valid dfao")
}

/// DFA for `{a^{4r} b^s : r, s ≥ 0}`.
pub fn teaching_zero_fiber() -> Dfa {
    Dfa::from_edges(
        alphabet(&["a", "b"]),
        5,
        0,
        &[0, 4],
        &[(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 0), (0, 1, 4), (4, 1, 4)],
    )
    .expect("valid dfa")
}

/// The teaching sequence: [`teaching_dfao`] on the system `a*b*`.
pub fn teaching_sequence() -> AutomaticSequence {
    let system = NumerationSystem::new(&a_star_b_star()).expect("infinite language");
    AutomaticSequence::new(system, teaching_dfao()).expect("defined on a*b*")
}

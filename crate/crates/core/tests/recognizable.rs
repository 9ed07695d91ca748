use ans_core::automatic::{dfao_from_fibers, dfao_from_kernel, KernelSearch};
use ans_core::{catalog, AutomaticSequence, Dfa, Dfao, NumerationSystem, OrderedAlphabet, Rank, TransitionTable};
use num_bigint::BigUint;

fn digits(n: usize) -> OrderedAlphabet {
    OrderedAlphabet::new((0..n).map(|i| i.to_string())).unwrap()
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

#[test]
fn squares_on_a_star_b_star_or_c_star() {
    let l = catalog::a_star_b_star_or_c_star();
    let s = NumerationSystem::new(&l).unwrap();
    let abc = l.alphabet().clone();
    let a_star = Dfa::from_edges(abc.clone(), 1, 0, &[0], &[(0, 0, 0)]).unwrap();
    // rep(X) regular → χ_X automatic
    let fibers = [(1, a_star.clone()), (0, l.difference(&a_star).unwrap())];
    let m = dfao_from_fibers(&s, &digits(2), &fibers).unwrap();
    let u = AutomaticSequence::new(s, m).unwrap();
    for (n, t) in u.terms().take(10_000).enumerate() {
        assert_eq!(t == 1, is_square(n as u64), "n = {n}");
    }
    // χ_X automatic → rep(X) regular
    assert!(u.fiber(1).unwrap().equivalent(&a_star).unwrap());
}

fn in_progression(n: &BigUint, p: u64, q: u64) -> bool {
    let p = BigUint::from(p);
    n >= &p && ((n - &p) % q) == BigUint::from(0u8)
}

#[test]
fn arithmetic_progressions_are_recognizable() {
    let languages = [
        catalog::a_star_b_star(),
        catalog::binary(),
        catalog::fibonacci(),
        catalog::remark3_language(),
        catalog::two_b_language(),
    ];
    for l in languages {
        let s = NumerationSystem::new(&l).unwrap();
        for (p, q) in [(0, 2), (1, 3), (2, 4)] {
            let m: Dfao =
                dfao_from_kernel(&s, &digits(2), |n| usize::from(in_progression(n, p, q)), KernelSearch::default())
                    .unwrap()
                    .reduce();
            let u = AutomaticSequence::new(s.clone(), m).unwrap();
            let fiber = u.fiber(1).unwrap();
            for (n, w) in s.enumerate(&Rank::from(0u8)).take(5_000).enumerate() {
                let n = n as u64;
                assert_eq!(fiber.accepts(&w), n >= p && (n - p).is_multiple_of(q), "p = {p}, q = {q}, n = {n}");
            }
        }
    }
}

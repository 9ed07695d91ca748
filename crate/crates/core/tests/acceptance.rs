//! Acceptance criteria, run in order with one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ans_core::automatic::{dfao_from_fibers, dfao_from_kernel, occurrence_gaps, Continuations, KernelSearch};
use ans_core::complexity::{
    binomial_word, factor_count, quadratic_witness_check, super_quadratic_check, upper_bound_check, SuffixAutomaton,
    Verdict,
};
use ans_core::substitution::{state_morphism, substitution_of, system_from_morphism};
use ans_core::{catalog, AutomaticSequence, Dfa, Dfao, Morphism, NumerationSystem, OrderedAlphabet, Rank, TransitionTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TEACHING: &str = "01023031200231010123023031203120231002310123010123";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn render(u: &AutomaticSequence, n: usize) -> String {
    u.terms().take(n).map(|x| u.outputs().symbol(x).to_string()).collect()
}

fn system(l: Dfa) -> NumerationSystem {
    NumerationSystem::new(&l).unwrap()
}

fn digits(n: usize) -> OrderedAlphabet {
    OrderedAlphabet::new((0..n).map(|i| i.to_string())).unwrap()
}

/// Parity of the number of `1`s, read on Zeckendorf representations.
fn fibonacci_parity() -> AutomaticSequence {
    AutomaticSequence::new(system(catalog::fibonacci()), catalog::thue_morse_dfao()).unwrap()
}

/// Characteristic sequence of the squares on `a*b* ∪ a*c*`, where `a^n`
/// represents `n²`.
fn squares() -> AutomaticSequence {
    let m = Dfao::from_edges(
        OrderedAlphabet::new(["a", "b", "c"]).unwrap(),
        digits(2),
        0,
        vec![Some(1), Some(0)],
        &[(0, 0, 0), (0, 1, 1), (0, 2, 1), (1, 1, 1), (1, 2, 1)],
    )
    .unwrap();
    AutomaticSequence::new(system(catalog::a_star_b_star_or_c_star()), m).unwrap()
}

fn remark3_morphism() -> Morphism {
    Morphism::endomorphism(digits(2), vec![vec![0, 1, 0, 1], vec![1, 1]]).unwrap()
}

fn from_morphism(phi: &Morphism) -> AutomaticSequence {
    let (s, m) = system_from_morphism(phi, 0).unwrap();
    AutomaticSequence::new(s, m).unwrap()
}

fn test_sequences() -> Vec<(&'static str, AutomaticSequence)> {
    vec![
        ("teaching", catalog::teaching_sequence()),
        ("thue-morse/binary", AutomaticSequence::new(system(catalog::binary()), catalog::thue_morse_dfao()).unwrap()),
        ("parity/fibonacci", fibonacci_parity()),
        ("squares", squares()),
        ("morphic/remark3", from_morphism(&remark3_morphism())),
        ("morphic/quadratic", from_morphism(&ans_core::complexity::quadratic_witness_morphism())),
    ]
}

fn criterion_1() -> Outcome {
    let u = catalog::teaching_sequence();
    let got = render(&u, 50);
    ensure!(got == TEACHING, "got {got}");
    Ok("50 terms match".into())
}

fn criterion_2() -> Outcome {
    let s = system(catalog::a_star_b_star());
    let words: Vec<String> = s.enumerate(&Rank::from(0u8)).take(10).map(|w| s.alphabet().render(&w)).collect();
    let expected = ["@eps", "a", "b", "aa", "ab", "bb", "aaa", "aab", "abb", "bbb"];
    ensure!(words == expected, "got {words:?}");
    for n in 0..=100usize {
        ensure!(s.count_words(n) == Rank::from(n + 1), "count_words({n}) = {}", s.count_words(n));
    }
    Ok("10 words, counts n+1 for n ≤ 100".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let languages = [
        ("a*b*", catalog::a_star_b_star()),
        ("binary", catalog::binary()),
        ("fibonacci", catalog::fibonacci()),
        ("remark3", catalog::remark3_language()),
    ];
    for (name, l) in languages {
        let s = system(l.clone());
        for n in 0..10_000u64 {
            let w = s.rep_u64(n);
            ensure!(s.val(&w).unwrap() == Rank::from(n), "{name}: val(rep({n})) != {n}");
        }
        for _ in 0..1000 {
            let w = random_member(s.language(), &mut rng);
            ensure!(l.accepts(&w), "{name}: sampled word not in L");
            let v = s.val(&w).unwrap();
            ensure!(s.rep(&v) == w, "{name}: rep(val(w)) != w");
        }
    }
    Ok("4 systems".into())
}

/// Random member of `L`: a random walk on the trimmed automaton of random
/// length, extended at random until it ends in a final state.
fn random_member(dfa: &Dfa, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let k = dfa.alphabet().len();
    let len = rng.gen_range(0..40);
    let mut q = dfa.start();
    let mut w = Vec::new();
    while w.len() < len || !dfa.is_final(q) {
        let choices: Vec<usize> = (0..k).filter(|&a| dfa.next(q, a).is_some()).collect();
        let a = choices[rng.gen_range(0..choices.len())];
        q = dfa.next(q, a).unwrap();
        w.push(a);
    }
    w
}

fn criterion_4() -> Outcome {
    let u = catalog::teaching_sequence();
    let zero = u.fiber(0).unwrap();
    ensure!(zero.equivalent(&catalog::teaching_zero_fiber()).unwrap(), "fiber 0 differs from a^{{4r}}b^s");
    let fibers: Vec<(usize, Dfa)> = (0..u.outputs().len()).map(|a| (a, u.fiber(a).unwrap())).collect();
    for (i, (_, fa)) in fibers.iter().enumerate() {
        for (_, fb) in &fibers[i + 1..] {
            ensure!(fa.intersection(fb).unwrap().is_empty(), "fibers overlap");
        }
    }
    let union = fibers.iter().skip(1).fold(fibers[0].1.clone(), |acc, (_, f)| acc.union(f).unwrap());
    ensure!(union.equivalent(u.system().language()).unwrap(), "fibers do not cover L");
    let m = dfao_from_fibers(u.system(), u.outputs(), &fibers).unwrap();
    let v = AutomaticSequence::new(u.system().clone(), m).unwrap();
    ensure!(render(&v, 50) == TEACHING, "rebuilt machine gives {}", render(&v, 50));
    Ok("fiber 0 exact, 4 fibers partition L, rebuilt string matches".into())
}

fn criterion_5() -> Outcome {
    let mut details = Vec::new();
    for (name, u) in test_sequences() {
        let kernel = u.kernel();
        ensure!(kernel.len() <= kernel.bound(), "{name}: {} classes > bound {}", kernel.len(), kernel.bound());
        let min_states = u.system().language().minimize().complete().num_states();
        let words: Vec<Vec<usize>> = u.system().enumerate(&Rank::from(0u8)).take(200_000).collect();
        let terms: Vec<usize> = {
            let m = u.machine();
            words.iter().map(|w| m.eval(w).unwrap()).collect()
        };
        for class in kernel.classes() {
            let w = &class.representative;
            let cap = match class.continuations {
                Continuations::Infinite => usize::MAX,
                _ => w.len() + min_states,
            };
            let oracle: Vec<usize> = words
                .iter()
                .zip(&terms)
                .take_while(|(z, _)| z.len() <= cap)
                .filter(|(z, _)| z.starts_with(w))
                .map(|(_, &t)| t)
                .take(100)
                .collect();
            let got: Vec<usize> = u.subsequence(class).take(100).collect();
            ensure!(got == oracle, "{name}: class {} differs from filter oracle", class.id);
            if class.continuations == Continuations::Infinite {
                ensure!(got.len() == 100, "{name}: class {} yields only {} terms", class.id, got.len());
            }
        }
        let m = dfao_from_kernel(u.system(), u.outputs(), |n| u.term(n), KernelSearch::default()).unwrap();
        let v = AutomaticSequence::new(u.system().clone(), m).unwrap();
        ensure!(v.terms().take(10_000).eq(u.terms().take(10_000)), "{name}: kernel rebuild disagrees");
        details.push(format!("{name} {}≤{}", kernel.len(), kernel.bound()));
    }
    Ok(details.join(", "))
}

fn criterion_6() -> Outcome {
    for (name, u) in test_sequences() {
        let t = substitution_of(&u).unwrap();
        ensure!(t.substitution.coding().is_weak_coding(), "{name}: coding not weak");
        let generated: Vec<usize> = t.substitution.generate().take(10_000).collect();
        let terms: Vec<usize> = u.terms().take(10_000).collect();
        ensure!(generated == terms, "{name}: generated word differs");
    }
    Ok("6 sequences, 10^4 terms each".into())
}

/// Words of `Σ*` in shortlex order, as bijective base-`k` numerals.
fn shortlex_all(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..).map(move |mut n| {
        let mut w = Vec::new();
        while n > 0 {
            n -= 1;
            w.push((n % k as u64) as usize);
            n /= k as u64;
        }
        w.reverse();
        w
    })
}

fn criterion_7() -> Outcome {
    let automata = [
        ("a*b*", catalog::a_star_b_star()),
        ("fibonacci", catalog::fibonacci()),
        ("remark3", catalog::remark3_language()),
    ];
    for (name, dfa) in automata {
        let sm = state_morphism(&dfa, |q| dfa.state_name(q).to_string());
        let k = dfa.alphabet().len();
        let ok = sm.state_stream().take(10_000).eq(shortlex_all(k).take(10_000).map(|w| dfa.run(&w)));
        ensure!(ok, "{name}: state stream differs from runs");
    }
    let m = catalog::teaching_dfao();
    let sm = state_morphism(&m, |q| m.state_name(q).to_string());
    let ok = sm.state_stream().take(10_000).eq(shortlex_all(2).take(10_000).map(|w| m.run(&w)));
    ensure!(ok, "teaching machine: state stream differs from runs");
    Ok("4 automata, 10^4 words each".into())
}

fn criterion_8() -> Outcome {
    let phi = remark3_morphism();
    let (s, m) = system_from_morphism(&phi, 0).unwrap();
    ensure!(s.language().equivalent(&catalog::remark3_language()).unwrap(), "language differs");
    let u = AutomaticSequence::new(s, m).unwrap();
    let terms: Vec<usize> = u.terms().take(100_000).collect();
    // ε ∈ L carries the seed; the terms after it are φ(0)φ²(0)...
    ensure!(terms[0] == 0, "first term is not the seed");
    let mut expected = Vec::new();
    let mut k = 1;
    while expected.len() < 10_000 {
        expected.extend(phi.iterate(0, k));
        k += 1;
    }
    ensure!(terms[1..10_001] == expected[..10_000], "prefix differs from φ(0)φ²(0)...");
    let w: Vec<usize> = phi.fixed_point(0).unwrap().take(10_000).collect();
    let profile = factor_count(w.iter().copied(), w.len(), 20).unwrap();
    ensure!(profile.exactness_horizon >= 20, "factor sets of φ^ω(0) not yet stable at 10^4");
    let mut sam = SuffixAutomaton::new();
    terms.iter().for_each(|&x| sam.push(x));
    let mut factors = 0;
    for n in 1..=20 {
        let distinct: BTreeSet<&[usize]> = w.windows(n).collect();
        for f in distinct {
            ensure!(sam.contains(f), "factor {f:?} of φ^ω(0) missing");
            factors += 1;
        }
    }
    Ok(format!("{factors} factors of length ≤ 20 found"))
}

fn criterion_9() -> Outcome {
    let r = quadratic_witness_check(100_000).unwrap();
    ensure!(r.language_matches, "constructed language differs from a* ∪ a*ba* ∪ a*ba*ba*");
    ensure!(r.embedding_holds, "p_v(n) < p_w(n) for some n ≤ 30");
    ensure!(r.runs_present, "some run 2^m with m ≤ {} missing", r.run_bound);
    ensure!(r.exponent >= 1.7, "exponent {:.3} < 1.7", r.exponent);
    let teaching = catalog::teaching_sequence();
    let ub = upper_bound_check(teaching.terms(), 100_000, 40).unwrap();
    ensure!(ub.doubling_violations.is_empty(), "doubling violations at {:?}", ub.doubling_violations);
    Ok(format!("exponent {:.3}, runs to 2^{}, teaching C = {:.3}", r.exponent, r.run_bound, ub.constant))
}

fn criterion_10() -> Outcome {
    let b = binomial_word(29);
    let bits: String = b.bits[..19].iter().map(|x| x.to_string()).collect();
    ensure!(bits == "1110111101111011110", "bits {bits}");
    let expected = [0, 1, 2, 4, 5, 6, 7, 9, 10, 11, 12, 14, 15, 16, 17, 21, 22, 23, 25, 27, 28];
    ensure!(b.members == expected, "W ∩ [0,28] = {:?}", b.members);
    let r = super_quadratic_check(200_000);
    ensure!(r.verdict == Verdict::Pass, "ratio growth {:.3} ({:?})", r.growth, r.verdict);
    Ok(format!("ratio growth {:.2}×", r.growth))
}

fn criterion_11() -> Outcome {
    let u = catalog::teaching_sequence();
    let terms: Vec<usize> = u.terms().take(100_000).collect();
    let mut horizons: Vec<usize> = std::iter::successors(Some(1000), |h| Some(h * 2)).take_while(|&h| h <= 100_000).collect();
    horizons.push(100_000);
    let mut maxima = Vec::new();
    for &h in &horizons {
        let occ = occurrence_gaps(terms.iter().copied(), &[0, 0], h);
        maxima.push(occ.max_gap().unwrap_or(0));
    }
    ensure!(maxima.windows(2).all(|w| w[0] < w[1]), "maxima {maxima:?} over {horizons:?}");
    Ok(format!("max gaps {maxima:?}"))
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sequences: Vec<Vec<usize>> = (0..50)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            let len = rng.gen_range(1..=2000);
            (0..len).map(|_| rng.gen_range(0..k)).collect()
        })
        .collect();
    let tm = Morphism::endomorphism(digits(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
    let fib = Morphism::endomorphism(digits(2), vec![vec![0, 1], vec![0]]).unwrap();
    sequences.push(vec![0; 2000]);
    sequences.push((0..2000).map(|i| [0, 1, 1, 2, 0][i % 5]).collect());
    sequences.push(tm.fixed_point(0).unwrap().take(2000).collect());
    sequences.push(fib.fixed_point(0).unwrap().take(2000).collect());
    sequences.push(catalog::teaching_sequence().terms().take(2000).collect());
    const SHORT: usize = 16;
    for (i, seq) in sequences.iter().enumerate() {
        let mut sam = SuffixAutomaton::new();
        let mut online = [0u64; SHORT + 1];
        let mut naive: Vec<BTreeSet<&[usize]>> = vec![BTreeSet::new(); SHORT + 1];
        for p in 1..=seq.len() {
            sam.push(seq[p - 1]);
            for n in sam.new_factor_lengths() {
                if n <= SHORT {
                    online[n] += 1;
                }
            }
            for n in 1..=SHORT.min(p) {
                naive[n].insert(&seq[p - n..p]);
                ensure!(online[n] == naive[n].len() as u64, "sequence {i}, prefix {p}, n = {n}");
            }
            if p % 250 == 0 || p == seq.len() {
                let n_max = p.min(120);
                let batch = sam.factor_counts(n_max);
                for n in 1..=n_max {
                    let expected = seq[..p].windows(n).collect::<BTreeSet<_>>().len() as u64;
                    ensure!(batch[n - 1] == expected, "sequence {i}, prefix {p}, n = {n} (batch)");
                }
            }
        }
    }
    Ok(format!("{} sequences", sequences.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("teaching golden string", criterion_1, Duration::from_secs(1)),
        ("word list and counts", criterion_2, Duration::from_secs(1)),
        ("rank/unrank roundtrip", criterion_3, Duration::from_secs(10)),
        ("fiber suite", criterion_4, Duration::MAX),
        ("kernel suite", criterion_5, Duration::MAX),
        ("substitution equivalence", criterion_6, Duration::from_secs(10)),
        ("state-sequence morphism", criterion_7, Duration::MAX),
        ("morphism to numeration system", criterion_8, Duration::from_secs(30)),
        ("quadratic witness", criterion_9, Duration::from_secs(60)),
        ("binomial word", criterion_10, Duration::from_secs(60)),
        ("occurrence gaps", criterion_11, Duration::from_secs(10)),
        ("factor-count oracle", criterion_12, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:.0?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.2?}]: {detail}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

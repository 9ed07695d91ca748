//! Command-line front end.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ColorChoice, Parser, Subcommand};
use num_bigint::BigUint;

use ans_core::automatic::{dfao_from_fibers, dfao_from_kernel, occurrence_gaps, Continuations, KernelSearch};
use ans_core::complexity::{
    self, binomial_word, quadratic_witness_check, super_quadratic_check, upper_bound_check, PANSIOT_CLASSES,
};
use ans_core::substitution::{canonical_substitution, substitution_of, system_from_morphism};
use ans_core::{catalog, AutomaticSequence, Dfa, Dfao, Letter, NumerationSystem, OrderedAlphabet, TransitionTable};

use crate::format::{self, ParseError};
use crate::report::*;

#[derive(Debug, Parser)]
#[command(name = "ans", version, about = "Abstract numeration systems and their automatic sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the representation of a rank
    Rep {
        #[arg(short, long)]
        system: PathBuf,
        n: String,
    },
    /// Print the rank of a word of the language
    Val {
        #[arg(short, long)]
        system: PathBuf,
        word: String,
    },
    /// List words of the language in shortlex order
    Enum {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Print terms of an automatic sequence
    Seq {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the DFA of the fiber of an output symbol
    Fiber {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long)]
        symbol: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a DFAO from fibers given as SYMBOL=FILE
    FibersToDfao {
        #[arg(short, long)]
        system: PathBuf,
        /// Output alphabet; defaults to the fiber symbols in order
        #[arg(long)]
        outputs: Option<String>,
        #[arg(long = "fiber", required = true)]
        fibers: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the kernel classes and the first terms of each subsequence
    Kernel {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a DFAO by exploring the kernel of the sequence of a machine
    KernelToDfao {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
        #[arg(long, default_value_t = 256)]
        max_states: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Occurrences of a factor and the gaps between them (teaching sequence by default)
    Gaps {
        #[arg(short, long, requires = "machine")]
        system: Option<PathBuf>,
        #[arg(short, long, requires = "system")]
        machine: Option<PathBuf>,
        #[arg(long)]
        factor: String,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Emit the substitution generating an automatic sequence
    Subst {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        /// Start from the minimal automaton and the reduced machine
        #[arg(long)]
        canonical: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Numeration system and DFAO of a prolongable morphism
    FromMorphism {
        morphism: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dfao: Option<PathBuf>,
    },
    /// Print a prefix of the fixed point, coded by `h` when present
    Fixpoint {
        morphism: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Ignore the coding
        #[arg(long)]
        raw: bool,
    },
    /// Factor complexity profile of an automatic sequence
    Complexity {
        #[arg(short, long)]
        system: PathBuf,
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        prefix: usize,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the quadratic complexity witness 0 -> 01, 1 -> 12, 2 -> 2
    WitnessQuadratic {
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bits of the binomial word and the positions of its 1s
    BinomialWord {
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Also measure p(n)/n² on this many terms
        #[arg(long)]
        growth: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two DFAs accept the same language
    Equiv { left: PathBuf, right: PathBuf },
    /// Minimal DFA
    Minimize {
        dfa: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduced accessible DFAO
    Reduce {
        dfao: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Input that cannot be parsed or violates a precondition.
#[derive(Debug, thiserror::Error)]
pub enum DomainError {
    #[error("{path}:{}: {}", .source.line, .source.message)]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
}

fn color_enabled() -> bool {
    std::env::var("ANS_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn verdict(v: complexity::Verdict) -> String {
    let code = match v {
        complexity::Verdict::Pass => "32",
        complexity::Verdict::Fail => "31",
        complexity::Verdict::Inconclusive => "33",
    };
    paint(v.as_str(), code)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn located<T>(path: &Path, r: Result<T, ParseError>) -> anyhow::Result<T> {
    r.map_err(|source| DomainError::Parse { path: path.display().to_string(), source }.into())
}

fn load_dfa(path: &Path) -> anyhow::Result<Dfa> {
    located(path, format::parse_dfa(&read(path)?))
}

fn load_dfao(path: &Path) -> anyhow::Result<Dfao> {
    located(path, format::parse_dfao(&read(path)?))
}

fn load_system(path: &Path) -> anyhow::Result<NumerationSystem> {
    Ok(NumerationSystem::new(&load_dfa(path)?)?)
}

fn load_sequence(system: &Path, machine: &Path) -> anyhow::Result<AutomaticSequence> {
    Ok(AutomaticSequence::new(load_system(system)?, load_dfao(machine)?)?)
}

fn parse_rank(text: &str) -> anyhow::Result<BigUint> {
    text.parse().map_err(|_| DomainError::Invalid(format!("`{text}` is not a natural number")).into())
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Concatenates one-character symbols, separates longer ones by spaces.
fn render_terms(alphabet: &OrderedAlphabet, terms: &[Letter]) -> String {
    let sep = if alphabet.is_single_char() { "" } else { " " };
    terms.iter().map(|&t| alphabet.symbol(t)).collect::<Vec<_>>().join(sep)
}

fn symbols(alphabet: &OrderedAlphabet, terms: &[Letter]) -> Vec<String> {
    terms.iter().map(|&t| alphabet.symbol(t).to_string()).collect()
}

fn continuations(c: Continuations) -> &'static str {
    match c {
        Continuations::Empty => "empty",
        Continuations::Finite => "finite",
        Continuations::Infinite => "infinite",
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let mut out = String::new();
    match cli.command {
        Command::Rep { system, n } => {
            let s = load_system(&system)?;
            out = s.alphabet().render(&s.rep(&parse_rank(&n)?)) + "\n";
        }
        Command::Val { system, word } => {
            let s = load_system(&system)?;
            let w = format::parse_word(s.alphabet(), &word)?;
            out = format!("{}\n", s.val(&w)?);
        }
        Command::Enum { system, from, count } => {
            let s = load_system(&system)?;
            for w in s.enumerate(&parse_rank(&from)?).take(count) {
                out += &s.alphabet().render(&w);
                out.push('\n');
            }
        }
        Command::Seq { system, machine, from, count, json: as_json } => {
            let u = load_sequence(&system, &machine)?;
            let from = parse_rank(&from)?;
            let terms: Vec<Letter> = u.terms_from(&from).take(count).collect();
            out = if as_json {
                json(&SeqReport { from: from.to_string(), count: terms.len(), terms: symbols(u.outputs(), &terms) })?
            } else {
                render_terms(u.outputs(), &terms) + "\n"
            };
        }
        Command::Fiber { system, machine, symbol, output } => {
            let u = load_sequence(&system, &machine)?;
            let fiber = u.fiber_of_symbol(&symbol)?;
            return emit(output.as_deref(), &format::write_dfa(&fiber));
        }
        Command::FibersToDfao { system, outputs, fibers, output } => {
            let s = load_system(&system)?;
            let mut named = Vec::new();
            for spec in &fibers {
                let Some((symbol, path)) = spec.split_once('=') else {
                    bail!(DomainError::Invalid(format!("expected SYMBOL=FILE, found `{spec}`")));
                };
                named.push((symbol.to_string(), load_dfa(Path::new(path))?));
            }
            let alphabet = match outputs {
                Some(text) => format::parse_symbols(&text)?,
                None => OrderedAlphabet::new_user(named.iter().map(|(s, _)| s.as_str()))?,
            };
            let mut indexed = Vec::new();
            for (symbol, dfa) in named {
                let Some(a) = alphabet.letter(&symbol) else {
                    bail!(ans_core::Error::UnknownOutput(symbol));
                };
                indexed.push((a, dfa));
            }
            let m = dfao_from_fibers(&s, &alphabet, &indexed)?.reduce();
            return emit(output.as_deref(), &format::write_dfao(&m));
        }
        Command::Kernel { system, machine, terms, json: as_json } => {
            let u = load_sequence(&system, &machine)?;
            let kernel = u.kernel();
            let entries: Vec<KernelEntry> = kernel
                .classes()
                .iter()
                .map(|c| KernelEntry {
                    id: c.id,
                    representative: u.system().alphabet().render(&c.representative),
                    continuations: continuations(c.continuations).to_string(),
                    terms: symbols(u.outputs(), &u.subsequence(c).take(terms).collect::<Vec<_>>()),
                })
                .collect();
            let report =
                KernelReport { classes: kernel.len(), bound: kernel.bound(), pair_states: kernel.pair_states(), entries };
            out = if as_json { json(&report)? } else { kernel_text(&report, u.outputs()) };
        }
        Command::KernelToDfao { system, machine, horizon, max_states, output } => {
            let u = load_sequence(&system, &machine)?;
            let search = KernelSearch { horizon, max_states };
            let m = dfao_from_kernel(u.system(), u.outputs(), |n| u.term(n), search)?.reduce();
            return emit(output.as_deref(), &format::write_dfao(&m));
        }
        Command::Gaps { system, machine, factor, count, json: as_json } => {
            let u = match (system, machine) {
                (Some(s), Some(m)) => load_sequence(&s, &m)?,
                _ => catalog::teaching_sequence(),
            };
            let f = format::parse_word(u.outputs(), &factor)?;
            if f.is_empty() {
                bail!(DomainError::Invalid("the factor must be non-empty".into()));
            }
            let occ = occurrence_gaps(u.terms(), &f, count);
            let report = GapsReport {
                factor: render_terms(u.outputs(), &f),
                horizon: count,
                positions: occ.positions.iter().map(|p| p + 1).collect(),
                max_gap: occ.max_gap(),
                gaps: occ.gaps,
            };
            out = if as_json {
                json(&report)?
            } else {
                let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                format!(
                    "factor: {}\nhorizon: {}\noccurrences: {}\nmax gap: {}\npositions: {}\ngaps: {}\n",
                    report.factor,
                    report.horizon,
                    report.positions.len(),
                    report.max_gap.map_or("none".to_string(), |g| g.to_string()),
                    join(&report.positions),
                    join(&report.gaps),
                )
            };
        }
        Command::Subst { system, machine, canonical, output } => {
            let u = load_sequence(&system, &machine)?;
            let t = if canonical {
                canonical_substitution(u.system().language(), u.machine())?
            } else {
                substitution_of(&u)?
            };
            return emit(output.as_deref(), &format::write_substitution(&t.substitution));
        }
        Command::FromMorphism { morphism, output, dfao } => {
            let file = located(&morphism, format::parse_morphism(&read(&morphism)?))?;
            let (s, m) = system_from_morphism(&file.phi, file.axiom)?;
            if let Some(path) = dfao {
                emit(Some(&path), &format::write_dfao(&m))?;
            }
            return emit(output.as_deref(), &format::write_dfa(s.language()));
        }
        Command::Fixpoint { morphism, count, raw } => {
            let file = located(&morphism, format::parse_morphism(&read(&morphism)?))?;
            let (alphabet, letters): (&OrderedAlphabet, Vec<Letter>) = match (&file.coding, raw) {
                (Some(h), false) => {
                    let t = file.substitution().expect("coding present")?;
                    (h.codomain(), t.generate().take(count).collect())
                }
                _ => (file.phi.domain(), file.phi.fixed_point(file.axiom)?.take(count).collect()),
            };
            out = render_terms(alphabet, &letters) + "\n";
        }
        Command::Complexity { system, machine, prefix, nmax, json: as_json } => {
            let u = load_sequence(&system, &machine)?;
            let r = upper_bound_check(u.terms(), prefix, nmax)?;
            let report = ComplexityReport {
                prefix: r.profile.prefix_length,
                n: (1..=nmax).collect(),
                p: r.profile.values.clone(),
                ratios: (1..=nmax).map(|n| r.profile.values[n - 1] as f64 / (n * n) as f64).collect(),
                exactness_horizon: r.profile.exactness_horizon,
                constant: r.constant,
                doubling_violations: r.doubling_violations.clone(),
                verdicts: ComplexityVerdicts { upper_bound: r.verdict().as_str().into() },
                reference_classes: PANSIOT_CLASSES.iter().map(|s| s.to_string()).collect(),
            };
            out = if as_json { json(&report)? } else { complexity_text(&report, r.verdict()) };
        }
        Command::WitnessQuadratic { prefix, json: as_json } => {
            let r = quadratic_witness_check(prefix)?;
            let v = |b: bool| complexity::Verdict::from_bool(b);
            let report = WitnessReport {
                prefix: r.prefix_length,
                n: (1..=r.w.n_max()).collect(),
                p_w: r.w.values.clone(),
                p_v: r.v.values.clone(),
                run_bound: r.run_bound,
                exponent: r.exponent,
                exponent_range: r.exponent_range,
                exponent_threshold: r.exponent_threshold,
                verdicts: WitnessVerdicts {
                    language: v(r.language_matches).as_str().into(),
                    embedding: v(r.embedding_holds).as_str().into(),
                    runs: v(r.runs_present).as_str().into(),
                    exponent: v(r.exponent >= r.exponent_threshold).as_str().into(),
                    overall: r.verdict().as_str().into(),
                },
            };
            out = if as_json {
                json(&report)?
            } else {
                let mut t = format!("prefix: {}\nn p_w(n) p_v(n)\n", report.prefix);
                for (i, n) in report.n.iter().enumerate() {
                    t += &format!("{n} {} {}\n", report.p_w[i], report.p_v[i]);
                }
                t += &format!("language a* ∪ a*ba* ∪ a*ba*ba*: {}\n", verdict(v(r.language_matches)));
                t += &format!("p_v(n) ≥ p_w(n): {}\n", verdict(v(r.embedding_holds)));
                t += &format!("runs 2^m for m ≤ {}: {}\n", r.run_bound, verdict(v(r.runs_present)));
                t += &format!(
                    "exponent on [{}, {}]: {:.4} (threshold {}): {}\n",
                    r.exponent_range.0,
                    r.exponent_range.1,
                    r.exponent,
                    r.exponent_threshold,
                    verdict(v(r.exponent >= r.exponent_threshold))
                );
                t += &format!("verdict: {}\n", verdict(r.verdict()));
                t
            };
        }
        Command::BinomialWord { count, growth, json: as_json } => {
            let b = binomial_word(count);
            let growth = growth.map(|n| {
                let r = super_quadratic_check(n);
                GrowthReport {
                    prefix: r.n_terms,
                    n: r.grid.iter().map(|g| g.0).collect(),
                    p: r.grid.iter().map(|g| g.1).collect(),
                    ratios: r.grid.iter().map(|g| g.2).collect(),
                    growth: r.growth,
                    threshold: r.threshold,
                    verdict: r.verdict.as_str().into(),
                }
            });
            let report = BinomialReport {
                count,
                bits: b.bits.iter().map(|x| x.to_string()).collect(),
                members: b.members,
                growth,
            };
            out = if as_json { json(&report)? } else { binomial_text(&report) };
        }
        Command::Equiv { left, right } => {
            let (a, b) = (load_dfa(&left)?, load_dfa(&right)?);
            out = match a.distinguishing_word(&b)? {
                None => paint("equivalent", "32") + "\n",
                Some(w) => format!("{}\nwitness: {}\n", paint("not equivalent", "31"), a.alphabet().render(&w)),
            };
        }
        Command::Minimize { dfa, output } => {
            return emit(output.as_deref(), &format::write_dfa(&load_dfa(&dfa)?.minimize()));
        }
        Command::Reduce { dfao, output } => {
            return emit(output.as_deref(), &format::write_dfao(&load_dfao(&dfao)?.reduce()));
        }
    }
    emit(None, &out)
}

fn kernel_text(r: &KernelReport, outputs: &OrderedAlphabet) -> String {
    let sep = if outputs.is_single_char() { "" } else { " " };
    let mut t = format!("classes: {}\nbound: {}\npair states: {}\n", r.classes, r.bound, r.pair_states);
    for e in &r.entries {
        t += &format!(
            "class {}: representative {}, continuations {}\n  {}\n",
            e.id,
            e.representative,
            e.continuations,
            e.terms.join(sep)
        );
    }
    t
}

fn complexity_text(r: &ComplexityReport, v: complexity::Verdict) -> String {
    let mut t = format!("prefix: {}\nexactness horizon: {}\nn p(n) p(n)/n^2\n", r.prefix, r.exactness_horizon);
    for (i, n) in r.n.iter().enumerate() {
        t += &format!("{n} {} {:.6}\n", r.p[i], r.ratios[i]);
    }
    t += &format!("C: {:.6}\n", r.constant);
    if r.doubling_violations.is_empty() {
        t += "doubling violations: none\n";
    } else {
        let list: Vec<String> = r.doubling_violations.iter().map(usize::to_string).collect();
        t += &format!("doubling violations: {}\n", list.join(" "));
    }
    t += &format!("upper bound: {}\n", verdict(v));
    t += &format!("reference classes: {}\n", r.reference_classes.join(", "));
    t
}

fn binomial_text(r: &BinomialReport) -> String {
    let members: Vec<String> = r.members.iter().map(usize::to_string).collect();
    let mut t = format!("bits: {}\nmembers: {}\n", r.bits, members.join(" "));
    if let Some(g) = &r.growth {
        t += &format!("prefix: {}\nn p(n) p(n)/n^2\n", g.prefix);
        for i in 0..g.n.len() {
            t += &format!("{} {} {:.6}\n", g.n[i], g.p[i], g.ratios[i]);
        }
        t += &format!("ratio growth: {:.4} (threshold {})\n", g.growth, g.threshold);
        let v = match g.verdict.as_str() {
            "pass" => complexity::Verdict::Pass,
            "fail" => complexity::Verdict::Fail,
            _ => complexity::Verdict::Inconclusive,
        };
        t += &format!("verdict: {}\n", verdict(v));
    }
    t
}

fn is_domain(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.is::<ans_core::Error>() || c.is::<DomainError>() || c.is::<ParseError>())
}

/// Parses the command line, runs it and maps failures to exit codes:
/// 2 for invalid input, 1 for anything else.
pub fn main() -> ExitCode {
    let color = if std::env::var("ANS_COLOR").is_ok_and(|v| v == "0") { ColorChoice::Never } else { ColorChoice::Auto };
    let matches = <Cli as clap::CommandFactory>::command().color(color).get_matches();
    let cli = match <Cli as clap::FromArgMatches>::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ans: {e:#}");
            ExitCode::from(if is_domain(&e) { 2 } else { 1 })
        }
    }
}

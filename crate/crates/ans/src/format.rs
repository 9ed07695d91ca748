//! Line-based text formats for automata and morphisms.
//!
//! Automata:
//!
//! ```text
//! # a*b*
//! alphabet: a b
//! states: q0 q1
//! start: q0
//! final: q0 q1
//! trans: q0 a q0
//! trans: q0 b q1
//! trans: q1 b q1
//! ```
//!
//! A DFAO replaces `final:` by `outputs:` (the output alphabet) and one
//! `output: q x` line per state, where `x` may be `⊥`. Morphisms:
//!
//! ```text
//! axiom: 0
//! 0 -> 0 1 0 1
//! 1 -> 1 1
//! h: 0 -> a
//! h: 1 -> @eps
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use ans_core::alphabet::is_reserved;
use ans_core::substitution::Substitution;
use ans_core::{
    Dfa, Dfao, Letter, Morphism, OrderedAlphabet, StateId, TransitionTable, Word, BOTTOM_TOKEN, EPSILON_TOKEN,
};

/// A syntax or consistency error, located by line (0 when it concerns the
/// whole file).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

struct Directive<'a> {
    line: usize,
    key: &'a str,
    args: Vec<&'a str>,
}

fn directives(text: &str) -> Result<Vec<Directive<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return err(i + 1, format!("expected `directive: arguments`, found `{content}`"));
        };
        out.push(Directive { line: i + 1, key: key.trim(), args: rest.split_whitespace().collect() });
    }
    Ok(out)
}

/// Fields shared by both automaton formats.
struct Skeleton<'a> {
    alphabet: OrderedAlphabet,
    states: Vec<String>,
    start: StateId,
    trans: Vec<Option<StateId>>,
    rest: Vec<Directive<'a>>,
}

fn single<'a, 'b>(ds: &'b [Directive<'a>], key: &str) -> Result<Option<&'b Directive<'a>>, ParseError> {
    let mut found = ds.iter().filter(|d| d.key == key);
    let first = found.next();
    if let Some(dup) = found.next() {
        return err(dup.line, format!("duplicate `{key}:` directive"));
    }
    Ok(first)
}

fn required<'a, 'b>(ds: &'b [Directive<'a>], key: &str) -> Result<&'b Directive<'a>, ParseError> {
    single(ds, key)?.ok_or_else(|| ParseError { line: 0, message: format!("missing `{key}:` directive") })
}

fn state_index(states: &[String], name: &str, line: usize) -> Result<StateId, ParseError> {
    states
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| ParseError { line, message: format!("unknown state `{name}`") })
}

fn skeleton<'a>(text: &'a str, extra: &[&str]) -> Result<Skeleton<'a>, ParseError> {
    let ds = directives(text)?;
    for d in &ds {
        if !["alphabet", "states", "start", "trans"].contains(&d.key) && !extra.contains(&d.key) {
            return err(d.line, format!("unknown directive `{}`", d.key));
        }
    }
    let a = required(&ds, "alphabet")?;
    let alphabet = OrderedAlphabet::new_user(a.args.iter().copied()).or_else(|e| err(a.line, e.to_string()))?;
    let s = required(&ds, "states")?;
    let mut seen = BTreeSet::new();
    for name in &s.args {
        if !seen.insert(*name) {
            return err(s.line, format!("duplicate state `{name}`"));
        }
    }
    if s.args.is_empty() {
        return err(s.line, "no states");
    }
    let states: Vec<String> = s.args.iter().map(|x| x.to_string()).collect();
    let st = required(&ds, "start")?;
    let [start] = st.args[..] else {
        return err(st.line, "`start:` takes exactly one state");
    };
    let start = state_index(&states, start, st.line)?;
    let k = alphabet.len();
    let mut trans = vec![None; states.len() * k];
    let mut rest = Vec::new();
    for d in ds {
        match d.key {
            "trans" => {
                let [p, a, q] = d.args[..] else {
                    return err(d.line, "`trans:` takes `state letter state`");
                };
                let p = state_index(&states, p, d.line)?;
                let q = state_index(&states, q, d.line)?;
                let Some(a) = alphabet.letter(a) else {
                    return err(d.line, format!("letter `{a}` is not in the alphabet"));
                };
                if trans[p * k + a].replace(q).is_some() {
                    return err(d.line, format!("duplicate transition from `{}` on `{}`", states[p], alphabet.symbol(a)));
                }
            }
            "alphabet" | "states" | "start" => {}
            _ => rest.push(d),
        }
    }
    Ok(Skeleton { alphabet, states, start, trans, rest })
}

pub fn parse_dfa(text: &str) -> Result<Dfa, ParseError> {
    let sk = skeleton(text, &["final"])?;
    let mut finals = vec![false; sk.states.len()];
    for d in &sk.rest {
        for name in &d.args {
            let q = state_index(&sk.states, name, d.line)?;
            if std::mem::replace(&mut finals[q], true) {
                return err(d.line, format!("state `{name}` listed as final twice"));
            }
        }
    }
    Dfa::from_parts(sk.alphabet, sk.states, sk.start, finals, sk.trans).or_else(|e| err(0, e.to_string()))
}

pub fn parse_dfao(text: &str) -> Result<Dfao, ParseError> {
    let sk = skeleton(text, &["outputs", "output"])?;
    let o = required(&sk.rest, "outputs")?;
    let outputs = OrderedAlphabet::new_user(o.args.iter().copied()).or_else(|e| err(o.line, e.to_string()))?;
    let mut output: Vec<Option<Option<usize>>> = vec![None; sk.states.len()];
    for d in sk.rest.iter().filter(|d| d.key == "output") {
        let [q, x] = d.args[..] else {
            return err(d.line, "`output:` takes `state symbol`");
        };
        let qi = state_index(&sk.states, q, d.line)?;
        let value = if x == BOTTOM_TOKEN {
            None
        } else {
            Some(outputs.letter(x).ok_or_else(|| ParseError {
                line: d.line,
                message: format!("output `{x}` is not in the output alphabet"),
            })?)
        };
        if output[qi].replace(value).is_some() {
            return err(d.line, format!("duplicate output for state `{q}`"));
        }
    }
    let output: Vec<Option<usize>> = output
        .into_iter()
        .enumerate()
        .map(|(q, o)| o.ok_or_else(|| ParseError { line: 0, message: format!("state `{}` has no output", sk.states[q]) }))
        .collect::<Result<_, _>>()?;
    Dfao::from_parts(sk.alphabet, outputs, sk.states, sk.start, output, sk.trans).or_else(|e| err(0, e.to_string()))
}

fn write_header<T: TransitionTable>(out: &mut String, t: &T, names: &[String]) {
    let _ = writeln!(out, "alphabet: {}", t.alphabet().symbols().join(" "));
    let _ = writeln!(out, "states: {}", names.join(" "));
    let _ = writeln!(out, "start: {}", names[t.start()]);
}

fn write_trans<T: TransitionTable>(out: &mut String, t: &T, names: &[String]) {
    for p in 0..t.num_states() {
        for a in 0..t.alphabet().len() {
            if let Some(q) = t.next(p, a) {
                let _ = writeln!(out, "trans: {} {} {}", names[p], t.alphabet().symbol(a), names[q]);
            }
        }
    }
}

pub fn write_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    write_header(&mut out, dfa, dfa.names());
    let finals: Vec<&str> = dfa.finals().map(|q| dfa.state_name(q)).collect();
    if finals.is_empty() {
        out.push_str("final:\n");
    } else {
        let _ = writeln!(out, "final: {}", finals.join(" "));
    }
    write_trans(&mut out, dfa, dfa.names());
    out
}

pub fn write_dfao(m: &Dfao) -> String {
    let mut out = String::new();
    write_header(&mut out, m, m.names());
    let _ = writeln!(out, "outputs: {}", m.outputs().symbols().join(" "));
    for q in 0..m.num_states() {
        let _ = writeln!(out, "output: {} {}", m.state_name(q), m.output_symbol(m.output(q)));
    }
    write_trans(&mut out, m, m.names());
    out
}

/// A morphism file: `φ`, its axiom and an optional coding `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFile {
    pub phi: Morphism,
    pub axiom: Letter,
    pub coding: Option<Morphism>,
}

impl MorphismFile {
    /// The substitution `(φ, h, axiom)`, when a coding is present.
    pub fn substitution(&self) -> Option<ans_core::Result<Substitution>> {
        self.coding.clone().map(|h| Substitution::new(self.phi.clone(), h, self.axiom))
    }
}

/// Symbols of a morphism file may carry the reserved prefix so that emitted
/// substitutions can be read back; `@eps` and `⊥` are still refused.
fn check_symbol(symbol: &str, line: usize) -> Result<(), ParseError> {
    if symbol == EPSILON_TOKEN || symbol == BOTTOM_TOKEN {
        return err(line, format!("`{symbol}` cannot be used as a letter"));
    }
    Ok(())
}

fn image_tokens(args: &str) -> Vec<&str> {
    let tokens: Vec<&str> = args.split_whitespace().collect();
    if tokens == [EPSILON_TOKEN] {
        Vec::new()
    } else {
        tokens
    }
}

pub fn parse_morphism(text: &str) -> Result<MorphismFile, ParseError> {
    let mut declared: Option<(usize, Vec<String>)> = None;
    let mut declared_outputs: Option<(usize, Vec<String>)> = None;
    let mut axiom: Option<(usize, String)> = None;
    let mut rules: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut coding: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = content.split_once("->") {
            let lhs = lhs.trim();
            let (target, head) = match lhs.strip_prefix("h:") {
                Some(head) => (&mut coding, head.trim()),
                None => (&mut rules, lhs),
            };
            if head.is_empty() || head.split_whitespace().count() != 1 {
                return err(line, format!("expected a single letter before `->`, found `{head}`"));
            }
            check_symbol(head, line)?;
            let image: Vec<String> = image_tokens(rhs).into_iter().map(String::from).collect();
            for s in &image {
                check_symbol(s, line)?;
            }
            target.push((line, head.to_string(), image));
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return err(line, format!("expected a rule `x -> ...` or a directive, found `{content}`"));
        };
        let args: Vec<String> = rest.split_whitespace().map(String::from).collect();
        let slot = match key.trim() {
            "alphabet" => &mut declared,
            "outputs" => &mut declared_outputs,
            "axiom" => {
                if axiom.is_some() {
                    return err(line, "duplicate `axiom:` directive");
                }
                let [a] = &args[..] else {
                    return err(line, "`axiom:` takes exactly one letter");
                };
                axiom = Some((line, a.clone()));
                continue;
            }
            other => return err(line, format!("unknown directive `{other}`")),
        };
        if slot.is_some() {
            return err(line, format!("duplicate `{}:` directive", key.trim()));
        }
        for s in &args {
            check_symbol(s, line)?;
        }
        *slot = Some((line, args));
    }

    let domain_symbols: Vec<String> = match &declared {
        Some((_, symbols)) => symbols.clone(),
        None => {
            let mut heads: Vec<String> = Vec::new();
            for r in &rules {
                if !heads.contains(&r.1) {
                    heads.push(r.1.clone());
                }
            }
            heads
        }
    };
    let domain_line = declared.as_ref().map_or(0, |d| d.0);
    let domain = OrderedAlphabet::new(domain_symbols).or_else(|e| err(domain_line, e.to_string()))?;
    let images = resolve_rules(&domain, &domain, &rules, "")?;
    let phi = Morphism::endomorphism(domain.clone(), images).or_else(|e| err(0, e.to_string()))?;
    let Some((axiom_line, axiom)) = axiom else {
        return err(0, "missing `axiom:` directive");
    };
    let axiom = domain
        .letter(&axiom)
        .ok_or_else(|| ParseError { line: axiom_line, message: format!("axiom `{axiom}` is not a letter") })?;

    let coding = if coding.is_empty() {
        if let Some((line, _)) = declared_outputs {
            return err(line, "`outputs:` given without `h:` rules");
        }
        None
    } else {
        let (line, symbols) = declared_outputs.unwrap_or_else(|| {
            let mut seen = Vec::new();
            for s in coding.iter().flat_map(|r| r.2.iter()) {
                if !seen.contains(s) {
                    seen.push(s.clone());
                }
            }
            (0, seen)
        });
        let outputs = OrderedAlphabet::new(symbols).or_else(|e| err(line, e.to_string()))?;
        let images = resolve_rules(&domain, &outputs, &coding, "h: ")?;
        Some(Morphism::new(domain, outputs, images).or_else(|e| err(0, e.to_string()))?)
    };
    Ok(MorphismFile { phi, axiom, coding })
}

fn resolve_rules(
    domain: &OrderedAlphabet,
    codomain: &OrderedAlphabet,
    rules: &[(usize, String, Vec<String>)],
    prefix: &str,
) -> Result<Vec<Word>, ParseError> {
    let mut images: BTreeMap<Letter, Word> = BTreeMap::new();
    for (line, head, image) in rules {
        let Some(x) = domain.letter(head) else {
            return err(*line, format!("`{head}` is not a letter of the alphabet"));
        };
        let word = image
            .iter()
            .map(|s| {
                codomain
                    .letter(s)
                    .ok_or_else(|| ParseError { line: *line, message: format!("`{s}` is not a letter of the image alphabet") })
            })
            .collect::<Result<Word, _>>()?;
        if images.insert(x, word).is_some() {
            return err(*line, format!("duplicate rule {prefix}`{head}`"));
        }
    }
    (0..domain.len())
        .map(|x| {
            images
                .remove(&x)
                .ok_or_else(|| ParseError { line: 0, message: format!("no rule {prefix}`{}`", domain.symbol(x)) })
        })
        .collect()
}

fn write_image(out: &mut String, alphabet: &OrderedAlphabet, word: &[Letter]) {
    if word.is_empty() {
        out.push_str(EPSILON_TOKEN);
    } else {
        let symbols: Vec<&str> = word.iter().map(|&l| alphabet.symbol(l)).collect();
        out.push_str(&symbols.join(" "));
    }
}

pub fn write_morphism(file: &MorphismFile) -> String {
    let mut out = String::new();
    let phi = &file.phi;
    let _ = writeln!(out, "alphabet: {}", phi.domain().symbols().join(" "));
    if let Some(h) = &file.coding {
        let _ = writeln!(out, "outputs: {}", h.codomain().symbols().join(" "));
    }
    let _ = writeln!(out, "axiom: {}", phi.domain().symbol(file.axiom));
    for x in 0..phi.domain().len() {
        let _ = write!(out, "{} -> ", phi.domain().symbol(x));
        write_image(&mut out, phi.codomain(), phi.image(x));
        out.push('\n');
    }
    if let Some(h) = &file.coding {
        for x in 0..h.domain().len() {
            let _ = write!(out, "h: {} -> ", h.domain().symbol(x));
            write_image(&mut out, h.codomain(), h.image(x));
            out.push('\n');
        }
    }
    out
}

pub fn write_substitution(t: &Substitution) -> String {
    write_morphism(&MorphismFile { phi: t.phi().clone(), axiom: t.seed(), coding: Some(t.coding().clone()) })
}

/// Reads a word typed on the command line: `@eps`, a run of one-character
/// symbols, or symbols separated by spaces or commas.
pub fn parse_word(alphabet: &OrderedAlphabet, text: &str) -> ans_core::Result<Word> {
    let text = text.trim();
    if text == EPSILON_TOKEN || text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains([' ', ',']) || !alphabet.is_single_char() {
        alphabet.word(text.split([' ', ',']).filter(|s| !s.is_empty()))
    } else {
        alphabet.parse_chars(text)
    }
}

/// Symbols of a user alphabet given on the command line.
pub fn parse_symbols(text: &str) -> ans_core::Result<OrderedAlphabet> {
    let symbols: Vec<&str> = if text.contains([' ', ',']) {
        text.split([' ', ',']).filter(|s| !s.is_empty()).collect()
    } else {
        text.split("").filter(|s| !s.is_empty()).collect()
    };
    if let Some(s) = symbols.iter().find(|s| is_reserved(s)) {
        return Err(ans_core::Error::ReservedSymbol(s.to_string()));
    }
    OrderedAlphabet::new_user(symbols)
}

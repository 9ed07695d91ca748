//! Totally ordered finite alphabets.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result, BOTTOM_TOKEN, EPSILON_TOKEN, FRESH_PREFIX};

/// Index of a symbol in its [`OrderedAlphabet`]; comparing letters compares
/// symbols in alphabet order.
pub type Letter = usize;

/// A finite word, as a sequence of letters.
pub type Word = Vec<Letter>;

/// A finite set of distinct symbols together with a total order: the
/// declaration order is the `<` of the alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedAlphabet {
    symbols: Vec<String>,
}

impl OrderedAlphabet {
    /// Builds an alphabet from symbols listed in increasing order.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// Like [`OrderedAlphabet::new`], but also rejects the reserved tokens
    /// (`@eps`, `⊥` and anything starting with the fresh-letter prefix).
    pub fn new_user<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let alphabet = Self::new(symbols)?;
        if let Some(s) = alphabet.symbols.iter().find(|s| is_reserved(s)) {
            return Err(Error::ReservedSymbol(s.clone()));
        }
        Ok(alphabet)
    }

    /// Alphabet `{a < b < c < ...}` of the given size; beyond 26 letters the
    /// symbols are `x26`, `x27`, ...
    pub fn latin(size: usize) -> Self {
        let symbols = (0..size.max(1))
            .map(|i| {
                if i < 26 {
                    char::from(b'a' + i as u8).to_string()
                } else {
                    alloc::format!("x{i}")
                }
            })
            .collect();
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Converts a sequence of symbols into a word.
    pub fn word<'a, I>(&self, symbols: I) -> Result<Word>
    where
        I: IntoIterator<Item = &'a str>,
    {
        symbols
            .into_iter()
            .map(|s| self.letter(s).ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect()
    }

    /// Parses a word written as a plain string, one character per symbol.
    /// Only meaningful when every symbol is a single character.
    pub fn parse_chars(&self, text: &str) -> Result<Word> {
        let mut buf = [0u8; 4];
        text.chars()
            .map(|c| {
                let s = c.encode_utf8(&mut buf);
                self.letter(s).ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect()
    }

    /// True when every symbol is a single character, so words can be printed
    /// without separators.
    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Renders a word; `@eps` for the empty word, symbols concatenated for
    /// single-character alphabets and space separated otherwise.
    pub fn render(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return EPSILON_TOKEN.to_string();
        }
        let sep = if self.is_single_char() { "" } else { " " };
        let parts: Vec<&str> = word.iter().map(|&l| self.symbol(l)).collect();
        parts.join(sep)
    }

    /// Compares two words in shortlex order: length first, then
    /// lexicographically by the alphabet order.
    pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }
}

impl fmt::Debug for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            f.write_str(s)?;
        }
        f.write_str("}")
    }
}

/// Tokens that cannot be user symbols.
pub fn is_reserved(symbol: &str) -> bool {
    symbol == EPSILON_TOKEN || symbol == BOTTOM_TOKEN || symbol.starts_with(FRESH_PREFIX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_duplicates_and_reserved() {
        assert_eq!(
            OrderedAlphabet::new(["a", "b", "a"]),
            Err(Error::DuplicateSymbol("a".into()))
        );
        assert_eq!(OrderedAlphabet::new(Vec::<String>::new()), Err(Error::EmptyAlphabet));
        assert_eq!(
            OrderedAlphabet::new_user(["a", "@eps"]),
            Err(Error::ReservedSymbol("@eps".into()))
        );
        assert_eq!(
            OrderedAlphabet::new_user(["%alpha"]),
            Err(Error::ReservedSymbol("%alpha".into()))
        );
        assert!(OrderedAlphabet::new(["%alpha"]).is_ok());
    }

    #[test]
    fn order_is_declaration_order() {
        let sigma = OrderedAlphabet::new(["b", "a"]).unwrap();
        assert_eq!(sigma.letter("b"), Some(0));
        assert_eq!(sigma.parse_chars("ab").unwrap(), vec![1, 0]);
        assert_eq!(sigma.render(&[1, 0]), "ab");
        assert_eq!(sigma.render(&[]), "@eps");
    }

    #[test]
    fn shortlex() {
        assert_eq!(OrderedAlphabet::shortlex_cmp(&[1], &[0, 0]), Ordering::Less);
        assert_eq!(OrderedAlphabet::shortlex_cmp(&[0, 1], &[1, 0]), Ordering::Less);
        assert_eq!(OrderedAlphabet::shortlex_cmp(&[], &[]), Ordering::Equal);
    }

    #[test]
    fn latin_names() {
        let sigma = OrderedAlphabet::latin(28);
        assert_eq!(sigma.symbol(3), "d");
        assert_eq!(sigma.symbol(27), "x27");
    }
}

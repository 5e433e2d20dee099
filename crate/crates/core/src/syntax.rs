//! Text syntax for words.
//!
//! ```text
//! word  := item*
//! item  := atom ('^' int)?
//! atom  := letter | '1' | '(' word ')' | '[' word ',' word ']'
//! int   := '-'? digit+
//! ```
//!
//! Lowercase `a`..`z` are generators 1..26, uppercase their inverses, `1`
//! is the identity, `[u,v]` is `u v u⁻¹ v⁻¹`. Whitespace is ignored.

use thiserror::Error;

use crate::words::{reduce, Letter, Word, WordError};

pub const GRAMMAR: &str = "\
word  := item*
item  := atom ('^' int)?
atom  := letter | '1' | '(' word ')' | '[' word ',' word ']'
int   := '-'? digit+
a..z are generators 1..26, A..Z their inverses, 1 is the identity,
[u,v] = u v u^-1 v^-1, whitespace is ignored.
Examples: abAB, a^3, (ab)^-2, [a,b]";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("column {column}: {source}")]
    Word {
        column: usize,
        #[source]
        source: WordError,
    },
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    rank: u8,
}

impl Parser {
    fn new(src: &str, rank: u8) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Parser {
            chars,
            pos: 0,
            rank,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map_or(1, |&(i, _)| i + 1))
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = Word::identity(self.rank);
        while let Some(c) = self.peek() {
            if matches!(c, ')' | ']' | ',') {
                break;
            }
            let item = self.item()?;
            acc = &acc * &item;
        }
        Ok(acc)
    }

    fn item(&mut self) -> Result<Word, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            Ok(atom.pow(k))
        } else {
            Ok(atom)
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.column();
        let mut negative = false;
        if self.peek() == Some('-') {
            negative = true;
            self.pos += 1;
        }
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return self.err("expected an integer exponent");
        }
        let k: i64 = digits.parse().map_err(|_| ParseError::Syntax {
            column: start,
            message: "exponent out of range".into(),
        })?;
        if k > 1 << 20 {
            return Err(ParseError::Syntax {
                column: start,
                message: "exponent out of range".into(),
            });
        }
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        let column = self.column();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Ok(&u * &v * &u.inverse() * &v.inverse())
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::identity(self.rank))
            }
            Some(c) => match Letter::from_char(c) {
                Some(l) => {
                    self.pos += 1;
                    reduce(self.rank, [l]).map_err(|source| ParseError::Word { column, source })
                }
                None => self.err(format!("unexpected character '{c}'")),
            },
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a word in `F_rank` and freely reduces it.
pub fn parse_word(text: &str, rank: u8) -> Result<Word, ParseError> {
    if rank == 0 || rank > crate::words::MAX_RANK {
        return Err(ParseError::Word {
            column: 1,
            source: WordError::InvalidRank(rank),
        });
    }
    let mut p = Parser::new(text, rank);
    let w = p.word()?;
    if let Some(c) = p.peek() {
        return p.err(format!("unexpected '{c}'"));
    }
    Ok(w)
}

/// Renders a word so that [`parse_word`] reads it back unchanged.
pub fn render(w: &Word) -> String {
    w.to_string()
}

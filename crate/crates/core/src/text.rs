//! Whitespace tokenizer with line/column tracking for the text formats.

use crate::error::{NcfError, Result};
use crate::field::PrimeField;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: String) -> NcfError {
        NcfError::Parse {
            line: self.line,
            column: self.column,
            message,
        }
    }

    pub fn number(&self) -> Result<u64> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found {:?}", self.text)))
    }

    pub fn element(&self, field: PrimeField) -> Result<u8> {
        let v = self.number()?;
        field
            .element(v)
            .map_err(|_| self.error(format!("{v} is not an element of {field}")))
    }
}

/// Splits input into whitespace-separated tokens. Lines starting with `#` are skipped.
pub(crate) struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    end: (usize, usize),
}

impl<'a> Tokens<'a> {
    pub fn new(input: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut end = (1, 1);
        for (li, line) in input.lines().enumerate() {
            end = (li + 1, line.chars().count() + 1);
            if line.trim_start().starts_with('#') {
                continue;
            }
            tokens.extend(line_tokens(line, li + 1));
        }
        Self { tokens, pos: 0, end }
    }

    pub fn next_token(&mut self, what: &str) -> Result<Token<'a>> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(*t)
            }
            None => Err(NcfError::Parse {
                line: self.end.0,
                column: self.end.1,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(t.error(format!("unexpected trailing token {:?}", t.text))),
        }
    }
}

/// Tokens of a single line with 1-based character columns.
pub(crate) fn line_tokens(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push(Token {
                    text: &line[b..byte],
                    line: line_no,
                    column: c,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push(Token {
            text: &line[b..],
            line: line_no,
            column: c,
        });
    }
    out
}

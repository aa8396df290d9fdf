//! Tokenizer shared by model files and strategy/command text.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Identifiers and keywords. May contain inner hyphens (`fixed-time`)
    /// and, for `after=`/`before=`, a trailing `=`.
    Ident(String),
    /// Quoted identifier such as `'send`; stored without the quote.
    Qid(String),
    Num(u64),
    /// `s.t.`
    SuchThat,
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Qid(s) => write!(f, "`'{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::SuchThat => f.write_str("`s.t.`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// A syntax error with its source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into() }
    }
}

// Longest first.
const PUNCT: &[&str] = &[
    "|->", "=/=", "==", "=>", "<=", ">=", "/\\", "\\/", "<", ">", "|", ":", ",", "(", ")", "[", "]", "{", "}", ";",
    "+", "/", ".",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }

    let starts_with = |i: usize, s: &str| s.chars().enumerate().all(|(k, c)| chars.get(i + k) == Some(&c));

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if starts_with(i, "---") {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if starts_with(i, "s.t.") && !chars.get(i + 4).is_some_and(|c| is_ident_char(*c)) {
            out.push(Token { tok: Tok::SuchThat, pos });
            advance!(4);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!(1);
            }
            let text: String = chars[start..i].iter().collect();
            let n =
                text.parse::<u64>().map_err(|_| SyntaxError::new(pos, format!("number `{text}` is out of range")))?;
            out.push(Token { tok: Tok::Num(n), pos });
            continue;
        }
        if c == '\'' {
            advance!(1);
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                advance!(1);
            }
            if start == i {
                return Err(SyntaxError::new(pos, "expected identifier after `'`"));
            }
            out.push(Token { tok: Tok::Qid(chars[start..i].iter().collect()), pos });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            loop {
                while i < chars.len() && is_ident_char(chars[i]) {
                    advance!(1);
                }
                // Inner hyphen followed by a letter continues the identifier.
                if i + 1 < chars.len() && chars[i] == '-' && chars[i + 1].is_ascii_alphabetic() {
                    advance!(1);
                    continue;
                }
                break;
            }
            let mut text: String = chars[start..i].iter().collect();
            if (text == "after" || text == "before")
                && chars.get(i) == Some(&'=')
                && !matches!(chars.get(i + 1), Some('=' | '/' | '>'))
            {
                advance!(1);
                text.push('=');
            }
            out.push(Token { tok: Tok::Ident(text), pos });
            continue;
        }
        match PUNCT.iter().find(|p| starts_with(i, p)) {
            Some(p) => {
                out.push(Token { tok: Tok::Punct(p), pos });
                advance!(p.chars().count());
            }
            None => return Err(SyntaxError::new(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Cursor over a token vector with the helpers every parser here needs.
pub struct Cursor {
    toks: Vec<Token>,
    idx: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor, SyntaxError> {
        Ok(Cursor { toks: tokenize(src)?, idx: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.idx + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.idx].pos
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].tok.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    pub fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), SyntaxError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub fn expect_num(&mut self) -> Result<u64, SyntaxError> {
        match self.peek() {
            Tok::Num(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::new(self.pos(), format!("expected {expected}, found {}", self.peek()))
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.pos(), message)
    }
}

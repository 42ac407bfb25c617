//! The ASCII text grammar shared by every file format.

use super::{BinOp, Constant, Formula, Sequent, Theory};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Const(Constant),
    Op(BinOp),
    LParen,
    RParen,
    Comma,
    Turnstile,
    Semi,
    Arrow,
    Question,
    Colon,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "top"
        && s != "bot"
}

/// Tokenizer; `line` is only used in error messages.
pub struct Lexer {
    pub tokens: Vec<Token>,
    pub pos: usize,
    pub line: usize,
}

impl Lexer {
    pub fn new(text: &str, line: usize) -> Result<Lexer> {
        let bytes = text.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let next = bytes.get(i + 1).map(|b| *b as char);
            let (tok, len) = match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                    continue;
                }
                '(' => (Token::LParen, 1),
                ')' => (Token::RParen, 1),
                ',' => (Token::Comma, 1),
                ';' => (Token::Semi, 1),
                ':' => (Token::Colon, 1),
                '?' => (Token::Question, 1),
                '*' => (Token::Op(BinOp::Fusion), 1),
                '|' if next == Some('-') => (Token::Turnstile, 2),
                '=' if next == Some('>') => (Token::Arrow, 2),
                '/' if next == Some('\\') => (Token::Op(BinOp::Meet), 2),
                '/' => (Token::Op(BinOp::Over), 1),
                '\\' if next == Some('/') => (Token::Op(BinOp::Join), 2),
                '\\' => (Token::Op(BinOp::Under), 1),
                '0' | '1' => {
                    if next.is_some_and(|n| n.is_ascii_alphanumeric() || n == '_') {
                        return Err(Error::parse(line, format!("bad token at column {}", i + 1)));
                    }
                    let k = if c == '0' { Constant::Zero } else { Constant::One };
                    (Token::Const(k), 1)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let end = bytes[i..]
                        .iter()
                        .position(|b| !(b.is_ascii_alphanumeric() || *b == b'_'))
                        .map_or(bytes.len(), |p| i + p);
                    let word = &text[i..end];
                    let tok = match word {
                        "top" => Token::Const(Constant::Top),
                        "bot" => Token::Const(Constant::Bot),
                        _ => Token::Ident(word.to_string()),
                    };
                    (tok, end - i)
                }
                other => {
                    return Err(Error::parse(
                        line,
                        format!("unexpected character `{other}` at column {}", i + 1),
                    ))
                }
            };
            tokens.push(tok);
            i += len;
        }
        Ok(Lexer { tokens, pos: 0, line })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub fn next_token(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, message)
    }

    pub fn expect(&mut self, want: &Token) -> Result<()> {
        match self.next_token() {
            Some(t) if &t == want => Ok(()),
            Some(t) => Err(self.error(format!("expected {want:?}, found {t:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of input"))),
        }
    }

    pub fn formula(&mut self) -> Result<Formula> {
        let left = self.operand()?;
        if let Some(Token::Op(op)) = self.peek().cloned() {
            self.pos += 1;
            let right = self.operand()?;
            if let Some(Token::Op(_)) = self.peek() {
                return Err(self.error("nested binary operators need explicit parentheses"));
            }
            return Ok(Formula::bin(op, left, right));
        }
        Ok(left)
    }

    fn operand(&mut self) -> Result<Formula> {
        match self.next_token() {
            Some(Token::Ident(name)) => Ok(Formula::var(&name)),
            Some(Token::Const(c)) => Ok(Formula::Const(c)),
            Some(Token::LParen) => {
                let f = self.formula()?;
                self.expect(&Token::RParen)?;
                Ok(f)
            }
            Some(t) => Err(self.error(format!("expected a formula, found {t:?}"))),
            None => Err(self.error("expected a formula, found end of input")),
        }
    }

    pub fn sequent(&mut self) -> Result<Sequent> {
        let mut antecedent = Vec::new();
        if self.peek() != Some(&Token::Turnstile) {
            loop {
                antecedent.push(self.formula()?);
                match self.peek() {
                    Some(Token::Comma) => self.pos += 1,
                    _ => break,
                }
            }
        }
        self.expect(&Token::Turnstile)?;
        let succedent = match self.peek() {
            None | Some(Token::Semi) | Some(Token::Arrow) => None,
            _ => Some(self.formula()?),
        };
        Ok(Sequent { antecedent, succedent })
    }

    pub fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("trailing input starting at {t:?}"))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut lx = Lexer::new(text, 1)?;
    let f = lx.formula()?;
    lx.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent> {
    parse_sequent_at(text, 1)
}

fn parse_sequent_at(text: &str, line: usize) -> Result<Sequent> {
    let mut lx = Lexer::new(text, line)?;
    let s = lx.sequent()?;
    lx.finish()?;
    Ok(s)
}

/// One sequent per line; `#` starts a comment.
pub fn parse_theory(text: &str) -> Result<Theory> {
    let mut sequents = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        sequents.push(parse_sequent_at(line, i + 1)?);
    }
    Ok(Theory::new(sequents))
}

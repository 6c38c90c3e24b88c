//! Text syntax for max-plus expressions.
//!
//! ```text
//! expr  := ["+" | "-"] term { ("+" | "-") term }
//! term  := [posint ["*"]] atom | int
//! atom  := "max" "(" expr { "," expr } ")" | "(" expr ")" | "x" | "y"
//! ```
//!
//! Whitespace is ignored and `2x` is the same as `2*x`. Constants other than
//! `0` are tropical coefficients and are rejected.

use crate::error::{Error, Result};
use crate::maxplus::MaxPlusExpr;

struct Parser {
    src: Vec<char>,
    pos: usize,
}

impl Parser {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.column(), message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn expr(&mut self) -> Result<MaxPlusExpr> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negative { MaxPlusExpr::negate(t) } else { t });
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(MaxPlusExpr::sum(terms))
    }

    fn integer(&mut self) -> Result<Option<(i64, usize)>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text: String = self.src[start..self.pos].iter().collect();
        match text.parse() {
            Ok(k) => Ok(Some((k, start + 1))),
            Err(_) => Err(Error::Syntax { column: start + 1, message: format!("integer {text} out of range") }),
        }
    }

    fn term(&mut self) -> Result<MaxPlusExpr> {
        let Some((k, col)) = self.integer()? else {
            return self.atom();
        };
        match self.peek() {
            Some('*') => {
                self.pos += 1;
                let a = self.atom()?;
                Ok(MaxPlusExpr::scale(k, a))
            }
            Some('x' | 'y' | 'm' | '(') => {
                let a = self.atom()?;
                Ok(MaxPlusExpr::scale(k, a))
            }
            _ if k == 0 => Ok(MaxPlusExpr::Linear(0, 0)),
            _ => Err(Error::NonzeroTropicalCoefficient { column: col }),
        }
    }

    fn atom(&mut self) -> Result<MaxPlusExpr> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(MaxPlusExpr::Linear(1, 0))
            }
            Some('y') => {
                self.pos += 1;
                Ok(MaxPlusExpr::Linear(0, 1))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('m') => {
                let word: String = self.src[self.pos..].iter().take(3).collect();
                if word != "max" {
                    return self.error("expected 'max'");
                }
                self.pos += 3;
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(MaxPlusExpr::max(args))
            }
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<MaxPlusExpr> {
    let mut p = Parser { src: src.chars().collect(), pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => p.error(format!("unexpected '{c}'")),
    }
}

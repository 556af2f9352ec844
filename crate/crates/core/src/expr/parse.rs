use num_bigint::BigInt;

use super::ExprError;
use crate::ring::{Poly, Symbol};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Schematic(String, u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            let n = digits.parse::<BigInt>().expect("digits");
            out.push(Spanned { tok: Tok::Int(n), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            if i < chars.len() && chars[i] == '#' {
                let hash = i;
                i += 1;
                let dstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[dstart..i].iter().collect();
                let uid = digits.parse::<u64>().map_err(|_| ExprError::Syntax {
                    line: l0,
                    column: c0 + (hash - start) + 1,
                    message: "expected a uid after `#`".into(),
                })?;
                column += i - start;
                out.push(Spanned { tok: Tok::Schematic(name, uid), line: l0, column: c0 });
            } else {
                column += i - start;
                out.push(Spanned { tok: Tok::Ident(name), line: l0, column: c0 });
            }
            continue;
        }
        return Err(ExprError::Syntax {
            line: l0,
            column: c0,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'a, S> {
    toks: Vec<Spanned>,
    pos: usize,
    declared: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        let t = &self.toks[self.pos];
        ExprError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn poly(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.multiply(&self.factor()?);
        }
        Ok(if negative { acc.negate() } else { acc })
    }

    fn factor(&mut self) -> Result<Poly, ExprError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let exp = match self.peek().clone() {
                Tok::Int(n) => n,
                _ => return Err(self.error("expected a natural-number exponent")),
            };
            let exp = u32::try_from(&exp).map_err(|_| self.error("exponent too large"))?;
            self.bump();
            base = base.pow(exp);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly, ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Poly::constant(n)),
            Tok::Ident(name) => {
                if !self.declared.iter().any(|d| d.as_ref() == name) {
                    return Err(ExprError::Undeclared { name, line: t.line, column: t.column });
                }
                Ok(Poly::var(Symbol::base(&name).expect("lexer yields identifiers")))
            }
            Tok::Schematic(name, uid) => {
                Ok(Poly::var(Symbol::schematic(&name, uid).expect("lexer yields identifiers")))
            }
            Tok::LParen => {
                let p = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::LBracket => {
                let p = self.poly()?;
                self.expect(Tok::Comma, "`,`")?;
                let q = self.poly()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(p.commutator(&q))
            }
            _ => Err(ExprError::Syntax {
                line: t.line,
                column: t.column,
                message: "expected an integer, identifier, `(` or `[`".into(),
            }),
        }
    }
}

/// Parses a ring expression over the declared base symbols.
///
/// `*` is the noncommutative product, `^` takes a natural-number exponent,
/// `[p, q]` is the commutator and `name#uid` denotes a schematic symbol.
pub fn parse_poly<S: AsRef<str>>(src: &str, declared: &[S]) -> Result<Poly, ExprError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, declared };
    let p = parser.poly()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

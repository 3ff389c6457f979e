use std::sync::Arc;

use super::{BinOp, Expr, Func, NamedConst};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
}

/// Parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{} at offset {offset}", describe(kind))]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(msg) => format!("syntax error: {msg}"),
        ParseErrorKind::UnknownIdentifier(name) => format!("unknown identifier `{name}`"),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&b) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let tok = match b {
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(b)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => self.number(start)?,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                // identifiers are pure ASCII by construction
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Ident(text.to_string())
            }
            _ => {
                return Err(syntax(start, "unexpected character"));
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.src.get(lx.pos).is_some_and(u8::is_ascii_digit) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(syntax(start, "malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            // only an exponent when digits follow
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(start, "malformed number"))?;
        if !value.is_finite() {
            return Err(syntax(start, "number out of range"));
        }
        Ok(Tok::Num(value))
    }
}

fn syntax(offset: usize, msg: &str) -> ParseError {
    ParseError {
        offset,
        kind: ParseErrorKind::Syntax(msg.to_string()),
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn unexpected(&self) -> ParseError {
        match self.tok {
            Tok::End => syntax(self.at, "unexpected end of input"),
            _ => syntax(self.at, "unexpected token"),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ (b'+' | b'-')) = self.tok {
            self.bump()?;
            let rhs = self.term()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Tok::Op(c @ (b'*' | b'/')) = self.tok {
            self.bump()?;
            let rhs = self.factor()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    // factor := ('-')? power
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Op(b'-') {
            self.bump()?;
            let inner = self.power()?;
            return Ok(Expr::Neg(Arc::new(inner)));
        }
        self.power()
    }

    // power := atom ('^' factor)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op(b'^') {
            self.bump()?;
            let exp = self.factor()?;
            return Ok(Expr::Binary(BinOp::Pow, Arc::new(base), Arc::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                match name.as_str() {
                    "u" => return Ok(Expr::Var),
                    "pi" => return Ok(Expr::Named(NamedConst::Pi)),
                    "e" => return Ok(Expr::Named(NamedConst::E)),
                    _ => {}
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    });
                };
                if self.tok != Tok::LParen {
                    return Err(syntax(self.at, "expected `(` after function name"));
                }
                self.bump()?;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Arc::new(arg)))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return Err(match self.tok {
                Tok::End => syntax(self.at, "unexpected end of input, expected `)`"),
                _ => syntax(self.at, "expected `)`"),
            });
        }
        self.bump()
    }
}

/// Parses an expression in `u`.
///
/// `^` binds tightest and is right-associative, then unary minus, then
/// `*`/`/`, then `+`/`-`.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    if p.tok == Tok::End {
        return Err(syntax(p.at, "empty expression"));
    }
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, u: f64) -> f64 {
        parse_expression(text).unwrap().eval(u).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("-u^2", 3.0), -9.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("2*3+4", 0.0), 10.0);
        assert_eq!(ev("2*(3+4)", 0.0), 14.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("2*-u", 1.5), -3.0);
        assert_eq!(ev(" 1.5e1 + .5 ", 0.0), 15.5);
        assert_eq!(ev("2e2", 0.0), 200.0);
        assert!(parse_expression("2e").is_err());
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        let err = parse_expression("cos(").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expression("1 + x").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("x".into()));
    }

    #[test]
    fn other_syntax_errors() {
        for (text, offset) in [("", 0), ("1 +", 3), ("sin u", 4), ("(1))", 3), ("1 $ 2", 2), ("--u", 1)] {
            let err = parse_expression(text).unwrap_err();
            assert_eq!(err.offset, offset, "{text}: {err}");
        }
        assert!(parse_expression("1e999").is_err());
    }
}

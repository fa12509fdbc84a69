use super::expr::{Expr, Func};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("variable x{index} at byte {offset} exceeds chart dimension {dim}")]
    VariableOutOfRange {
        offset: usize,
        index: usize,
        dim: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::VariableOutOfRange { offset, .. } => Some(*offset),
        }
    }
}

/// Parses a scalar field over coordinates `x1..x{dim}`.
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := base ('^' integer)?
/// base   := number | 'x' integer | '(' expr ')' | func '(' expr ')' | '-' base
/// func   := sin | cos | exp | sqrt
/// ```
///
/// Unary minus lives inside `base`, so `-x1^2` is `(-x1)^2`.
pub fn parse_expr(text: &str, dim: usize) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if op == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.digits();
            if k.is_empty() {
                return Err(self.syntax("expected integer exponent"));
            }
            let k: u32 = k.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.base()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        self.digits();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            self.digits();
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits().is_empty() {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        if name == "x" {
            let digits = self.digits();
            if digits.is_empty() {
                return Err(ParseError::UnknownIdentifier {
                    offset: start,
                    name,
                });
            }
            let index: usize = digits.parse().unwrap_or(usize::MAX);
            if index == 0 || index > self.dim {
                return Err(ParseError::VariableOutOfRange {
                    offset: start,
                    index,
                    dim: self.dim,
                });
            }
            return Ok(Expr::Var(index - 1));
        }
        match Func::from_name(&name) {
            Some(func) => {
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::Func(func, Box::new(arg)))
            }
            None => {
                // consume a trailing index so `y3` reports as `y3`
                let tail = self.digits();
                Err(ParseError::UnknownIdentifier {
                    offset: start,
                    name: name + &tail,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Box<Expr> {
        Box::new(Expr::Var(i))
    }

    #[test]
    fn parses_constant_zero() {
        assert_eq!(parse_expr("0", 6).unwrap(), Expr::Const(0.0));
    }

    #[test]
    fn parses_sin_times_power() {
        let e = parse_expr("sin(x1)*x2^2", 6).unwrap();
        let expected = Expr::Mul(
            Box::new(Expr::Func(Func::Sin, v(0))),
            Box::new(Expr::Pow(v(1), 2)),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_fubini_study_denominator() {
        let e = parse_expr("1/(1+x1^2+x2^2)^2", 6).unwrap();
        let inner = Expr::Add(
            Box::new(Expr::Add(
                Box::new(Expr::Const(1.0)),
                Box::new(Expr::Pow(v(0), 2)),
            )),
            Box::new(Expr::Pow(v(1), 2)),
        );
        let expected = Expr::Div(
            Box::new(Expr::Const(1.0)),
            Box::new(Expr::Pow(Box::new(inner), 2)),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse_expr("  x1 *  x2 ", 2).unwrap(),
            parse_expr("x1*x2", 2).unwrap()
        );
    }

    #[test]
    fn unary_minus_binds_inside_power() {
        let e = parse_expr("-x1^2", 1).unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::Neg(v(0))), 2));
        assert_eq!(e.eval(&[3.0]), 9.0);
    }

    #[test]
    fn reports_syntax_offset() {
        let err = parse_expr("x1 + * x2", 2).unwrap_err();
        assert_eq!(err.offset(), Some(5));
        let err = parse_expr("(x1", 2).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 3, .. }));
    }

    #[test]
    fn rejects_unknown_identifier_and_bad_variable() {
        assert!(matches!(
            parse_expr("tan(x1)", 2),
            Err(ParseError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expr("1 + x9", 6),
            Err(ParseError::VariableOutOfRange {
                offset: 4,
                index: 9,
                dim: 6
            })
        ));
        assert!(matches!(
            parse_expr("x0", 6),
            Err(ParseError::VariableOutOfRange { index: 0, .. })
        ));
        assert_eq!(parse_expr("   ", 3), Err(ParseError::Empty));
    }

    #[test]
    fn scientific_notation_numbers() {
        assert_eq!(parse_expr("2.5e-3", 1).unwrap(), Expr::Const(2.5e-3));
        assert_eq!(parse_expr(".5", 1).unwrap(), Expr::Const(0.5));
    }

    #[test]
    fn print_reparse_is_structural_identity() {
        for text in [
            "x1 - (x2 - x3)",
            "-(x1^2)",
            "-x1^2",
            "1/(1+x1^2+x2^2)^2",
            "sqrt(exp(x1)*cos(x2)) / (x3/(x1*x2))",
            "0.1 + 1e-20*x4",
        ] {
            let e = parse_expr(text, 4).unwrap();
            let again = parse_expr(&e.to_string(), 4).unwrap();
            assert_eq!(e, again, "{text}");
        }
    }
}

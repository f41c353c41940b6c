//! Complex expressions in one variable `z`, used for holomorphic data.
//!
//! Grammar, from loosest to tightest binding:
//!
//! ```text
//! sum     = product (('+' | '-') product)*
//! product = unary (('*' | '/') unary)*
//! unary   = '-' unary | power
//! power   = atom ('^' ['-'] integer)?
//! atom    = number ['i'] | 'z' | 'exp' '(' sum ')' | '(' sum ')'
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// A real or purely imaginary literal.
    Num(Complex64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
}

impl Expr {
    /// Evaluates at `z`. Poles come out as non-finite values.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Num(c) => *c,
            Expr::Var => z,
            Expr::Neg(e) => -e.eval(z),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(z), b.eval(z));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => divide(a, b),
                }
            }
            Expr::Pow(e, n) => {
                let b = e.eval(z);
                if *n < 0 {
                    divide(Complex64::new(1.0, 0.0), b.powi(-n))
                } else {
                    b.powi(*n)
                }
            }
            Expr::Exp(e) => e.eval(z).exp(),
        }
    }

    /// True when evaluation at `z` hits a pole or overflows.
    pub fn is_pole(&self, z: Complex64) -> bool {
        let v = self.eval(z);
        !(v.re.is_finite() && v.im.is_finite())
    }
}

// Division by exact zero is a pole, never a silently finite number.
fn divide(a: Complex64, b: Complex64) -> Complex64 {
    if b.norm_sqr() == 0.0 {
        Complex64::new(f64::INFINITY, f64::INFINITY)
    } else {
        a / b
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) if c.im == 0.0 => write!(f, "{}", c.re),
            Expr::Num(c) => write!(f, "{}i", c.im),
            Expr::Var => write!(f, "z"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Pow(e, n) => write!(f, "({e}^{n})"),
            Expr::Exp(e) => write!(f, "exp({e})"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, CliError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> CliError {
        CliError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.product()?));
        }
    }

    fn product(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let n: i32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| CliError::Syntax {
                offset: start,
                message: "exponent out of range".to_string(),
            })?;
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    "z" => Ok(Expr::Var),
                    "exp" => {
                        if !self.eat(b'(') {
                            return Err(self.error("expected '(' after exp"));
                        }
                        let e = self.sum()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        Ok(Expr::Exp(Box::new(e)))
                    }
                    name => Err(CliError::UnknownIdentifier {
                        offset: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, CliError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let before = self.pos;
            digits(self);
            if before == self.pos {
                // not an exponent after all, e.g. "2exp(z)" is rejected later
                self.pos = mark;
            }
        }
        let value: f64 = self.src[start..self.pos]
            .parse()
            .map_err(|_| CliError::Syntax {
                offset: start,
                message: "malformed number".to_string(),
            })?;
        if self.peek() == Some(b'i') {
            let after = self.src.as_bytes().get(self.pos + 1);
            if !after.is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                self.pos += 1;
                return Ok(Expr::Num(Complex64::new(0.0, value)));
            }
        }
        Ok(Expr::Num(Complex64::new(value, 0.0)))
    }
}

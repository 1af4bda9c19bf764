//! Text syntax for term trees.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := scalar '*' term | chain
//! chain   := postfix ('*' postfix)*
//! postfix := factor "'"*
//! factor  := var | "d(" expr ")" | "d" digits "(" expr ")"
//!          | opname "(" expr "," expr ")" | "star(" expr ")"
//!          | "assoc(" expr "," expr "," expr ")" | "bracket(" expr "," expr ")"
//!          | "sum(" [expr ("," expr)*] ")" | "(" expr ")"
//! scalar  := ['-'] digits ['/' digits] | "delta"
//! var     := 'x' digits
//! ```
//!
//! A postfix prime is the first derivation. A leading `-` before a rational
//! folds into the scalar.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::ProductTag;
use crate::error::{Error, Result};
use crate::identity::{Expr, ScalarLit};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Prime,
    Comma,
    LParen,
    RParen,
    End,
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: l,
                column: col,
            })
        };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphanumeric() {
                    break;
                }
                // keep `x12` and `d2` whole, but split `2x1`-style runs
                if c.is_ascii_digit() && !d.is_ascii_digit() {
                    break;
                }
                word.push(d);
                chars.next();
                column += 1;
            }
            let tok = if c.is_ascii_digit() {
                Tok::Int(BigInt::from_str(&word).expect("digit run"))
            } else {
                Tok::Ident(word)
            };
            push(&mut out, tok);
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '\'' => Tok::Prime,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        chars.next();
        column += 1;
        push(&mut out, tok);
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Prime => "`'`".into(),
        Tok::Comma => "`,`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        self.error(format!(
            "expected {wanted}, found {}",
            describe(self.peek())
        ))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![if *self.peek() == Tok::Minus {
            self.negated_term()?
        } else {
            self.term()?
        }];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    items.push(Expr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Expr::Sum(items)
        })
    }

    /// A term after a leading `-`; `-q * t` keeps `-q` as one scalar.
    fn negated_term(&mut self) -> Result<Expr> {
        self.bump();
        if matches!(self.peek(), Tok::Int(_)) {
            let q = self.rational()?;
            return self.scaled(ScalarLit::Rational(-q));
        }
        Ok(Expr::neg(self.term()?))
    }

    fn term(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Int(_) => {
                let q = self.rational()?;
                self.scaled(ScalarLit::Rational(q))
            }
            Tok::Ident(w) if w == "delta" => {
                self.bump();
                self.scaled(ScalarLit::Delta)
            }
            _ => self.chain(),
        }
    }

    fn scaled(&mut self, lit: ScalarLit) -> Result<Expr> {
        if *self.peek() != Tok::Star {
            return self.unexpected("`*` after a scalar");
        }
        self.bump();
        Ok(Expr::Scale(lit, Box::new(self.term()?)))
    }

    fn rational(&mut self) -> Result<Rational> {
        let Tok::Int(num) = self.bump().tok.clone() else {
            unreachable!("caller checked for an integer")
        };
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_integer(num));
        }
        self.bump();
        let Tok::Int(den) = self.peek().clone() else {
            return self.unexpected("a denominator");
        };
        if den.is_zero() {
            return self.error("zero denominator");
        }
        self.bump();
        Ok(Rational::new(num, den))
    }

    fn chain(&mut self) -> Result<Expr> {
        let mut acc = self.postfix()?;
        while *self.peek() == Tok::Star {
            self.bump();
            if matches!(self.peek(), Tok::Int(_))
                || matches!(self.peek(), Tok::Ident(w) if w == "delta")
            {
                return self.error("scalars must precede the factors they scale");
            }
            acc = Expr::mul(acc, self.postfix()?);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while *self.peek() == Tok::Prime {
            self.bump();
            e = Expr::der(e);
        }
        Ok(e)
    }

    fn args(&mut self, n: usize) -> Result<Vec<Expr>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = vec![self.expr()?];
        for _ in 1..n {
            self.expect(Tok::Comma, "`,`")?;
            out.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn list(&mut self) -> Result<Vec<Expr>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RParen {
            out.push(self.expr()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                out.push(self.expr()?);
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn factor(&mut self) -> Result<Expr> {
        let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(word) => {
                if *self.peek_at(1) != Tok::LParen {
                    if let Some(i) = word.strip_prefix('x').and_then(|d| d.parse::<u32>().ok()) {
                        self.bump();
                        return Ok(Expr::Var(i));
                    }
                }
                self.bump();
                let two = |p: &mut Parser| -> Result<(Expr, Expr)> {
                    let mut a = p.args(2)?;
                    let b = a.pop().expect("two args");
                    Ok((a.pop().expect("two args"), b))
                };
                match word.as_str() {
                    "d" => Ok(Expr::der(self.args(1)?.remove(0))),
                    "star" => Ok(Expr::star(self.args(1)?.remove(0))),
                    "sum" => Ok(Expr::Sum(self.list()?)),
                    "assoc" => {
                        let mut a = self.args(3)?.into_iter();
                        let (x, y, z) = (a.next().unwrap(), a.next().unwrap(), a.next().unwrap());
                        Ok(Expr::assoc(x, y, z))
                    }
                    "bracket" => {
                        let (a, b) = two(self)?;
                        Ok(Expr::bracket(a, b))
                    }
                    _ => {
                        if let Some(j) =
                            word.strip_prefix('d').and_then(|d| d.parse::<usize>().ok())
                        {
                            if j == 0 {
                                return Err(Error::Syntax {
                                    line,
                                    column,
                                    message: "derivation indices start at 1".into(),
                                });
                            }
                            return Ok(Expr::der_j(j, self.args(1)?.remove(0)));
                        }
                        match ProductTag::from_str(&word) {
                            Ok(tag) => {
                                let (a, b) = two(self)?;
                                Ok(Expr::op(tag, a, b))
                            }
                            Err(_) => Err(Error::UnknownOperation {
                                name: word,
                                line,
                                column,
                            }),
                        }
                    }
                }
            }
            _ => self.unexpected("a variable, `(` or an operation"),
        }
    }
}

/// Parses one expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

fn scalar(lit: &ScalarLit) -> String {
    match lit {
        ScalarLit::Rational(q) => q.to_string(),
        ScalarLit::Delta => "delta".into(),
    }
}

fn is_minus_one(lit: &ScalarLit) -> bool {
    matches!(lit, ScalarLit::Rational(q) if q.is_negative() && (-q).is_one())
}

fn wrap(s: String) -> String {
    format!("({s})")
}

/// Text that [`parse_expr`] reads back as the same tree.
pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Sum(items) if items.len() >= 2 => {
            let mut out = print_term(&items[0]);
            for item in &items[1..] {
                match item {
                    Expr::Scale(lit, inner) if is_minus_one(lit) => {
                        let t = print_term(inner);
                        out.push_str(" - ");
                        out.push_str(&if t.starts_with('-') { wrap(t) } else { t });
                    }
                    _ => {
                        let t = print_term(item);
                        out.push_str(" + ");
                        out.push_str(&if t.starts_with('-') { wrap(t) } else { t });
                    }
                }
            }
            out
        }
        _ => print_term(e),
    }
}

/// May start with `-`; callers not at the start of an expression wrap it.
fn print_term(e: &Expr) -> String {
    match e {
        Expr::Scale(lit, inner) => {
            let t = print_term(inner);
            let t = if t.starts_with('-') { wrap(t) } else { t };
            if is_minus_one(lit) && !t.starts_with(|c: char| c.is_ascii_digit()) {
                format!("-{t}")
            } else {
                format!("{} * {t}", scalar(lit))
            }
        }
        Expr::Mul(..) => print_chain(e),
        _ => print_postfix(e),
    }
}

fn print_chain(e: &Expr) -> String {
    match e {
        Expr::Mul(a, b) => format!("{} * {}", print_chain(a), print_postfix(b)),
        _ => print_postfix(e),
    }
}

fn print_postfix(e: &Expr) -> String {
    match e {
        Expr::Var(i) => format!("x{i}"),
        Expr::Der(1, a) => format!("d({})", print_expr(a)),
        Expr::Der(j, a) => format!("d{j}({})", print_expr(a)),
        Expr::Op(tag, a, b) => format!("{tag}({}, {})", print_expr(a), print_expr(b)),
        Expr::Star(a) => format!("star({})", print_expr(a)),
        Expr::Assoc(a, b, c) => format!(
            "assoc({}, {}, {})",
            print_expr(a),
            print_expr(b),
            print_expr(c)
        ),
        Expr::Bracket(a, b) => format!("bracket({}, {})", print_expr(a), print_expr(b)),
        Expr::Sum(items) if items.len() < 2 => {
            let parts: Vec<String> = items.iter().map(print_expr).collect();
            format!("sum({})", parts.join(", "))
        }
        _ => wrap(print_expr(e)),
    }
}

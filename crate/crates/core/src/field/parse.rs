//! Text syntax for field elements.
//!
//! Grammar: sums and differences of products; products by `*`, `/` or
//! juxtaposition; integer powers (`t^3`, `t^-1`); integer literals; names
//! (`x` for the generator of GF(p^k), the function-field variables, and
//! caller-supplied bindings).

use super::poly::BiPoly;
use super::{Field, FieldElement};
use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone)]
enum Ast {
    Int(i64),
    Name(String, usize),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Neg(Box<Ast>),
    Pow(Box<Ast>, i64, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<Ast> {
        let ast = self.sum()?;
        if let Some(c) = self.peek() {
            return parse_err(self.pos, format!("unexpected `{}`", c as char));
        }
        Ok(ast)
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut acc = if self.eat(b'-') {
            Ast::Neg(Box::new(self.product()?))
        } else {
            self.eat(b'+');
            self.product()?
        };
        loop {
            if self.eat(b'+') {
                acc = Ast::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat(b'-') {
                acc = Ast::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Ast> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Ast::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    acc = Ast::Div(Box::new(acc), Box::new(self.power()?), at);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = Ast::Mul(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let e = self.integer()?;
        if paren && !self.eat(b')') {
            return parse_err(self.pos, "expected `)` after exponent");
        }
        Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }, at))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return parse_err(start, "expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| parse_err(start, "integer out of range"))
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return parse_err(self.pos, "expected `)`");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ast::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Ast::Name(name.to_string(), start))
            }
            Some(c) => parse_err(self.pos, format!("unexpected `{}`", c as char)),
            None => parse_err(self.pos, "unexpected end of input"),
        }
    }
}

/// Minimal ring interface the evaluator needs.
trait Eval {
    type V: Clone;
    fn int(&self, n: i64) -> Self::V;
    fn name(&self, name: &str) -> Option<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Option<Self::V>;
    fn pow(&self, a: &Self::V, e: i64) -> Option<Self::V>;

    fn resolve(&self, name: &str, pos: usize) -> Result<Self::V> {
        if let Some(v) = self.name(name) {
            return Ok(v);
        }
        // `tu` for `t u` when every letter is a known single-letter name
        let parts: Option<Vec<Self::V>> = name
            .char_indices()
            .map(|(_, c)| self.name(&c.to_string()))
            .collect();
        match parts {
            Some(vs) if name.len() > 1 => Ok(vs
                .iter()
                .skip(1)
                .fold(vs[0].clone(), |acc, v| self.mul(&acc, v))),
            _ => parse_err(pos, format!("unknown name `{name}`")),
        }
    }

    fn eval(&self, ast: &Ast) -> Result<Self::V> {
        Ok(match ast {
            Ast::Int(n) => self.int(*n),
            Ast::Name(n, pos) => self.resolve(n, *pos)?,
            Ast::Add(a, b) => self.add(&self.eval(a)?, &self.eval(b)?),
            Ast::Sub(a, b) => self.add(&self.eval(a)?, &self.neg(&self.eval(b)?)),
            Ast::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Ast::Neg(a) => self.neg(&self.eval(a)?),
            Ast::Div(a, b, pos) => match self.div(&self.eval(a)?, &self.eval(b)?) {
                Some(v) => v,
                None => return parse_err(*pos, "division by zero"),
            },
            Ast::Pow(a, e, pos) => match self.pow(&self.eval(a)?, *e) {
                Some(v) => v,
                None => return parse_err(*pos, "negative power of zero"),
            },
        })
    }
}

struct FieldEval<'a> {
    field: &'a Field,
    lets: &'a [(String, FieldElement)],
}

impl Eval for FieldEval<'_> {
    type V = FieldElement;
    fn int(&self, n: i64) -> FieldElement {
        self.field.from_int(n)
    }
    fn name(&self, name: &str) -> Option<FieldElement> {
        if let Some((_, v)) = self.lets.iter().rev().find(|(n, _)| n == name) {
            return Some(v.clone());
        }
        if let Some(i) = self.field.var_names().iter().position(|v| v == name) {
            return self.field.var(i).ok();
        }
        (name == "x" && self.field.fq().k() > 1).then(|| self.field.gen_x())
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.add(a, b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        self.field.neg(a)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.mul(a, b)
    }
    fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.field.div(a, b).ok()
    }
    fn pow(&self, a: &FieldElement, e: i64) -> Option<FieldElement> {
        self.field.pow(a, e).ok()
    }
}

/// Polynomials over GF(p) in one variable, lowest degree first.
struct PrimePolyEval<'a> {
    p: u32,
    var: &'a str,
}

impl PrimePolyEval<'_> {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

impl Eval for PrimePolyEval<'_> {
    type V = Vec<u32>;
    fn int(&self, n: i64) -> Vec<u32> {
        Self::trim(vec![n.rem_euclid(self.p as i64) as u32])
    }
    fn name(&self, name: &str) -> Option<Vec<u32>> {
        (name == self.var).then(|| vec![0, 1])
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        a.iter().map(|&c| (self.p - c) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % self.p as u64;
            }
        }
        Self::trim(out.into_iter().map(|c| c as u32).collect())
    }
    fn div(&self, _: &Vec<u32>, _: &Vec<u32>) -> Option<Vec<u32>> {
        None
    }
    fn pow(&self, a: &Vec<u32>, e: i64) -> Option<Vec<u32>> {
        if e < 0 {
            return None;
        }
        Some((0..e).fold(vec![1], |acc, _| self.mul(&acc, a)))
    }
}

pub(crate) fn parse_element(
    field: &Field,
    text: &str,
    lets: &[(String, FieldElement)],
) -> Result<FieldElement> {
    let ast = Parser::new(text).parse_all()?;
    FieldEval { field, lets }.eval(&ast)
}

/// Parses a monic polynomial over GF(p) such as `x^2+1`.
pub(crate) fn parse_prime_poly(text: &str, p: u32, var: &str) -> Result<Vec<u32>> {
    let ast = Parser::new(text).parse_all()?;
    let v = PrimePolyEval { p, var }.eval(&ast)?;
    if v.last() != Some(&1) {
        return Err(Error::ReducibleModulus(format!(
            "{text} (modulus must be monic of positive degree)"
        )));
    }
    Ok(v)
}

/// `c_{k-1} x^{k-1} + ... + c_0` for an element of GF(p^k).
fn format_fq(field: &Field, a: u32) -> String {
    let digits = field.fq().digits(a);
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn format_poly(field: &Field, p: &BiPoly) -> String {
    let names = field.var_names();
    let mut terms: Vec<(usize, usize, u32)> = p.terms().collect();
    terms.sort_by(|x, y| BiPoly::grlex_cmp((y.0, y.1), (x.0, x.1)));
    let mut out = Vec::new();
    for (i, j, c) in terms {
        let mut factors = Vec::new();
        for (e, name) in [(i, names.first()), (j, names.get(1))] {
            match (e, name) {
                (0, _) | (_, None) => {}
                (1, Some(n)) => factors.push(n.clone()),
                (_, Some(n)) => factors.push(format!("{n}^{e}")),
            }
        }
        let coeff = format_fq(field, c);
        if factors.is_empty() {
            out.push(coeff);
        } else if c != 1 {
            let coeff = if coeff.contains('+') || coeff.contains('*') {
                format!("({coeff})")
            } else {
                coeff
            };
            out.push(format!("{coeff}*{}", factors.join("*")));
        } else {
            out.push(factors.join("*"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out.join("+")
    }
}

pub(crate) fn format_element(field: &Field, a: &FieldElement) -> String {
    match a {
        FieldElement::Finite(x) => format_fq(field, *x),
        FieldElement::Rational(r) => {
            let num = format_poly(field, &r.num);
            if r.den.is_one() {
                return num;
            }
            let den = format_poly(field, &r.den);
            let num = if num.contains('+') { format!("({num})") } else { num };
            let den = if den.contains(['+', '*', '/']) {
                format!("({den})")
            } else {
                den
            };
            format!("{num}/{den}")
        }
    }
}

/// Whether the leading `(` of `s` closes at the final character.
pub(crate) fn balanced_outer(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 != s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    s.starts_with('(') && s.ends_with(')')
}

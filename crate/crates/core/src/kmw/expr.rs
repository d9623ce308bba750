use crate::error::{parse_err, Error, Result};
use crate::field::{Field, FieldElement};

/// A Milnor-Witt expression. `Angle`, `Eps`, `H` and `NEps` are notation and
/// are removed by [`MWExpr::desugar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MWExpr {
    /// `[u]`, degree 1.
    Bracket(FieldElement),
    /// `η`, degree -1.
    Eta,
    /// A nonnegative integer literal; negatives are `Neg(Int)`.
    Int(u64),
    Sum(Vec<MWExpr>),
    Product(Vec<MWExpr>),
    Neg(Box<MWExpr>),
    Pow(Box<MWExpr>, u32),
    /// `⟨u⟩ = 1 + η[u]`.
    Angle(FieldElement),
    /// `ε = -⟨-1⟩`.
    Eps,
    /// `h = η[-1] + 2`.
    H,
    /// `n_ε`.
    NEps(i64),
}

impl MWExpr {
    pub fn bracket(field: &Field, u: FieldElement) -> Result<Self> {
        check_unit(field, &u)?;
        Ok(MWExpr::Bracket(u))
    }

    pub fn angle(field: &Field, u: FieldElement) -> Result<Self> {
        check_unit(field, &u)?;
        Ok(MWExpr::Angle(u))
    }

    pub fn int(n: i64) -> Self {
        let lit = MWExpr::Int(n.unsigned_abs());
        if n < 0 { MWExpr::Neg(Box::new(lit)) } else { lit }
    }

    pub fn sum(items: Vec<MWExpr>) -> Self {
        MWExpr::Sum(items)
    }

    pub fn product(items: Vec<MWExpr>) -> Self {
        MWExpr::Product(items)
    }

    pub fn negated(self) -> Self {
        MWExpr::Neg(Box::new(self))
    }

    pub fn pow(self, n: u32) -> Self {
        MWExpr::Pow(Box::new(self), n)
    }

    pub fn minus(self, other: MWExpr) -> Self {
        MWExpr::Sum(vec![self, other.negated()])
    }

    pub fn times(self, other: MWExpr) -> Self {
        MWExpr::Product(vec![self, other])
    }

    pub fn plus(self, other: MWExpr) -> Self {
        MWExpr::Sum(vec![self, other])
    }

    /// Rewrites the notation nodes into brackets, `η` and integers.
    pub fn desugar(&self, field: &Field) -> MWExpr {
        let minus_one = || field.neg(&field.one());
        match self {
            MWExpr::Bracket(_) | MWExpr::Eta | MWExpr::Int(_) => self.clone(),
            MWExpr::Sum(xs) => MWExpr::Sum(xs.iter().map(|x| x.desugar(field)).collect()),
            MWExpr::Product(xs) => MWExpr::Product(xs.iter().map(|x| x.desugar(field)).collect()),
            MWExpr::Neg(x) => MWExpr::Neg(Box::new(x.desugar(field))),
            MWExpr::Pow(x, n) => MWExpr::Pow(Box::new(x.desugar(field)), *n),
            MWExpr::Angle(u) => MWExpr::Sum(vec![
                MWExpr::Int(1),
                MWExpr::Product(vec![MWExpr::Eta, MWExpr::Bracket(u.clone())]),
            ]),
            MWExpr::Eps => MWExpr::Angle(minus_one()).desugar(field).negated(),
            MWExpr::H => MWExpr::Sum(vec![
                MWExpr::Product(vec![MWExpr::Eta, MWExpr::Bracket(minus_one())]),
                MWExpr::Int(2),
            ]),
            MWExpr::NEps(n) if *n >= 0 => {
                if *n == 0 {
                    return MWExpr::Int(0);
                }
                MWExpr::Sum(
                    (1..=*n)
                        .map(|i| {
                            if i % 2 == 1 {
                                MWExpr::Int(1)
                            } else {
                                MWExpr::Angle(minus_one()).desugar(field)
                            }
                        })
                        .collect(),
                )
            }
            MWExpr::NEps(n) => MWExpr::Product(vec![
                MWExpr::Angle(minus_one()).desugar(field),
                MWExpr::NEps(-n).desugar(field),
            ])
            .negated(),
        }
    }

    /// Splices nested sums and products, moves signs out of products and
    /// cancels double negation. Printing then parsing yields the flattened
    /// expression.
    pub fn flatten(&self) -> MWExpr {
        match self {
            MWExpr::Sum(xs) => {
                let mut out = Vec::new();
                for x in xs.iter().map(MWExpr::flatten) {
                    match x {
                        MWExpr::Sum(ys) => out.extend(ys),
                        y => out.push(y),
                    }
                }
                if out.len() == 1 { out.pop().unwrap() } else { MWExpr::Sum(out) }
            }
            MWExpr::Product(xs) => {
                let mut negative = false;
                let mut out = Vec::new();
                for x in xs.iter().map(MWExpr::flatten) {
                    let x = match x {
                        MWExpr::Neg(y) => {
                            negative = !negative;
                            *y
                        }
                        y => y,
                    };
                    match x {
                        MWExpr::Product(ys) => out.extend(ys),
                        y => out.push(y),
                    }
                }
                let p = if out.len() == 1 { out.pop().unwrap() } else { MWExpr::Product(out) };
                if negative { p.negated() } else { p }
            }
            MWExpr::Neg(x) => match x.flatten() {
                MWExpr::Neg(y) => *y,
                y => y.negated(),
            },
            MWExpr::Pow(x, n) => x.flatten().pow(*n),
            _ => self.clone(),
        }
    }

    /// Text in the expression grammar.
    pub fn to_text(&self, field: &Field) -> String {
        Printer { field }.expr(self)
    }
}

fn check_unit(field: &Field, u: &FieldElement) -> Result<()> {
    if field.is_zero(u) {
        return Err(Error::NotAUnit("0".into()));
    }
    if !field.contains(u) {
        return Err(Error::MixedFields(format!("{u:?}"), field.name()));
    }
    Ok(())
}

struct Printer<'a> {
    field: &'a Field,
}

impl Printer<'_> {
    fn expr(&self, e: &MWExpr) -> String {
        match e {
            MWExpr::Sum(xs) if !xs.is_empty() => {
                let mut out = self.term(&xs[0]);
                for x in &xs[1..] {
                    match x {
                        MWExpr::Neg(y) => {
                            out.push_str(" - ");
                            out.push_str(&self.term_paren_sum(y));
                        }
                        y => {
                            out.push_str(" + ");
                            out.push_str(&self.term(y));
                        }
                    }
                }
                out
            }
            other => self.term(other),
        }
    }

    fn term_paren_sum(&self, e: &MWExpr) -> String {
        match e {
            MWExpr::Sum(_) | MWExpr::Neg(_) => format!("({})", self.expr(e)),
            other => self.term(other),
        }
    }

    fn term(&self, e: &MWExpr) -> String {
        match e {
            MWExpr::Product(xs) if !xs.is_empty() => {
                xs.iter().map(|x| self.factor(x)).collect::<Vec<_>>().join(" ")
            }
            MWExpr::Neg(x) => match **x {
                MWExpr::Product(_) => format!("-{}", self.term(x)),
                _ => format!("-{}", self.factor(x)),
            },
            MWExpr::Sum(xs) if !xs.is_empty() => format!("({})", self.expr(e)),
            other => self.factor(other),
        }
    }

    fn factor(&self, e: &MWExpr) -> String {
        let f = self.field;
        match e {
            MWExpr::Bracket(u) => format!("[{}]", f.format(u)),
            MWExpr::Angle(u) => format!("<{}>", f.format(u)),
            MWExpr::Eta => "eta".into(),
            MWExpr::Eps => "eps".into(),
            MWExpr::H => "h".into(),
            MWExpr::NEps(n) => format!("n_eps({n})"),
            MWExpr::Int(n) => n.to_string(),
            MWExpr::Pow(x, n) => match **x {
                MWExpr::Bracket(_)
                | MWExpr::Angle(_)
                | MWExpr::Eta
                | MWExpr::Eps
                | MWExpr::H
                | MWExpr::NEps(_)
                | MWExpr::Int(_) => format!("{}^{n}", self.factor(x)),
                _ => format!("({})^{n}", self.expr(x)),
            },
            // empty sums and products only arise from direct construction
            MWExpr::Sum(xs) if xs.is_empty() => "0".into(),
            MWExpr::Product(xs) if xs.is_empty() => "1".into(),
            other => format!("({})", self.expr(other)),
        }
    }
}

/// Parses the expression grammar:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := ['-'] factor factor*
/// factor := atom ('^' nat)*
/// atom   := 'eta' | '[' elem ']' | '<' elem '>' | 'eps' | 'h'
///         | 'n_eps(' int ')' | nat | '(' expr ')'
/// ```
///
/// Elements inside brackets use the field's element syntax; names in `lets`
/// are bound there.
pub fn parse(text: &str, field: &Field, lets: &[(String, FieldElement)]) -> Result<MWExpr> {
    let mut p = ExprParser {
        src: text,
        pos: 0,
        field,
        lets,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return parse_err(p.pos, format!("unexpected `{}`", &text[p.pos..p.pos + 1]));
    }
    Ok(e)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    field: &'a Field,
    lets: &'a [(String, FieldElement)],
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MWExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(self.term()?.negated());
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { MWExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<MWExpr> {
        let negative = self.eat('-');
        let first = self.factor()?;
        let mut factors = vec![if negative { first.negated() } else { first }];
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || "[<(".contains(c)) {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { MWExpr::Product(factors) })
    }

    fn factor(&mut self) -> Result<MWExpr> {
        let mut base = self.atom()?;
        while self.eat('^') {
            self.skip_ws();
            let n = self.natural()?;
            let n = u32::try_from(n).or_else(|_| parse_err(self.pos, "exponent too large"))?;
            base = base.pow(n);
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].find(|c: char| !c.is_ascii_digit()).unwrap_or(self.src.len() - start);
        if len == 0 {
            return parse_err(start, "expected a nonnegative integer");
        }
        self.pos += len;
        self.src[start..self.pos].parse().or_else(|_| parse_err(start, "integer too large"))
    }

    fn atom(&mut self) -> Result<MWExpr> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => parse_err(at, "unexpected end of input"),
            Some('[') => self.element(']').map(MWExpr::Bracket),
            Some('<') => self.element('>').map(MWExpr::Angle),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return parse_err(self.pos, "expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(MWExpr::Int(self.natural()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let len = self.src[at..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.src.len() - at);
                let word = &self.src[at..at + len];
                self.pos += len;
                match word {
                    "eta" => Ok(MWExpr::Eta),
                    "eps" => Ok(MWExpr::Eps),
                    "h" => Ok(MWExpr::H),
                    "n_eps" => {
                        if !self.eat('(') {
                            return parse_err(self.pos, "expected `(` after n_eps");
                        }
                        let negative = self.eat('-');
                        let n = self.natural()?;
                        let n = i64::try_from(n).or_else(|_| parse_err(self.pos, "integer too large"))?;
                        if !self.eat(')') {
                            return parse_err(self.pos, "expected `)`");
                        }
                        Ok(MWExpr::NEps(if negative { -n } else { n }))
                    }
                    _ => parse_err(at, format!("unknown name `{word}` outside brackets")),
                }
            }
            Some(c) => parse_err(at, format!("unexpected `{c}`")),
        }
    }

    /// Parses `open elem close` where the opening delimiter is at `self.pos`.
    fn element(&mut self, close: char) -> Result<FieldElement> {
        let open = self.pos;
        let start = open + 1;
        let Some(len) = self.src[start..].find(close) else {
            return parse_err(open, format!("unclosed delimiter, expected `{close}`"));
        };
        let inner = &self.src[start..start + len];
        let u = self
            .field
            .parse_element_with(inner, self.lets)
            .map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: start + pos, msg },
                other => other,
            })?;
        if self.field.is_zero(&u) {
            return parse_err(open, "zero inside brackets");
        }
        self.pos = start + len + 1;
        Ok(u)
    }
}

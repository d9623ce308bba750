use super::expr::MWExpr;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use std::collections::BTreeMap;
use std::fmt;

/// `η^m [u_1]⋯[u_r]`, of degree `r - m`. Brackets do not commute with each
/// other; `η` is central.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub eta: u32,
    pub units: Vec<FieldElement>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { eta: 0, units: Vec::new() }
    }

    pub fn degree(&self) -> i64 {
        self.units.len() as i64 - self.eta as i64
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut units = self.units.clone();
        units.extend(other.units.iter().cloned());
        Monomial {
            eta: self.eta + other.eta,
            units,
        }
    }
}

/// An integer combination of monomials of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MWMonomialSum {
    field: Field,
    degree: i64,
    terms: BTreeMap<Monomial, i64>,
}

impl MWMonomialSum {
    pub fn zero(field: &Field, degree: i64) -> Self {
        MWMonomialSum {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: &Field,
        degree: i64,
        items: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Result<Self> {
        let mut out = Self::zero(field, degree);
        for (m, c) in items {
            if m.degree() != degree {
                return Err(Error::DegreeMismatch(m.degree(), degree));
            }
            *out.terms.entry(m).or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Back to an expression: `c η^m [u_1]⋯[u_r]` summed.
    pub fn to_expr(&self) -> MWExpr {
        let terms: Vec<MWExpr> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                if c.unsigned_abs() != 1 || (m.eta == 0 && m.units.is_empty()) {
                    factors.push(MWExpr::Int(c.unsigned_abs()));
                }
                match m.eta {
                    0 => {}
                    1 => factors.push(MWExpr::Eta),
                    k => factors.push(MWExpr::Eta.pow(k)),
                }
                factors.extend(m.units.iter().cloned().map(MWExpr::Bracket));
                let p = if factors.len() == 1 { factors.pop().unwrap() } else { MWExpr::Product(factors) };
                if *c < 0 { p.negated() } else { p }
            })
            .collect();
        match terms.len() {
            0 => MWExpr::Int(0),
            1 => terms.into_iter().next().unwrap(),
            _ => MWExpr::Sum(terms),
        }
    }
}

impl fmt::Display for MWMonomialSum {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_expr().to_text(&self.field))
    }
}

/// The homogeneous components of an expanded expression. A degree stays listed
/// when its coefficients cancel; a formally zero literal belongs to no degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    field: Field,
    parts: BTreeMap<i64, MWMonomialSum>,
}

impl Expansion {
    pub fn parts(&self) -> &BTreeMap<i64, MWMonomialSum> {
        &self.parts
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.parts.keys().copied().collect()
    }

    /// The single degree, `None` for an expression with no degree (such as
    /// `0`), or an error if several degrees occur.
    pub fn degree(&self) -> Result<Option<i64>> {
        match self.parts.len() {
            0 => Ok(None),
            1 => Ok(self.parts.keys().next().copied()),
            _ => Err(Error::Inhomogeneous(self.degrees())),
        }
    }

    /// The component of degree `n`; zero when the expression has no degree.
    pub fn homogeneous(&self, n: Option<i64>) -> Result<MWMonomialSum> {
        let own = self.degree()?;
        match (own, n) {
            (Some(d), Some(n)) if d != n => Err(Error::DegreeMismatch(d, n)),
            (Some(d), _) => Ok(self.parts[&d].clone()),
            (None, n) => Ok(MWMonomialSum::zero(&self.field, n.unwrap_or(0))),
        }
    }

    fn scalar(field: &Field, c: i64) -> Self {
        let mut parts = BTreeMap::new();
        if c != 0 {
            parts.insert(0, MWMonomialSum::from_terms(field, 0, [(Monomial::one(), c)]).unwrap());
        }
        Expansion { field: field.clone(), parts }
    }

    fn single(field: &Field, m: Monomial) -> Self {
        let d = m.degree();
        Expansion {
            field: field.clone(),
            parts: BTreeMap::from([(d, MWMonomialSum::from_terms(field, d, [(m, 1)]).unwrap())]),
        }
    }

    fn add(mut self, other: Expansion) -> Self {
        for (d, part) in other.parts {
            let slot = self
                .parts
                .entry(d)
                .or_insert_with(|| MWMonomialSum::zero(&other.field, d));
            for (m, c) in part.terms {
                *slot.terms.entry(m).or_insert(0) += c;
            }
            slot.terms.retain(|_, c| *c != 0);
        }
        self
    }

    fn neg(mut self) -> Self {
        for part in self.parts.values_mut() {
            part.terms.values_mut().for_each(|c| *c = -*c);
        }
        self
    }

    fn mul(&self, other: &Expansion) -> Self {
        let mut out = Expansion {
            field: self.field.clone(),
            parts: BTreeMap::new(),
        };
        for (d1, p1) in &self.parts {
            for (d2, p2) in &other.parts {
                let slot = out
                    .parts
                    .entry(d1 + d2)
                    .or_insert_with(|| MWMonomialSum::zero(&self.field, d1 + d2));
                for (m1, c1) in &p1.terms {
                    for (m2, c2) in &p2.terms {
                        *slot.terms.entry(m1.mul(m2)).or_insert(0) += c1 * c2;
                    }
                }
                slot.terms.retain(|_, c| *c != 0);
            }
        }
        out
    }
}

/// Distributes products over sums and collects coefficients of monomials,
/// after desugaring.
pub fn monomial_expand(e: &MWExpr, field: &Field) -> Expansion {
    expand_raw(&e.desugar(field), field)
}

fn expand_raw(e: &MWExpr, f: &Field) -> Expansion {
    match e {
        MWExpr::Bracket(u) => Expansion::single(
            f,
            Monomial {
                eta: 0,
                units: vec![u.clone()],
            },
        ),
        MWExpr::Eta => Expansion::single(
            f,
            Monomial {
                eta: 1,
                units: Vec::new(),
            },
        ),
        MWExpr::Int(n) => Expansion::scalar(f, *n as i64),
        MWExpr::Sum(xs) => xs
            .iter()
            .fold(Expansion::scalar(f, 0), |acc, x| acc.add(expand_raw(x, f))),
        MWExpr::Product(xs) => xs
            .iter()
            .fold(Expansion::scalar(f, 1), |acc, x| acc.mul(&expand_raw(x, f))),
        MWExpr::Neg(x) => expand_raw(x, f).neg(),
        MWExpr::Pow(x, n) => {
            let base = expand_raw(x, f);
            (0..*n).fold(Expansion::scalar(f, 1), |acc, _| acc.mul(&base))
        }
        MWExpr::Angle(_) | MWExpr::Eps | MWExpr::H | MWExpr::NEps(_) => expand_raw(&e.desugar(f), f),
    }
}

use super::WittClass;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use serde_json::{json, Value};
use std::fmt;

/// Evidence that a Witt class lies in `I^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `n <= 0`, where `I^n = W`.
    Whole,
    /// `n = 1`: the rank is even.
    EvenRank { rank: usize },
    /// Characteristic 2, `n = 2`: even rank and the product of the diagonal
    /// entries is `root^2`.
    SquareDiscriminant { rank: usize, root: FieldElement },
    /// The class is zero; used in degrees where `I^n` vanishes.
    ZeroClass,
}

/// A Witt class certified to lie in `I^degree`.
#[derive(Debug, Clone)]
pub struct IFiltClass {
    class: WittClass,
    degree: i64,
    certificate: Membership,
}

/// Certificate for `w ∈ I^n`, or `None` when `w` is not a member.
///
/// Finite fields have `I^2 = 0`. A characteristic-2 function field in `m`
/// variables has dimension `2^m` over its squares, so `I^n = 0` once
/// `2^n > 2^m`; in degree 2 the discriminant decides, since
/// `⟪a⟫ + ⟪b⟫ ≡ ⟪ab⟫` modulo `I^2`.
pub fn membership(w: &WittClass, n: i64) -> Option<Membership> {
    let f = w.field();
    if n <= 0 {
        return Some(Membership::Whole);
    }
    if w.rank_parity() != 0 {
        return None;
    }
    let rank = w.diagonal_entries().len();
    if n == 1 {
        return Some(Membership::EvenRank { rank });
    }
    if f.is_function_field() && n == 2 {
        let root = f.sqrt(&w.entry_product()).ok()?;
        return Some(Membership::SquareDiscriminant { rank, root });
    }
    w.is_zero().then_some(Membership::ZeroClass)
}

pub fn in_ideal_power(w: &WittClass, n: i64) -> bool {
    membership(w, n).is_some()
}

impl Membership {
    /// Re-checks the certificate against `w` and `n`.
    pub fn verify(&self, w: &WittClass, n: i64) -> bool {
        let f = w.field();
        match self {
            Membership::Whole => n <= 0,
            Membership::EvenRank { rank } => {
                n <= 1 && w.diagonal_entries().len() == *rank && rank % 2 == 0
            }
            Membership::SquareDiscriminant { rank, root } => {
                n <= 2
                    && f.is_char2()
                    && w.diagonal_entries().len() == *rank
                    && rank % 2 == 0
                    && f.square(root) == w.entry_product()
            }
            Membership::ZeroClass => w.is_zero(),
        }
    }

    fn to_json(&self, f: &Field) -> Value {
        match self {
            Membership::Whole => json!({"rule": "whole"}),
            Membership::EvenRank { rank } => json!({"rule": "even-rank", "rank": rank}),
            Membership::SquareDiscriminant { rank, root } => {
                json!({"rule": "square-discriminant", "rank": rank, "root": f.format(root)})
            }
            Membership::ZeroClass => json!({"rule": "zero-class"}),
        }
    }
}

impl IFiltClass {
    pub fn new(class: WittClass, degree: i64) -> Result<Self> {
        let certificate = membership(&class, degree).ok_or_else(|| {
            Error::Membership(format!("{class} is not in I^{degree}"))
        })?;
        Ok(IFiltClass {
            class,
            degree,
            certificate,
        })
    }

    pub fn zero(field: &Field, degree: i64) -> Self {
        Self::new(WittClass::zero(field), degree).expect("zero lies in every power")
    }

    pub fn class(&self) -> &WittClass {
        &self.class
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn certificate(&self) -> &Membership {
        &self.certificate
    }

    pub fn field(&self) -> &Field {
        self.class.field()
    }

    pub fn verify(&self) -> bool {
        self.certificate.verify(&self.class, self.degree)
    }

    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }

    pub fn add(&self, other: &IFiltClass) -> Result<IFiltClass> {
        Self::new(self.class.add(&other.class)?, self.degree.min(other.degree))
    }

    pub fn neg(&self) -> IFiltClass {
        IFiltClass {
            class: self.class.neg(),
            degree: self.degree,
            certificate: membership(&self.class.neg(), self.degree).expect("I^n is a group"),
        }
    }

    pub fn sub(&self, other: &IFiltClass) -> Result<IFiltClass> {
        self.add(&other.neg())
    }

    /// `I^n I^m ⊆ I^{n+m}`.
    pub fn mul(&self, other: &IFiltClass) -> Result<IFiltClass> {
        Self::new(self.class.mul(&other.class)?, self.degree + other.degree)
    }

    /// The class in `I^{degree - 1}`.
    pub fn lower(&self) -> IFiltClass {
        Self::new(self.class.clone(), self.degree - 1).expect("I^n ⊆ I^(n-1)")
    }

    /// `self ≡ other` modulo `I^{n+1}`, with `n` the smaller degree.
    pub fn congruent(&self, other: &IFiltClass) -> Result<bool> {
        let n = self.degree.min(other.degree);
        Ok(in_ideal_power(&self.class.sub(&other.class)?, n + 1))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "class": self.class.to_json(),
            "certificate": self.certificate.to_json(self.field()),
        })
    }
}

impl fmt::Display for IFiltClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} in I^{}", self.class, self.degree)
    }
}

/// `⊗ ⟨1, -a_i⟩` as a Witt class (no membership certificate).
pub fn pfister_class(field: &Field, slots: &[FieldElement]) -> WittClass {
    slots.iter().fold(WittClass::one(field), |acc, a| {
        acc.mul(&WittClass::pfister1(field, a)).expect("same field")
    })
}

/// The Milnor map on a single symbol: `{a_1, ..., a_n} ↦ ⊗ ⟨1, -a_i⟩ ∈ I^n`.
pub fn s_n(field: &Field, symbol: &[FieldElement]) -> Result<IFiltClass> {
    if symbol.iter().any(|a| field.is_zero(a)) {
        return Err(Error::Degenerate("symbol entries must be units".into()));
    }
    IFiltClass::new(pfister_class(field, symbol), symbol.len() as i64)
        .map_err(|e| Error::Verification(format!("Pfister form outside its ideal power: {e}")))
}

use crate::error::Result;
use crate::field::{Field, FieldElement};
use crate::forms::{anisotropic_part, DiagonalForm};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// An element of the Witt ring `W(F)`.
///
/// Internally a formal combination `sum c_x ⟨x⟩` over square-class
/// representatives, already reduced by `⟨-x⟩ = -⟨x⟩` (and `2⟨x⟩ = 0` in
/// characteristic 2). The anisotropic representative is computed on first use.
/// Equality is semantic: two classes are equal iff their difference has an
/// empty anisotropic part.
#[derive(Clone)]
pub struct WittClass {
    field: Field,
    terms: BTreeMap<FieldElement, i64>,
    anisotropic: OnceLock<Vec<FieldElement>>,
}

impl WittClass {
    pub fn zero(field: &Field) -> Self {
        Self::from_terms(field, BTreeMap::new())
    }

    /// The class of `⟨1⟩`, the unit of the ring.
    pub fn one(field: &Field) -> Self {
        Self::from_signed(field, [(field.one(), 1)])
    }

    /// The class of `⟨u⟩`.
    pub fn angle(field: &Field, u: &FieldElement) -> Self {
        Self::from_signed(field, [(u.clone(), 1)])
    }

    /// `⟨u⟩ - 1`.
    pub fn angle_minus_one(field: &Field, u: &FieldElement) -> Self {
        Self::from_signed(field, [(u.clone(), 1), (field.one(), -1)])
    }

    /// `⟨1, -u⟩ = 1 - ⟨u⟩`, the one-fold Pfister form.
    pub fn pfister1(field: &Field, u: &FieldElement) -> Self {
        Self::from_signed(field, [(field.one(), 1), (u.clone(), -1)])
    }

    pub fn from_form(form: &DiagonalForm) -> Self {
        Self::from_signed(form.field(), form.entries().iter().map(|a| (a.clone(), 1)))
    }

    /// `sum c_i ⟨u_i⟩` for units `u_i`.
    pub fn from_signed(field: &Field, items: impl IntoIterator<Item = (FieldElement, i64)>) -> Self {
        let mut terms = BTreeMap::new();
        for (u, c) in items {
            debug_assert!(!field.is_zero(&u));
            let (key, sign) = canonical_key(field, &u);
            *terms.entry(key).or_insert(0) += sign * c;
        }
        Self::from_terms(field, terms)
    }

    fn from_terms(field: &Field, mut terms: BTreeMap<FieldElement, i64>) -> Self {
        let char2 = field.is_char2();
        terms.retain(|_, c| {
            if char2 {
                *c = c.rem_euclid(2);
            }
            *c != 0
        });
        WittClass {
            field: field.clone(),
            terms,
            anisotropic: OnceLock::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The formal combination behind this class, keyed by square-class representative.
    pub fn terms(&self) -> &BTreeMap<FieldElement, i64> {
        &self.terms
    }

    /// A diagonal representative (not necessarily anisotropic).
    pub fn diagonal_entries(&self) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = Vec::new();
        for (x, &c) in &self.terms {
            let entry = if c > 0 { x.clone() } else { f.square_class_rep(&f.neg(x)) };
            out.extend(std::iter::repeat_n(entry, c.unsigned_abs() as usize));
        }
        out
    }

    /// Sorted anisotropic representative.
    pub fn anisotropic(&self) -> &[FieldElement] {
        self.anisotropic.get_or_init(|| {
            if self.field.is_function_field() && self.invariants_vanish() {
                Vec::new()
            } else {
                anisotropic_part(&self.field, &self.diagonal_entries())
            }
        })
    }

    /// Zero test over GF(2^k)(t) and GF(2^k)(t,u) without reduction: rank
    /// parity and discriminant decide `W/I^2`, `I^2 = 0` in one variable, and
    /// in two variables `I^3 = 0` while `I^2` embeds in `Ω^2` (Kato).
    fn invariants_vanish(&self) -> bool {
        let f = &self.field;
        if self.rank_parity() != 0 || !f.is_square(&self.entry_product()) {
            return false;
        }
        f.nvars() == 1
            || f.differential_invariant_vanishes(&self.diagonal_entries())
                .expect("two-variable field of characteristic 2")
    }

    pub fn representative(&self) -> DiagonalForm {
        DiagonalForm::new_unchecked(&self.field, self.anisotropic().to_vec())
    }

    /// Rank of the anisotropic representative.
    pub fn rank(&self) -> usize {
        self.anisotropic().len()
    }

    /// Rank modulo 2, read off any representative.
    pub fn rank_parity(&self) -> u8 {
        (self.terms.values().map(|c| c.unsigned_abs()).sum::<u64>() % 2) as u8
    }

    /// Product of the diagonal entries of the representative `diagonal_entries`.
    /// In characteristic 2 its square class is an invariant of the class.
    pub fn entry_product(&self) -> FieldElement {
        let f = &self.field;
        f.product(&self.diagonal_entries())
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        match self.anisotropic.get() {
            Some(a) => a.is_empty(),
            None if self.field.is_function_field() => self.invariants_vanish(),
            None => self.anisotropic().is_empty(),
        }
    }

    pub fn add(&self, other: &WittClass) -> Result<WittClass> {
        self.field.ensure_same(&other.field)?;
        let mut terms = self.terms.clone();
        for (x, c) in &other.terms {
            *terms.entry(x.clone()).or_insert(0) += c;
        }
        Ok(Self::from_terms(&self.field, terms))
    }

    pub fn neg(&self) -> WittClass {
        Self::from_terms(&self.field, self.terms.iter().map(|(x, c)| (x.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &WittClass) -> Result<WittClass> {
        self.add(&other.neg())
    }

    /// Multiplies anisotropic representatives, so iterated products stay small.
    pub fn mul(&self, other: &WittClass) -> Result<WittClass> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let items = self.anisotropic().iter().flat_map(|x| {
            other.anisotropic().iter().map(move |y| (f.mul(x, y), 1))
        });
        Ok(Self::from_signed(f, items.collect::<Vec<_>>()))
    }

    pub fn scale(&self, n: i64) -> WittClass {
        Self::from_terms(&self.field, self.terms.iter().map(|(x, c)| (x.clone(), c * n)).collect())
    }

    pub fn witt_equal(&self, other: &WittClass) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// The same class written through its anisotropic representative, for
    /// building sums that stay short.
    pub fn reduced(&self) -> WittClass {
        Self::from_signed(&self.field, self.anisotropic().iter().map(|x| (x.clone(), 1)))
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .anisotropic()
            .iter()
            .map(|x| self.field.format(x))
            .collect::<Vec<_>>())
    }
}

/// Square-class representative of `u`, and in odd characteristic the choice
/// between `u` and `-u` that makes `⟨u⟩ = sign ⟨key⟩` hold in `W(F)`.
fn canonical_key(f: &Field, u: &FieldElement) -> (FieldElement, i64) {
    let r = f.square_class_rep(u);
    if f.is_char2() {
        return (r, 1);
    }
    let minus = f.square_class_rep(&f.neg(u));
    if minus < r {
        (minus, -1)
    } else {
        (r, 1)
    }
}

impl PartialEq for WittClass {
    fn eq(&self, other: &Self) -> bool {
        self.witt_equal(other).unwrap_or(false)
    }
}

impl fmt::Debug for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittClass({self})")
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.anisotropic().iter().map(|x| self.field.format(x)).collect();
        write!(out, "<{}>", entries.join(", "))
    }
}

pub fn witt_class(form: &DiagonalForm) -> WittClass {
    WittClass::from_form(form)
}

pub fn witt_equal(a: &WittClass, b: &WittClass) -> Result<bool> {
    a.witt_equal(b)
}

pub fn witt_is_zero(w: &WittClass) -> bool {
    w.is_zero()
}

use super::WittClass;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::DiagonalForm;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// A formal integer combination `sum m_u ⟨u⟩` of generators of `GW(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWElement {
    field: Field,
    terms: BTreeMap<FieldElement, i64>,
}

/// `GW(F)` as the fiber product `Z ×_{Z/2} W(F)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GWCanonical {
    pub rank: i64,
    pub witt: WittClass,
}

impl GWElement {
    pub fn zero(field: &Field) -> Self {
        GWElement {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `n ⟨1⟩`.
    pub fn integer(field: &Field, n: i64) -> Self {
        Self::from_terms(field, [(field.one(), n)]).expect("1 is a unit")
    }

    /// The generator `⟨u⟩`.
    pub fn angle(field: &Field, u: &FieldElement) -> Result<Self> {
        Self::from_terms(field, [(u.clone(), 1)])
    }

    pub fn from_terms(field: &Field, items: impl IntoIterator<Item = (FieldElement, i64)>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (u, m) in items {
            if field.is_zero(&u) || !field.contains(&u) {
                return Err(Error::Degenerate("GW generators need unit arguments".into()));
            }
            *terms.entry(u).or_insert(0) += m;
        }
        terms.retain(|_, m| *m != 0);
        Ok(GWElement {
            field: field.clone(),
            terms,
        })
    }

    pub fn from_form(form: &DiagonalForm) -> Self {
        Self::from_terms(form.field(), form.entries().iter().map(|a| (a.clone(), 1)))
            .expect("diagonal entries are units")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<FieldElement, i64> {
        &self.terms
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &GWElement) -> Result<GWElement> {
        self.field.ensure_same(&other.field)?;
        Self::from_terms(
            &self.field,
            self.terms.iter().chain(&other.terms).map(|(u, m)| (u.clone(), *m)),
        )
    }

    pub fn neg(&self) -> GWElement {
        GWElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(u, m)| (u.clone(), -m)).collect(),
        }
    }

    pub fn sub(&self, other: &GWElement) -> Result<GWElement> {
        self.add(&other.neg())
    }

    /// Distributes `⟨u⟩⟨v⟩ = ⟨uv⟩`.
    pub fn mul(&self, other: &GWElement) -> Result<GWElement> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let items: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(u, m)| other.terms.iter().map(move |(v, n)| (f.mul(u, v), m * n)))
            .collect();
        Self::from_terms(f, items)
    }

    /// Replaces every argument by its square-class representative.
    pub fn reduced(&self) -> GWElement {
        let f = &self.field;
        Self::from_terms(f, self.terms.iter().map(|(u, m)| (f.square_class_rep(u), *m)))
            .expect("representatives are units")
    }

    pub fn witt_part(&self) -> WittClass {
        WittClass::from_signed(&self.field, self.terms.iter().map(|(u, m)| (u.clone(), *m)))
    }

    pub fn canonical(&self) -> GWCanonical {
        GWCanonical {
            rank: self.rank(),
            witt: self.witt_part(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(u, m)| json!({"unit": self.field.format(u), "multiplicity": m}))
                .collect(),
        )
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Json("expected an array of {unit, multiplicity}".into()))?
            .iter()
            .map(|item| {
                let unit = item["unit"]
                    .as_str()
                    .ok_or_else(|| Error::Json("missing unit".into()))?;
                let m = item["multiplicity"]
                    .as_i64()
                    .ok_or_else(|| Error::Json("missing multiplicity".into()))?;
                Ok((field.parse_element(unit)?, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(field, items)
    }
}

impl fmt::Display for GWElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(u, m)| {
                let g = format!("<{}>", self.field.format(u));
                if *m == 1 { g } else { format!("{m}{g}") }
            })
            .collect();
        write!(out, "{}", parts.join(" + "))
    }
}

impl GWCanonical {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.witt.is_zero()
    }

    pub fn equals(&self, other: &GWCanonical) -> Result<bool> {
        Ok(self.rank == other.rank && self.witt.witt_equal(&other.witt)?)
    }

    pub fn to_json(&self) -> Value {
        json!({"rank": self.rank, "witt": self.witt.to_json()})
    }
}

impl fmt::Display for GWCanonical {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "rank {}, witt {}", self.rank, self.witt)
    }
}

pub fn gw_canonical(x: &GWElement) -> GWCanonical {
    x.canonical()
}

/// Equal ranks and equal Witt classes.
pub fn gw_equal(x: &GWElement, y: &GWElement) -> Result<bool> {
    x.canonical().equals(&y.canonical())
}

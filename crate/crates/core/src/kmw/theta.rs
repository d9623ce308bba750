use super::expand::{monomial_expand, MWMonomialSum};
use super::expr::MWExpr;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::PfisterSpec;
use crate::witt::{pfister_class, IFiltClass, WittClass};
use serde_json::{json, Value};
use std::fmt;

/// A certified member of `I^n(F)`, the value of `θ` on a degree-`n`
/// expression. `complete` is set when equality of these values decides
/// equality in `K^W_n` (characteristic 2).
#[derive(Debug, Clone)]
pub struct GradedIClass {
    pub class: IFiltClass,
    pub complete: bool,
}

impl GradedIClass {
    pub fn degree(&self) -> i64 {
        self.class.degree()
    }

    pub fn witt(&self) -> &WittClass {
        self.class.class()
    }

    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree(),
            "class": self.class.to_json(),
            "complete": self.complete,
        })
    }
}

impl fmt::Display for GradedIClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} in I^{}", self.class.class(), self.degree())?;
        if !self.complete {
            write!(out, " (partial: odd characteristic)")?;
        }
        Ok(())
    }
}

/// `θ` on monomials: `c η^m [u_1]⋯[u_r] ↦ c (-1)^m ⟪u_1⟫⋯⟪u_r⟫`.
pub fn theta_of(sum: &MWMonomialSum) -> Result<GradedIClass> {
    let f = sum.field();
    let mut w = WittClass::zero(f);
    for (m, c) in sum.terms() {
        let sign = if m.eta % 2 == 0 { 1 } else { -1 };
        w = w.add(&pfister_class(f, &m.units).reduced().scale(sign * c))?;
    }
    Ok(GradedIClass {
        class: IFiltClass::new(w, sum.degree())?,
        complete: f.is_char2(),
    })
}

/// `θ: K^W_*(F) → I^*(F)`, `[a] ↦ ⟪a⟫`, `η ↦ -1`. An expression with no degree
/// is taken in degree 0.
pub fn theta(e: &MWExpr, field: &Field) -> Result<GradedIClass> {
    theta_of(&monomial_expand(e, field).homogeneous(None)?)
}

/// Equality in `K^W_n(F)` through `θ`. Characteristic 2 only.
pub fn kw_equal(e1: &MWExpr, e2: &MWExpr, field: &Field) -> Result<bool> {
    if !field.is_char2() {
        return Err(Error::Unsupported(
            "characteristic 2 for deciding equality in K^W through theta".into(),
        ));
    }
    let t1 = theta(e1, field)?;
    let t2 = theta(e2, field)?;
    if t1.degree() != t2.degree() && !(t1.is_zero() && t2.is_zero()) {
        let formal = |e: &MWExpr| monomial_expand(e, field).degree();
        if let (Some(a), Some(b)) = (formal(e1)?, formal(e2)?) {
            return Err(Error::DegreeMismatch(a, b));
        }
    }
    t1.witt().witt_equal(t2.witt())
}

/// `sum_k ⟦a_k1⟧⋯⟦a_kn⟧`, a preimage under `θ` of `sum_k ⟪a_k1, ..., a_kn⟫`.
pub fn theta_preimage(specs: &[PfisterSpec]) -> MWExpr {
    let terms: Vec<MWExpr> = specs
        .iter()
        .map(|s| {
            let mut fs: Vec<MWExpr> = s.slots().iter().cloned().map(MWExpr::Bracket).collect();
            if fs.len() == 1 { fs.pop().unwrap() } else { MWExpr::Product(fs) }
        })
        .collect();
    match terms.len() {
        0 => MWExpr::Int(0),
        1 => terms.into_iter().next().unwrap(),
        _ => MWExpr::Sum(terms),
    }
}

use super::expand::monomial_expand;
use super::expr::MWExpr;
use super::normalize::angle_minus_one_product;
use crate::error::Result;
use crate::field::Field;
use crate::witt::WittClass;
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial `sum w_k t^k` with Witt-class coefficients, the
/// target of inverting `η`.
#[derive(Debug, Clone)]
pub struct LaurentWitt {
    field: Field,
    coeffs: BTreeMap<i64, WittClass>,
}

impl LaurentWitt {
    pub fn zero(field: &Field) -> Self {
        LaurentWitt {
            field: field.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(field: &Field, power: i64, w: WittClass) -> Self {
        let mut out = Self::zero(field);
        out.coeffs.insert(power, w);
        out
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> WittClass {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| WittClass::zero(&self.field))
    }

    /// Powers with a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs.iter().filter(|(_, w)| !w.is_zero()).map(|(k, _)| *k).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(WittClass::is_zero)
    }

    pub fn add(&self, other: &LaurentWitt) -> Result<LaurentWitt> {
        let mut out = self.clone();
        for (k, w) in &other.coeffs {
            let c = out.coeff(*k).add(w)?;
            out.coeffs.insert(*k, c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LaurentWitt) -> Result<LaurentWitt> {
        let mut out = Self::zero(&self.field);
        for (k1, w1) in &self.coeffs {
            for (k2, w2) in &other.coeffs {
                let c = out.coeff(k1 + k2).add(&w1.mul(w2)?)?;
                out.coeffs.insert(k1 + k2, c);
            }
        }
        Ok(out)
    }

    pub fn equals(&self, other: &LaurentWitt) -> Result<bool> {
        let mut keys: Vec<i64> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.dedup();
        for k in keys {
            if !self.coeff(k).witt_equal(&other.coeff(k))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for LaurentWitt {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, w)| match k {
                0 => format!("{w}"),
                1 => format!("t {w}"),
                k => format!("t^{k} {w}"),
            })
            .collect();
        if parts.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", parts.join(" + "))
        }
    }
}

/// `K^MW_*(F)[η^{-1}] → W(F)[t, t^{-1}]`: `[u] ↦ t^{-1}(⟨u⟩ - 1)`, `η ↦ t`.
/// Accepts inhomogeneous expressions.
pub fn localize_eta(e: &MWExpr, field: &Field) -> Result<LaurentWitt> {
    let mut out = LaurentWitt::zero(field);
    for part in monomial_expand(e, field).parts().values() {
        for (m, c) in part.terms() {
            let w = angle_minus_one_product(field, &m.units).scale(*c);
            out = out.add(&LaurentWitt::monomial(field, -m.degree(), w))?;
        }
    }
    Ok(out)
}

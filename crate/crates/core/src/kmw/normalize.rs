use super::expand::{monomial_expand, MWMonomialSum};
use super::expr::MWExpr;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::symbols::{j_make, milnor_equal, milnor_normalize, JElement, MilnorNormalForm, MilnorSymbolSum, Verdict};
use crate::witt::{GWCanonical, IFiltClass, WittClass};
use serde_json::{json, Value};
use std::fmt;

/// `prod (⟨u_i⟩ - 1)` in `W(F)`.
pub(crate) fn angle_minus_one_product(f: &Field, units: &[FieldElement]) -> WittClass {
    units.iter().fold(WittClass::one(f), |acc, u| {
        acc.mul(&WittClass::angle_minus_one(f, u)).expect("same field")
    })
}

/// `ψ`: `[u] ↦ ({u}, ⟨u⟩ - 1)`, `η ↦ (0, 1) ∈ J^{-1}`. In degree 0 the Milnor
/// component is the rank, in negative degrees it is zero.
pub fn psi(sum: &MWMonomialSum) -> Result<JElement> {
    let f = sum.field();
    let n = sum.degree();
    let mut witt = WittClass::zero(f);
    let mut symbols = Vec::new();
    for (m, c) in sum.terms() {
        witt = witt.add(&angle_minus_one_product(f, &m.units).reduced().scale(*c))?;
        if m.eta == 0 {
            symbols.push((m.units.clone(), *c));
        }
    }
    let milnor = if n < 0 {
        MilnorSymbolSum::zero(f, n)
    } else {
        MilnorSymbolSum::from_terms(f, n, symbols)?
    };
    j_make(milnor, IFiltClass::new(witt, n)?)
}

/// The canonical value of a homogeneous expression.
#[derive(Debug, Clone)]
pub enum CanonicalKMW {
    /// `K^MW_n ≅ W` for `n < 0`.
    Negative { degree: i64, witt: WittClass },
    /// `K^MW_0 ≅ GW`.
    Zero(GWCanonical),
    /// `n >= 1`: the pair in `J^n`, and the rewritten Milnor part.
    Positive { j: JElement, milnor: MilnorNormalForm },
}

impl CanonicalKMW {
    pub fn degree(&self) -> i64 {
        match self {
            CanonicalKMW::Negative { degree, .. } => *degree,
            CanonicalKMW::Zero(_) => 0,
            CanonicalKMW::Positive { j, .. } => j.degree(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CanonicalKMW::Negative { .. } => "witt",
            CanonicalKMW::Zero(_) => "grothendieck-witt",
            CanonicalKMW::Positive { .. } => "milnor-witt-pair",
        }
    }

    /// The Witt component (the whole value in negative degrees).
    pub fn witt(&self) -> &WittClass {
        match self {
            CanonicalKMW::Negative { witt, .. } => witt,
            CanonicalKMW::Zero(gw) => &gw.witt,
            CanonicalKMW::Positive { j, .. } => j.witt().class(),
        }
    }

    /// Whether the integral Milnor component can be decided zero or nonzero.
    pub fn decidable(&self) -> bool {
        match self {
            CanonicalKMW::Positive { j, milnor } => milnor.is_zero(j.field()).is_some(),
            _ => true,
        }
    }

    pub fn is_zero(&self) -> Verdict {
        let yes = |b: bool| if b { Verdict::Equal } else { Verdict::NotEqual };
        match self {
            CanonicalKMW::Negative { witt, .. } => yes(witt.is_zero()),
            CanonicalKMW::Zero(gw) => yes(gw.is_zero()),
            CanonicalKMW::Positive { j, milnor } => {
                if !j.witt().is_zero() {
                    return Verdict::NotEqual;
                }
                match milnor.is_zero(j.field()) {
                    Some(b) => yes(b),
                    None => Verdict::Undecided,
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let payload = match self {
            CanonicalKMW::Negative { witt, .. } => witt.to_json(),
            CanonicalKMW::Zero(gw) => gw.to_json(),
            CanonicalKMW::Positive { j, .. } => json!({
                "milnor": j.milnor().to_json(),
                "witt": j.witt().class().to_json(),
                "milnor_decidable": self.decidable(),
            }),
        };
        json!({"degree": self.degree(), "kind": self.kind(), "payload": payload})
    }
}

impl fmt::Display for CanonicalKMW {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalKMW::Negative { degree, witt } => write!(out, "degree {degree}: W class {witt}"),
            CanonicalKMW::Zero(gw) => write!(out, "degree 0: GW class {gw}"),
            CanonicalKMW::Positive { j, milnor } => {
                if milnor.is_zero(j.field()) == Some(true) {
                    write!(out, "degree {}: (0, {})", j.degree(), j.witt().class())?;
                } else {
                    write!(out, "degree {}: ({}, {})", j.degree(), j.milnor(), j.witt().class())?;
                }
                if !self.decidable() {
                    write!(out, " [Milnor part not decided]")?;
                }
                Ok(())
            }
        }
    }
}

/// Canonical value of a homogeneous expression. An expression with no degree
/// (such as `0`) is taken in degree 0.
pub fn normalize(e: &MWExpr, field: &Field) -> Result<CanonicalKMW> {
    normalize_in_degree(e, field, None)
}

/// As [`normalize`], requiring degree `n` when given.
pub fn normalize_in_degree(e: &MWExpr, field: &Field, n: Option<i64>) -> Result<CanonicalKMW> {
    let sum = monomial_expand(e, field).homogeneous(n)?;
    canonical_of(&sum)
}

pub fn canonical_of(sum: &MWMonomialSum) -> Result<CanonicalKMW> {
    let j = psi(sum)?;
    let n = sum.degree();
    Ok(match n {
        n if n < 0 => CanonicalKMW::Negative {
            degree: n,
            witt: j.witt().class().clone(),
        },
        0 => {
            let rank = match milnor_normalize(j.milnor())? {
                MilnorNormalForm::Integer(r) => r,
                other => unreachable!("degree-0 Milnor part {other:?}"),
            };
            CanonicalKMW::Zero(GWCanonical {
                rank,
                witt: j.witt().class().clone(),
            })
        }
        _ => {
            let milnor = milnor_normalize(j.milnor())?;
            CanonicalKMW::Positive { j, milnor }
        }
    })
}

/// The verdict of [`kmw_compare`] with a description of the comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub verdict: Verdict,
    pub degree: i64,
    pub report: String,
}

/// Compares two expressions of the same degree through the canonical value
/// of their difference.
pub fn kmw_compare(e1: &MWExpr, e2: &MWExpr, field: &Field) -> Result<Comparison> {
    let d1 = monomial_expand(e1, field).degree()?;
    let d2 = monomial_expand(e2, field).degree()?;
    if let (Some(a), Some(b)) = (d1, d2) {
        if a != b {
            return Err(Error::DegreeMismatch(a, b));
        }
    }
    let degree = d1.or(d2).unwrap_or(0);
    let diff = e1.clone().minus(e2.clone());
    let c = normalize_in_degree(&diff, field, Some(degree))?;
    let verdict = c.is_zero();
    let report = match &c {
        CanonicalKMW::Negative { witt, .. } => format!("difference in W: {witt}"),
        CanonicalKMW::Zero(gw) => format!("difference in GW: {gw}"),
        CanonicalKMW::Positive { j, .. } => {
            if !j.witt().is_zero() {
                format!("Witt parts differ by {}", j.witt().class())
            } else {
                let mv = milnor_equal(j.milnor(), &MilnorSymbolSum::zero(field, degree))?;
                match mv {
                    Verdict::Equal => "Witt parts agree; Milnor difference rewrites to 0".to_string(),
                    Verdict::NotEqual => format!("Witt parts agree; Milnor parts differ by {}", j.milnor()),
                    Verdict::Undecided => format!(
                        "Witt parts agree and Milnor parts agree modulo 2; integral Milnor difference {} not decided",
                        j.milnor()
                    ),
                }
            }
        }
    };
    let verdict = match (&c, verdict) {
        // the Milnor verdict may also refute through the mod-2 comparison
        (CanonicalKMW::Positive { j, .. }, Verdict::Undecided) => {
            milnor_equal(j.milnor(), &MilnorSymbolSum::zero(field, degree))?
        }
        (_, v) => v,
    };
    Ok(Comparison { verdict, degree, report })
}

pub fn kmw_equal(e1: &MWExpr, e2: &MWExpr, field: &Field) -> Result<Verdict> {
    Ok(kmw_compare(e1, e2, field)?.verdict)
}

/// `φ_{-n}(w) = sum η^n ⟨u_i⟩` over the anisotropic representative of `w`;
/// `η^n ⟨1⟩` is written `η^n`.
pub fn phi_neg(w: &WittClass, n: u32) -> MWExpr {
    let f = w.field();
    let terms: Vec<MWExpr> = w
        .anisotropic()
        .iter()
        .map(|u| {
            let mut factors = Vec::new();
            match n {
                0 => {}
                1 => factors.push(MWExpr::Eta),
                k => factors.push(MWExpr::Eta.pow(k)),
            }
            if !f.is_one(u) || n == 0 {
                factors.push(MWExpr::Angle(u.clone()));
            }
            if factors.len() == 1 { factors.pop().unwrap() } else { MWExpr::Product(factors) }
        })
        .collect();
    match terms.len() {
        0 => MWExpr::Int(0),
        1 => terms.into_iter().next().unwrap(),
        _ => MWExpr::Sum(terms),
    }
}

use super::{pfister_class, IFiltClass, WittClass};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::forms::PfisterSpec;

/// Writes a class of `I^n` (`n` in `{1, 2}`, characteristic 2) as a sum of
/// `n`-fold Pfister forms `⟪T_1⟫ + ... + ⟪T_k⟫`.
///
/// In characteristic 2, `⟨a⟩ = ⟪a⟫ + ⟨1⟩` and `2⟨1⟩ = 0`, so an even-rank
/// diagonal `⟨a_1, ..., a_r⟩` equals `sum ⟪a_i⟫`. For `n = 2` the identity
/// `⟪a⟫ + ⟪b⟫ = ⟪ab⟫ + ⟪a, b⟫` folds that sum into `⟪p_r⟫ + sum_j ⟪p_{j-1}, a_j⟫`
/// with partial products `p_j`; `p_r` is a square, so `⟪p_r⟫ = 0`.
///
/// The zero class decomposes as the empty sum in every degree. The result is
/// verified against the input before it is returned.
pub fn pfister_decompose(c: &IFiltClass) -> Result<Vec<PfisterSpec>> {
    let f = c.field();
    let n = c.degree();
    if c.is_zero() {
        return Ok(Vec::new());
    }
    if !f.is_char2() {
        return Err(Error::Unsupported("Pfister decomposition in characteristic 2".into()));
    }
    if !c.verify() {
        return Err(Error::Membership(format!("{} is not in I^{n}", c.class())));
    }
    let slots: Vec<FieldElement> = c
        .class()
        .anisotropic()
        .iter()
        .filter(|a| !f.is_one(a))
        .cloned()
        .collect();
    let tuples: Vec<Vec<FieldElement>> = match n {
        1 => slots.into_iter().map(|a| vec![a]).collect(),
        2 => {
            let mut out = Vec::new();
            let mut partial = slots[0].clone();
            for a in &slots[1..] {
                let tuple = vec![partial.clone(), a.clone()];
                if !pfister_class(f, &tuple).is_zero() {
                    out.push(tuple);
                }
                partial = f.square_class_rep(&f.mul(&partial, a));
            }
            debug_assert!(f.is_one(&partial));
            out
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "Pfister decomposition of nonzero classes in degree {n}; degrees 1 and 2 are supported"
            )))
        }
    };
    let specs = tuples
        .into_iter()
        .map(|t| PfisterSpec::new(f, t))
        .collect::<Result<Vec<_>>>()?;
    let total = specs.iter().try_fold(WittClass::zero(f), |acc, s| {
        acc.add(&pfister_class(f, s.slots()))
    })?;
    if !total.witt_equal(c.class())? {
        return Err(Error::Verification("Pfister decomposition does not reconstruct its input".into()));
    }
    Ok(specs)
}

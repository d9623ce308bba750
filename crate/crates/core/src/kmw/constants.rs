//! Named elements of `K^MW_*(F)`.

use super::expr::MWExpr;
use crate::error::Result;
use crate::field::{Field, FieldElement};

pub fn bracket(field: &Field, u: &FieldElement) -> Result<MWExpr> {
    MWExpr::bracket(field, u.clone())
}

/// `⟨u⟩ = 1 + η[u]`.
pub fn angle(field: &Field, u: &FieldElement) -> Result<MWExpr> {
    MWExpr::angle(field, u.clone())
}

/// `ε = -⟨-1⟩`.
pub fn epsilon() -> MWExpr {
    MWExpr::Eps
}

/// `h = η[-1] + 2`.
pub fn h() -> MWExpr {
    MWExpr::H
}

/// `n_ε = sum_{i=1}^{n} ⟨(-1)^{i-1}⟩`, and `-⟨-1⟩ (-n)_ε` for `n < 0`.
pub fn n_epsilon(n: i64) -> MWExpr {
    MWExpr::NEps(n)
}

//! Milnor-Witt K-theory by generators and relations: expressions, monomial
//! expansion, canonical values by degree, and the maps to `J^*`, `I^*` and
//! `W[t, t^{-1}]`.

pub mod constants;
mod expand;
mod expr;
mod localize;
mod normalize;
mod theta;

pub use expand::{monomial_expand, Expansion, MWMonomialSum, Monomial};
pub use expr::{parse, MWExpr};
pub use localize::{localize_eta, LaurentWitt};
pub use normalize::{
    canonical_of, kmw_compare, kmw_equal, normalize, normalize_in_degree, phi_neg, psi, CanonicalKMW, Comparison,
};
pub use theta::{kw_equal, theta, theta_of, theta_preimage, GradedIClass};

#[cfg(test)]
mod tests;

//! Grothendieck-Witt and Witt rings, the fundamental-ideal filtration,
//! the Milnor map on symbols, Pfister decomposition and chain equivalence.

mod chain;
mod class;
mod filtration;
mod gw;
mod pfister;

pub use chain::{chain_equiv_search, ChainBudget, ChainPath, ChainRelation, ChainStep};
pub use class::{witt_class, witt_equal, witt_is_zero, WittClass};
pub use filtration::{in_ideal_power, membership, pfister_class, s_n, IFiltClass, Membership};
pub use gw::{gw_canonical, gw_equal, GWCanonical, GWElement};
pub use pfister::pfister_decompose;

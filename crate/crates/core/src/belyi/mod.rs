//! Genus-0 Belyi maps: the polynomial system attached to a passport, a
//! numerical solver, Shabat polynomials for trees, and monodromy by path
//! lifting.

pub mod fraction;
pub mod monodromy;
pub mod mpoly;
pub mod poly;
pub mod snap;
pub mod solve;
pub mod system;
pub mod tree;

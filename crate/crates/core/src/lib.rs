//! Dessins d'enfants as pairs of permutations: invariants, isomorphism,
//! regularity, enumeration, the finite groups `H_n` with their
//! Grothendieck–Teichmüller approximations, and genus-0 Belyi maps.

pub mod belyi;
pub mod dessin;
pub mod enumeration;
pub mod error;
pub mod fgroup;
pub mod gt;
pub mod io;
pub mod perm;
pub mod permgroup;
pub mod regularity;

pub use belyi::fraction::{fraction_to_a, partial_fractions, ExactFraction, RationalFraction};
pub use belyi::monodromy::{monodromy, sample_preimage, verify, Monodromy};
pub use belyi::solve::{solve_system, BelyiCandidate, SolveOptions, SolveReport};
pub use belyi::system::{setup_system, setup_system_with, PolynomialSystem, SystemOptions};
pub use belyi::tree::tree_shabat;
pub use dessin::{from_triangles, make_dessin, to_triangles, Dessin, Orientation, Passport, TrianglePresentation};
pub use enumeration::{
    cached_enumerate, count_by_passport, enumerate_dessins, enumerate_regular, DessinCatalog, RegularCatalog,
};
pub use error::{Error, Result};
pub use fgroup::{FiniteGroupWithGenerators, Letter};
pub use gt::{
    act_on_dessin, build_hn, k_character, out_classes, tower_projection, GTElement, GroupAutomorphism, GtGroup,
    HnGroup,
};
pub use io::{dessin_from_json, dessin_from_text, dessin_to_json, dessin_to_text, parse_dessin};
pub use perm::{CycleType, Permutation};
pub use permgroup::PermutationGroup;
pub use regularity::{
    automorphism_group, distinguished_triple, iota, is_regular, quotient, regular_closure, RegularClosure,
    RegularDessin,
};

//! Construction and certification of quantum-isomorphic graphs.
//!
//! Given a classical graph, a central-type subgroup of its automorphism
//! group, and a nice unitary error basis realizing the subgroup's 2-cocycle,
//! this crate builds the induced quantum isomorphism as an explicit
//! projective permutation matrix, splits the associated Frobenius monoid
//! into a new (possibly quantum) graph, and certifies pseudo-telepathy by
//! checking classical non-isomorphism.

pub mod bcs;
pub mod cocycles;
pub mod frobenius;
pub mod graphs;
pub mod instances;
pub mod numerics;
pub mod permgroups;
pub mod qiso;
pub mod ueb;

pub use graphs::{are_isomorphic, automorphism_group, parse_graph, serialize_graph, ClassicalGraph};
pub use numerics::{kron, simultaneously_diagonalize, split_dagger_idempotent, CMatrix, Tolerance, C64};
pub use permgroups::{
    centralizer, closure, stabilizer, subgroups_square_order, AbstractGroup, PermGroup,
    Permutation, Subgroup,
};

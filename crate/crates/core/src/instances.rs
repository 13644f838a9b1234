//! Ready-made pipeline instances: the binary magic square, the magic
//! pentagram, and cycle graphs with their central type subgroups.

use crate::bcs::{
    arkhipov_pair, bcs_graph, homogenise, magic_square_bcs, magic_square_solution,
    move_inhomogeneity, pentagram_solution, solution_signs_to_automorphisms, BcsError,
};
use crate::cocycles::{enumerate_nondegenerate_classes_abelian, CentralTypeSubgroup, CocycleError};
use crate::graphs::ClassicalGraph;
use crate::numerics::Tolerance;
use crate::permgroups::{AbstractGroup, GroupError, Subgroup};
use crate::ueb::{clock_shift_basis, tensor_ueb, verify_ueb, UebError, UnitaryErrorBasis};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Bcs(#[from] BcsError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Ueb(#[from] UebError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A graph together with a central type subgroup of its automorphism group
/// and a matching nice unitary error basis.
pub struct PipelineInstance {
    pub graph: ClassicalGraph,
    pub subgroup: CentralTypeSubgroup,
    pub basis: UnitaryErrorBasis,
    /// The expected partner graph, when the instance comes from a BCS pair.
    pub partner: Option<ClassicalGraph>,
}

/// The binary magic square instance: homogeneous BCS graph on 24 vertices,
/// the Z2^4 bit-flip subgroup embedded via conjugation signs of the
/// two-qubit solution table, and the tensor-square Pauli basis.
pub fn magic_square_instance(tol: &Tolerance) -> Result<PipelineInstance, InstanceError> {
    let f = magic_square_bcs();
    let (graph, _) = bcs_graph(&homogenise(&f))?;
    let (partner, _) = bcs_graph(&f)?;
    let basis = tensor_ueb(&clock_shift_basis(2), &clock_shift_basis(2));
    let psi = verify_ueb(&basis, tol)?;
    let perms = solution_signs_to_automorphisms(&f, &magic_square_solution(), &basis, tol)?;
    let subgroup = CentralTypeSubgroup::new(basis.group.clone(), perms, psi)?;
    Ok(PipelineInstance { graph, subgroup, basis, partner: Some(partner) })
}

/// The magic pentagram instance for K_5 with a marked vertex: homogeneous
/// BCS graph on 40 vertices, Z2^6 via the three-qubit solution, and the
/// tensor-cube Pauli basis.
pub fn pentagram_instance(l_star: usize, tol: &Tolerance) -> Result<PipelineInstance, InstanceError> {
    let k5 = ClassicalGraph::complete(5);
    let (_, inhom, graph, partner) = arkhipov_pair(&k5, l_star)?;
    // the built-in labeling solves the system with the -1 at vertex 4
    let q = move_inhomogeneity(&k5, &pentagram_solution(), 4, l_star)?;
    let p2 = tensor_ueb(&clock_shift_basis(2), &clock_shift_basis(2));
    let basis = tensor_ueb(&p2, &clock_shift_basis(2));
    let psi = verify_ueb(&basis, tol)?;
    let perms = solution_signs_to_automorphisms(&inhom, &q, &basis, tol)?;
    let subgroup = CentralTypeSubgroup::new(basis.group.clone(), perms, psi)?;
    Ok(PipelineInstance { graph, subgroup, basis, partner: Some(partner) })
}

/// All central type structures on an abelian permutation subgroup: one
/// `CentralTypeSubgroup` per nondegenerate cohomology class. Empty when the
/// subgroup is nonabelian (cocycles must then be supplied externally) or
/// admits no nondegenerate class.
pub fn central_type_structures(
    sub: &Subgroup,
) -> Result<Vec<CentralTypeSubgroup>, InstanceError> {
    let (table, elems) = AbstractGroup::from_subgroup(sub);
    if !table.is_abelian() {
        return Ok(Vec::new());
    }
    let classes = enumerate_nondegenerate_classes_abelian(&table)?;
    let mut out = Vec::with_capacity(classes.len());
    for psi in classes {
        out.push(CentralTypeSubgroup::new(table.clone(), elems.clone(), psi)?);
    }
    Ok(out)
}

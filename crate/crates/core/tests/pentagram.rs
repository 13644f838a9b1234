//! The magic pentagram pipeline at full scale: K_5, Z_2^6, d = 8.

use qpt_core::frobenius::{center_dimension, classical_from_quantum};
use qpt_core::graphs::are_isomorphic;
use qpt_core::instances::pentagram_instance;
use qpt_core::qiso::{build_x, center_dim_components, center_dim_group, split_frobenius_monoid};
use qpt_core::Tolerance;
use std::time::Instant;

#[test]
fn pentagram_quantum_solution_ppm() {
    use qpt_core::bcs::{arkhipov_pair, pentagram_solution, quantum_solution_ppm};
    use qpt_core::ClassicalGraph;
    let tol = Tolerance::default();
    let k5 = ClassicalGraph::complete(5);
    let (_, inhom, _, _) = arkhipov_pair(&k5, 4).unwrap();
    let (ppm, src, tgt) = quantum_solution_ppm(&inhom, &pentagram_solution(), &tol).unwrap();
    assert_eq!(ppm.d, 8);
    assert_eq!(ppm.n, 40);
    assert_eq!((src.n(), tgt.n()), (40, 40));
}

#[test]
fn pentagram_full_pipeline() {
    let t0 = Instant::now();
    let tol = Tolerance::default();
    let inst = pentagram_instance(0, &tol).unwrap();
    let g = &inst.graph;
    assert_eq!(g.n(), 40);
    assert_eq!(inst.subgroup.order(), 64);
    eprintln!("[pentagram] instance built at {:?}", t0.elapsed());

    assert_eq!(center_dim_group(g, &inst.subgroup).unwrap(), 40);
    let monoid = build_x(g, &inst.subgroup, &inst.basis, &tol).unwrap();
    eprintln!("[pentagram] monoid built and verified at {:?}", t0.elapsed());
    assert_eq!(center_dim_components(&monoid).unwrap(), 40);

    let split = split_frobenius_monoid(&monoid, &tol).unwrap();
    eprintln!("[pentagram] split and verified at {:?}", t0.elapsed());
    assert_eq!(split.rank, 40);
    assert_eq!(center_dimension(&split.quantum_graph.algebra).unwrap(), 40);

    let extracted = classical_from_quantum(&split.quantum_graph, &tol).unwrap();
    assert!(are_isomorphic(g, &extracted).is_none());
    let partner = inst.partner.as_ref().unwrap();
    assert!(are_isomorphic(partner, &extracted).is_some());
    eprintln!("[pentagram] done at {:?}", t0.elapsed());
}

//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Tolerances are pinned here; integer quantities are checked
//! exactly.

use qpt_core::bcs::{bcs_graph, homogenise, magic_square_bcs};
use qpt_core::cocycles::{equivalent_pairs, CentralTypeSubgroup};
use qpt_core::frobenius::{
    center_dimension, classical_from_quantum, endomorphism_algebra, set_algebra,
    twisted_group_frobenius, verify_frobenius,
};
use qpt_core::graphs::{are_isomorphic, automorphism_group, ClassicalGraph};
use qpt_core::instances::{central_type_structures, magic_square_instance, pentagram_instance};
use qpt_core::permgroups::{subgroups_square_order, AbstractGroup, Permutation};
use qpt_core::qiso::{
    build_x, center_dim_components, center_dim_group, compose, dual, identity_monoid, ppm_from_iso,
    recognize_check, snake_residual, split_frobenius_monoid, verify_ppm, Ppm,
};
use qpt_core::ueb::{clock_shift_basis, tensor_ueb, ueb_from_central_type, verify_ueb};
use qpt_core::Tolerance;
use std::time::Instant;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn criterion_1_magic_square_pipeline() {
    let t0 = Instant::now();
    let tol = tol();

    let inst = magic_square_instance(&tol).expect("instance");
    assert_eq!(inst.graph.n(), 24, "homogeneous BMS graph has 24 vertices");
    assert_eq!(inst.subgroup.order(), 16, "Z2^4 embeds");
    assert_eq!(inst.subgroup.group.structure_name(), "Z2^4");

    for v in 0..24 {
        let stab = inst.subgroup.stabilizer_indices(v);
        let (coiso, _) = inst.subgroup.psi.is_coisotropic(&stab);
        assert!(coiso, "stabilizer of vertex {v} must be coisotropic");
    }

    assert_eq!(center_dim_group(&inst.graph, &inst.subgroup).unwrap(), 24);
    let monoid = build_x(&inst.graph, &inst.subgroup, &inst.basis, &tol).expect("monoid");
    assert_eq!(center_dim_components(&monoid).unwrap(), 24);

    let split = split_frobenius_monoid(&monoid, &tol).expect("split");
    assert_eq!(split.rank, 24, "idempotent rank equals the vertex count");
    assert_eq!(center_dimension(&split.quantum_graph.algebra).unwrap(), 24);

    let extracted = classical_from_quantum(&split.quantum_graph, &tol).expect("classical output");
    assert!(
        are_isomorphic(&inst.graph, &extracted).is_none(),
        "output graph must not be isomorphic to the input"
    );
    let inhom = inst.partner.as_ref().unwrap();
    assert!(
        are_isomorphic(inhom, &extracted).is_some(),
        "output graph must be isomorphic to the inhomogeneous BCS graph"
    );

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs <= 60.0, "criterion 1 exceeded its 60 s budget ({secs:.1} s)");
    println!("ACCEPTANCE criterion 1 PASS: magic-square pipeline ({secs:.2} s)");
}

#[test]
fn criterion_2_pentagram_pipeline() {
    let t0 = Instant::now();
    let tol = tol();

    let inst = pentagram_instance(0, &tol).expect("instance");
    assert_eq!(inst.graph.n(), 40, "homogeneous pentagram graph has 40 vertices");
    assert_eq!(inst.subgroup.order(), 64, "Z2^6 embeds");
    assert_eq!(inst.basis.dim, 8, "d = 8");

    let monoid = build_x(&inst.graph, &inst.subgroup, &inst.basis, &tol).expect("monoid");
    let split = split_frobenius_monoid(&monoid, &tol).expect("split");
    // the idempotent acts on H* ⊗ V ⊗ H with 8 * 40 * 8 = 2560 dimensions
    assert_eq!(8 * inst.graph.n() * 8, 2560);
    assert_eq!(split.rank, 40, "rank of the 2560-dimensional idempotent");

    let extracted = classical_from_quantum(&split.quantum_graph, &tol).expect("classical output");
    assert_eq!(extracted.n(), 40);
    assert!(are_isomorphic(&inst.graph, &extracted).is_none(), "not isomorphic to X0(K5)");
    let partner = inst.partner.as_ref().unwrap();
    assert!(are_isomorphic(partner, &extracted).is_some(), "isomorphic to X(K5, l*)");

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs <= 1800.0, "criterion 2 exceeded its 30 min budget ({secs:.1} s)");
    println!("ACCEPTANCE criterion 2 PASS: pentagram pipeline ({secs:.2} s)");
}

#[test]
fn criterion_3_cycle_graph_table() {
    let t0 = Instant::now();
    let tol = tol();

    for (n, expected_classes) in
        [(5usize, 0usize), (6, 1), (7, 0), (8, 2), (9, 0), (10, 1), (11, 0), (12, 2)]
    {
        let g = ClassicalGraph::cycle(n);
        let aut = automorphism_group(&g, 1_000_000).unwrap();
        assert_eq!(aut.order(), 2 * n, "dihedral automorphism group of C{n}");
        let classes = subgroups_square_order(&aut).unwrap();
        let mut central = 0usize;
        for class in &classes {
            let structures = central_type_structures(&class[0]).unwrap();
            if structures.is_empty() {
                continue;
            }
            central += 1;
            for ct in structures {
                // every class has a vertex with trivial stabilizer, which
                // forces a non-classical output
                assert!(
                    (0..n).any(|v| ct.stabilizer_indices(v).len() == 1),
                    "C{n}: expected a trivial-stabilizer vertex"
                );
                let center = center_dim_group(&g, &ct).unwrap();
                assert!(center < n, "C{n}: output must be non-classical");
            }
        }
        assert_eq!(central, expected_classes, "central type classes of C{n}");
    }

    // the worked C6 construction: algebra of dimension 6 with center 3,
    // against the Phi-sum oracle (4+1+1+4+1+1)/4 = 3
    let g = ClassicalGraph::cycle(6);
    let aut = automorphism_group(&g, 1_000_000).unwrap();
    let classes = subgroups_square_order(&aut).unwrap();
    let mut constructed = false;
    for class in &classes {
        for ct in central_type_structures(&class[0]).unwrap() {
            let mut phis: Vec<u64> =
                (0..6).map(|v| ct.psi.phi(&ct.stabilizer_indices(v)).unwrap()).collect();
            phis.sort_unstable();
            // two vertices on the reflection axis contribute 4, the rest 1
            assert_eq!(phis, vec![1, 1, 1, 1, 4, 4]);
            let phi_sum: u64 = phis.iter().sum();
            assert_eq!(phi_sum, 12, "Phi values over C6 vertices sum to 4+1+1+4+1+1");
            let basis = ueb_from_central_type(&ct, 0, &tol).unwrap();
            let monoid = build_x(&g, &ct, &basis, &tol).unwrap();
            let split = split_frobenius_monoid(&monoid, &tol).unwrap();
            assert_eq!(split.quantum_graph.dim(), 6);
            assert_eq!(center_dimension(&split.quantum_graph.algebra).unwrap(), 3);
            assert_eq!(center_dim_components(&monoid).unwrap(), 3);
            constructed = true;
        }
    }
    assert!(constructed);

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs <= 60.0, "criterion 3 exceeded its 60 s budget ({secs:.1} s)");
    println!("ACCEPTANCE criterion 3 PASS: cycle-graph table ({secs:.2} s)");
}

#[test]
fn criterion_4_vertex_transitive_sweep() {
    let t0 = Instant::now();

    // Petersen: |Aut| = 120 with two Klein-four classes, both with some
    // trivial-stabilizer vertex
    {
        let g = ClassicalGraph::petersen();
        let aut = automorphism_group(&g, 1_000_000).unwrap();
        assert_eq!(aut.order(), 120);
        let classes = subgroups_square_order(&aut).unwrap();
        let mut central = 0usize;
        for class in &classes {
            let structures = central_type_structures(&class[0]).unwrap();
            if structures.is_empty() {
                continue;
            }
            central += 1;
            assert_eq!(class[0].order(), 4);
            for ct in structures {
                assert!(
                    (0..g.n()).any(|v| ct.stabilizer_indices(v).len() == 1),
                    "Petersen class must have a trivial-stabilizer vertex"
                );
                assert!(center_dim_group(&g, &ct).unwrap() < g.n());
            }
        }
        assert_eq!(central, 2, "Petersen has two central type classes");
    }

    // Torus K3 x K3: |Aut| = 72, two Klein-four classes plus one Z3 x Z3
    // class whose two nondegenerate cocycle classes are equivalent
    {
        let k3 = ClassicalGraph::complete(3);
        let g = k3.direct_product(&k3);
        let aut = automorphism_group(&g, 1_000_000).unwrap();
        assert_eq!(aut.order(), 72);
        let classes = subgroups_square_order(&aut).unwrap();
        let mut klein = 0usize;
        let mut threes = 0usize;
        for class in &classes {
            let structures = central_type_structures(&class[0]).unwrap();
            if structures.is_empty() {
                continue;
            }
            match class[0].order() {
                4 => klein += 1,
                9 => {
                    threes += 1;
                    assert_eq!(structures.len(), 2, "Z3^2 has two nondegenerate classes");
                    let pair: Vec<CentralTypeSubgroup> = structures;
                    assert!(
                        equivalent_pairs(&pair[0], &pair[1], &aut).unwrap(),
                        "the two Z3^2 cocycle classes must be equivalent under Aut"
                    );
                    for ct in &pair {
                        assert!(
                            (0..g.n()).any(|v| ct.stabilizer_indices(v).len() == 1),
                            "torus Z3^2 class must have a trivial-stabilizer vertex"
                        );
                        assert!(center_dim_group(&g, ct).unwrap() < g.n());
                    }
                }
                other => panic!("unexpected central type subgroup order {other}"),
            }
            if class[0].order() == 4 {
                for ct in central_type_structures(&class[0]).unwrap() {
                    assert!(
                        (0..g.n()).any(|v| ct.stabilizer_indices(v).len() == 1),
                        "torus Klein class must have a trivial-stabilizer vertex"
                    );
                    assert!(center_dim_group(&g, &ct).unwrap() < g.n());
                }
            }
        }
        assert_eq!(klein, 2, "torus has two Klein-four classes");
        assert_eq!(threes, 1, "torus has one Z3^2 class");
    }

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs <= 600.0, "criterion 4 exceeded its 10 min budget ({secs:.1} s)");
    println!("ACCEPTANCE criterion 4 PASS: vertex-transitive sweep ({secs:.2} s)");
}

#[test]
fn criterion_5_property_suites() {
    let t0 = Instant::now();
    // Frobenius residuals at 1e-8 on algebras up to dimension 64
    let strict = Tolerance::new(1e-8, 1e-6).unwrap();
    for n in [1usize, 2, 8, 32, 64] {
        let rep = verify_frobenius(&set_algebra(n), &strict).unwrap();
        assert!(rep.special && rep.symmetric && rep.commutative);
    }
    for d in [2usize, 4, 8] {
        let rep = verify_frobenius(&endomorphism_algebra(d), &strict).unwrap();
        assert!(rep.special && rep.symmetric);
    }
    // twisted algebras on the acceptance central type pairs, up to Z2^6
    let pauli = verify_ueb(&clock_shift_basis(2), &strict).unwrap();
    let p2 = tensor_ueb(&clock_shift_basis(2), &clock_shift_basis(2));
    let psi2 = verify_ueb(&p2, &strict).unwrap();
    let p3 = tensor_ueb(&p2, &clock_shift_basis(2));
    let psi3 = verify_ueb(&p3, &strict).unwrap();
    for psi in [&pauli, &psi2, &psi3] {
        let alg = twisted_group_frobenius(psi);
        let rep = verify_frobenius(&alg, &strict).unwrap();
        assert!(rep.special && rep.symmetric);
        assert_eq!(center_dimension(&alg).unwrap(), 1);
    }

    // Phi integrality, bound, and coisotropy equivalence over ALL subgroups
    // of (Z2^4, psi_P2)
    {
        let c = psi2.rescale(16).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut check = |h: Vec<usize>| {
            if seen.insert(h.clone()) {
                let phi = c.phi(&h).unwrap();
                assert!(phi <= 16, "Phi bound");
                let (coiso, _) = c.is_coisotropic(&h);
                assert_eq!(coiso, phi == 16, "coisotropy iff Phi = |L| on {h:?}");
            }
        };
        for a in 0..16usize {
            for b in 0..16usize {
                for d in 0..16usize {
                    check(c.group.subgroup_closure(&[a, b, d]));
                }
            }
        }
        check((0..16).collect());
        assert_eq!(seen.len(), 67, "all 67 subgroups of Z2^4 swept");
    }

    let tol = tol();

    // d = 1 round trips reduce to classical graph isomorphisms, and the
    // snake equations hold for duals
    {
        let g = ClassicalGraph::cycle(5);
        let qm = identity_monoid(&g);
        let split = split_frobenius_monoid(&qm, &tol).unwrap();
        let (ppm, src) = ppm_from_iso(&split.iso, &tol).unwrap();
        assert_eq!(ppm.d, 1);
        verify_ppm(&ppm, &src, &g, &tol).unwrap();
        assert!(are_isomorphic(&src, &g).is_some());
        assert!(snake_residual(&split.iso) <= 1e-6);
        let rot = Permutation::new(vec![1, 2, 3, 4, 0]).unwrap();
        let q = qpt_core::qiso::iso_from_ppm(&Ppm::identity_from_permutation(&rot), &g, &g);
        assert!(snake_residual(&q) <= 1e-6);
        assert!(snake_residual(&dual(&q)) <= 1e-6);
    }

    // the magic-square instance: every constructed PPM verifies, the split
    // recognition condition holds, composing with the dual returns the
    // monoid, and the three center dimensions agree
    {
        let inst = magic_square_instance(&tol).unwrap();
        let monoid = build_x(&inst.graph, &inst.subgroup, &inst.basis, &tol).unwrap();
        verify_ppm(&monoid.ppm, &inst.graph, &inst.graph, &tol).unwrap();
        let split = split_frobenius_monoid(&monoid, &tol).unwrap();
        assert!(snake_residual(&split.iso) <= 1e-6);
        let (ppm, ppm_src) = ppm_from_iso(&split.iso, &tol).unwrap();
        verify_ppm(&ppm, &ppm_src, &inst.graph, &tol).unwrap();
        assert!(recognize_check(&ppm, &inst.subgroup, &inst.basis, &tol));
        let composite = compose(&dual(&split.iso), &split.iso).unwrap();
        let mut residual = 0.0f64;
        for w in 0..24 {
            for v in 0..24 {
                for r in 0..16 {
                    for c in 0..16 {
                        let got = composite.p[(v * 16 + r, c * 24 + w)];
                        let want = monoid.ppm.blocks[w][v][(r, c)];
                        residual = residual.max((got - want).norm());
                    }
                }
            }
        }
        assert!(residual <= 1e-6, "dual-composition reconstruction residual {residual:e}");
        let a = center_dim_group(&inst.graph, &inst.subgroup).unwrap();
        let b = center_dim_components(&monoid).unwrap();
        let c = center_dimension(&split.quantum_graph.algebra).unwrap();
        assert!(a == b && b == c && c == 24, "three-way center agreement");
    }

    // the C6 instance: three-way agreement on a non-classical output, and
    // the quantum-solution PPM of the magic square verifies
    {
        let g = ClassicalGraph::cycle(6);
        let aut = automorphism_group(&g, 1_000_000).unwrap();
        for class in subgroups_square_order(&aut).unwrap() {
            for ct in central_type_structures(&class[0]).unwrap() {
                let basis = ueb_from_central_type(&ct, 0, &tol).unwrap();
                let monoid = build_x(&g, &ct, &basis, &tol).unwrap();
                let split = split_frobenius_monoid(&monoid, &tol).unwrap();
                let a = center_dim_group(&g, &ct).unwrap();
                let b = center_dim_components(&monoid).unwrap();
                let c = center_dimension(&split.quantum_graph.algebra).unwrap();
                assert!(a == b && b == c && c == 3);
            }
        }
        let f = magic_square_bcs();
        let (ppm, src, tgt) =
            qpt_core::bcs::quantum_solution_ppm(&f, &qpt_core::bcs::magic_square_solution(), &tol)
                .unwrap();
        verify_ppm(&ppm, &src, &tgt, &tol).unwrap();
        let (hom_graph, _) = bcs_graph(&homogenise(&f)).unwrap();
        assert!(are_isomorphic(&tgt, &hom_graph).is_some());
    }

    // twisted algebra centers cross-check against the abstract group route
    {
        let z22 = AbstractGroup::cyclic(2).direct_product(&AbstractGroup::cyclic(2));
        let trivial = qpt_core::cocycles::TwoCocycle::trivial(z22);
        let alg = twisted_group_frobenius(&trivial);
        assert_eq!(center_dimension(&alg).unwrap(), 4);
    }

    let secs = t0.elapsed().as_secs_f64();
    println!("ACCEPTANCE criterion 5 PASS: property suites ({secs:.2} s)");
}

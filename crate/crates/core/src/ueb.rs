//! Nice unitary error bases: clock-and-shift construction, tensor products,
//! extraction from central type subgroups, and verification with exact
//! cocycle extraction.

use crate::cocycles::{cohomologous, root_of_unity, CentralTypeSubgroup, CocycleError, TwoCocycle};
use crate::numerics::{kron, seeded_rng, CMatrix, Tolerance, C64};
use crate::permgroups::AbstractGroup;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UebError {
    #[error("matrix {0} is not unitary (residual {1:e})")]
    NotUnitary(usize, f64),
    #[error("trace orthogonality fails at pair ({0},{1})")]
    NotTraceOrthogonal(usize, usize),
    #[error("product U_{0} U_{1} is not a scalar multiple of the product element")]
    NotProjective(usize, usize),
    #[error("phase at ({0},{1}) does not snap to a root of unity of order {2}")]
    PhaseSnapError(usize, usize, u32),
    #[error("basis shape is inconsistent: {0}")]
    ShapeMismatch(String),
    #[error("cocycle is degenerate; a nice error basis requires central type")]
    NondegeneracyRequired,
    #[error("commutant compression has rank {got}, expected {want}")]
    RankMismatch { got: usize, want: usize },
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A family of unitaries indexed by a group with U_e = 1, pairwise
/// trace-orthogonal, and multiplying projectively by a single cocycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitaryErrorBasis {
    pub group: AbstractGroup,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

impl UnitaryErrorBasis {
    /// The one-dimensional basis of the trivial group.
    pub fn trivial() -> Self {
        UnitaryErrorBasis {
            group: AbstractGroup::cyclic(1),
            dim: 1,
            matrices: vec![CMatrix::identity(1)],
        }
    }
}

/// Weyl-Heisenberg clock-and-shift basis for Z_n x Z_n:
/// U_(a,b) = X^a Z^b with X the cyclic shift and Z = diag(w^k).
///
/// Element (a,b) has index a*n + b; for n = 2 this reproduces the Pauli
/// family 1, X, Z, XZ.
pub fn clock_shift_basis(n: usize) -> UnitaryErrorBasis {
    assert!(n >= 2, "clock-shift basis needs n >= 2");
    let shift = CMatrix::from_fn(n, n, |i, j| {
        if i == (j + 1) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let clock = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            root_of_unity(i as u32, n as u32)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let group = AbstractGroup::cyclic(n).direct_product(&AbstractGroup::cyclic(n));
    let mut matrices = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut m = CMatrix::identity(n);
            for _ in 0..a {
                m = shift.mul(&m);
            }
            for _ in 0..b {
                m = m.mul(&clock);
            }
            matrices.push(m);
        }
    }
    UnitaryErrorBasis { group, dim: n, matrices }
}

/// Tensor product basis on the direct product group:
/// U_(a,b) = U_a (x) U_b, with element (a,b) at index a*|L2| + b.
pub fn tensor_ueb(u1: &UnitaryErrorBasis, u2: &UnitaryErrorBasis) -> UnitaryErrorBasis {
    let group = u1.group.direct_product(&u2.group);
    let mut matrices = Vec::with_capacity(u1.matrices.len() * u2.matrices.len());
    for a in &u1.matrices {
        for b in &u2.matrices {
            matrices.push(kron(a, b));
        }
    }
    UnitaryErrorBasis { group, dim: u1.dim * u2.dim, matrices }
}

/// Verify the error basis axioms and extract its 2-cocycle as exact
/// root-of-unity exponents (phases snapped to |L|-th roots).
pub fn verify_ueb(u: &UnitaryErrorBasis, tol: &Tolerance) -> Result<TwoCocycle, UebError> {
    let k = u.group.order();
    let d = u.dim;
    if u.matrices.len() != k {
        return Err(UebError::ShapeMismatch(format!(
            "{} matrices for group order {k}",
            u.matrices.len()
        )));
    }
    if d * d != k {
        return Err(UebError::ShapeMismatch(format!("dim {d} does not satisfy d^2 = {k}")));
    }
    for (i, m) in u.matrices.iter().enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(UebError::ShapeMismatch(format!("matrix {i} is {}x{}", m.rows(), m.cols())));
        }
        let res = m.dagger().mul(m).max_abs_diff(&CMatrix::identity(d));
        if res > tol.eps {
            return Err(UebError::NotUnitary(i, res));
        }
    }
    if u.matrices[0].max_abs_diff(&CMatrix::identity(d)) > tol.eps {
        return Err(UebError::ShapeMismatch("U_e is not the identity".into()));
    }
    for a in 0..k {
        for b in (a + 1)..k {
            let ip = u.matrices[a].dagger().mul(&u.matrices[b]).trace();
            if ip.norm() > tol.eps * d as f64 {
                return Err(UebError::NotTraceOrthogonal(a, b));
            }
        }
    }

    let snap_order = k as u32;
    let mut table = vec![0u32; k * k];
    for a in 0..k {
        for b in 0..k {
            let ab = u.group.mul(a, b);
            let prod = u.matrices[a].mul(&u.matrices[b]);
            // phase = Tr(U_ab^dag U_a U_b) / d; the product is scalar * U_ab
            // exactly when this phase has unit modulus and reproduces it
            let phase = u.matrices[ab].dagger().mul(&prod).trace() / C64::new(d as f64, 0.0);
            if (phase.norm() - 1.0).abs() > 1e-6 {
                return Err(UebError::NotProjective(a, b));
            }
            let residual = prod.max_abs_diff(&u.matrices[ab].scale(phase));
            if residual > 10.0 * tol.eps {
                return Err(UebError::NotProjective(a, b));
            }
            let angle = phase.im.atan2(phase.re);
            let frac = angle / (2.0 * std::f64::consts::PI) * snap_order as f64;
            let e = frac.round().rem_euclid(snap_order as f64) as u32 % snap_order;
            if (phase - root_of_unity(e, snap_order)).norm() > 1e-6 {
                return Err(UebError::PhaseSnapError(a, b, snap_order));
            }
            table[a * k + b] = e;
        }
    }
    let psi = TwoCocycle::new(u.group.clone(), snap_order, table)?;
    Ok(psi)
}

/// Construct a nice unitary error basis for a central type pair by
/// compressing the left regular psi-twisted representation onto a minimal
/// eigenspace of a random self-adjoint commutant element.
pub fn ueb_from_central_type(
    c: &CentralTypeSubgroup,
    seed: u64,
    tol: &Tolerance,
) -> Result<UnitaryErrorBasis, UebError> {
    if !c.nondegenerate {
        return Err(UebError::NondegeneracyRequired);
    }
    let k = c.order();
    let d = (k as f64).sqrt().round() as usize;
    if d * d != k {
        return Err(UebError::ShapeMismatch(format!("group order {k} is not a square")));
    }
    // left regular twisted representation R_a e_b = psi(a,b) e_{ab}
    let reg: Vec<CMatrix> = (0..k)
        .map(|a| {
            CMatrix::from_fn(k, k, |i, b| {
                if i == c.group.mul(a, b) {
                    c.psi.value(a, b)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();

    // random self-adjoint commutant element by twirling
    let mut rng = seeded_rng(seed);
    let h =
        CMatrix::from_fn(k, k, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = h.add(&h.dagger()).scale(C64::new(0.5, 0.0));
    let mut twirl = CMatrix::zeros(k, k);
    for r in &reg {
        twirl = twirl.add(&r.dagger().mul(&h).mul(r));
    }
    twirl = twirl.scale(C64::new(1.0 / k as f64, 0.0));

    // pick the best-isolated eigenvalue cluster; for a nondegenerate cocycle
    // each commutant eigenvalue has multiplicity exactly d
    let (vals, vecs) = twirl.hermitian_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let cluster_tol = 1e-8;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if (vals[i] - vals[*cl.last().unwrap()]).abs() <= cluster_tol => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let isolation = |cl: &[usize]| {
        let lo = vals[cl[0]];
        let hi = vals[*cl.last().unwrap()];
        clusters
            .iter()
            .filter(|other| other.as_slice() != cl)
            .map(|other| {
                let olo = vals[other[0]];
                let ohi = vals[*other.last().unwrap()];
                (lo - ohi).abs().min((olo - hi).abs())
            })
            .fold(f64::INFINITY, f64::min)
    };
    let best = clusters
        .iter()
        .max_by(|a, b| isolation(a).partial_cmp(&isolation(b)).unwrap())
        .cloned()
        .unwrap_or_default();
    if best.len() != d {
        return Err(UebError::RankMismatch { got: best.len(), want: d });
    }
    let w = CMatrix::from_columns(k, &best.iter().map(|&i| vecs.column(i)).collect::<Vec<_>>());

    // compress; the eigenspace is invariant, so each compression is unitary
    let wd = w.dagger();
    let mut matrices: Vec<CMatrix> = reg.iter().map(|r| wd.mul(r).mul(&w)).collect();
    // U_e comes out as the identity; pin it exactly against float noise
    matrices[0] = CMatrix::identity(d);
    let ueb = UnitaryErrorBasis { group: c.group.clone(), dim: d, matrices };

    let extracted = verify_ueb(&ueb, tol)?;
    let n = lcm_u32(c.psi.root_order, extracted.root_order);
    if cohomologous(&c.psi.rescale(n)?, &extracted.rescale(n)?).is_none() {
        return Err(UebError::ShapeMismatch(
            "extracted cocycle is not cohomologous to the input".into(),
        ));
    }
    Ok(ueb)
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let g = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / g * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::test_support::{pauli_cocycle_from_matrices, pauli_squared};
    use crate::permgroups::Permutation;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn clock_shift_two_matches_pauli_family() {
        let u = clock_shift_basis(2);
        // the four matrices: 1, Z at (0,1), X at (1,0), XZ at (1,1)
        assert!(u.matrices[0].approx_eq(&CMatrix::identity(2), 0.0));
        let z = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let x = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let xz = CMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]); // = -i sigma_Y
        assert!(u.matrices[1].approx_eq(&z, 1e-12));
        assert!(u.matrices[2].approx_eq(&x, 1e-12));
        assert!(u.matrices[3].approx_eq(&xz, 1e-12));
        let psi = verify_ueb(&u, &tol()).unwrap();
        // psi((0,1),(1,0)) = -1: indices 1 and 2, root order 4, exponent 2
        assert_eq!(psi.exponent(1, 2), 2);
        assert_eq!(psi.value(1, 2), C64::new(-1.0, 0.0));
        assert!(psi.is_nondegenerate());
        // the extraction agrees with the matrix-product oracle exactly
        assert_eq!(psi, pauli_cocycle_from_matrices());
    }

    #[test]
    fn clock_shift_three_is_orthogonal() {
        let u = clock_shift_basis(3);
        assert_eq!(u.matrices.len(), 9);
        let psi = verify_ueb(&u, &tol()).unwrap();
        assert!(psi.is_nondegenerate());
    }

    #[test]
    fn tensor_of_paulis_is_the_z24_basis() {
        let p = clock_shift_basis(2);
        let pp = tensor_ueb(&p, &p);
        assert_eq!(pp.dim, 4);
        assert_eq!(pp.group.order(), 16);
        let psi = verify_ueb(&pp, &tol()).unwrap();
        // equals the product cocycle psi_{P^2} after exponent rescaling
        assert_eq!(psi, pauli_squared().rescale(16).unwrap());
        // three-fold product: the Z2^6 basis of dimension 8
        let ppp = tensor_ueb(&pp, &p);
        assert_eq!(ppp.dim, 8);
        assert!(verify_ueb(&ppp, &tol()).unwrap().is_nondegenerate());
    }

    #[test]
    fn tensor_with_trivial_is_identity_operation() {
        let p = clock_shift_basis(2);
        let pt = tensor_ueb(&p, &UnitaryErrorBasis::trivial());
        assert_eq!(pt.dim, 2);
        for (a, b) in p.matrices.iter().zip(&pt.matrices) {
            assert!(a.approx_eq(b, 0.0));
        }
    }

    #[test]
    fn verify_rejects_broken_bases() {
        let mut u = clock_shift_basis(2);
        u.matrices[3] = CMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(verify_ueb(&u, &tol()), Err(UebError::NotUnitary(3, _))));
        let mut u = clock_shift_basis(2);
        u.matrices[3] = u.matrices[2].clone();
        assert!(matches!(verify_ueb(&u, &tol()), Err(UebError::NotTraceOrthogonal(2, 3))));
    }

    #[test]
    fn extracted_cocycle_is_normalized() {
        let u = tensor_ueb(&clock_shift_basis(2), &clock_shift_basis(2));
        let psi = verify_ueb(&u, &tol()).unwrap();
        for a in 0..16 {
            assert_eq!(psi.exponent(0, a), 0);
            assert_eq!(psi.exponent(a, 0), 0);
        }
    }

    #[test]
    fn gram_matrix_spans_full_matrix_space() {
        for u in [clock_shift_basis(2), clock_shift_basis(3)] {
            let k = u.matrices.len();
            let gram =
                CMatrix::from_fn(k, k, |a, b| u.matrices[a].dagger().mul(&u.matrices[b]).trace());
            assert!(gram.approx_eq(&CMatrix::identity(k).scale(C64::new(u.dim as f64, 0.0)), 1e-9));
        }
    }

    fn pauli_central_type_on_c6() -> CentralTypeSubgroup {
        let r3 = Permutation::new((0..6).map(|i| (i + 3) % 6).collect()).unwrap();
        let s0 = Permutation::new((0..6).map(|i| (6 - i) % 6).collect()).unwrap();
        let perms =
            vec![Permutation::identity(6), s0.clone(), r3.clone(), r3.compose(&s0)];
        CentralTypeSubgroup::new(
            pauli_cocycle_from_matrices().group.clone(),
            perms,
            pauli_cocycle_from_matrices(),
        )
        .unwrap()
    }

    #[test]
    fn ueb_from_central_type_pauli() {
        let c = pauli_central_type_on_c6();
        let u = ueb_from_central_type(&c, 0, &tol()).unwrap();
        assert_eq!(u.dim, 2);
        let psi = verify_ueb(&u, &tol()).unwrap();
        assert!(cohomologous(&psi.rescale(4).unwrap(), &c.psi).is_some());
    }

    #[test]
    fn ueb_from_central_type_z24() {
        let psi = pauli_squared();
        // realize Z2^4 faithfully on 16 points via its own regular action
        let group = psi.group.clone();
        let perms: Vec<Permutation> = (0..16)
            .map(|a| Permutation::new((0..16).map(|b| group.mul(a, b)).collect()).unwrap())
            .collect();
        let c = CentralTypeSubgroup::new(group, perms, psi).unwrap();
        let u = ueb_from_central_type(&c, 0, &tol()).unwrap();
        assert_eq!(u.dim, 4);
        verify_ueb(&u, &tol()).unwrap();
    }

    #[test]
    fn ueb_from_degenerate_cocycle_fails() {
        let group = pauli_cocycle_from_matrices().group.clone();
        let trivial = TwoCocycle::trivial(group.clone());
        let perms: Vec<Permutation> = (0..4)
            .map(|a| Permutation::new((0..4).map(|b| group.mul(a, b)).collect()).unwrap())
            .collect();
        let c = CentralTypeSubgroup::new(group, perms, trivial).unwrap();
        assert!(matches!(
            ueb_from_central_type(&c, 0, &tol()),
            Err(UebError::NondegeneracyRequired)
        ));
    }

    #[test]
    fn ueb_extraction_is_seed_independent_up_to_cohomology() {
        let c = pauli_central_type_on_c6();
        let u0 = ueb_from_central_type(&c, 0, &tol()).unwrap();
        let u1 = ueb_from_central_type(&c, 12345, &tol()).unwrap();
        let p0 = verify_ueb(&u0, &tol()).unwrap();
        let p1 = verify_ueb(&u1, &tol()).unwrap();
        assert!(cohomologous(&p0, &p1).is_some());
    }
}

mod common;

use common::*;
use matchcliff::circuit::{Layer, MatchgateCoeffs};
use matchcliff::encoding::Encoding;
use matchcliff::gaussian::{matchgate_generator, GENERATOR_SCALE};
use matchcliff::linalg::{
    determinant, expm_antisymmetric, orthogonality_defect, pfaffian, random_antisymmetric,
};
use matchcliff::oracle::pauli_matrix;
use nalgebra::DMatrix;

#[test]
fn pfaffian_squares_to_determinant() {
    let mut r = rng(21);
    for dim in (2..=40).step_by(2) {
        let a = random_antisymmetric(dim, 1.0, &mut r);
        let pf = pfaffian(&a).unwrap();
        let det = determinant(&a);
        let rel = (pf * pf - det).abs() / det.abs().max(1e-300);
        assert!(rel < 1e-9, "dim {dim}: {rel:e}");
    }
}

#[test]
fn rotations_are_orthogonal_up_to_forty() {
    let mut r = rng(22);
    for dim in [2, 8, 16, 24, 32, 40] {
        for amp in [0.1, 1.0, 5.0] {
            let h = random_antisymmetric(dim, amp, &mut r);
            let rot = expm_antisymmetric(&h, GENERATOR_SCALE).unwrap();
            assert!(orthogonality_defect(&rot) < 1e-10, "dim {dim} amp {amp}");
        }
    }
}

/// `U^† c_u U = sum_v R_uv c_v` for a single matchgate `U = exp(-iH)`.
fn heisenberg_deviation(m: &MatchgateCoeffs) -> f64 {
    let n = 2;
    let jw = Encoding::jordan_wigner(n);
    let u = dense_unitary(
        n,
        &[Layer::Matchgate {
            qubit: 0,
            coeffs: *m,
        }],
    );
    let r = expm_antisymmetric(&matchgate_generator(n, 0, m), GENERATOR_SCALE).unwrap();
    let mut worst = 0.0f64;
    for a in 0..2 * n {
        let lhs = u.adjoint() * pauli_matrix(jw.majorana(a)) * &u;
        let mut rhs = DMatrix::<C>::zeros(4, 4);
        for b in 0..2 * n {
            rhs += pauli_matrix(jw.majorana(b)) * C::new(r[(a, b)], 0.0);
        }
        worst = worst.max(max_abs_diff(&lhs, &rhs));
    }
    worst
}

#[test]
fn generator_scale_matches_dense_heisenberg_evolution() {
    let mut r = rng(23);
    for _ in 0..20 {
        let m = random_coeffs(&mut r);
        assert!(heisenberg_deviation(&m) < 1e-10);
    }
    // each coefficient alone pins its sign
    for k in 0..6 {
        let mut v = [0.0; 6];
        v[k] = 0.37;
        let m = MatchgateCoeffs {
            a0: v[0],
            a1: v[1],
            b1: v[2],
            b2: v[3],
            d1: v[4],
            d2: v[5],
        };
        assert!(heisenberg_deviation(&m) < 1e-10, "coefficient {k}");
    }
}

#[test]
fn other_scales_fail_the_heisenberg_check() {
    let m = MatchgateCoeffs {
        a1: 0.4,
        d2: -0.3,
        ..Default::default()
    };
    let n = 2;
    let jw = Encoding::jordan_wigner(n);
    let u = dense_unitary(
        n,
        &[Layer::Matchgate {
            qubit: 0,
            coeffs: m,
        }],
    );
    for scale in [1.0, 2.0, -4.0] {
        let r = expm_antisymmetric(&matchgate_generator(n, 0, &m), scale).unwrap();
        let mut worst = 0.0f64;
        for a in 0..4 {
            let lhs = u.adjoint() * pauli_matrix(jw.majorana(a)) * &u;
            let mut rhs = DMatrix::<C>::zeros(4, 4);
            for b in 0..4 {
                rhs += pauli_matrix(jw.majorana(b)) * C::new(r[(a, b)], 0.0);
            }
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
        assert!(worst > 1e-3, "scale {scale}");
    }
}

#[test]
fn fswap_coefficients_give_fermionic_swap() {
    // fSWAP = |00><00| + |01><10| + |10><01| - |11><11|
    let u = dense_unitary(
        2,
        &[Layer::Matchgate {
            qubit: 0,
            coeffs: MatchgateCoeffs::fswap(),
        }],
    );
    let o = C::new(1.0, 0.0);
    let z = C::new(0.0, 0.0);
    let target = DMatrix::from_row_slice(4, 4, &[o, z, z, z, z, z, o, z, z, o, z, z, z, z, z, -o]);
    // equal up to a global phase
    let phase = u[(0, 0)];
    assert!((phase.norm() - 1.0).abs() < 1e-12);
    assert!(max_abs_diff(&(target * phase), &u) < 1e-12);
}

#[test]
fn hadamard_pair_gate_matches_its_block_form() {
    // G(H, H) acts as H on span{|00>,|11>} and on span{|01>,|10>}
    let w = std::f64::consts::PI / (2.0 * 2f64.sqrt());
    let m = MatchgateCoeffs {
        a1: w,
        d1: w,
        ..Default::default()
    };
    let u = dense_unitary(
        2,
        &[Layer::Matchgate {
            qubit: 0,
            coeffs: m,
        }],
    );
    let s = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = C::new(0.0, 0.0);
    let target = DMatrix::from_row_slice(4, 4, &[s, z, z, s, z, s, s, z, z, s, -s, z, s, z, z, -s]);
    // the gate equals -i G(H, H)
    let phase = C::new(0.0, -1.0);
    assert!(max_abs_diff(&(target * phase), &u) < 1e-9);
}

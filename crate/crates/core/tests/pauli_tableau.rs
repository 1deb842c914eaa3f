mod common;

use common::*;
use matchcliff::oracle::{bits_of, index_of, pauli_matrix, StateVector};
use matchcliff::pauli::{Letter, PauliString};
use matchcliff::tableau::{random_tableau, CliffordClass, CliffordGate, CliffordTableau};
use nalgebra::DMatrix;
use rand::Rng;

fn word_unitary(n: usize, word: &[CliffordGate]) -> DMatrix<C> {
    let layers: Vec<_> = word
        .iter()
        .map(|g| matchcliff::circuit::Layer::Clifford(*g))
        .collect();
    dense_unitary(n, &layers)
}

#[test]
fn products_match_dense_matrices() {
    let mut r = rng(41);
    for _ in 0..200 {
        let n = r.gen_range(1..=4);
        let (p, q) = (
            PauliString::random(n, &mut r),
            PauliString::random(n, &mut r),
        );
        let dense = pauli_matrix(&p) * pauli_matrix(&q);
        assert!(max_abs_diff(&pauli_matrix(&(&p * &q)), &dense) < 1e-14);
        let comm = &dense - pauli_matrix(&q) * pauli_matrix(&p);
        let zero = comm.iter().all(|z| z.norm() < 1e-14);
        assert_eq!(p.commutes(&q), zero);
    }
}

#[test]
fn conjugation_matches_dense() {
    let mut r = rng(42);
    for _ in 0..40 {
        let n = r.gen_range(1..=3);
        let word = random_word(n, 6 * n, &["h", "s", "cx", "cz", "swap"], &mut r);
        let t = CliffordTableau::from_gates(n, &word).unwrap();
        let u = word_unitary(n, &word);
        for _ in 0..10 {
            let p = PauliString::random(n, &mut r);
            let dense = &u * pauli_matrix(&p) * u.adjoint();
            assert!(max_abs_diff(&pauli_matrix(&t.conjugate_pauli(&p)), &dense) < 1e-12);
            let back = &u.adjoint() * pauli_matrix(&p) * &u;
            assert!(max_abs_diff(&pauli_matrix(&t.invert().conjugate_pauli(&p)), &back) < 1e-12);
        }
    }
}

#[test]
fn seeded_tableaux_match_dense_on_three_qubits() {
    use rand::SeedableRng;
    for seed in 0..10 {
        assert_eq!(random_tableau(3, seed), random_tableau(3, seed));
        let t = random_tableau(3, seed);
        // random_tableau composes a word of length 4n^2 + 4
        let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let word = matchcliff::tableau::random_gate_word(3, 40, &mut g);
        let u = word_unitary(3, &word);
        for q in 0..3 {
            for l in [Letter::X, Letter::Z] {
                let p = PauliString::single(3, q, l);
                let dense = &u * pauli_matrix(&p) * u.adjoint();
                assert!(max_abs_diff(&pauli_matrix(&t.conjugate_pauli(&p)), &dense) < 1e-12);
            }
        }
    }
}

#[test]
fn basis_action_matches_dense_amplitudes() {
    let mut r = rng(43);
    for _ in 0..80 {
        let n = r.gen_range(1..=5);
        let word = random_word(n, 3 * n, &["s", "cx", "cz", "swap"], &mut r);
        let t = CliffordTableau::from_gates(n, &word).unwrap();
        let x = random_bits(n, &mut r);
        let (xp, k) = t.basis_action(&x).unwrap();
        let mut psi = StateVector::basis(&x).unwrap();
        for g in &word {
            psi.apply_gate(g).unwrap();
        }
        let phase = [
            C::new(1.0, 0.0),
            C::new(0.0, 1.0),
            C::new(-1.0, 0.0),
            C::new(0.0, -1.0),
        ][k as usize];
        for (idx, a) in psi.amplitudes().iter().enumerate() {
            let want = if idx == index_of(&xp) {
                phase
            } else {
                C::new(0.0, 0.0)
            };
            assert!(
                (a - want).norm() < 1e-12,
                "{:?} -> {:?}",
                x,
                bits_of(idx, n)
            );
        }
    }
}

#[test]
fn documented_basis_actions() {
    let id = CliffordTableau::identity(4);
    let x = vec![false, true, false, true];
    assert_eq!(id.basis_action(&x).unwrap(), (x.clone(), 0));
    let cx = CliffordTableau::from_gates(2, &[CliffordGate::Cnot(0, 1)]).unwrap();
    assert_eq!(
        cx.basis_action(&[true, false]).unwrap(),
        (vec![true, true], 0)
    );
    let cz = CliffordTableau::from_gates(2, &[CliffordGate::Cz(0, 1)]).unwrap();
    assert_eq!(
        cz.basis_action(&[true, true]).unwrap(),
        (vec![true, true], 2)
    );
}

#[test]
fn classes_are_closed_under_composition() {
    let mut r = rng(44);
    for (kinds, class) in [
        (&["swap"][..], CliffordClass::SwapOnly),
        (&["swap", "cz"][..], CliffordClass::CzSwap),
        (&["swap", "cz", "cx", "s"][..], CliffordClass::Permutation),
    ] {
        for _ in 0..30 {
            let n = r.gen_range(2..=6);
            let a = CliffordTableau::from_gates(n, &random_word(n, 2 * n, kinds, &mut r)).unwrap();
            let b = CliffordTableau::from_gates(n, &random_word(n, 2 * n, kinds, &mut r)).unwrap();
            assert!(a.classify() <= class);
            assert!(b.classify() <= class);
            assert!(CliffordTableau::compose(&a, &b).classify() <= class);
        }
    }
}

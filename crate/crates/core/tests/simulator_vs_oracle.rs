mod common;

use common::*;
use matchcliff::circuit::{Circuit, InputState, Layer, QubitAngles, Structure};
use matchcliff::oracle::{apply_circuit, StateVector};
use matchcliff::pauli::PauliString;
use matchcliff::simulator::{
    compile, ghz4_gadget, restricted_pauli_expectation, run_expectation, run_marginal,
    run_marginal_with, MarginalOptions,
};
use matchcliff::tableau::{CliffordClass, CliffordGate, CliffordTableau};
use matchcliff::Error;
use rand::Rng;

const TOL: f64 = 1e-9;

fn all_marginals_agree(c: &Circuit, psi: &StateVector, rng: &mut impl Rng) {
    let cc = compile(c).unwrap();
    for _ in 0..6 {
        let k = rng.gen_range(1..=c.n);
        let mut qs: Vec<usize> = (0..c.n).collect();
        for i in 0..c.n {
            qs.swap(i, rng.gen_range(i..c.n));
        }
        qs.truncate(k);
        let bits = random_bits(k, rng);
        let got = run_marginal(&cc, &qs, &bits).unwrap().value;
        let want = psi.marginal(&qs, &bits).unwrap();
        assert!((got - want).abs() < TOL, "{qs:?} {bits:?}: {got} vs {want}");
    }
}

#[test]
fn free_circuits_match_dense_marginals() {
    let mut r = rng(11);
    for trial in 0..40 {
        let n = r.gen_range(2..=6);
        let linear = trial % 2 == 1;
        let product = trial % 4 >= 2;
        let c = free(
            n,
            random_input(n, product, &mut r),
            random_body(n, 8, linear, &mut r),
        );
        let psi = apply_circuit(&c).unwrap();
        all_marginals_agree(&c, &psi, &mut r);
    }
}

#[test]
fn free_circuits_match_dense_paulis() {
    let mut r = rng(12);
    for trial in 0..40 {
        let n = r.gen_range(1..=5);
        let linear = trial % 2 == 1;
        let product = trial % 4 >= 2;
        let c = free(
            n,
            random_input(n, product, &mut r),
            random_body(n, 6, linear, &mut r),
        );
        let psi = apply_circuit(&c).unwrap();
        let cc = compile(&c).unwrap();
        for _ in 0..10 {
            let p = PauliString::random(n, &mut r).unsigned();
            let got = run_expectation(&cc, &p).unwrap().value;
            let want = psi.expectation(&p).re;
            assert!((got - want).abs() < TOL, "{p}: {got} vs {want}");
        }
    }
}

#[test]
fn post_clifford_paulis_match_dense() {
    let mut r = rng(13);
    for _ in 0..25 {
        let n = r.gen_range(2..=5);
        let mut layers = random_body(n, 6, r.gen_bool(0.5), &mut r);
        layers.extend(
            random_word(n, 3 * n, &["h", "s", "cx", "cz", "swap"], &mut r)
                .into_iter()
                .map(Layer::Clifford),
        );
        let c = Circuit {
            n,
            input: random_input(n, r.gen_bool(0.5), &mut r),
            structure: Structure::PostClifford,
            layers,
        };
        let psi = apply_circuit(&c).unwrap();
        let cc = compile(&c).unwrap();
        for _ in 0..10 {
            let p = PauliString::random(n, &mut r).unsigned();
            let got = run_expectation(&cc, &p).unwrap().value;
            let want = psi.expectation(&p).re;
            assert!((got - want).abs() < TOL, "{p}: {got} vs {want}");
        }
        assert!(matches!(
            run_marginal(&cc, &[0], &[false]),
            Err(Error::Unsupported(_))
        ));
    }
}

#[test]
fn swap_conjugation_matches_dense() {
    let mut r = rng(14);
    for trial in 0..30 {
        let n = r.gen_range(2..=6);
        let word = random_word(n, 2 * n, &["swap"], &mut r);
        let c = conjugated(
            n,
            random_input(n, trial % 2 == 0, &mut r),
            &word,
            random_body(n, 6, trial % 3 == 0, &mut r),
        );
        let psi = apply_circuit(&c).unwrap();
        all_marginals_agree(&c, &psi, &mut r);
    }
}

#[test]
fn cz_swap_conjugation_matches_dense() {
    let mut r = rng(15);
    let mut seen = 0;
    for trial in 0..40 {
        let n = r.gen_range(2..=6);
        let word = random_word(n, 2 * n, &["swap", "cz"], &mut r);
        let class = CliffordTableau::from_gates(n, &word).unwrap().classify();
        let c = conjugated(
            n,
            random_input(n, false, &mut r),
            &word,
            random_body(n, 6, trial % 3 == 0, &mut r),
        );
        if class == CliffordClass::CzSwap {
            seen += 1;
        }
        let psi = apply_circuit(&c).unwrap();
        all_marginals_agree(&c, &psi, &mut r);
        // the phases i^k drop out of probabilities
        let cc = compile(&c).unwrap();
        let plain = run_marginal(&cc, &[0], &[true]).unwrap().value;
        let tracked = run_marginal_with(&cc, &[0], &[true], MarginalOptions { track_phases: true })
            .unwrap()
            .value;
        assert!((plain - tracked).abs() < 1e-15);
    }
    assert!(seen > 10);
}

#[test]
fn cz_conjugation_refuses_product_inputs() {
    let n = 3;
    let c = conjugated(
        n,
        InputState::Product(vec![QubitAngles::plus(); n]),
        &[CliffordGate::Cz(0, 1)],
        random_body(n, 3, false, &mut rng(1)),
    );
    let cc = compile(&c).unwrap();
    assert!(matches!(
        run_marginal(&cc, &[0], &[false]),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn permutation_conjugation_full_strings_match_dense() {
    let mut r = rng(16);
    let mut seen = 0;
    for _ in 0..30 {
        let n = r.gen_range(2..=5);
        let word = random_word(n, 2 * n, &["swap", "cz", "cx"], &mut r);
        let class = CliffordTableau::from_gates(n, &word).unwrap().classify();
        if class != CliffordClass::Permutation {
            continue;
        }
        seen += 1;
        let c = conjugated(
            n,
            random_input(n, false, &mut r),
            &word,
            random_body(n, 6, r.gen_bool(0.5), &mut r),
        );
        let psi = apply_circuit(&c).unwrap();
        let cc = compile(&c).unwrap();
        let qs: Vec<usize> = (0..n).collect();
        for _ in 0..8 {
            let y = random_bits(n, &mut r);
            let got = run_marginal(&cc, &qs, &y).unwrap().value;
            let want = psi.marginal(&qs, &y).unwrap();
            assert!((got - want).abs() < TOL);
        }
        if n > 1 {
            assert!(matches!(
                run_marginal(&cc, &[0], &[false]),
                Err(Error::Unsupported(_))
            ));
        }
    }
    assert!(seen > 5);
}

#[test]
fn restricted_paulis_under_general_conjugation_match_dense() {
    let mut r = rng(17);
    let mut checked = 0;
    for trial in 0..30 {
        let n = r.gen_range(2..=5);
        let word = random_word(n, 3 * n, &["h", "s", "cx", "cz", "swap"], &mut r);
        let c = conjugated(
            n,
            random_input(n, trial % 2 == 0, &mut r),
            &word,
            random_body(n, 6, false, &mut r),
        );
        let psi = apply_circuit(&c).unwrap();
        let cc = compile(&c).unwrap();
        for _ in 0..20 {
            let p = PauliString::random(n, &mut r).unsigned();
            match restricted_pauli_expectation(&cc, &p, 4) {
                Ok(got) => {
                    let want = psi.expectation(&p).re;
                    assert!((got - want).abs() < TOL, "{p}: {got} vs {want}");
                    checked += 1;
                }
                Err(Error::DegreeTooLarge { needed, limit }) => assert!(needed > limit),
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn ghz4_gadget_prepares_ghz_on_postselection() {
    let c = ghz4_gadget();
    let cc = compile(&c).unwrap();
    let class = cc.class.conjugation.unwrap();
    assert_eq!(class, CliffordClass::CzSwap);
    let psi = apply_circuit(&c).unwrap();
    // postselected state on qubits 0..4
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 16];
    for (idx, a) in psi.amplitudes().iter().enumerate() {
        if idx & 0b11 == 0 {
            amps[idx >> 2] = *a;
        }
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    assert!((norm - 0.25).abs() < 1e-12);
    let p0 = amps[0].norm_sqr() / norm;
    let p1 = amps[15].norm_sqr() / norm;
    assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
}

#![allow(dead_code)]

use matchcliff::circuit::{Circuit, InputState, Layer, MatchgateCoeffs, QubitAngles, Structure};
use matchcliff::tableau::CliffordGate;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeffs(rng: &mut impl Rng) -> MatchgateCoeffs {
    let mut v = || rng.gen_range(-1.5..1.5);
    MatchgateCoeffs {
        a0: v(),
        a1: v(),
        b1: v(),
        b2: v(),
        d1: v(),
        d2: v(),
    }
}

pub fn random_quadratic(n: usize, amp: f64, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in i + 1..2 * n {
            let v = rng.gen_range(-amp..amp);
            h[(i, j)] = v;
            h[(j, i)] = -v;
        }
    }
    h
}

/// Random matchgate body of `depth` layers, with optional linear and
/// quadratic layers mixed in.
pub fn random_body(n: usize, depth: usize, linear: bool, rng: &mut impl Rng) -> Vec<Layer> {
    let mut out = Vec::new();
    for _ in 0..depth {
        let roll = rng.gen_range(0..10);
        if linear && roll == 0 {
            out.push(Layer::Linear(
                (0..2 * n).map(|_| rng.gen_range(-0.6..0.6)).collect(),
            ));
        } else if roll == 1 {
            out.push(Layer::Quadratic(random_quadratic(n, 0.3, rng)));
        } else if n >= 2 {
            out.push(Layer::Matchgate {
                qubit: rng.gen_range(0..n - 1),
                coeffs: random_coeffs(rng),
            });
        }
    }
    out
}

pub fn random_bits(n: usize, rng: &mut impl Rng) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(0.5)).collect()
}

pub fn random_angles(n: usize, rng: &mut impl Rng) -> Vec<QubitAngles> {
    (0..n)
        .map(|_| QubitAngles {
            theta: rng.gen_range(0.0..std::f64::consts::PI),
            phi: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect()
}

pub fn random_input(n: usize, product: bool, rng: &mut impl Rng) -> InputState {
    if product {
        InputState::Product(random_angles(n, rng))
    } else {
        InputState::Basis(random_bits(n, rng))
    }
}

/// Random word over the given gate kinds ("swap", "cz", "cx", "h", "s").
pub fn random_word(n: usize, len: usize, kinds: &[&str], rng: &mut impl Rng) -> Vec<CliffordGate> {
    let mut out = Vec::new();
    while out.len() < len {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let g = match kind {
            "h" => CliffordGate::H(a),
            "s" => CliffordGate::S(a),
            _ if a == b => continue,
            "swap" => CliffordGate::Swap(a, b),
            "cz" => CliffordGate::Cz(a, b),
            "cx" => CliffordGate::Cnot(a, b),
            _ => unreachable!(),
        };
        out.push(g);
    }
    out
}

pub fn inverse_word(word: &[CliffordGate]) -> Vec<CliffordGate> {
    word.iter()
        .rev()
        .flat_map(|g| match g {
            // S^-1 = S^3
            CliffordGate::S(q) => vec![CliffordGate::S(*q); 3],
            other => vec![*other],
        })
        .collect()
}

pub fn conjugated(
    n: usize,
    input: InputState,
    prefix: &[CliffordGate],
    body: Vec<Layer>,
) -> Circuit {
    let mut layers: Vec<Layer> = prefix.iter().map(|g| Layer::Clifford(*g)).collect();
    layers.extend(body);
    layers.extend(inverse_word(prefix).into_iter().map(Layer::Clifford));
    Circuit {
        n,
        input,
        structure: Structure::Conjugated,
        layers,
    }
}

pub fn free(n: usize, input: InputState, body: Vec<Layer>) -> Circuit {
    Circuit {
        n,
        input,
        structure: Structure::Free,
        layers: body,
    }
}

pub type C = num_complex::Complex64;

/// Dense unitary of a layer list, built column by column.
pub fn dense_unitary(n: usize, layers: &[Layer]) -> DMatrix<C> {
    use matchcliff::oracle::{bits_of, StateVector};
    let dim = 1usize << n;
    let mut u = DMatrix::<C>::zeros(dim, dim);
    for col in 0..dim {
        let mut s = StateVector::basis(&bits_of(col, n)).unwrap();
        for l in layers {
            s.apply_layer(l).unwrap();
        }
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    u
}

pub fn dense_sum(n: usize, terms: &[(C, matchcliff::pauli::PauliString)]) -> DMatrix<C> {
    let dim = 1usize << n;
    let mut m = DMatrix::<C>::zeros(dim, dim);
    for (w, p) in terms {
        m += matchcliff::oracle::pauli_matrix(p) * *w;
    }
    m
}

pub fn max_abs_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

//! Dense state-vector reference simulator.
//!
//! Every gate is applied from its defining Hamiltonian or matrix, never from
//! the covariance machinery, so agreement with the engine is a real check.
//! Qubit 0 is the most significant bit of a basis index.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, InputState, Layer, MatchgateCoeffs};
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};
use crate::tableau::CliffordGate;

pub const MAX_QUBITS: usize = 12;
/// Cap for checks that work on two copies of the state.
pub const MAX_DOUBLED_QUBITS: usize = 6;

type C = Complex64;

fn i_pow(k: u8) -> C {
    match k % 4 {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    fn check_size(n: usize) -> Result<()> {
        if n > MAX_QUBITS {
            return Err(Error::SizeCap { n, cap: MAX_QUBITS });
        }
        Ok(())
    }

    pub fn basis(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        Self::check_size(n)?;
        let mut amps = vec![C::new(0.0, 0.0); 1 << n];
        amps[index_of(bits)] = C::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_input(input: &InputState) -> Result<Self> {
        match input {
            InputState::Basis(bits) => StateVector::basis(bits),
            InputState::Product(angles) => {
                let n = angles.len();
                Self::check_size(n)?;
                let mut amps = vec![C::new(1.0, 0.0)];
                for a in angles {
                    let q0 = C::new((a.theta / 2.0).cos(), 0.0);
                    let q1 = C::from_polar((a.theta / 2.0).sin(), a.phi);
                    amps = amps.iter().flat_map(|&v| [v * q0, v * q1]).collect();
                }
                Ok(StateVector { n, amps })
            }
        }
    }

    pub fn from_amplitudes(amps: Vec<C>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::InvalidInput(
                "amplitude count is not a power of two".into(),
            ));
        }
        Self::check_size(n)?;
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `p |psi>`, including the phase of `p`.
    pub fn apply_pauli(&self, p: &PauliString) -> StateVector {
        assert_eq!(p.num_qubits(), self.n, "qubit count mismatch");
        let (mut xm, mut zm) = (0usize, 0usize);
        for q in 0..self.n {
            if p.x_bit(q) {
                xm |= self.bit(q);
            }
            if p.z_bit(q) {
                zm |= self.bit(q);
            }
        }
        let ph = i_pow(p.phase_exp());
        let mut out = vec![C::new(0.0, 0.0); self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let sign = if (zm & b).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ xm] = a * ph * sign;
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    pub fn expectation(&self, p: &PauliString) -> C {
        self.inner(&self.apply_pauli(p))
    }

    pub fn apply_gate(&mut self, g: &CliffordGate) -> Result<()> {
        g.validate(self.n)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *g {
            CliffordGate::H(q) => {
                let m = self.bit(q);
                for b in 0..self.amps.len() {
                    if b & m == 0 {
                        let (a0, a1) = (self.amps[b], self.amps[b | m]);
                        self.amps[b] = (a0 + a1) * s;
                        self.amps[b | m] = (a0 - a1) * s;
                    }
                }
            }
            CliffordGate::S(q) => {
                let m = self.bit(q);
                for (b, a) in self.amps.iter_mut().enumerate() {
                    if b & m != 0 {
                        *a *= C::new(0.0, 1.0);
                    }
                }
            }
            CliffordGate::Cnot(c, t) => {
                let (mc, mt) = (self.bit(c), self.bit(t));
                for b in 0..self.amps.len() {
                    if b & mc != 0 && b & mt == 0 {
                        self.amps.swap(b, b | mt);
                    }
                }
            }
            CliffordGate::Cz(a, b2) => {
                let (ma, mb) = (self.bit(a), self.bit(b2));
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & ma != 0 && b & mb != 0 {
                        *amp = -*amp;
                    }
                }
            }
            CliffordGate::Swap(a, b2) => {
                let (ma, mb) = (self.bit(a), self.bit(b2));
                for b in 0..self.amps.len() {
                    if b & ma != 0 && b & mb == 0 {
                        self.amps.swap(b, (b ^ ma) | mb);
                    }
                }
            }
        }
        Ok(())
    }

    /// `exp(-i H) |psi>` for `H = sum_k w_k P_k`, by scaled Taylor steps.
    pub fn evolve(&mut self, terms: &[(C, PauliString)]) {
        let bound: f64 = terms.iter().map(|(w, _)| w.norm()).sum();
        if bound == 0.0 {
            return;
        }
        let steps = (bound / 0.25).ceil().max(1.0) as usize;
        let scale = C::new(0.0, -1.0 / steps as f64);
        for _ in 0..steps {
            let mut term = self.clone();
            let mut sum = self.amps.clone();
            for k in 1..60 {
                let mut next = vec![C::new(0.0, 0.0); self.amps.len()];
                for (w, p) in terms {
                    let v = term.apply_pauli(p);
                    for (acc, x) in next.iter_mut().zip(&v.amps) {
                        *acc += w * x;
                    }
                }
                let f = scale / k as f64;
                for x in next.iter_mut() {
                    *x *= f;
                }
                term = StateVector {
                    n: self.n,
                    amps: next,
                };
                let mut size = 0.0;
                for (s, x) in sum.iter_mut().zip(&term.amps) {
                    *s += x;
                    size += x.norm_sqr();
                }
                if size < 1e-34 {
                    break;
                }
            }
            self.amps = sum;
        }
    }

    pub fn apply_layer(&mut self, layer: &Layer) -> Result<()> {
        match layer {
            Layer::Clifford(g) => self.apply_gate(g),
            other => {
                let terms = layer_hamiltonian(other, self.n)?;
                self.evolve(&terms);
                Ok(())
            }
        }
    }

    /// Probability that `qubits` read `bits`.
    pub fn marginal(&self, qubits: &[usize], bits: &[bool]) -> Result<f64> {
        if qubits.len() != bits.len() {
            return Err(Error::LengthMismatch {
                expected: qubits.len(),
                found: bits.len(),
            });
        }
        let (mut mask, mut want) = (0usize, 0usize);
        for (&q, &b) in qubits.iter().zip(bits) {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
            mask |= self.bit(q);
            if b {
                want |= self.bit(q);
            }
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Probability of every full bitstring, indexed like the amplitudes.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

pub fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn bits_of(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| index >> (n - 1 - q) & 1 == 1).collect()
}

/// Pauli-sum Hamiltonian `H` of a non-Clifford layer, with the gate `exp(-iH)`.
pub fn layer_hamiltonian(layer: &Layer, n: usize) -> Result<Vec<(C, PauliString)>> {
    let jw = Encoding::jordan_wigner(n);
    let r = |v: f64| C::new(v, 0.0);
    Ok(match layer {
        Layer::Clifford(_) => {
            return Err(Error::InvalidInput(
                "Clifford layers have no Hamiltonian".into(),
            ))
        }
        Layer::Matchgate { qubit, coeffs } => matchgate_terms(n, *qubit, coeffs)
            .into_iter()
            .map(|(w, p)| (r(w), p))
            .collect(),
        Layer::Linear(b) => b
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(j, &v)| (r(v), jw.majorana(j).clone()))
            .collect(),
        Layer::Quadratic(h) => {
            let mut out = Vec::new();
            for j in 0..2 * n {
                for k in j + 1..2 * n {
                    let v = h[(j, k)];
                    if v != 0.0 {
                        out.push((C::new(0.0, 2.0 * v), jw.monomial(&[j, k])));
                    }
                }
            }
            out
        }
    })
}

/// Spin-form terms of a matchgate on qubits `(k, k+1)`.
pub fn matchgate_terms(n: usize, k: usize, m: &MatchgateCoeffs) -> Vec<(f64, PauliString)> {
    let two = |a: Letter, b: Letter| {
        let mut p = PauliString::identity(n);
        p.set_letter(k, a);
        p.set_letter(k + 1, b);
        p
    };
    use Letter::*;
    vec![
        (m.a0, two(Y, Y)),
        (m.a1, two(X, X)),
        (m.b1, two(Y, X)),
        (m.b2, two(X, Y)),
        (m.d1, two(Z, I)),
        (m.d2, two(I, Z)),
    ]
}

pub fn apply_circuit(c: &Circuit) -> Result<StateVector> {
    c.segments()?;
    let mut s = StateVector::from_input(&c.input)?;
    for l in &c.layers {
        s.apply_layer(l)?;
    }
    Ok(s)
}

/// `|| sum_k (c_k |psi>) ⊗ (c_k |psi>) ||`, which vanishes exactly on
/// Gaussian states of the encoding.
pub fn gaussianity_residual(state: &StateVector, e: &Encoding) -> Result<f64> {
    if state.n > MAX_DOUBLED_QUBITS {
        return Err(Error::SizeCap {
            n: state.n,
            cap: MAX_DOUBLED_QUBITS,
        });
    }
    if e.num_qubits() != state.n {
        return Err(Error::LengthMismatch {
            expected: state.n,
            found: e.num_qubits(),
        });
    }
    let n = state.n;
    let dim = 1usize << n;
    let vs: Vec<StateVector> = e.majoranas().iter().map(|c| state.apply_pauli(c)).collect();
    // Build the doubled vector entry by entry without storing it.
    let mut total = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let s: C = vs.iter().map(|v| v.amps[a] * v.amps[b]).sum();
            total += s.norm_sqr();
        }
    }
    Ok(total.sqrt())
}

/// Dense matrix of a Pauli string, qubit 0 as the leading tensor factor.
pub fn pauli_matrix(p: &PauliString) -> DMatrix<C> {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let mut m = DMatrix::<C>::zeros(dim, dim);
    for col in 0..dim {
        let mut e = vec![C::new(0.0, 0.0); dim];
        e[col] = C::new(1.0, 0.0);
        let v = StateVector { n, amps: e }.apply_pauli(p);
        for row in 0..dim {
            m[(row, col)] = v.amps[row];
        }
    }
    m
}

/// Dense matrix of a single-letter product built by Kronecker products.
pub fn kron_letters(letters: &[Letter]) -> DMatrix<C> {
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let mut m = DMatrix::<C>::from_element(1, 1, o);
    for l in letters {
        let f = match l {
            Letter::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            Letter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Letter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Letter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        };
        m = m.kronecker(&f);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn pauli_matrices_match_kronecker_products() {
        for s in ["XY", "-iZX", "YIZ", "iY"] {
            let q = p(s);
            let want = kron_letters(&q.letters()) * i_pow(q.coefficient_exp());
            let got = pauli_matrix(&q);
            assert!((got - want).norm() < 1e-14, "{s}");
        }
    }

    #[test]
    fn xx_rotation_of_vacuum() {
        let theta = 0.3;
        let mut s = StateVector::basis(&[false, false]).unwrap();
        s.evolve(&[(C::new(theta, 0.0), p("XX"))]);
        let z0 = s.expectation(&p("ZI")).re;
        assert!((z0 - (2.0 * theta).cos()).abs() < 1e-13);
    }

    #[test]
    fn dense_gates() {
        let mut s = StateVector::basis(&[true, false, false]).unwrap();
        s.apply_gate(&CliffordGate::Cnot(0, 2)).unwrap();
        assert!((s.marginal(&[0, 1, 2], &[true, false, true]).unwrap() - 1.0).abs() < 1e-15);
        s.apply_gate(&CliffordGate::Swap(1, 2)).unwrap();
        assert!((s.marginal(&[1], &[true]).unwrap() - 1.0).abs() < 1e-15);
        s.apply_gate(&CliffordGate::Cz(0, 1)).unwrap();
        assert!((s.amplitudes()[index_of(&[true, true, false])] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn vacuum_is_gaussian_and_size_caps_hold() {
        let s = StateVector::basis(&[false; 3]).unwrap();
        let r = gaussianity_residual(&s, &Encoding::jordan_wigner(3)).unwrap();
        assert!(r < 1e-14);
        assert!(matches!(
            StateVector::basis(&[false; 13]),
            Err(Error::SizeCap { .. })
        ));
        let big = StateVector::basis(&[false; 7]).unwrap();
        assert!(gaussianity_residual(&big, &Encoding::jordan_wigner(7)).is_err());
    }
}

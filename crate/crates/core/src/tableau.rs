//! Clifford unitaries stored as their action on the Pauli generators.
//!
//! A tableau keeps the signed images `U X_j U^†` and `U Z_j U^†`. Any other
//! Pauli is conjugated by multiplying images, which fixes the unitary up to a
//! global phase.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn name(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "H",
            CliffordGate::S(_) => "S",
            CliffordGate::Cnot(..) => "CNOT",
            CliffordGate::Cz(..) => "CZ",
            CliffordGate::Swap(..) => "SWAP",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) => vec![q],
            CliffordGate::Cnot(a, b) | CliffordGate::Cz(a, b) | CliffordGate::Swap(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn from_name(name: &str, qubits: &[usize]) -> Result<Self> {
        let arity = |k: usize| {
            if qubits.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "gate {name} takes {k} qubit(s), got {}",
                    qubits.len()
                )))
            }
        };
        let g = match name.to_ascii_uppercase().as_str() {
            "H" => {
                arity(1)?;
                CliffordGate::H(qubits[0])
            }
            "S" => {
                arity(1)?;
                CliffordGate::S(qubits[0])
            }
            "CNOT" | "CX" => {
                arity(2)?;
                CliffordGate::Cnot(qubits[0], qubits[1])
            }
            "CZ" => {
                arity(2)?;
                CliffordGate::Cz(qubits[0], qubits[1])
            }
            "SWAP" => {
                arity(2)?;
                CliffordGate::Swap(qubits[0], qubits[1])
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown Clifford gate {name:?}"
                )))
            }
        };
        Ok(g)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::RepeatedQubit(qs[0]));
        }
        Ok(())
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs = self.qubits();
        if qs.len() == 1 {
            write!(f, "{}({})", self.name(), qs[0])
        } else {
            write!(f, "{}({},{})", self.name(), qs[0], qs[1])
        }
    }
}

/// Nested Clifford families, from most to least restrictive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CliffordClass {
    SwapOnly,
    CzSwap,
    Permutation,
    General,
}

impl fmt::Display for CliffordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CliffordClass::SwapOnly => "swap-only",
            CliffordClass::CzSwap => "cz-swap",
            CliffordClass::Permutation => "permutation",
            CliffordClass::General => "general",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            x_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::X))
                .collect(),
            z_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::Z))
                .collect(),
        }
    }

    /// Tableau of the circuit that applies `gates` in order.
    pub fn from_gates(n: usize, gates: &[CliffordGate]) -> Result<Self> {
        let mut t = CliffordTableau::identity(n);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    /// Append `g`, so the tableau now describes `g * U`.
    pub fn apply_gate(&mut self, g: &CliffordGate) -> Result<()> {
        g.validate(self.n)?;
        for img in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            conjugate_by_gate(img, g);
        }
        Ok(())
    }

    /// `U p U^†`.
    pub fn conjugate_pauli(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.num_qubits(), self.n, "qubit count mismatch");
        let mut out = PauliString::identity(self.n).times_i_pow(p.phase_exp());
        for q in 0..self.n {
            if p.x_bit(q) {
                out = &out * &self.x_images[q];
            }
            if p.z_bit(q) {
                out = &out * &self.z_images[q];
            }
        }
        out
    }

    /// Tableau of `a * b`: apply `b` first, then `a`.
    pub fn compose(a: &CliffordTableau, b: &CliffordTableau) -> CliffordTableau {
        assert_eq!(a.n, b.n, "qubit count mismatch");
        CliffordTableau {
            n: a.n,
            x_images: b.x_images.iter().map(|p| a.conjugate_pauli(p)).collect(),
            z_images: b.z_images.iter().map(|p| a.conjugate_pauli(p)).collect(),
        }
    }

    pub fn invert(&self) -> CliffordTableau {
        let n = self.n;
        let preimage = |target: &PauliString| -> PauliString {
            // Conjugation preserves commutation, so the preimage's bits are
            // read off from commutation with the images.
            let mut q = PauliString::identity(n);
            for k in 0..n {
                let xb = !target.commutes(&self.z_images[k]);
                let zb = !target.commutes(&self.x_images[k]);
                q.set_bits(k, xb, zb);
            }
            let img = self.conjugate_pauli(&q);
            debug_assert_eq!(img.unsigned(), target.unsigned());
            let d = (4 + img.phase_exp() - target.phase_exp()) % 4;
            q.times_i_pow((4 - d) % 4)
        };
        CliffordTableau {
            n,
            x_images: (0..n)
                .map(|q| preimage(&PauliString::single(n, q, Letter::X)))
                .collect(),
            z_images: (0..n)
                .map(|q| preimage(&PauliString::single(n, q, Letter::Z)))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordTableau::identity(self.n)
    }

    /// Qubit permutation `pi` with `Z_i -> +Z_{pi(i)}`, if there is one.
    pub fn z_permutation(&self) -> Option<Vec<usize>> {
        let mut pi = Vec::with_capacity(self.n);
        let mut seen = vec![false; self.n];
        for img in &self.z_images {
            if img.weight() != 1 || img.coefficient_exp() != 0 {
                return None;
            }
            let q = (0..self.n).find(|&q| img.letter(q) == Letter::Z)?;
            if seen[q] {
                return None;
            }
            seen[q] = true;
            pi.push(q);
        }
        Some(pi)
    }

    pub fn classify(&self) -> CliffordClass {
        if self
            .z_images
            .iter()
            .any(|p| p.x_words().iter().any(|&w| w != 0))
        {
            return CliffordClass::General;
        }
        let Some(pi) = self.z_permutation() else {
            return CliffordClass::Permutation;
        };
        let mut swap_only = true;
        for (i, img) in self.x_images.iter().enumerate() {
            let t = pi[i];
            let x_ok = (0..self.n).all(|q| img.x_bit(q) == (q == t));
            if !x_ok || img.z_bit(t) || img.coefficient_exp() != 0 {
                return CliffordClass::Permutation;
            }
            if img.weight() != 1 {
                swap_only = false;
            }
        }
        if swap_only {
            CliffordClass::SwapOnly
        } else {
            CliffordClass::CzSwap
        }
    }

    /// `U |x> = i^k |x'>`, returned as `(x', k)`.
    ///
    /// The global phase of `U` is fixed by taking `U |0...0>` with a `+` sign.
    pub fn basis_action(&self, bits: &[bool]) -> Result<(Vec<bool>, u8)> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: bits.len(),
            });
        }
        if self.classify() == CliffordClass::General {
            return Err(Error::NotAPermutationClifford);
        }
        let inv = self.invert();
        // Z_j on U|0> has eigenvalue equal to the sign of U^† Z_j U.
        let origin: Vec<bool> = (0..self.n)
            .map(|j| inv.z_images[j].coefficient_exp() == 2)
            .collect();
        let mut op = PauliString::identity(self.n);
        for (q, &b) in bits.iter().enumerate() {
            if b {
                op = &op * &self.x_images[q];
            }
        }
        let mut phase = op.phase_exp();
        let mut out = origin.clone();
        for q in 0..self.n {
            if op.z_bit(q) && origin[q] {
                phase = (phase + 2) % 4;
            }
            if op.x_bit(q) {
                out[q] = !out[q];
            }
        }
        Ok((out, phase))
    }
}

fn conjugate_by_gate(p: &mut PauliString, g: &CliffordGate) {
    match *g {
        CliffordGate::H(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x && z {
                p.add_phase(2);
            }
            p.set_bits(q, z, x);
        }
        CliffordGate::S(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x {
                p.add_phase(1);
            }
            p.set_bits(q, x, z ^ x);
        }
        CliffordGate::Cnot(c, t) => {
            let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
            p.set_bits(c, xc, zc ^ zt);
            p.set_bits(t, xt ^ xc, zt);
        }
        CliffordGate::Cz(a, b) => {
            let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
            if xa && xb {
                p.add_phase(2);
            }
            p.set_bits(a, xa, za ^ xb);
            p.set_bits(b, xb, zb ^ xa);
        }
        CliffordGate::Swap(a, b) => {
            let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
            p.set_bits(a, xb, zb);
            p.set_bits(b, xa, za);
        }
    }
}

/// Encoding in which the stabilizer state `U|0...0>` is Gaussian: the
/// Jordan-Wigner Majoranas conjugated by `U`. The state is stabilized by
/// `-i c'_{2q} c'_{2q+1}`.
pub fn stabilizer_state_to_encoding(t: &CliffordTableau) -> Encoding {
    Encoding::jordan_wigner(t.num_qubits()).conjugate(t)
}

/// Random word over {H, S, CNOT, CZ, SWAP}.
pub fn random_gate_word(n: usize, len: usize, rng: &mut impl Rng) -> Vec<CliffordGate> {
    (0..len)
        .map(|_| {
            let kind = if n < 2 {
                rng.gen_range(0..2)
            } else {
                rng.gen_range(0..5)
            };
            let a = rng.gen_range(0..n);
            let b = if n < 2 {
                a
            } else {
                (a + rng.gen_range(1..n)) % n
            };
            match kind {
                0 => CliffordGate::H(a),
                1 => CliffordGate::S(a),
                2 => CliffordGate::Cnot(a, b),
                3 => CliffordGate::Cz(a, b),
                _ => CliffordGate::Swap(a, b),
            }
        })
        .collect()
}

/// Seeded pseudo-random Clifford built from a gate word of length `4n^2 + 4`.
pub fn random_tableau(n: usize, seed: u64) -> CliffordTableau {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = random_gate_word(n, 4 * n * n + 4, &mut rng);
    CliffordTableau::from_gates(n, &word).expect("generated gates are in range")
}

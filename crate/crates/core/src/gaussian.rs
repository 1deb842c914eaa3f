//! Covariance-matrix simulation of fermionic Gaussian states.
//!
//! `gamma_jk = -i <c_j c_k>` for `j != k`. A Gaussian unitary `U` with
//! `U^† c_j U = sum_k R_jk c_k` acts as `gamma -> R gamma R^T`, and Wick's
//! theorem turns Majorana monomials into Pfaffians of sub-blocks.
//!
//! The extended framework simulates parity-breaking (linear) terms with one
//! ancilla in front; its Majoranas 0 and 1 belong to the ancilla and the
//! logical Majorana `j` sits at index `j + 2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{MatchgateCoeffs, QubitAngles};
use crate::encoding::{extend_encoding, Encoding, KnillEmbedding};
use crate::error::{Error, Result};
use crate::linalg::{check_antisymmetric, expm_antisymmetric, orthogonality_defect, pfaffian, TOL};
use crate::pauli::{Letter, PauliString};

/// `R = exp(SCALE * h)` for `H = i sum h_jk c_j c_k` and the gate `exp(-iH)`.
pub const GENERATOR_SCALE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framework {
    Standard,
    Extended,
}

/// Orthogonal matrix acting on Majorana indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    pub matrix: DMatrix<f64>,
    pub framework: Framework,
}

impl Rotation {
    pub fn identity(n: usize, framework: Framework) -> Self {
        let dim = majorana_dim(n, framework);
        Rotation {
            matrix: DMatrix::identity(dim, dim),
            framework,
        }
    }

    pub fn from_generator(h: &DMatrix<f64>, framework: Framework) -> Result<Self> {
        Ok(Rotation {
            matrix: expm_antisymmetric(h, GENERATOR_SCALE)?,
            framework,
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Rotation) -> Rotation {
        Rotation {
            matrix: &next.matrix * &self.matrix,
            framework: self.framework,
        }
    }
}

pub fn majorana_dim(n: usize, framework: Framework) -> usize {
    match framework {
        Framework::Standard => 2 * n,
        Framework::Extended => 2 * n + 2,
    }
}

/// Embed a logical generator `i sum h c c + sum b c` into the extended frame.
pub fn extended_generator(h: &DMatrix<f64>, b: &[f64]) -> DMatrix<f64> {
    let m = h.nrows();
    let mut out = DMatrix::<f64>::zeros(m + 2, m + 2);
    out.view_mut((2, 2), (m, m)).copy_from(h);
    // X ⊗ c_j = -i c'_1 c'_{j+2}
    for (j, &bj) in b.iter().enumerate() {
        out[(1, j + 2)] = -bj / 2.0;
        out[(j + 2, 1)] = bj / 2.0;
    }
    out
}

pub fn matchgate_generator(n: usize, qubit: usize, m: &MatchgateCoeffs) -> DMatrix<f64> {
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (j, k, v) in m.generator_entries(qubit) {
        h[(j, k)] += v;
        h[(k, j)] -= v;
    }
    h
}

#[derive(Debug, Clone)]
pub struct Covariance {
    gamma: DMatrix<f64>,
    framework: Framework,
    logical_n: usize,
    encoding: Encoding,
    embedding: Option<KnillEmbedding>,
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn basis_gamma(bits: &[bool]) -> DMatrix<f64> {
    let n = bits.len();
    let mut g = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (q, &b) in bits.iter().enumerate() {
        let s = if b { -1.0 } else { 1.0 };
        g[(2 * q, 2 * q + 1)] = s;
        g[(2 * q + 1, 2 * q)] = -s;
    }
    g
}

impl Covariance {
    /// Computational basis state in the Jordan-Wigner frame.
    pub fn basis_state(bits: &[bool]) -> Self {
        let n = bits.len();
        Covariance {
            gamma: basis_gamma(bits),
            framework: Framework::Standard,
            logical_n: n,
            encoding: Encoding::jordan_wigner(n),
            embedding: None,
        }
    }

    /// Covariance matrix `gamma` read in the frame of `encoding`.
    pub fn from_parts(gamma: DMatrix<f64>, encoding: Encoding) -> Result<Self> {
        let n = encoding.num_qubits();
        if gamma.nrows() != 2 * n || gamma.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: gamma.nrows(),
            });
        }
        check_antisymmetric(&gamma)?;
        Ok(Covariance {
            gamma,
            framework: Framework::Standard,
            logical_n: n,
            encoding,
            embedding: None,
        })
    }

    /// Vacuum of `encoding`; for `U(JW)` this describes `U |0...0>`.
    pub fn vacuum(encoding: Encoding) -> Self {
        let n = encoding.num_qubits();
        Covariance {
            gamma: basis_gamma(&vec![false; n]),
            framework: Framework::Standard,
            logical_n: n,
            encoding,
            embedding: None,
        }
    }

    /// Same state in the extended frame. Only for Jordan-Wigner covariances
    /// of definite parity, which all standard-frame states are.
    pub fn to_extended(&self) -> Result<Self> {
        if self.framework == Framework::Extended {
            return Ok(self.clone());
        }
        let n = self.logical_n;
        let emb = extend_encoding(&self.encoding)?;
        let mut g = DMatrix::<f64>::zeros(2 * n + 2, 2 * n + 2);
        g[(0, 1)] = 1.0;
        g[(1, 0)] = -1.0;
        g.view_mut((2, 2), (2 * n, 2 * n)).copy_from(&self.gamma);
        Ok(Covariance {
            gamma: g,
            framework: Framework::Extended,
            logical_n: n,
            encoding: emb.physical().clone(),
            embedding: Some(emb),
        })
    }

    /// Product state prepared from `|0...0>` in the extended frame: each
    /// qubit is rotated on logical qubit 0 by a linear and a quadratic term,
    /// then carried to its place by a chain of fermionic swaps.
    pub fn product_state(angles: &[QubitAngles]) -> Result<Self> {
        let n = angles.len();
        let mut cov = Covariance::basis_state(&vec![false; n]).to_extended()?;
        if n == 0 {
            return Ok(cov);
        }
        let fswaps: Vec<Rotation> = (0..n.saturating_sub(1))
            .map(|q| {
                let h = matchgate_generator(n, q, &MatchgateCoeffs::fswap());
                let zero = vec![0.0; 2 * n];
                Rotation::from_generator(&extended_generator(&h, &zero), Framework::Extended)
            })
            .collect::<Result<_>>()?;
        let mut total = Rotation::identity(n, Framework::Extended);
        for target in (0..n).rev() {
            let a = angles[target];
            if !a.theta.is_finite() || !a.phi.is_finite() {
                return Err(Error::NonFinite);
            }
            // exp(-i theta/2 Y_0), with Y_0 = c_1
            let mut b = vec![0.0; 2 * n];
            b[1] = a.theta / 2.0;
            // exp(-i phi/2 Z_0), with Z_0 = -i c_0 c_1
            let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
            h[(0, 1)] = -a.phi / 4.0;
            h[(1, 0)] = a.phi / 4.0;
            let zero_h = DMatrix::<f64>::zeros(2 * n, 2 * n);
            let ry =
                Rotation::from_generator(&extended_generator(&zero_h, &b), Framework::Extended)?;
            let rz = Rotation::from_generator(
                &extended_generator(&h, &vec![0.0; 2 * n]),
                Framework::Extended,
            )?;
            total = total.then(&ry).then(&rz);
            for f in fswaps.iter().take(target) {
                total = total.then(f);
            }
        }
        cov.evolve(&total)?;
        Ok(cov)
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn framework(&self) -> Framework {
        self.framework
    }

    pub fn logical_qubits(&self) -> usize {
        self.logical_n
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn evolve(&mut self, rot: &Rotation) -> Result<()> {
        if rot.framework != self.framework {
            return Err(Error::InvalidInput(
                "rotation and state use different frames".into(),
            ));
        }
        let dim = self.gamma.nrows();
        if rot.matrix.nrows() != dim || rot.matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rot.matrix.nrows(),
            });
        }
        let defect = orthogonality_defect(&rot.matrix);
        if defect > TOL.orthogonality {
            return Err(Error::InternalConsistency(format!(
                "rotation is not orthogonal (defect {defect:e})"
            )));
        }
        if self.framework == Framework::Extended {
            let r = &rot.matrix;
            let off = (1..dim)
                .map(|j| r[(0, j)].abs().max(r[(j, 0)].abs()))
                .fold(0.0, f64::max);
            if off > TOL.orthogonality || (r[(0, 0)] - 1.0).abs() > TOL.orthogonality {
                return Err(Error::AncillaNotFixed);
            }
        }
        self.gamma = &rot.matrix * &self.gamma * rot.matrix.transpose();
        Ok(())
    }

    /// `(-i)^k <c_{m_1} ... c_{m_2k}>` as the Pfaffian of the sub-block.
    pub fn monomial_expectation(&self, indices: &[usize]) -> Result<f64> {
        if indices.len() % 2 == 1 {
            return Err(Error::OddSubset(indices.len()));
        }
        let dim = self.gamma.nrows();
        for (a, &i) in indices.iter().enumerate() {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, len: dim });
            }
            if indices[..a].contains(&i) {
                return Err(Error::InvalidInput(format!("repeated Majorana index {i}")));
            }
        }
        let k = indices.len();
        let sub = DMatrix::from_fn(k, k, |a, b| self.gamma[(indices[a], indices[b])]);
        pfaffian(&sub)
    }

    /// Map a logical Pauli into the frame the covariance is indexed by.
    fn frame_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.logical_n {
            return Err(Error::LengthMismatch {
                expected: self.logical_n,
                found: p.num_qubits(),
            });
        }
        Ok(match &self.embedding {
            Some(emb) => emb.embed_pauli(p),
            None => p.clone(),
        })
    }

    /// `<p>` for a Hermitian logical Pauli.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        let q = self.frame_pauli(p)?;
        let d = self.encoding.decompose(&q)?;
        if d.degree() % 2 == 1 {
            // odd monomials change parity; all states here have definite parity
            return Ok(0.0);
        }
        let pf = self.monomial_expectation(&d.indices)?;
        let v = i_pow(d.phase as usize + d.degree() / 2) * pf;
        if v.im.abs() > TOL.imaginary {
            return Err(Error::InternalConsistency(format!(
                "expectation has imaginary part {:e}",
                v.im
            )));
        }
        Ok(v.re)
    }

    /// Majorana pair `(a, b)` and sign `s` with `Z_q = s (-i c_a c_b)`.
    fn number_pair(&self, q: usize) -> Result<(usize, usize, f64)> {
        let z = self.frame_pauli(&PauliString::single(self.logical_n, q, Letter::Z))?;
        let d = self.encoding.decompose(&z)?;
        if d.degree() != 2 {
            return Err(Error::NotCzSwapFamily { qubit: q });
        }
        // Z = i^phase c_a c_b = i^{phase+1} (-i c_a c_b)
        let s = match (d.phase + 1) % 4 {
            0 => 1.0,
            2 => -1.0,
            _ => {
                return Err(Error::InternalConsistency(
                    "non-Hermitian number operator".into(),
                ))
            }
        };
        Ok((d.indices[0], d.indices[1], s))
    }

    /// Probability that the logical `qubits` read `bits`.
    ///
    /// With `s_i = (-1)^{y_i}`, `p = 2^{-k} (prod s_i) Pf(G_S + D)` where
    /// `D` has blocks `[[0, s_i], [-s_i, 0]]`.
    pub fn marginal_probability(&self, qubits: &[usize], bits: &[bool]) -> Result<f64> {
        if qubits.len() != bits.len() {
            return Err(Error::LengthMismatch {
                expected: qubits.len(),
                found: bits.len(),
            });
        }
        for (a, &q) in qubits.iter().enumerate() {
            if q >= self.logical_n {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.logical_n,
                });
            }
            if qubits[..a].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        let k = qubits.len();
        let mut idx = Vec::with_capacity(2 * k);
        let mut signs = Vec::with_capacity(k);
        for (&q, &y) in qubits.iter().zip(bits) {
            let (a, b, s) = self.number_pair(q)?;
            idx.push(a);
            idx.push(b);
            signs.push(s * if y { -1.0 } else { 1.0 });
        }
        let mut m = DMatrix::from_fn(2 * k, 2 * k, |a, b| self.gamma[(idx[a], idx[b])]);
        for (i, &t) in signs.iter().enumerate() {
            m[(2 * i, 2 * i + 1)] += t;
            m[(2 * i + 1, 2 * i)] -= t;
        }
        let prod: f64 = signs.iter().product();
        let p = prod * pfaffian(&m)? / 2f64.powi(k as i32);
        if !(-TOL.probability..=1.0 + TOL.probability).contains(&p) {
            return Err(Error::InternalConsistency(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Ok(p.clamp(0.0, 1.0))
    }
}

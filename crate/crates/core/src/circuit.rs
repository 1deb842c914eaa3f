//! Circuit description shared by the simulator, the dense oracle and the CLI.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::check_antisymmetric;
use crate::tableau::{CliffordGate, CliffordTableau};

/// Coefficients of the nearest-neighbour spin Hamiltonian
/// `a0 YY + a1 XX + b1 YX + b2 XY + d1 ZI + d2 IZ` on qubits `(k, k+1)`.
/// The gate is `exp(-i H)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MatchgateCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub b2: f64,
    pub d1: f64,
    pub d2: f64,
}

pub type Mat2 = [[Complex64; 2]; 2];

impl MatchgateCoeffs {
    pub fn as_array(&self) -> [f64; 6] {
        [self.a0, self.a1, self.b1, self.b2, self.d1, self.d2]
    }

    /// Fermionic SWAP, up to a global phase.
    pub fn fswap() -> Self {
        let q = PI / 4.0;
        MatchgateCoeffs {
            a0: q,
            a1: q,
            b1: 0.0,
            b2: 0.0,
            d1: q,
            d2: q,
        }
    }

    /// Generator entries `(j, k, h_jk)` with `j < k` over Majoranas
    /// `2k .. 2k+3`, matching `H = i sum h_jk c_j c_k`.
    pub fn generator_entries(&self, qubit: usize) -> [(usize, usize, f64); 6] {
        let (a, b, c, d) = (2 * qubit, 2 * qubit + 1, 2 * qubit + 2, 2 * qubit + 3);
        [
            (a, d, self.a0 / 2.0),
            (b, c, -self.a1 / 2.0),
            (a, c, self.b1 / 2.0),
            (b, d, -self.b2 / 2.0),
            (a, b, -self.d1 / 2.0),
            (c, d, -self.d2 / 2.0),
        ]
    }

    /// Solve `G(A, B) = e^{i phi} exp(-i H)` for unitaries with equal
    /// determinants. `A` acts on `|00>, |11>`, `B` on `|01>, |10>`.
    pub fn from_unitary_pair(a: &Mat2, b: &Mat2) -> Result<(Self, f64)> {
        let det = |m: &Mat2| m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let (da, db) = (det(a), det(b));
        if (da - db).norm() > 1e-9 {
            return Err(Error::InvalidInput(
                "matchgate blocks must have equal determinants".into(),
            ));
        }
        for m in [a, b] {
            let u = mat2_mul(&mat2_adjoint(m), m);
            let defect =
                (u[0][0] - 1.0).norm() + u[0][1].norm() + u[1][0].norm() + (u[1][1] - 1.0).norm();
            if defect > 1e-9 {
                return Err(Error::InvalidInput("matchgate block is not unitary".into()));
            }
        }
        let phi = da.arg() / 2.0;
        let undo = Complex64::from_polar(1.0, -phi);
        let va = su2_log(&scale2(a, undo));
        let vb = su2_log(&scale2(b, undo));
        let coeffs = MatchgateCoeffs {
            a0: (vb[0] - va[0]) / 2.0,
            a1: (va[0] + vb[0]) / 2.0,
            b1: (va[1] + vb[1]) / 2.0,
            b2: (va[1] - vb[1]) / 2.0,
            d1: (va[2] + vb[2]) / 2.0,
            d2: (va[2] - vb[2]) / 2.0,
        };
        Ok((coeffs, phi))
    }
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn scale2(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

/// `v` with `u = exp(-i v . sigma)` for `u` in SU(2).
fn su2_log(u: &Mat2) -> [f64; 3] {
    let c = ((u[0][0] + u[1][1]).re / 2.0).clamp(-1.0, 1.0);
    let t = c.acos();
    let s = t.sin();
    if s.abs() < 1e-12 {
        return if c > 0.0 { [0.0; 3] } else { [0.0, 0.0, PI] };
    }
    let i = Complex64::new(0.0, 1.0);
    let nx = (i * (u[0][1] + u[1][0])).re / (2.0 * s);
    let ny = (u[1][0] - u[0][1]).re / (2.0 * s);
    let nz = (i * (u[0][0] - u[1][1])).re / (2.0 * s);
    [t * nx, t * ny, t * nz]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Clifford(CliffordGate),
    Matchgate {
        qubit: usize,
        coeffs: MatchgateCoeffs,
    },
    /// `exp(-i sum_j b_j c_j)` in the Jordan-Wigner frame.
    Linear(Vec<f64>),
    /// `exp(-i H)` with `H = i sum_jk h_jk c_j c_k` for antisymmetric `h`.
    Quadratic(DMatrix<f64>),
}

impl Layer {
    pub fn is_clifford(&self) -> bool {
        matches!(self, Layer::Clifford(_))
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Layer::Clifford(g) => g.validate(n),
            Layer::Matchgate { qubit, coeffs } => {
                if qubit + 1 >= n {
                    return Err(Error::QubitOutOfRange {
                        qubit: qubit + 1,
                        n,
                    });
                }
                if coeffs.as_array().iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(())
            }
            Layer::Linear(b) => {
                if b.len() != 2 * n {
                    return Err(Error::LengthMismatch {
                        expected: 2 * n,
                        found: b.len(),
                    });
                }
                if b.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(())
            }
            Layer::Quadratic(h) => {
                if h.nrows() != 2 * n || h.ncols() != 2 * n {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * n,
                        found: h.nrows(),
                    });
                }
                check_antisymmetric(h)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitAngles {
    pub theta: f64,
    pub phi: f64,
}

impl QubitAngles {
    pub fn plus() -> Self {
        QubitAngles {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    Basis(Vec<bool>),
    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>` on each qubit.
    Product(Vec<QubitAngles>),
}

impl InputState {
    pub fn zeros(n: usize) -> Self {
        InputState::Basis(vec![false; n])
    }

    pub fn len(&self) -> usize {
        match self {
            InputState::Basis(b) => b.len(),
            InputState::Product(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_basis(&self) -> bool {
        matches!(self, InputState::Basis(_))
    }

    /// Per-qubit angles; basis bits become `theta in {0, pi}`.
    pub fn angles(&self) -> Vec<QubitAngles> {
        match self {
            InputState::Basis(bits) => bits
                .iter()
                .map(|&b| QubitAngles {
                    theta: if b { PI } else { 0.0 },
                    phi: 0.0,
                })
                .collect(),
            InputState::Product(a) => a.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// `C^† body C`: leading Cliffords, a matchgate body, then their inverse.
    Conjugated,
    /// Matchgate body followed by Cliffords.
    PostClifford,
    /// Matchgate body only.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub input: InputState,
    pub structure: Structure,
    /// Layers in application order.
    pub layers: Vec<Layer>,
}

/// Clifford prefix, body and Clifford suffix of a validated circuit.
#[derive(Debug, Clone)]
pub struct Segments<'a> {
    pub prefix: Vec<CliffordGate>,
    pub body: Vec<&'a Layer>,
    pub suffix: Vec<CliffordGate>,
}

impl Circuit {
    pub fn segments(&self) -> Result<Segments<'_>> {
        if self.input.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: self.input.len(),
            });
        }
        if let InputState::Product(a) = &self.input {
            if a.iter().any(|q| !q.theta.is_finite() || !q.phi.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        for l in &self.layers {
            l.validate(self.n)?;
        }
        let first_body = self
            .layers
            .iter()
            .position(|l| !l.is_clifford())
            .unwrap_or(self.layers.len());
        let last_body = self
            .layers
            .iter()
            .rposition(|l| !l.is_clifford())
            .map_or(first_body, |i| i + 1);
        let cliffords = |ls: &[Layer]| -> Vec<CliffordGate> {
            ls.iter()
                .filter_map(|l| match l {
                    Layer::Clifford(g) => Some(*g),
                    _ => None,
                })
                .collect()
        };
        let body: Vec<&Layer> = self.layers[first_body..last_body].iter().collect();
        if body.iter().any(|l| l.is_clifford()) {
            return Err(Error::MalformedStructure(
                "Clifford gate inside the matchgate body".into(),
            ));
        }
        let mut prefix = cliffords(&self.layers[..first_body]);
        let mut suffix = cliffords(&self.layers[last_body..]);
        match self.structure {
            Structure::Free => {
                if !prefix.is_empty() || !suffix.is_empty() {
                    return Err(Error::MalformedStructure(
                        "free circuits may not contain Clifford gates".into(),
                    ));
                }
            }
            Structure::PostClifford => {
                if body.is_empty() {
                    suffix.append(&mut prefix);
                } else if !prefix.is_empty() {
                    return Err(Error::MalformedStructure(
                        "post-Clifford circuits may not start with Clifford gates".into(),
                    ));
                }
            }
            Structure::Conjugated => {
                if body.is_empty() && !prefix.is_empty() {
                    return Err(Error::MalformedStructure(
                        "conjugated circuit without a body needs an explicit split".into(),
                    ));
                }
                let c = CliffordTableau::from_gates(self.n, &prefix)?;
                let d = CliffordTableau::from_gates(self.n, &suffix)?;
                if d != c.invert() {
                    return Err(Error::MalformedStructure(
                        "trailing Cliffords are not the inverse of the leading ones".into(),
                    ));
                }
            }
        }
        Ok(Segments {
            prefix,
            body,
            suffix,
        })
    }

    pub fn has_linear_terms(&self) -> bool {
        self.layers.iter().any(|l| matches!(l, Layer::Linear(_)))
    }
}

// ---------------------------------------------------------------------------
// JSON file format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub n: usize,
    pub input: InputSpec,
    pub structure: Structure,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Basis { bits: String },
    Product { qubits: Vec<QubitAngles> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerSpec {
    Clifford {
        gate: String,
        qubits: Vec<usize>,
    },
    Matchgate {
        qubit: usize,
        coeffs: MatchgateCoeffs,
    },
    Linear {
        b: Vec<f64>,
    },
    Quadratic {
        h: Vec<Entry>,
    },
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidInput(format!("bad bit {c:?} in {s:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl CircuitFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("circuit file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit files serialise")
    }

    pub fn to_circuit(&self) -> Result<Circuit> {
        let n = self.n;
        let input = match &self.input {
            InputSpec::Basis { bits } => InputState::Basis(parse_bits(bits)?),
            InputSpec::Product { qubits } => InputState::Product(qubits.clone()),
        };
        let mut layers = Vec::with_capacity(self.layers.len());
        for spec in &self.layers {
            layers.push(match spec {
                LayerSpec::Clifford { gate, qubits } => {
                    Layer::Clifford(CliffordGate::from_name(gate, qubits)?)
                }
                LayerSpec::Matchgate { qubit, coeffs } => Layer::Matchgate {
                    qubit: *qubit,
                    coeffs: *coeffs,
                },
                LayerSpec::Linear { b } => Layer::Linear(b.clone()),
                LayerSpec::Quadratic { h } => {
                    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
                    for e in h {
                        if e.i >= 2 * n || e.j >= 2 * n {
                            return Err(Error::IndexOutOfRange {
                                index: e.i.max(e.j),
                                len: 2 * n,
                            });
                        }
                        if e.i == e.j {
                            return Err(Error::InvalidInput(format!(
                                "diagonal quadratic entry ({}, {})",
                                e.i, e.j
                            )));
                        }
                        m[(e.i, e.j)] += e.v;
                        m[(e.j, e.i)] -= e.v;
                    }
                    Layer::Quadratic(m)
                }
            });
        }
        let c = Circuit {
            n,
            input,
            structure: self.structure,
            layers,
        };
        c.segments()?;
        Ok(c)
    }

    /// Canonical file form: quadratic layers list each `i < j` entry once.
    pub fn from_circuit(c: &Circuit) -> Self {
        let input = match &c.input {
            InputState::Basis(b) => InputSpec::Basis {
                bits: format_bits(b),
            },
            InputState::Product(a) => InputSpec::Product { qubits: a.clone() },
        };
        let layers = c
            .layers
            .iter()
            .map(|l| match l {
                Layer::Clifford(g) => LayerSpec::Clifford {
                    gate: g.name().to_string(),
                    qubits: g.qubits(),
                },
                Layer::Matchgate { qubit, coeffs } => LayerSpec::Matchgate {
                    qubit: *qubit,
                    coeffs: *coeffs,
                },
                Layer::Linear(b) => LayerSpec::Linear { b: b.clone() },
                Layer::Quadratic(h) => {
                    let mut entries = Vec::new();
                    for i in 0..h.nrows() {
                        for j in i + 1..h.ncols() {
                            if h[(i, j)] != 0.0 {
                                entries.push(Entry { i, j, v: h[(i, j)] });
                            }
                        }
                    }
                    LayerSpec::Quadratic { h: entries }
                }
            })
            .collect();
        CircuitFile {
            n: c.n,
            input,
            structure: c.structure,
            layers,
        }
    }
}

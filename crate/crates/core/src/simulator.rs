//! Classification and simulation of Clifford-augmented matchgate circuits.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, InputState, Layer, MatchgateCoeffs, QubitAngles, Structure};
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::gaussian::{
    extended_generator, matchgate_generator, Covariance, Framework, Rotation, GENERATOR_SCALE,
};
use crate::linalg::{expm_antisymmetric, TOL};
use crate::pauli::{Letter, PauliString};
use crate::tableau::{CliffordClass, CliffordGate, CliffordTableau};

/// Default and hard limits on the Majorana degree of restricted Paulis.
pub const DEFAULT_MAX_DEGREE: usize = 4;
pub const HARD_MAX_DEGREE: usize = 6;

/// Input/output pairs: product or computational input, bitstring or Pauli
/// output, lowercase for the restricted variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capability {
    Pibo,
    Cibo,
    CiboRestricted,
    Pipo,
    Cipo,
    PipoRestricted,
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Capability::Pibo => "PIBO",
            Capability::Cibo => "CIBO",
            Capability::CiboRestricted => "CIbO",
            Capability::Pipo => "PIPO",
            Capability::Cipo => "CIPO",
            Capability::PipoRestricted => "PIpO",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimClass {
    pub capabilities: BTreeSet<Capability>,
    /// Class of the conjugating Clifford, for conjugated circuits.
    pub conjugation: Option<CliffordClass>,
    /// Why each missing capability is withheld.
    pub blocked: Vec<(Capability, String)>,
}

impl SimClass {
    pub fn has(&self, c: Capability) -> bool {
        self.capabilities.contains(&c)
    }

    pub fn reason(&self, c: Capability) -> Option<&str> {
        self.blocked
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, r)| r.as_str())
    }

    pub fn summary(&self) -> String {
        let v: Vec<String> = self.capabilities.iter().map(|c| c.to_string()).collect();
        v.join(",")
    }
}

const REASON_GENERAL: &str = "bitstring outputs: a general Clifford conjugation need not reduce \
                              to any matchgate sampling problem";
const REASON_PERMUTATION: &str = "restricted bitstring outputs only: a partial marginal projector \
                                  pulls back to a sum of several basis projectors";
const REASON_CZ_PRODUCT: &str = "CZ conjugation of a product input leaves an entangled input \
                                 that no matchgate circuit prepares";
const REASON_POST_BITSTRING: &str = "bitstring outputs after a trailing Clifford expand into \
                                     exponentially many Pauli terms";
const REASON_CONJ_PAULI: &str = "conjugated circuits answer Pauli queries only through \
                                 restricted (low-degree) Paulis";
const REASON_LINEAR_RESTRICTED: &str = "restricted Pauli sums need a body without linear terms";

pub fn classify_circuit(c: &Circuit) -> Result<SimClass> {
    let seg = c.segments()?;
    let linear = c.has_linear_terms();
    use Capability::*;
    let mut caps = BTreeSet::new();
    let mut blocked: Vec<(Capability, String)> = Vec::new();
    let mut conjugation = None;
    match c.structure {
        Structure::Free => {
            caps.extend([Pibo, Cibo, CiboRestricted, Cipo, Pipo]);
            if linear {
                blocked.push((PipoRestricted, REASON_LINEAR_RESTRICTED.into()));
            } else {
                caps.insert(PipoRestricted);
            }
        }
        Structure::PostClifford => {
            caps.extend([Cipo, Pipo]);
            for k in [Pibo, Cibo, CiboRestricted] {
                blocked.push((k, REASON_POST_BITSTRING.into()));
            }
        }
        Structure::Conjugated => {
            let class = CliffordTableau::from_gates(c.n, &seg.prefix)?.classify();
            conjugation = Some(class);
            if class == CliffordClass::General && linear {
                return Err(Error::MalformedStructure(
                    "linear terms under a general Clifford conjugation have no supported \
                     algorithm"
                        .into(),
                ));
            }
            match class {
                CliffordClass::SwapOnly => {
                    caps.extend([Pibo, Cibo, CiboRestricted]);
                }
                CliffordClass::CzSwap => {
                    caps.extend([Cibo, CiboRestricted]);
                    blocked.push((Pibo, REASON_CZ_PRODUCT.into()));
                }
                CliffordClass::Permutation => {
                    caps.insert(CiboRestricted);
                    blocked.push((Pibo, REASON_PERMUTATION.into()));
                    blocked.push((Cibo, REASON_PERMUTATION.into()));
                }
                CliffordClass::General => {
                    for k in [Pibo, Cibo, CiboRestricted] {
                        blocked.push((k, REASON_GENERAL.into()));
                    }
                }
            }
            if linear {
                blocked.push((PipoRestricted, REASON_LINEAR_RESTRICTED.into()));
            } else {
                caps.insert(PipoRestricted);
            }
            blocked.push((Cipo, REASON_CONJ_PAULI.into()));
            blocked.push((Pipo, REASON_CONJ_PAULI.into()));
        }
    }
    Ok(SimClass {
        capabilities: caps,
        conjugation,
        blocked,
    })
}

/// Circuit reduced to a conjugating frame, one body rotation and a trailing
/// Clifford.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub n: usize,
    pub input: InputState,
    pub structure: Structure,
    pub class: SimClass,
    /// Leading Clifford `C` of a conjugated circuit, identity otherwise.
    pub frame: CliffordTableau,
    /// Trailing Clifford of a post-Clifford circuit, identity otherwise.
    pub post: CliffordTableau,
    /// Body rotation in the standard frame, when the body has no linear terms.
    pub standard: Option<Rotation>,
    /// Body rotation in the extended frame.
    pub extended: Rotation,
}

fn local_block(h: &DMatrix<f64>, offset: usize) -> Result<DMatrix<f64>> {
    let sub = h.view((offset, offset), (4, 4)).into_owned();
    expm_antisymmetric(&sub, GENERATOR_SCALE)
}

/// Left-multiply rows `offset..offset+4` of `r` by `block`.
fn apply_local(r: &mut DMatrix<f64>, block: &DMatrix<f64>, offset: usize) {
    let rows = r.rows(offset, 4).into_owned();
    let updated = block * rows;
    r.rows_mut(offset, 4).copy_from(&updated);
}

pub fn compile(c: &Circuit) -> Result<CompiledCircuit> {
    let class = classify_circuit(c)?;
    let seg = c.segments()?;
    let n = c.n;
    let linear = c.has_linear_terms();
    let mut std_r = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut ext_r = DMatrix::<f64>::identity(2 * n + 2, 2 * n + 2);
    for layer in &seg.body {
        match layer {
            Layer::Matchgate { qubit, coeffs } => {
                let h = matchgate_generator(n, *qubit, coeffs);
                let block = local_block(&h, 2 * qubit)?;
                apply_local(&mut std_r, &block, 2 * qubit);
                apply_local(&mut ext_r, &block, 2 * qubit + 2);
            }
            Layer::Quadratic(h) => {
                let r = expm_antisymmetric(h, GENERATOR_SCALE)?;
                std_r = &r * &std_r;
                let zero = vec![0.0; 2 * n];
                let re = expm_antisymmetric(&extended_generator(h, &zero), GENERATOR_SCALE)?;
                ext_r = &re * &ext_r;
            }
            Layer::Linear(b) => {
                let zero = DMatrix::<f64>::zeros(2 * n, 2 * n);
                let re = expm_antisymmetric(&extended_generator(&zero, b), GENERATOR_SCALE)?;
                ext_r = &re * &ext_r;
            }
            Layer::Clifford(_) => unreachable!("segments keep Cliffords out of the body"),
        }
    }
    let (frame, post) = match c.structure {
        Structure::Conjugated => (
            CliffordTableau::from_gates(n, &seg.prefix)?,
            CliffordTableau::identity(n),
        ),
        Structure::PostClifford => (
            CliffordTableau::identity(n),
            CliffordTableau::from_gates(n, &seg.suffix)?,
        ),
        Structure::Free => (CliffordTableau::identity(n), CliffordTableau::identity(n)),
    };
    Ok(CompiledCircuit {
        n,
        input: c.input.clone(),
        structure: c.structure,
        class,
        frame,
        post,
        standard: (!linear).then_some(Rotation {
            matrix: std_r,
            framework: Framework::Standard,
        }),
        extended: Rotation {
            matrix: ext_r,
            framework: Framework::Extended,
        },
    })
}

impl CompiledCircuit {
    /// Covariance of the body applied to `input` (the frame is not applied).
    pub fn body_state(&self, input: &InputState) -> Result<Covariance> {
        match (input, &self.standard) {
            (InputState::Basis(bits), Some(r)) => {
                let mut cov = Covariance::basis_state(bits);
                cov.evolve(r)?;
                Ok(cov)
            }
            (InputState::Basis(bits), None) => {
                let mut cov = Covariance::basis_state(bits).to_extended()?;
                cov.evolve(&self.extended)?;
                Ok(cov)
            }
            (InputState::Product(angles), _) => {
                let mut cov = Covariance::product_state(angles)?;
                cov.evolve(&self.extended)?;
                Ok(cov)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: f64,
    pub capability: Capability,
    pub method: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MarginalOptions {
    /// Carry the `i^k` factors of Clifford basis actions through to the end.
    pub track_phases: bool,
}

fn check_query(n: usize, qubits: &[usize], bits: &[bool]) -> Result<()> {
    if qubits.len() != bits.len() {
        return Err(Error::LengthMismatch {
            expected: qubits.len(),
            found: bits.len(),
        });
    }
    for (a, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        if qubits[..a].contains(&q) {
            return Err(Error::RepeatedQubit(q));
        }
    }
    Ok(())
}

fn phase_weight(k: u8) -> f64 {
    let z = match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    z.norm_sqr()
}

pub fn run_marginal(c: &CompiledCircuit, qubits: &[usize], bits: &[bool]) -> Result<Outcome> {
    run_marginal_with(c, qubits, bits, MarginalOptions::default())
}

pub fn run_marginal_with(
    c: &CompiledCircuit,
    qubits: &[usize],
    bits: &[bool],
    opts: MarginalOptions,
) -> Result<Outcome> {
    check_query(c.n, qubits, bits)?;
    let unsupported = |cap: Capability| {
        Error::Unsupported(
            c.class
                .reason(cap)
                .unwrap_or("query not covered by this circuit class")
                .to_string(),
        )
    };
    let needed = if c.input.is_basis() {
        Capability::Cibo
    } else {
        Capability::Pibo
    };
    match c.structure {
        Structure::Free => {
            let cov = c.body_state(&c.input)?;
            Ok(Outcome {
                value: cov.marginal_probability(qubits, bits)?,
                capability: needed,
                method: "covariance",
            })
        }
        Structure::PostClifford => Err(unsupported(needed)),
        Structure::Conjugated => {
            let class = c
                .class
                .conjugation
                .expect("conjugated circuits are classified");
            match class {
                CliffordClass::SwapOnly | CliffordClass::CzSwap => {
                    if !c.class.has(needed) {
                        return Err(unsupported(needed));
                    }
                    let pi = c
                        .frame
                        .z_permutation()
                        .expect("class implies a permutation");
                    let (input, weight) = match &c.input {
                        InputState::Basis(x) => {
                            let (xp, k) = c.frame.basis_action(x)?;
                            (InputState::Basis(xp), phase_weight(k))
                        }
                        InputState::Product(angles) => {
                            let mut moved = vec![
                                QubitAngles {
                                    theta: 0.0,
                                    phi: 0.0
                                };
                                c.n
                            ];
                            for (i, a) in angles.iter().enumerate() {
                                moved[pi[i]] = *a;
                            }
                            (InputState::Product(moved), 1.0)
                        }
                    };
                    let mapped: Vec<usize> = qubits.iter().map(|&q| pi[q]).collect();
                    let p = c.body_state(&input)?.marginal_probability(&mapped, bits)?;
                    let value = if opts.track_phases { p * weight } else { p };
                    Ok(Outcome {
                        value,
                        capability: needed,
                        method: if class == CliffordClass::SwapOnly {
                            "swap relabelling"
                        } else {
                            "cz phases absorbed"
                        },
                    })
                }
                CliffordClass::Permutation => {
                    let InputState::Basis(x) = &c.input else {
                        return Err(unsupported(Capability::Pibo));
                    };
                    if qubits.len() != c.n {
                        return Err(unsupported(Capability::Cibo));
                    }
                    let mut y = vec![false; c.n];
                    for (&q, &b) in qubits.iter().zip(bits) {
                        y[q] = b;
                    }
                    let (xp, kx) = c.frame.basis_action(x)?;
                    let (yp, ky) = c.frame.basis_action(&y)?;
                    let all: Vec<usize> = (0..c.n).collect();
                    let p = c
                        .body_state(&InputState::Basis(xp))?
                        .marginal_probability(&all, &yp)?;
                    let value = if opts.track_phases {
                        p * phase_weight(kx) * phase_weight(ky)
                    } else {
                        p
                    };
                    Ok(Outcome {
                        value,
                        capability: Capability::CiboRestricted,
                        method: "basis permutation",
                    })
                }
                CliffordClass::General => Err(unsupported(needed)),
            }
        }
    }
}

pub fn run_expectation(c: &CompiledCircuit, p: &PauliString) -> Result<Outcome> {
    if p.num_qubits() != c.n {
        return Err(Error::LengthMismatch {
            expected: c.n,
            found: p.num_qubits(),
        });
    }
    let needed = if c.input.is_basis() {
        Capability::Cipo
    } else {
        Capability::Pipo
    };
    match c.structure {
        Structure::Free | Structure::PostClifford => {
            // <psi| U^† D^† p D U |psi> with D the trailing Clifford
            let pulled = c.post.invert().conjugate_pauli(p);
            let cov = c.body_state(&c.input)?;
            Ok(Outcome {
                value: cov.pauli_expectation(&pulled)?,
                capability: needed,
                method: if c.structure == Structure::Free {
                    "covariance"
                } else {
                    "clifford pull-back"
                },
            })
        }
        Structure::Conjugated => {
            let value =
                restricted_pauli_expectation(c, p, DEFAULT_MAX_DEGREE).map_err(|e| match e {
                    Error::DegreeTooLarge { .. } => Error::Unsupported(format!(
                        "{e}; {}",
                        c.class.reason(needed).unwrap_or(REASON_CONJ_PAULI)
                    )),
                    other => other,
                })?;
            Ok(Outcome {
                value,
                capability: Capability::PipoRestricted,
                method: "restricted majorana sum",
            })
        }
    }
}

/// Product-state expectation of a Pauli (with its phase).
fn product_expectation(p: &PauliString, angles: &[QubitAngles]) -> Complex64 {
    let mut v = match p.coefficient_exp() {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    for (q, a) in angles.iter().enumerate() {
        let f = match p.letter(q) {
            Letter::I => 1.0,
            Letter::X => a.theta.sin() * a.phi.cos(),
            Letter::Y => a.theta.sin() * a.phi.sin(),
            Letter::Z => a.theta.cos(),
        };
        if f == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        v *= f;
    }
    v
}

/// Depth-first expansion of `prod_a (sum_j R[rows_a][j] C^† c_j C)`.
struct Walk<'a> {
    rows: &'a [usize],
    r: &'a DMatrix<f64>,
    conj: &'a [PauliString],
    angles: &'a [QubitAngles],
}

impl Walk<'_> {
    fn visit(&self, depth: usize, acc: &PauliString, weight: f64, total: &mut Complex64) {
        if depth == self.rows.len() {
            *total += product_expectation(acc, self.angles) * weight;
            return;
        }
        for (j, cj) in self.conj.iter().enumerate() {
            let w = self.r[(self.rows[depth], j)];
            if w != 0.0 {
                self.visit(depth + 1, &(acc * cj), weight * w, total);
            }
        }
    }
}

/// `<p>` for Paulis that are products of at most `max_degree` Majoranas of
/// the conjugated encoding `C^† JW C`, as a sum over rotated monomials.
pub fn restricted_pauli_expectation(
    c: &CompiledCircuit,
    p: &PauliString,
    max_degree: usize,
) -> Result<f64> {
    if max_degree > HARD_MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "degree limit {max_degree} exceeds the hard cap {HARD_MAX_DEGREE}"
        )));
    }
    if c.structure == Structure::PostClifford {
        return Err(Error::Unsupported(
            "restricted Pauli sums apply to conjugated or free circuits".into(),
        ));
    }
    let Some(rot) = &c.standard else {
        return Err(Error::Unsupported(REASON_LINEAR_RESTRICTED.into()));
    };
    if !p.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    let n = c.n;
    let jw = Encoding::jordan_wigner(n);
    let q = c.frame.conjugate_pauli(p);
    let d = jw.decompose(&q)?;
    if d.degree() > max_degree {
        return Err(Error::DegreeTooLarge {
            needed: d.degree(),
            limit: max_degree,
        });
    }
    let inv = c.frame.invert();
    let conj: Vec<PauliString> = jw
        .majoranas()
        .iter()
        .map(|m| inv.conjugate_pauli(m))
        .collect();
    let angles = c.input.angles();

    let walk = Walk {
        rows: &d.indices,
        r: &rot.matrix,
        conj: &conj,
        angles: &angles,
    };
    let mut total = Complex64::new(0.0, 0.0);
    walk.visit(0, &PauliString::identity(n), 1.0, &mut total);
    let phase = match d.phase % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let v = total * phase;
    if v.im.abs() > TOL.imaginary {
        return Err(Error::InternalConsistency(format!(
            "restricted expectation has imaginary part {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// Six-qubit gadget on `|+>^6` that leaves qubits 0..4 in a GHZ state once
/// qubits 4 and 5 are post-selected on `00`.
pub fn ghz4_gadget() -> Circuit {
    let w = std::f64::consts::PI / (2.0 * 2f64.sqrt());
    // G(H, H) up to a global phase
    let ghh = MatchgateCoeffs {
        a1: w,
        d1: w,
        ..Default::default()
    };
    // G(H*, H*) with H* = [[1, -1], [1, 1]] / sqrt 2
    let ghs = MatchgateCoeffs {
        b1: std::f64::consts::FRAC_PI_4,
        ..Default::default()
    };
    let mg = |qubit, coeffs| Layer::Matchgate { qubit, coeffs };
    let cz = |a, b| Layer::Clifford(CliffordGate::Cz(a, b));
    let fs = MatchgateCoeffs::fswap();
    let layers = vec![
        cz(1, 2),
        cz(0, 1),
        cz(4, 5),
        cz(3, 4),
        mg(0, ghs),
        mg(1, ghs),
        mg(3, ghs),
        mg(4, ghs),
        mg(2, ghh),
        mg(3, fs),
        mg(2, fs),
        mg(4, fs),
        mg(3, fs),
        cz(0, 1),
        cz(3, 4),
        cz(1, 2),
        cz(4, 5),
    ];
    Circuit {
        n: 6,
        input: InputState::Product(vec![QubitAngles::plus(); 6]),
        structure: Structure::Conjugated,
        layers,
    }
}

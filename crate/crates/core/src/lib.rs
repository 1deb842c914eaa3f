//! Simulation of matchgate circuits augmented with Clifford gates.
//!
//! Qubits and Majorana operators are indexed from 0. The Jordan-Wigner
//! Majoranas are `c_{2q} = Z..Z X_q` and `c_{2q+1} = Z..Z Y_q`.

pub mod circuit;
pub mod encoding;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod simulator;
pub mod tableau;

pub use circuit::{
    Circuit, CircuitFile, InputState, Layer, MatchgateCoeffs, QubitAngles, Structure,
};
pub use encoding::{Encoding, EncodingMatrix, Flavor};
pub use error::{Error, Result};
pub use gaussian::{Covariance, Framework, Rotation};
pub use pauli::{Letter, PauliString};
pub use simulator::{
    classify_circuit, compile, run_expectation, run_marginal, Capability, CompiledCircuit, SimClass,
};
pub use tableau::{CliffordClass, CliffordGate, CliffordTableau};

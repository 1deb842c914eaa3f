//! Pauli strings in symplectic form.
//!
//! A string stores bit vectors `x`, `z` and an exponent `k` and denotes
//! `i^k * prod_j X_j^{x_j} Z_j^{z_j}`, so the letter `Y` at a site carries an
//! implicit factor: `Y = i X Z`. Text form uses the Y-letter convention with a
//! prefix in `{"", "i", "-", "-i"}`; qubit 0 is the leftmost character.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Whether a string commutes with the fermionic parity operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    Preserving,
    Breaking,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: 0,
        }
    }

    /// Hermitian string with the given letters and a `+` sign.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// `+P_q` on `n` qubits.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Raw exponent `k` of the symplectic form `i^k X^x Z^z`.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Replace the letter at `q`, keeping the Y-convention coefficient fixed.
    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let coef = self.coefficient_exp();
        let (xb, zb) = letter.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        self.set_coefficient_exp(coef);
    }

    pub fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Exponent `c` such that the string equals `i^c` times its letters read
    /// with `Y` as the usual Hermitian matrix.
    pub fn coefficient_exp(&self) -> u8 {
        ((self.phase as u32 + 4 * self.n as u32 - self.y_count()) % 4) as u8
    }

    pub fn set_coefficient_exp(&mut self, c: u8) {
        self.phase = ((c as u32 + self.y_count()) % 4) as u8;
    }

    pub fn with_coefficient_exp(mut self, c: u8) -> Self {
        self.set_coefficient_exp(c);
        self
    }

    /// Multiply by the scalar `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) % 4;
        self
    }

    /// Same letters with a `+` sign.
    pub fn unsigned(&self) -> Self {
        self.clone().with_coefficient_exp(0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.coefficient_exp().is_multiple_of(2)
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc += (self.x[w] & other.z[w]).count_ones();
            acc += (self.z[w] & other.x[w]).count_ones();
        }
        acc.is_multiple_of(2)
    }

    /// Parity-preserving strings have an even number of X/Y letters.
    pub fn parity_class(&self) -> ParityClass {
        let xs: u32 = self.x.iter().map(|w| w.count_ones()).sum();
        if xs.is_multiple_of(2) {
            ParityClass::Preserving
        } else {
            ParityClass::Breaking
        }
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let mut out = PauliString::identity(self.n + other.n);
        for q in 0..self.n {
            out.set_bits(q, self.x_bit(q), self.z_bit(q));
        }
        for q in 0..other.n {
            out.set_bits(self.n + q, other.x_bit(q), other.z_bit(q));
        }
        out.phase = (self.phase + other.phase) % 4;
        out
    }

    pub(crate) fn set_bits(&mut self, q: usize, xb: bool, zb: bool) {
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    /// Uniformly random letters with a `+` sign.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let letters: Vec<Letter> = (0..n)
            .map(|_| match rng.gen_range(0..4) {
                0 => Letter::I,
                1 => Letter::X,
                2 => Letter::Y,
                _ => Letter::Z,
            })
            .collect();
        PauliString::from_letters(&letters)
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        // Z^a X^b = (-1)^{ab} X^b Z^a
        let mut swaps = 0u32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for w in 0..self.x.len() {
            swaps += (self.z[w] & rhs.x[w]).count_ones();
            x.push(self.x[w] ^ rhs.x[w]);
            z.push(self.z[w] ^ rhs.z[w]);
        }
        PauliString {
            n: self.n,
            x,
            z,
            phase: ((self.phase as u32 + rhs.phase as u32 + 2 * swaps) % 4) as u8,
        }
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.coefficient_exp() as usize];
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::ParsePauli {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (coef, body) = if let Some(rest) = t.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = t.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (0, rest)
        } else {
            (0, t)
        };
        if body.is_empty() {
            return Err(fail("no letters"));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(fail(&format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_coefficient_exp(coef))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letter_products_carry_phases() {
        assert_eq!(&p("X") * &p("Y"), p("iZ"));
        assert_eq!(&p("Y") * &p("X"), p("-iZ"));
        assert_eq!(&p("Z") * &p("X"), p("iY"));
        assert_eq!(&p("Y") * &p("Y"), p("I"));
        assert_eq!(&p("XZ") * &p("ZX"), p("YY"));
    }

    #[test]
    fn display_round_trips() {
        for s in ["XIZY", "-iXX", "iZ", "-YYI", "I"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn commutation_and_parity() {
        assert!(!p("XI").commutes(&p("ZI")));
        assert!(p("XX").commutes(&p("ZZ")));
        assert_eq!(p("XYZ").parity_class(), ParityClass::Preserving);
        assert_eq!(p("XZZ").parity_class(), ParityClass::Breaking);
        assert_eq!(p("XIZY").weight(), 3);
        assert!(p("-Y").is_hermitian());
        assert!(!p("iY").is_hermitian());
    }

    #[test]
    fn set_letter_keeps_sign() {
        let mut q = p("-XZ");
        q.set_letter(1, Letter::Y);
        assert_eq!(q.to_string(), "-XY");
    }

    #[test]
    fn tensor_places_left_operand_first() {
        assert_eq!(p("X").tensor(&p("-YZ")), p("-XYZ"));
        assert_eq!(p("iX").tensor(&p("iZ")), p("-XZ"));
    }

    #[test]
    fn wide_strings_cross_word_boundary() {
        let n = 130;
        let mut a = PauliString::identity(n);
        a.set_letter(100, Letter::X);
        let mut b = PauliString::identity(n);
        b.set_letter(100, Letter::Z);
        assert!(!a.commutes(&b));
        let prod = &a * &b;
        assert_eq!(prod.letter(100), Letter::Y);
        assert_eq!(prod.coefficient_exp(), 3);
    }
}

//! Fermion-to-qubit encodings as lists of Majorana Pauli strings.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};
use crate::tableau::{CliffordGate, CliffordTableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Standard,
    /// Physical side of the one-ancilla extension; the ancilla is qubit 0.
    ExtendedKnill,
}

#[derive(Debug, Clone)]
pub struct Encoding {
    n: usize,
    majoranas: Vec<PauliString>,
    flavor: Flavor,
    solver: OnceLock<Option<Decomposer>>,
}

impl PartialEq for Encoding {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.majoranas == other.majoranas && self.flavor == other.flavor
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    WrongCount { expected: usize, found: usize },
    WrongWidth { index: usize, found: usize },
    NotHermitian { index: usize },
    Commuting { a: usize, b: usize },
    Dependent,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongCount { expected, found } => {
                write!(f, "expected {expected} operators, found {found}")
            }
            Violation::WrongWidth { index, found } => {
                write!(f, "operator {index} acts on {found} qubits")
            }
            Violation::NotHermitian { index } => write!(f, "operator {index} is not Hermitian"),
            Violation::Commuting { a, b } => write!(f, "operators {a} and {b} commute"),
            Violation::Dependent => write!(f, "operators are not independent over F2"),
        }
    }
}

/// `p = i^phase * c_{indices[0]} c_{indices[1]} ...` with ascending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub indices: Vec<usize>,
    pub phase: u8,
}

impl Decomposition {
    pub fn degree(&self) -> usize {
        self.indices.len()
    }
}

impl Encoding {
    /// Wrap operators without checking the axioms; see [`Encoding::validate`].
    pub fn new_unchecked(n: usize, majoranas: Vec<PauliString>, flavor: Flavor) -> Self {
        Encoding {
            n,
            majoranas,
            flavor,
            solver: OnceLock::new(),
        }
    }

    pub fn new(n: usize, majoranas: Vec<PauliString>, flavor: Flavor) -> Result<Self> {
        let e = Encoding::new_unchecked(n, majoranas, flavor);
        e.validate().map_err(|v| {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Error::InvalidEncoding(msgs.join("; "))
        })?;
        Ok(e)
    }

    pub fn jordan_wigner(n: usize) -> Self {
        let mut ops = Vec::with_capacity(2 * n);
        for q in 0..n {
            let mut letters = vec![Letter::Z; q];
            letters.extend(std::iter::repeat_n(Letter::I, n - q));
            letters[q] = Letter::X;
            ops.push(PauliString::from_letters(&letters));
            letters[q] = Letter::Y;
            ops.push(PauliString::from_letters(&letters));
        }
        Encoding::new_unchecked(n, ops, Flavor::Standard)
    }

    pub fn bravyi_kitaev(n: usize) -> Self {
        let tree = FenwickTree::new(n);
        let mut ops = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut even = vec![Letter::I; n];
            let mut odd = vec![Letter::I; n];
            for u in tree.update_set(j) {
                even[u] = Letter::X;
                odd[u] = Letter::X;
            }
            for p in tree.parity_set(j) {
                even[p] = Letter::Z;
            }
            for r in tree.remainder_set(j) {
                odd[r] = Letter::Z;
            }
            even[j] = Letter::X;
            odd[j] = Letter::Y;
            ops.push(PauliString::from_letters(&even));
            ops.push(PauliString::from_letters(&odd));
        }
        Encoding::new_unchecked(n, ops, Flavor::Standard)
    }

    /// Read one signed Pauli per line. Blank lines and `#` comments are
    /// skipped; a leading label token such as `C3` is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let token = line.split_whitespace().last().unwrap_or(line);
            ops.push(token.parse::<PauliString>()?);
        }
        let Some(first) = ops.first() else {
            return Err(Error::InvalidInput("encoding file is empty".into()));
        };
        let n = first.num_qubits();
        Ok(Encoding::new_unchecked(n, ops, Flavor::Standard))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.majoranas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.majoranas.is_empty()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn majoranas(&self) -> &[PauliString] {
        &self.majoranas
    }

    pub fn majorana(&self, i: usize) -> &PauliString {
        &self.majoranas[i]
    }

    /// Every violated axiom; empty means the encoding is valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.majoranas.len() != 2 * self.n {
            out.push(Violation::WrongCount {
                expected: 2 * self.n,
                found: self.majoranas.len(),
            });
        }
        let mut widths_ok = true;
        for (i, m) in self.majoranas.iter().enumerate() {
            if m.num_qubits() != self.n {
                out.push(Violation::WrongWidth {
                    index: i,
                    found: m.num_qubits(),
                });
                widths_ok = false;
            } else if !m.is_hermitian() {
                out.push(Violation::NotHermitian { index: i });
            }
        }
        if !widths_ok {
            return out;
        }
        for a in 0..self.majoranas.len() {
            for b in a + 1..self.majoranas.len() {
                if self.majoranas[a].commutes(&self.majoranas[b]) {
                    out.push(Violation::Commuting { a, b });
                }
            }
        }
        if Decomposer::build(&self.majoranas, self.n).rank < self.majoranas.len() {
            out.push(Violation::Dependent);
        }
        out
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Image of every Majorana under `U c U^†`.
    pub fn conjugate(&self, t: &CliffordTableau) -> Encoding {
        Encoding::new_unchecked(
            self.n,
            self.majoranas
                .iter()
                .map(|m| t.conjugate_pauli(m))
                .collect(),
            self.flavor,
        )
    }

    fn solver(&self) -> Result<&Decomposer> {
        self.solver
            .get_or_init(|| {
                let d = Decomposer::build(&self.majoranas, self.n);
                (d.rank == 2 * self.n && self.majoranas.len() == 2 * self.n).then_some(d)
            })
            .as_ref()
            .ok_or_else(|| Error::InvalidEncoding("operators do not span the Pauli group".into()))
    }

    /// Unique monomial expression of `p` in this encoding.
    pub fn decompose(&self, p: &PauliString) -> Result<Decomposition> {
        if p.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let indices = self.solver()?.solve(p);
        let q = self.monomial(&indices);
        debug_assert_eq!(q.unsigned(), p.unsigned());
        let phase = (4 + p.phase_exp() - q.phase_exp()) % 4;
        Ok(Decomposition { indices, phase })
    }

    /// Ordered product `c_{i_1} c_{i_2} ...`.
    pub fn monomial(&self, indices: &[usize]) -> PauliString {
        let mut q = PauliString::identity(self.n);
        for &i in indices {
            q = &q * &self.majoranas[i];
        }
        q
    }
}

#[derive(Debug, Clone)]
struct Decomposer {
    width: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    rank: usize,
}

fn get_bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn symplectic_bits(p: &PauliString, words: usize) -> Vec<u64> {
    let mut v = vec![0u64; 2 * words];
    v[..words].copy_from_slice(p.x_words());
    v[words..].copy_from_slice(p.z_words());
    v
}

impl Decomposer {
    fn build(ops: &[PauliString], n: usize) -> Decomposer {
        let words = n.div_ceil(64).max(1);
        let width = 2 * words * 64;
        let combo_words = ops.len().div_ceil(64).max(1);
        let mut pending: Vec<(Vec<u64>, Vec<u64>)> = ops
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut c = vec![0u64; combo_words];
                c[i / 64] |= 1 << (i % 64);
                (symplectic_bits(p, words), c)
            })
            .collect();
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        for (mut v, mut c) in pending.drain(..) {
            for (piv, rv, rc) in &rows {
                if get_bit(&v, *piv) {
                    xor_into(&mut v, rv);
                    xor_into(&mut c, rc);
                }
            }
            if let Some(piv) = (0..width).find(|&b| get_bit(&v, b)) {
                for (_, rv, rc) in rows.iter_mut() {
                    if get_bit(rv, piv) {
                        xor_into(rv, &v);
                        xor_into(rc, &c);
                    }
                }
                rows.push((piv, v, c));
            }
        }
        let rank = rows.len();
        Decomposer { width, rows, rank }
    }

    fn solve(&self, p: &PauliString) -> Vec<usize> {
        let words = self.width / 128;
        let mut v = symplectic_bits(p, words);
        let mut combo = vec![0u64; self.rows.first().map_or(1, |r| r.2.len())];
        for (piv, rv, rc) in &self.rows {
            if get_bit(&v, *piv) {
                xor_into(&mut v, rv);
                xor_into(&mut combo, rc);
            }
        }
        (0..combo.len() * 64)
            .filter(|&i| get_bit(&combo, i))
            .collect()
    }
}

/// Bisection Fenwick tree used by the Bravyi-Kitaev construction.
#[derive(Debug, Clone)]
pub struct FenwickTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl FenwickTree {
    pub fn new(n: usize) -> Self {
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        fn split(
            left: usize,
            right: usize,
            par: usize,
            parent: &mut [Option<usize>],
            children: &mut [Vec<usize>],
        ) {
            if left >= right {
                return;
            }
            let pivot = (left + right) / 2;
            parent[pivot] = Some(par);
            children[par].push(pivot);
            split(left, pivot, pivot, parent, children);
            split(pivot + 1, right, par, parent, children);
        }
        if n > 0 {
            split(0, n - 1, n - 1, &mut parent, &mut children);
        }
        FenwickTree { parent, children }
    }

    /// Ancestors of `j`: nodes whose stored parity includes mode `j`.
    pub fn update_set(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.parent[j];
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent[p];
        }
        out
    }

    pub fn children(&self, j: usize) -> &[usize] {
        &self.children[j]
    }

    /// Children of ancestors that sit to the left of `j`.
    pub fn remainder_set(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for a in self.update_set(j) {
            out.extend(self.children[a].iter().copied().filter(|&c| c < j));
        }
        out
    }

    /// Nodes whose combined parity equals the parity of modes `< j`.
    pub fn parity_set(&self, j: usize) -> Vec<usize> {
        let mut out = self.remainder_set(j);
        out.extend_from_slice(&self.children[j]);
        out
    }
}

/// One mode of an encoding whose `Z_i` are all quadratic monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRow {
    /// Index of the partner carrying `X` on the diagonal column.
    pub x_index: usize,
    /// Index of the partner carrying `Y` on the diagonal column.
    pub y_index: usize,
    pub column: usize,
    /// Off-diagonal letters; `true` marks `Z`. The diagonal entry is `false`.
    pub z_mask: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingMatrix {
    pub n: usize,
    /// Rows sorted by the smaller Majorana index of each pair.
    pub rows: Vec<MatrixRow>,
}

impl EncodingMatrix {
    pub fn from_encoding(e: &Encoding) -> Result<Self> {
        let n = e.num_qubits();
        let mut used = vec![false; e.len()];
        let mut rows = Vec::with_capacity(n);
        for q in 0..n {
            let d = e.decompose(&PauliString::single(n, q, Letter::Z))?;
            if d.degree() != 2 {
                return Err(Error::NotCzSwapFamily { qubit: q });
            }
            let (a, b) = (d.indices[0], d.indices[1]);
            if used[a] || used[b] {
                return Err(Error::NotCzSwapFamily { qubit: q });
            }
            used[a] = true;
            used[b] = true;
            let (x_index, y_index) = match (e.majorana(a).letter(q), e.majorana(b).letter(q)) {
                (Letter::X, Letter::Y) => (a, b),
                (Letter::Y, Letter::X) => (b, a),
                _ => return Err(Error::NotCzSwapFamily { qubit: q }),
            };
            rows.push((q, x_index, y_index));
        }
        rows.sort_by_key(|&(_, a, b)| a.min(b));
        let mut out = Vec::with_capacity(n);
        for (r, &(q, xi, yi)) in rows.iter().enumerate() {
            let cx = e.majorana(xi);
            let mut z_mask = vec![false; n];
            for (col, z) in z_mask.iter_mut().enumerate() {
                if col == q {
                    continue;
                }
                match cx.letter(col) {
                    Letter::I => {}
                    Letter::Z => *z = true,
                    _ => {
                        return Err(Error::MalformedPairing {
                            row: r,
                            column: col,
                        })
                    }
                }
            }
            out.push(MatrixRow {
                x_index: xi,
                y_index: yi,
                column: q,
                z_mask,
            });
        }
        let m = EncodingMatrix { n, rows: out };
        m.check_complementary()?;
        Ok(m)
    }

    fn check_complementary(&self) -> Result<()> {
        for r in 0..self.n {
            for s in r + 1..self.n {
                let (cr, cs) = (self.rows[r].column, self.rows[s].column);
                if self.rows[r].z_mask[cs] == self.rows[s].z_mask[cr] {
                    return Err(Error::MalformedPairing { row: r, column: cs });
                }
            }
        }
        Ok(())
    }

    /// Equality of the row sets, ignoring row order and Majorana labels.
    pub fn same_up_to_row_order(&self, other: &EncodingMatrix) -> bool {
        let key = |m: &EncodingMatrix| {
            let mut v: Vec<(usize, Vec<bool>)> = m
                .rows
                .iter()
                .map(|r| (r.column, r.z_mask.clone()))
                .collect();
            v.sort();
            v
        };
        self.n == other.n && key(self) == key(other)
    }
}

impl fmt::Display for EncodingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<&str> = (0..self.n)
                .map(|c| {
                    if c == row.column {
                        "XY"
                    } else if row.z_mask[c] {
                        "Z"
                    } else {
                        "I"
                    }
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// CZ/SWAP circuit that carries Jordan-Wigner onto a given encoding matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredCircuit {
    /// Jordan-Wigner mode `k` becomes row `mode_order[k]` of the target.
    pub mode_order: Vec<usize>,
    /// Gates in application order.
    pub gates: Vec<CliffordGate>,
}

impl RecoveredCircuit {
    pub fn cz_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, CliffordGate::Cz(..)))
            .count()
    }
}

/// Greedy recovery: align modes with columns, then flip the remaining
/// off-diagonal cells with CZ gates.
///
/// A fermionic reordering is used when it accounts for the whole pattern;
/// otherwise the encoding's own mode order is kept.
pub fn recover_cz_swap_circuit(m: &EncodingMatrix) -> Result<RecoveredCircuit> {
    let n = m.n;
    let zcell = |r: usize, s: usize| m.rows[r].z_mask[m.rows[s].column];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&r| (0..n).filter(|&s| s != r && zcell(r, s)).count());
    let transitive = (0..n).all(|k| (0..k).all(|l| zcell(order[k], order[l])));
    if !transitive {
        order = (0..n).collect();
    }

    let mut gates = Vec::new();
    for k in 0..n {
        for l in 0..k {
            if !zcell(order[k], order[l]) {
                gates.push(CliffordGate::Cz(l, k));
            }
        }
    }

    // Move the content of qubit k to column(order[k]).
    let target: Vec<usize> = order.iter().map(|&r| m.rows[r].column).collect();
    let mut at: Vec<usize> = (0..n).collect();
    let mut holder: Vec<usize> = (0..n).collect();
    for (k, &t) in target.iter().enumerate() {
        let cur = at[k];
        if cur != t {
            let other = holder[t];
            gates.push(CliffordGate::Swap(cur, t));
            holder.swap(cur, t);
            at[k] = t;
            at[other] = cur;
        }
    }

    let t = CliffordTableau::from_gates(n, &gates)?;
    let check = EncodingMatrix::from_encoding(&Encoding::jordan_wigner(n).conjugate(&t))?;
    if !check.same_up_to_row_order(m) {
        return Err(Error::Unreachable);
    }
    Ok(RecoveredCircuit {
        mode_order: order,
        gates,
    })
}

/// One-ancilla embedding of a Jordan-Wigner encoding.
///
/// Logical parity-preserving `p` maps to `I ⊗ p`, parity-breaking `p` to
/// `X ⊗ p`, with the ancilla as physical qubit 0. The physical encoding is
/// Jordan-Wigner on `n + 1` qubits, so logical `c_i` sits at physical index
/// `i + 2`.
#[derive(Debug, Clone)]
pub struct KnillEmbedding {
    logical_n: usize,
    physical: Encoding,
}

pub fn extend_encoding(e: &Encoding) -> Result<KnillEmbedding> {
    let n = e.num_qubits();
    if e.flavor() != Flavor::Standard || e.majoranas() != Encoding::jordan_wigner(n).majoranas() {
        return Err(Error::UnsupportedEncoding(
            "the one-ancilla extension is only provided for Jordan-Wigner".into(),
        ));
    }
    let mut physical = Encoding::jordan_wigner(n + 1);
    physical.flavor = Flavor::ExtendedKnill;
    Ok(KnillEmbedding {
        logical_n: n,
        physical,
    })
}

impl KnillEmbedding {
    pub fn logical_qubits(&self) -> usize {
        self.logical_n
    }

    pub fn physical(&self) -> &Encoding {
        &self.physical
    }

    pub fn embed_pauli(&self, p: &PauliString) -> PauliString {
        let anc = match p.parity_class() {
            crate::pauli::ParityClass::Preserving => "I",
            crate::pauli::ParityClass::Breaking => "X",
        };
        anc.parse::<PauliString>().expect("literal").tensor(p)
    }

    /// `X ⊗ c_i = i^phase c'_1 c'_{i+2}`; returns `phase`.
    pub fn linear_image_phase(&self) -> u8 {
        3
    }
}

/// Majoranas `{g0, i g1 g0, ..., i g2n g0}` on `n` qubits, where `g0` is the
/// Hermitian product of all Jordan-Wigner Majoranas.
pub fn parity_extension_operators(n: usize) -> Vec<PauliString> {
    let jw = Encoding::jordan_wigner(n);
    let all: Vec<usize> = (0..2 * n).collect();
    let g0 = jw.monomial(&all).with_coefficient_exp(0);
    let mut out = vec![g0.clone()];
    for c in jw.majoranas() {
        out.push((c * &g0).times_i_pow(1));
    }
    out
}

/// Quadratic generator on the parity-extended operators reproducing
/// `i sum h_jk c_j c_k + sum b_j c_j`. Index 0 is the parity operator.
pub fn parity_extended_generator(h: &DMatrix<f64>, b: &[f64]) -> Result<DMatrix<f64>> {
    let m = h.nrows();
    if b.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: b.len(),
        });
    }
    let mut out = DMatrix::<f64>::zeros(m + 1, m + 1);
    out.view_mut((1, 1), (m, m)).copy_from(h);
    for (j, &bj) in b.iter().enumerate() {
        out[(0, j + 1)] = bj / 2.0;
        out[(j + 1, 0)] = -bj / 2.0;
    }
    Ok(out)
}

//! N-qubit Pauli strings in symplectic form.
//!
//! A string stores one x-bit and one z-bit per qubit plus a power of `i`.
//! Bit pair `(x, z)` on a qubit selects `I`, `X`, `Z` or `Y` for `(0,0)`,
//! `(1,0)`, `(0,1)`, `(1,1)`, and `Y` is the Hermitian textbook matrix, i.e.
//! `Y = iXZ`. The represented operator is `i^phase ⊗_q σ(x_q, z_q)`, so a
//! string with phase `+1` or `-1` is always Hermitian.
//!
//! With that convention the single-qubit products are the textbook ones:
//! `XY = iZ`, `YZ = iX`, `ZX = iY`, hence `XZ = -iY`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const LANE: usize = 64;

/// Power of `i`, stored mod 4: 0 = +1, 1 = +i, 2 = -1, 3 = -i.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: i64) -> Self {
        Phase(e.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `Some(+1)` or `Some(-1)` for real phases.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }
}

/// Single-qubit Pauli symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Lower-case axis name used in bath labels (`x`, `y`, `z`).
    pub fn axis_name(self) -> &'static str {
        match self {
            Pauli::I => "i",
            Pauli::X => "x",
            Pauli::Y => "y",
            Pauli::Z => "z",
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    // Sort rank used by the canonical term order: X < Y < Z < I.
    fn rank(self) -> u8 {
        match self {
            Pauli::X => 0,
            Pauli::Y => 1,
            Pauli::Z => 2,
            Pauli::I => 3,
        }
    }
}

fn lanes(n: usize) -> usize {
    n.div_ceil(LANE).max(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let l = lanes(n);
        PauliString { n, x: vec![0; l], z: vec![0; l], phase: Phase::ONE }
    }

    /// `op` on qubit `q` (0-based), identity elsewhere.
    pub fn single(n: usize, q: usize, op: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(q, op);
        p
    }

    pub fn from_ops(ops: &[Pauli]) -> Self {
        let mut p = Self::identity(ops.len());
        for (q, &op) in ops.iter().enumerate() {
            p.set(q, op);
        }
        p
    }

    /// Product of `op` over the listed qubits.
    pub fn on_qubits(n: usize, qubits: impl IntoIterator<Item = usize>, op: Pauli) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.set(q, op);
        }
        p
    }

    pub fn from_bits(n: usize, x: &[bool], z: &[bool], phase: Phase) -> Self {
        let mut p = Self::identity(n);
        for q in 0..n {
            p.set(q, Pauli::from_bits(x[q], z[q]));
        }
        p.phase = phase;
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / LANE] >> (q % LANE) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / LANE] >> (q % LANE) & 1 == 1
    }

    pub fn x_lanes(&self) -> &[u64] {
        &self.x
    }

    pub fn z_lanes(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Overwrites the operator on qubit `q` without touching the phase.
    pub fn set(&mut self, q: usize, op: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = op.bits();
        let (lane, bit) = (q / LANE, 1u64 << (q % LANE));
        if xb {
            self.x[lane] |= bit;
        } else {
            self.x[lane] &= !bit;
        }
        if zb {
            self.z[lane] |= bit;
        } else {
            self.z[lane] &= !bit;
        }
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x_bit(q) || self.z_bit(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// The same operator with phase reset to `+1`.
    pub fn phaseless(&self) -> PauliString {
        self.clone().with_phase(Phase::ONE)
    }

    /// Equality modulo global phase.
    pub fn eq_phaseless(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_dims(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        // Each factor is i^{|x&z|} X^x Z^z; moving Z^{z_a} past X^{x_b}
        // costs (-1)^{|z_a & x_b|}.
        let mut e = self.phase.exponent() as i64 + other.phase.exponent() as i64;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for l in 0..self.x.len() {
            let (ax, az, bx, bz) = (self.x[l], self.z[l], other.x[l], other.z[l]);
            let (rx, rz) = (ax ^ bx, az ^ bz);
            e += (ax & az).count_ones() as i64 + (bx & bz).count_ones() as i64 + 2 * (az & bx).count_ones() as i64
                - (rx & rz).count_ones() as i64;
            x.push(rx);
            z.push(rz);
        }
        PauliString { n: self.n, x, z, phase: Phase::from_exponent(e) }
    }

    /// Symplectic inner product modulo 2.
    pub fn anticommute_parity(&self, other: &PauliString) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.anticommutes_unchecked(other))
    }

    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for l in 0..self.x.len() {
            acc += ((self.x[l] & other.z[l]) ^ (self.z[l] & other.x[l])).count_ones();
        }
        acc % 2 == 1
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        Ok(!self.anticommute_parity(other)?)
    }

    pub fn negate(&self) -> PauliString {
        self.clone().with_phase(-self.phase)
    }

    /// Hermitian adjoint (conjugates the phase).
    pub fn adjoint(&self) -> PauliString {
        self.clone().with_phase(self.phase.conj())
    }

    /// Parses an optional phase token (`+`, `-`, `i`, `+i`, `-i`) followed by
    /// exactly `n` symbols from `IXYZ`.
    pub fn parse(text: &str, n: usize) -> Result<PauliString> {
        let err = |reason: String| Error::PauliParse { text: text.to_string(), reason };
        let t = text.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = t.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, t)
        };
        let len = body.chars().count();
        if len != n {
            return Err(err(format!("expected {n} symbols, found {len}")));
        }
        let mut p = PauliString::identity(n);
        for (q, c) in body.chars().enumerate() {
            let op = Pauli::from_char(c).ok_or_else(|| err(format!("bad symbol {c:?}")))?;
            p.set(q, op);
        }
        Ok(p.with_phase(phase))
    }

    /// Operator symbols without the phase token.
    pub fn symbols(&self) -> String {
        (0..self.n).map(|q| self.get(q).symbol()).collect()
    }

    /// Compact label such as `X1X2` (1-based), or `I` for the identity.
    pub fn sparse_label(&self) -> String {
        if self.is_identity() {
            return "I".into();
        }
        self.support().into_iter().map(|q| format!("{}{}", self.get(q).symbol(), q + 1)).collect()
    }

    /// Canonical term order: qubit 1 first, `X < Y < Z < I` on each qubit,
    /// so that `XI..` sorts before `IX..`. Ignores phase.
    pub fn cmp_phaseless(&self, other: &PauliString) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for q in 0..self.n {
                let c = self.get(q).rank().cmp(&other.get(q).rank());
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.exponent() {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.symbols())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    /// Infers the qubit count from the number of symbols.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(['+', '-']).trim_start_matches('i');
        PauliString::parse(s, body.chars().count())
    }
}

/// Phaseless Pauli string ordered by [`PauliString::cmp_phaseless`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliKey(PauliString);

impl PauliKey {
    pub fn new(p: &PauliString) -> Self {
        PauliKey(p.phaseless())
    }

    pub fn pauli(&self) -> &PauliString {
        &self.0
    }

    pub fn into_pauli(self) -> PauliString {
        self.0
    }
}

impl Ord for PauliKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_phaseless(&other.0)
    }
}

impl PartialOrd for PauliKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

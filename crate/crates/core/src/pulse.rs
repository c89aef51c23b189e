//! Ideal bang-bang pulses as Clifford automorphisms of the Pauli group.
//!
//! A [`Tableau`] records the conjugation action `A ↦ U† A U` of a Clifford
//! unitary `U` through the images of every `X_q` and `Z_q`. A [`Pulse`] is a
//! named operator product of [`Gate`]s, each of which knows both its tableau
//! and (in `numeric`) its unitary.
//!
//! Qubit indices in the Rust API are 0-based; pulse names use 1-based
//! indices.

use std::fmt;

use crate::bath::SBHamiltonian;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Phase};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    x_img: Vec<PauliString>,
    z_img: Vec<PauliString>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        Tableau {
            n,
            x_img: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            z_img: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        }
    }

    /// Builds and validates a tableau from generator images: every image
    /// must be Hermitian and the images must reproduce the Pauli
    /// commutation table.
    pub fn from_images(x_img: Vec<PauliString>, z_img: Vec<PauliString>) -> Result<Self> {
        let n = x_img.len();
        if z_img.len() != n {
            return Err(Error::InvalidTableau(format!("{} X images but {} Z images", n, z_img.len())));
        }
        for img in x_img.iter().chain(&z_img) {
            if img.n_qubits() != n {
                return Err(Error::DimensionMismatch { left: n, right: img.n_qubits() });
            }
            if !img.is_hermitian() {
                return Err(Error::InvalidTableau(format!("image {img} is not Hermitian")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if x_img[i].anticommutes_unchecked(&x_img[j]) || z_img[i].anticommutes_unchecked(&z_img[j]) {
                    return Err(Error::InvalidTableau(format!(
                        "images of generators on qubits {} and {} must commute",
                        i + 1,
                        j + 1
                    )));
                }
                if x_img[i].anticommutes_unchecked(&z_img[j]) != (i == j) {
                    return Err(Error::InvalidTableau(format!(
                        "images of X{} and Z{} have the wrong commutation relation",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Tableau { n, x_img, z_img })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_img[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_img[q]
    }

    /// Conjugation `U† p U`.
    pub fn apply(&self, p: &PauliString) -> Result<PauliString> {
        if p.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.n_qubits() });
        }
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &PauliString) -> PauliString {
        // p = i^{phase + |x&z|} Π_q X_q^{x_q} Z_q^{z_q}
        let mut e = p.phase().exponent() as i64;
        let mut acc = PauliString::identity(self.n);
        for q in 0..self.n {
            let (xb, zb) = (p.x_bit(q), p.z_bit(q));
            if xb && zb {
                e += 1;
            }
            if xb {
                acc = acc.mul_unchecked(&self.x_img[q]);
            }
            if zb {
                acc = acc.mul_unchecked(&self.z_img[q]);
            }
        }
        let phase = acc.phase() * Phase::from_exponent(e);
        acc.with_phase(phase)
    }

    /// Tableau of the operator product `self · rhs` (`rhs` acts first).
    pub fn then_before(&self, rhs: &Tableau) -> Result<Tableau> {
        if rhs.n != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: rhs.n });
        }
        Ok(Tableau {
            n: self.n,
            x_img: self.x_img.iter().map(|g| rhs.apply_unchecked(g)).collect(),
            z_img: self.z_img.iter().map(|g| rhs.apply_unchecked(g)).collect(),
        })
    }

    /// Inverse action. Uses the symplectic dual basis: the preimage of `g`
    /// has x-bit `ω(g, T(Z_q))` and z-bit `ω(g, T(X_q))` on qubit `q`.
    pub fn inverse(&self) -> Tableau {
        let n = self.n;
        let preimage = |g: &PauliString| -> PauliString {
            let xs: Vec<bool> = (0..n).map(|q| g.anticommutes_unchecked(&self.z_img[q])).collect();
            let zs: Vec<bool> = (0..n).map(|q| g.anticommutes_unchecked(&self.x_img[q])).collect();
            let cand = PauliString::from_bits(n, &xs, &zs, Phase::ONE);
            let img = self.apply_unchecked(&cand);
            debug_assert!(img.eq_phaseless(g));
            if img.phase() == g.phase() {
                cand
            } else {
                cand.negate()
            }
        };
        let x_img = (0..n).map(|q| preimage(&PauliString::single(n, q, Pauli::X))).collect();
        let z_img = (0..n).map(|q| preimage(&PauliString::single(n, q, Pauli::Z))).collect();
        Tableau { n, x_img, z_img }
    }

    pub fn is_identity(&self) -> bool {
        *self == Tableau::identity(self.n)
    }

    /// Human-readable list of the generators this tableau moves.
    pub fn describe_nontrivial(&self) -> String {
        let id = Tableau::identity(self.n);
        let show = |p: &PauliString| {
            let sign = match p.phase().exponent() {
                0 => "",
                1 => "i",
                2 => "-",
                _ => "-i",
            };
            format!("{sign}{}", p.sparse_label())
        };
        let mut parts = Vec::new();
        for q in 0..self.n {
            if self.x_img[q] != id.x_img[q] {
                parts.push(format!("X{} -> {}", q + 1, show(&self.x_img[q])));
            }
            if self.z_img[q] != id.z_img[q] {
                parts.push(format!("Z{} -> {}", q + 1, show(&self.z_img[q])));
            }
        }
        if parts.is_empty() {
            "identity".into()
        } else {
            parts.join(", ")
        }
    }
}

/// Elementary gate with a known generating Hamiltonian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    /// A Pauli operator applied as a unitary, e.g. `X_i = i·exp(-iπX_i/2)`.
    Pauli(PauliString),
    /// Heisenberg exchange pulse `exp(∓iπ σ_i·σ_j/4)`; `dagger` selects `+`.
    Exchange { i: usize, j: usize, dagger: bool },
    /// Arbitrary Clifford action; its unitary is synthesized numerically.
    Custom(Tableau),
}

impl Gate {
    pub fn tableau(&self, n: usize) -> Result<Tableau> {
        match self {
            Gate::Pauli(p) => {
                if p.n_qubits() != n {
                    return Err(Error::DimensionMismatch { left: n, right: p.n_qubits() });
                }
                let flip = |g: PauliString| {
                    if p.anticommutes_unchecked(&g) {
                        g.negate()
                    } else {
                        g
                    }
                };
                Ok(Tableau {
                    n,
                    x_img: (0..n).map(|q| flip(PauliString::single(n, q, Pauli::X))).collect(),
                    z_img: (0..n).map(|q| flip(PauliString::single(n, q, Pauli::Z))).collect(),
                })
            }
            Gate::Exchange { i, j, .. } => {
                if *i >= n || *j >= n || i == j {
                    return Err(Error::InvalidArgument(format!(
                        "exchange pair ({}, {}) invalid for {n} qubits",
                        i + 1,
                        j + 1
                    )));
                }
                let mut t = Tableau::identity(n);
                t.x_img.swap(*i, *j);
                t.z_img.swap(*i, *j);
                Ok(t)
            }
            Gate::Custom(t) => {
                if t.n != n {
                    return Err(Error::DimensionMismatch { left: n, right: t.n });
                }
                Ok(t.clone())
            }
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Pauli(p) => Gate::Pauli(p.clone()),
            Gate::Exchange { i, j, dagger } => Gate::Exchange { i: *i, j: *j, dagger: !dagger },
            Gate::Custom(t) => Gate::Custom(t.inverse()),
        }
    }
}

/// Named ideal pulse: operator product of gates, `gates[0]` leftmost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pulse {
    name: String,
    n: usize,
    gates: Vec<Gate>,
    tableau: Tableau,
}

impl Pulse {
    pub fn new(name: impl Into<String>, n: usize, gates: Vec<Gate>) -> Result<Pulse> {
        let mut tableau = Tableau::identity(n);
        for g in &gates {
            tableau = tableau.then_before(&g.tableau(n)?)?;
        }
        Ok(Pulse { name: name.into(), n, gates, tableau })
    }

    pub fn identity(n: usize) -> Pulse {
        Pulse { name: "I".into(), n, gates: Vec::new(), tableau: Tableau::identity(n) }
    }

    pub fn from_tableau(name: impl Into<String>, tableau: Tableau) -> Pulse {
        let n = tableau.n;
        Pulse { name: name.into(), n, gates: vec![Gate::Custom(tableau.clone())], tableau }
    }

    /// A Pauli operator as a pulse, named by [`pauli_pulse_name`].
    pub fn pauli(p: &PauliString) -> Pulse {
        let p = p.phaseless();
        let n = p.n_qubits();
        Pulse::new(pauli_pulse_name(&p), n, vec![Gate::Pauli(p)]).expect("Pauli pulse is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Pulse {
        self.name = name.into();
        self
    }

    /// The Pauli operator if this pulse is a single Pauli gate (or none).
    pub fn as_pauli(&self) -> Option<PauliString> {
        match self.gates.as_slice() {
            [] => Some(PauliString::identity(self.n)),
            [Gate::Pauli(p)] => Some(p.clone()),
            _ => None,
        }
    }

    pub fn dagger(&self) -> Pulse {
        if let Some(p) = self.as_pauli() {
            return Pulse::pauli(&p).renamed(self.name.clone());
        }
        let name = match self.name.strip_suffix('†') {
            Some(base) => base.to_string(),
            None => format!("{}†", self.name),
        };
        Pulse {
            name,
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            tableau: self.tableau.inverse(),
        }
    }

    /// Operator product `self · rhs` (`rhs` acts first).
    pub fn times(&self, rhs: &Pulse) -> Result<Pulse> {
        if let (Some(a), Some(b)) = (self.as_pauli(), rhs.as_pauli()) {
            return Ok(Pulse::pauli(&a.multiply(&b)?));
        }
        let mut gates = self.gates.clone();
        gates.extend(rhs.gates.iter().cloned());
        Ok(Pulse {
            name: format!("{}·{}", self.name, rhs.name),
            n: self.n,
            tableau: self.tableau.then_before(&rhs.tableau)?,
            gates,
        })
    }

    pub fn is_involution(&self) -> bool {
        self.tableau.then_before(&self.tableau).map(|t| t.is_identity()).unwrap_or(false)
    }

    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        self.tableau.apply(p)
    }

    /// `P† H P`, term by term.
    pub fn conjugate(&self, h: &SBHamiltonian) -> Result<SBHamiltonian> {
        conjugate_by_tableau(&self.tableau, h)
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub(crate) fn conjugate_by_tableau(t: &Tableau, h: &SBHamiltonian) -> Result<SBHamiltonian> {
    if t.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch { left: t.n_qubits(), right: h.n_qubits() });
    }
    let mut out = SBHamiltonian::empty(h.n_qubits());
    for (p, b) in h.terms() {
        out.add_term(t.apply_unchecked(p), b)?;
    }
    Ok(out)
}

/// `X`, `Y`, `Z` for collective rotations, `X_O` for odd qubits, `X_OO` for
/// qubits 1, 5, 9, ..., otherwise the Pauli symbols in brackets.
pub fn pauli_pulse_name(p: &PauliString) -> String {
    let n = p.n_qubits();
    if p.is_identity() {
        return "I".into();
    }
    let support = p.support();
    let axis = p.get(support[0]);
    if support.iter().all(|&q| p.get(q) == axis) {
        let sym = axis.symbol();
        if support.len() == n {
            return sym.to_string();
        }
        if support == (0..n).step_by(2).collect::<Vec<_>>() && n > 1 {
            return format!("{sym}_O");
        }
        if support == (0..n).step_by(4).collect::<Vec<_>>() && n > 4 {
            return format!("{sym}_OO");
        }
    }
    format!("[{}]", p.symbols())
}

fn need_even(n: usize, what: &str) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("{what} needs an even qubit count, got {n}")));
    }
    Ok(())
}

fn axis_pauli(axis: Pauli) -> Result<Pauli> {
    if axis == Pauli::I {
        return Err(Error::InvalidArgument("rotation axis must be X, Y or Z".into()));
    }
    Ok(axis)
}

/// Single-qubit pulse `σ^axis` on qubit `q`.
pub fn single(axis: Pauli, q: usize, n: usize) -> Result<Pulse> {
    if q >= n {
        return Err(Error::InvalidArgument(format!("qubit {} out of range", q + 1)));
    }
    let p = PauliString::single(n, q, axis_pauli(axis)?);
    Ok(Pulse::pauli(&p).renamed(format!("{}{}", axis.symbol(), q + 1)))
}

/// Collective rotation `R = R_1 R_2 ... R_N`.
pub fn collective(axis: Pauli, n: usize) -> Result<Pulse> {
    if n == 0 {
        return Err(Error::InvalidArgument("empty register".into()));
    }
    Ok(Pulse::pauli(&PauliString::on_qubits(n, 0..n, axis_pauli(axis)?)))
}

/// `R_O = R_1 R_3 R_5 ...` on the odd-numbered qubits.
pub fn collective_odd(axis: Pauli, n: usize) -> Result<Pulse> {
    if n < 2 {
        return Err(Error::InvalidArgument("R_O needs at least 2 qubits".into()));
    }
    let p = PauliString::on_qubits(n, (0..n).step_by(2), axis_pauli(axis)?);
    Ok(Pulse::pauli(&p).renamed(format!("{}_O", axis.symbol())))
}

/// `R_OO = R_1 R_5 R_9 ...`, for next-nearest-neighbor couplings.
pub fn collective_odd_odd(axis: Pauli, n: usize) -> Result<Pulse> {
    if n < 2 {
        return Err(Error::InvalidArgument("R_OO needs at least 2 qubits".into()));
    }
    let p = PauliString::on_qubits(n, (0..n).step_by(4), axis_pauli(axis)?);
    Ok(Pulse::pauli(&p).renamed(format!("{}_OO", axis.symbol())))
}

/// `Z_3 Z_4 Z_7 Z_8 ...`: Z on 1-based qubits `4k+3`, `4k+4`.
pub fn z_pair(n: usize) -> Result<Pulse> {
    need_even(n, "Z-pair pulse")?;
    let qubits = (0..n).filter(|q| q % 4 >= 2);
    let p = PauliString::on_qubits(n, qubits, Pauli::Z);
    Ok(Pulse::pauli(&p).renamed("Z_PAIR"))
}

/// Two-qubit product pulse `σ_i^axis σ_j^axis = i·exp(-iπ σ_i^axis σ_j^axis / 2)`.
pub fn product(axis: Pauli, i: usize, j: usize, n: usize) -> Result<Pulse> {
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidArgument(format!("bad product pair ({}, {})", i + 1, j + 1)));
    }
    let p = PauliString::on_qubits(n, [i, j], axis_pauli(axis)?);
    let s = axis.symbol();
    Ok(Pulse::pauli(&p).renamed(format!("{s}{}{s}{}", i + 1, j + 1)))
}

/// Collective `R` built from simultaneous product pulses on the disjoint
/// pairs `(1,2), (3,4), ...`.
pub fn collective_from_products(axis: Pauli, n: usize) -> Result<Pulse> {
    need_even(n, "product-built R")?;
    let axis = axis_pauli(axis)?;
    let gates = (0..n).step_by(2).map(|q| Gate::Pauli(PauliString::on_qubits(n, [q, q + 1], axis))).collect();
    Pulse::new(format!("{}[pairs]", axis.symbol()), n, gates)
}

/// `R_O` built from next-nearest-neighbor product pulses on `(1,3), (5,7), ...`.
pub fn collective_odd_from_products(axis: Pauli, n: usize) -> Result<Pulse> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::InvalidArgument(format!("product-built R_O needs a multiple of 4 qubits, got {n}")));
    }
    let axis = axis_pauli(axis)?;
    let gates = (0..n).step_by(4).map(|q| Gate::Pauli(PauliString::on_qubits(n, [q, q + 2], axis))).collect();
    Pulse::new(format!("{}_O[pairs]", axis.symbol()), n, gates)
}

/// Exchange pulse `O_ij = exp(-iπ σ_i·σ_j/4)`, a SWAP of the Pauli operators.
pub fn exchange(i: usize, j: usize, n: usize) -> Result<Pulse> {
    Pulse::new(format!("O({},{})", i + 1, j + 1), n, vec![Gate::Exchange { i, j, dagger: false }])
}

fn exchanges(name: &str, n: usize, pairs: Vec<(usize, usize)>) -> Result<Pulse> {
    let gates = pairs.into_iter().map(|(i, j)| Gate::Exchange { i, j, dagger: false }).collect();
    Pulse::new(name, n, gates)
}

/// `O = ⊗_j O_{2j-1,2j}`.
pub fn o_pairs(n: usize) -> Result<Pulse> {
    need_even(n, "O")?;
    exchanges("O", n, (0..n).step_by(2).map(|q| (q, q + 1)).collect())
}

/// `O_O`: within each block of four qubits `O_{1,3} O_{2,4}`. A trailing
/// pair that does not fill a block is left alone.
pub fn o_o(n: usize) -> Result<Pulse> {
    need_even(n, "O_O")?;
    if n < 4 {
        return Err(Error::InvalidArgument("O_O needs at least 4 qubits".into()));
    }
    let pairs = (0..n).step_by(4).filter(|b| b + 3 < n).flat_map(|b| [(b, b + 2), (b + 1, b + 3)]).collect();
    exchanges("O_O", n, pairs)
}

/// `O_OO`: swaps neighboring 4-qubit blocks, `O_{1,5} O_{2,6} O_{3,7} O_{4,8}`
/// within each block of eight.
pub fn o_oo(n: usize) -> Result<Pulse> {
    need_even(n, "O_OO")?;
    if n < 8 {
        return Err(Error::InvalidArgument("O_OO needs at least 8 qubits".into()));
    }
    let pairs = (0..n).step_by(8).filter(|b| b + 7 < n).flat_map(|b| (0..4).map(move |k| (b + k, b + k + 4))).collect();
    exchanges("O_OO", n, pairs)
}

/// `O_{i,i+2} = O†_{i+1,i+2} O_{i,i+1} O_{i+1,i+2}` from nearest-neighbor
/// exchanges only.
pub fn swap_decomposed(i: usize, n: usize) -> Result<Pulse> {
    if i + 2 >= n {
        return Err(Error::InvalidArgument(format!("qubit {} has no i+2 partner", i + 1)));
    }
    Pulse::new(
        format!("O({},{})[local]", i + 1, i + 3),
        n,
        vec![
            Gate::Exchange { i: i + 1, j: i + 2, dagger: true },
            Gate::Exchange { i, j: i + 1, dagger: false },
            Gate::Exchange { i: i + 1, j: i + 2, dagger: false },
        ],
    )
}

//! Formal bath operators and system-bath Hamiltonians with exact rational
//! coefficients.
//!
//! Bath operators are opaque labels. A [`BathVector`] is a sparse rational
//! combination of labels, and an [`SBHamiltonian`] is a canonical sum of
//! `PauliString ⊗ BathVector` terms keyed by the phaseless system operator.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliKey, PauliString};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::RationalParse(s.to_string()))
}

/// Sparse rational combination of bath-operator labels. Never stores zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BathVector {
    entries: BTreeMap<String, Rational>,
}

impl BathVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn label(name: impl Into<String>) -> Self {
        Self::single(name, Rational::one())
    }

    pub fn single(name: impl Into<String>, coeff: Rational) -> Self {
        let mut v = Self::new();
        v.add_entry(name.into(), coeff);
        v
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut v = Self::new();
        for (k, c) in entries {
            v.add_entry(k.into(), c);
        }
        v
    }

    pub fn add_entry(&mut self, name: String, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(name) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &BathVector) {
        for (k, c) in &other.entries {
            self.add_entry(k.clone(), c.clone());
        }
    }

    pub fn scaled(&self, s: &Rational) -> BathVector {
        if s.is_zero() {
            return BathVector::new();
        }
        BathVector { entries: self.entries.iter().map(|(k, c)| (k.clone(), c * s)).collect() }
    }

    pub fn negated(&self) -> BathVector {
        self.scaled(&-Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.entries.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Some(c)` when `self == c · other` with `other` nonzero.
    pub fn ratio_to(&self, other: &BathVector) -> Option<Rational> {
        let (k0, c0) = other.entries.iter().next()?;
        let c = self.coeff(k0) / c0;
        (other.scaled(&c) == *self).then_some(c)
    }
}

impl fmt::Display for BathVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.entries.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{k}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}{k}")?;
            } else {
                write!(f, "({mag}){k}")?;
            }
        }
        Ok(())
    }
}

/// One `system ⊗ bath` summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionTerm {
    pub system: PauliString,
    pub bath: BathVector,
}

impl InteractionTerm {
    pub fn new(system: PauliString, bath: BathVector) -> Self {
        InteractionTerm { system, bath }
    }
}

/// Canonical system-bath Hamiltonian: one term per phaseless system
/// operator, system phase `+1`, nonzero bath parts, no identity terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBHamiltonian {
    n: usize,
    terms: BTreeMap<PauliKey, BathVector>,
}

impl SBHamiltonian {
    pub fn empty(n: usize) -> Self {
        SBHamiltonian { n, terms: BTreeMap::new() }
    }

    /// Merges equal system operators, folds `±1` phases into the bath
    /// coefficients and drops zero and pure-bath terms.
    pub fn canonicalize(terms: impl IntoIterator<Item = InteractionTerm>, n: usize) -> Result<Self> {
        let mut h = SBHamiltonian::empty(n);
        for t in terms {
            h.add_term(t.system, &t.bath)?;
        }
        Ok(h)
    }

    pub fn add_term(&mut self, system: PauliString, bath: &BathVector) -> Result<()> {
        if system.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: system.n_qubits() });
        }
        let sign = system.phase().sign().ok_or_else(|| Error::ImaginaryPhase { pauli: system.to_string() })?;
        if system.is_identity() {
            if !bath.is_zero() {
                log::warn!("discarding pure-bath term {bath}");
            }
            return Ok(());
        }
        let key = PauliKey::new(&system);
        let folded = if sign < 0 { bath.negated() } else { bath.clone() };
        let slot = self.terms.entry(key.clone()).or_default();
        slot.add_assign(&folded);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &BathVector)> {
        self.terms.iter().map(|(k, v)| (k.pauli(), v))
    }

    pub fn to_terms(&self) -> Vec<InteractionTerm> {
        self.terms().map(|(p, b)| InteractionTerm::new(p.clone(), b.clone())).collect()
    }

    pub fn bath_of(&self, system: &PauliString) -> Option<&BathVector> {
        self.terms.get(&PauliKey::new(system))
    }

    pub fn system_operators(&self) -> Vec<PauliString> {
        self.terms.keys().map(|k| k.pauli().clone()).collect()
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(|b| b.iter().map(|(k, _)| k.clone())).collect()
    }

    pub fn scaled(&self, s: &Rational) -> SBHamiltonian {
        let mut h = SBHamiltonian::empty(self.n);
        if s.is_zero() {
            return h;
        }
        for (k, v) in &self.terms {
            h.terms.insert(k.clone(), v.scaled(s));
        }
        h
    }

    pub fn sum(&self, other: &SBHamiltonian) -> Result<SBHamiltonian> {
        let mut h = self.clone();
        for (p, b) in other.terms() {
            h.add_term(p.clone(), b)?;
        }
        Ok(h)
    }

    /// Maximum coupling order `p`: largest system-operator weight.
    pub fn coupling_order(&self) -> usize {
        self.terms.keys().map(|k| k.pauli().weight()).max().unwrap_or(0)
    }

    /// Maximum interaction range `r`: largest span between the first and
    /// last qubit of a term.
    pub fn interaction_range(&self) -> usize {
        self.terms
            .keys()
            .map(|k| {
                let s = k.pauli().support();
                s.last().unwrap_or(&0) - s.first().unwrap_or(&0)
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for SBHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, b)) in self.terms().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{p} ⊗ [{b}]")?;
        }
        Ok(())
    }
}

fn pair_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("B{i}{j}")
    } else {
        format!("B{i}_{j}")
    }
}

/// `Σ_i Σ_α σ_i^α ⊗ B_i^α` with labels `B{i}{α}`, 1-based.
pub fn build_linear(n: usize) -> Result<SBHamiltonian> {
    if n == 0 {
        return Err(Error::InvalidArgument("linear Hamiltonian needs n >= 1".into()));
    }
    let mut h = SBHamiltonian::empty(n);
    for q in 0..n {
        for a in Pauli::AXES {
            let label = format!("B{}{}", q + 1, a.axis_name());
            h.add_term(PauliString::single(n, q, a), &BathVector::label(label))?;
        }
    }
    Ok(h)
}

/// All nine `σ_i^α σ_{i+1}^β ⊗ B_{i,i+1}^{αβ}` per nearest-neighbor pair of
/// an open chain.
pub fn build_bilinear_nn(n: usize) -> Result<SBHamiltonian> {
    if n < 2 {
        return Err(Error::InvalidArgument("bilinear Hamiltonian needs n >= 2".into()));
    }
    let mut h = SBHamiltonian::empty(n);
    for q in 0..n - 1 {
        for a in Pauli::AXES {
            for b in Pauli::AXES {
                let mut p = PauliString::identity(n);
                p.set(q, a);
                p.set(q + 1, b);
                let label = format!("{}{}{}", pair_label(q + 1, q + 2), a.axis_name(), b.axis_name());
                h.add_term(p, &BathVector::label(label))?;
            }
        }
    }
    Ok(h)
}

/// Linear plus nearest-neighbor bilinear coupling on an open chain.
pub fn build_hnn(n: usize) -> Result<SBHamiltonian> {
    build_linear(n)?.sum(&build_bilinear_nn(n)?)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MqeExample {
    /// `Σ_{i<N} Z_i Z_{i+1} ⊗ B_i`
    ZzChain,
    /// `Σ_{i≤N/2} Σ_α σ_{2i-1}^α σ_{2i}^α ⊗ B_i^α`
    PairwiseIsotropic,
}

pub fn restrict_mqe_example(kind: MqeExample, n: usize) -> Result<SBHamiltonian> {
    let mut h = SBHamiltonian::empty(n);
    match kind {
        MqeExample::ZzChain => {
            if n < 2 {
                return Err(Error::InvalidArgument("zz_chain needs n >= 2".into()));
            }
            for q in 0..n - 1 {
                let p = PauliString::on_qubits(n, [q, q + 1], Pauli::Z);
                h.add_term(p, &BathVector::label(format!("B{}", q + 1)))?;
            }
        }
        MqeExample::PairwiseIsotropic => {
            if n < 2 || !n.is_multiple_of(2) {
                return Err(Error::InvalidArgument(format!("pairwise_isotropic needs even n >= 2, got {n}")));
            }
            for j in 0..n / 2 {
                for a in Pauli::AXES {
                    let p = PauliString::on_qubits(n, [2 * j, 2 * j + 1], a);
                    h.add_term(p, &BathVector::label(format!("B{}{}", j + 1, a.axis_name())))?;
                }
            }
        }
    }
    Ok(h)
}

/// Looks up a builder by its CLI name. `None` for an unknown name.
pub fn build_named(name: &str, n: usize) -> Option<Result<SBHamiltonian>> {
    Some(match name {
        "linear" => build_linear(n),
        "bilinear" => build_bilinear_nn(n),
        "hnn" => build_hnn(n),
        "zz_chain" => restrict_mqe_example(MqeExample::ZzChain, n),
        "pairwise_isotropic" => restrict_mqe_example(MqeExample::PairwiseIsotropic, n),
        _ => return None,
    })
}

pub const BUILDER_NAMES: [&str; 5] = ["linear", "bilinear", "hnn", "zz_chain", "pairwise_isotropic"];
